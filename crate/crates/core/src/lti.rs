// Copyright 2026 The mintime Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Dense model of a discrete-time LTI system `x(t+1) = A x(t) + B u(t)`.
//!
//! Everything here is a pure function of its inputs. Matrix powers are
//! formed by repeated multiplication so defective `A` needs no special care.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{check_dim, Error, Result};

/// The pair `(A, B)` of a discrete-time linear time-invariant system.
#[derive(Debug, Clone, PartialEq)]
pub struct LtiSystem {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
}

impl LtiSystem {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>) -> Result<Self> {
        if a.nrows() == 0 || !a.is_square() {
            return Err(Error::InvalidInput(format!(
                "A must be square and non-empty, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        check_dim("rows of B", a.nrows(), b.nrows())?;
        if b.ncols() == 0 {
            return Err(Error::InvalidInput("B must have at least one column".into()));
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("A and B must have finite entries".into()));
        }
        Ok(Self { a, b })
    }

    /// Builds a system from row-major nested arrays.
    pub fn from_rows(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_rows("A", a)?, matrix_from_rows("B", b)?)
    }

    /// State dimension `n`.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Input dimension `n_u`.
    pub fn n_u(&self) -> usize {
        self.b.ncols()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    /// `x(t+1) = A x(t) + B u(t)` for a single step.
    pub fn step(&self, x: &DVector<f64>, u: &DVector<f64>) -> Result<DVector<f64>> {
        check_dim("state", self.n(), x.len())?;
        check_dim("input", self.n_u(), u.len())?;
        Ok(&self.a * x + &self.b * u)
    }

    /// Forward simulation. Returns `x(0..=T)` for `T = inputs.len()`.
    pub fn simulate(&self, x0: &DVector<f64>, inputs: &[DVector<f64>]) -> Result<Vec<DVector<f64>>> {
        check_dim("initial state", self.n(), x0.len())?;
        let mut states = Vec::with_capacity(inputs.len() + 1);
        states.push(x0.clone());
        for u in inputs {
            let next = self.step(states.last().unwrap(), u)?;
            states.push(next);
        }
        Ok(states)
    }

    /// `A^0, A^1, ..., A^t` by repeated multiplication.
    pub fn powers(&self, t: usize) -> Vec<DMatrix<f64>> {
        let mut out = Vec::with_capacity(t + 1);
        out.push(DMatrix::identity(self.n(), self.n()));
        for k in 0..t {
            let next = &self.a * &out[k];
            out.push(next);
        }
        out
    }

    /// `Δ_t = [A^{t-1}B ... AB B]`, so that `x(t) = A^t x0 + Δ_t ū_t` with
    /// `u(0)` occupying the leftmost block.
    pub fn build_delta(&self, t: usize) -> Result<DMatrix<f64>> {
        if t == 0 {
            return Err(Error::InvalidInput("delta horizon must be at least 1".into()));
        }
        let (n, m) = (self.n(), self.n_u());
        let mut delta = DMatrix::zeros(n, t * m);
        // rightmost block is B, each block to its left is A times its neighbour
        let mut block = self.b.clone();
        for k in (0..t).rev() {
            delta.view_mut((0, k * m), (n, m)).copy_from(&block);
            if k > 0 {
                block = &self.a * &block;
            }
        }
        Ok(delta)
    }

    /// `x(t) = A^t x0 + Δ_t ū_t` evaluated directly from the condensed form.
    pub fn condensed_state(&self, x0: &DVector<f64>, u: &StackedInput) -> Result<DVector<f64>> {
        check_dim("initial state", self.n(), x0.len())?;
        check_dim("stacked input width", self.n_u(), u.n_u())?;
        let t = u.horizon();
        let at = self.powers(t).pop().unwrap();
        let free = at * x0;
        if t == 0 {
            return Ok(free);
        }
        Ok(free + self.build_delta(t)? * u.as_vector())
    }
}

pub(crate) fn matrix_from_rows(name: &str, rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    if nrows == 0 {
        return Err(Error::InvalidInput(format!("matrix {name} has no rows")));
    }
    let ncols = rows[0].len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != ncols) {
        return Err(Error::InvalidInput(format!(
            "matrix {name}: row {i} has {} entries, expected {ncols}",
            r.len()
        )));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

/// Input sequence `u(0), ..., u(t-1)` stacked into one column, `u(0)` first.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedInput {
    values: DVector<f64>,
    n_u: usize,
}

impl StackedInput {
    pub fn new(values: DVector<f64>, n_u: usize) -> Result<Self> {
        if n_u == 0 || !values.len().is_multiple_of(n_u) {
            return Err(Error::InvalidInput(format!(
                "stacked input of length {} is not a multiple of n_u = {n_u}",
                values.len()
            )));
        }
        Ok(Self { values, n_u })
    }

    pub fn zeros(horizon: usize, n_u: usize) -> Self {
        Self {
            values: DVector::zeros(horizon * n_u),
            n_u,
        }
    }

    pub fn from_sequence(inputs: &[DVector<f64>], n_u: usize) -> Result<Self> {
        let mut values = DVector::zeros(inputs.len() * n_u);
        for (k, u) in inputs.iter().enumerate() {
            check_dim("input", n_u, u.len())?;
            values.rows_mut(k * n_u, n_u).copy_from(u);
        }
        Ok(Self { values, n_u })
    }

    pub fn horizon(&self) -> usize {
        self.values.len() / self.n_u
    }

    pub fn n_u(&self) -> usize {
        self.n_u
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn block(&self, k: usize) -> DVector<f64> {
        self.values.rows(k * self.n_u, self.n_u).into_owned()
    }

    pub fn to_sequence(&self) -> Vec<DVector<f64>> {
        (0..self.horizon()).map(|k| self.block(k)).collect()
    }
}

/// Largest singular value of `m`, taken as the square root of the top
/// eigenvalue of the smaller Gram matrix.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = if m.nrows() <= m.ncols() {
        m * m.transpose()
    } else {
        m.transpose() * m
    };
    let top = SymmetricEigen::new(gram)
        .eigenvalues
        .iter()
        .copied()
        .fold(0.0_f64, f64::max);
    top.max(0.0).sqrt()
}

/// Whether `B` has full column rank. `tol` defaults to `1e-10 * ‖B‖₂`.
pub fn rank_b_full(sys: &LtiSystem, tol: Option<f64>) -> bool {
    let b = sys.b();
    let tol = tol.unwrap_or_else(|| 1e-10 * spectral_norm(b));
    let sv = b.clone().svd(false, false).singular_values;
    sv.iter().filter(|&&s| s > tol).count() == sys.n_u()
}
