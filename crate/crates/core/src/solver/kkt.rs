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

//! Euclidean projection onto the affine set of dynamics-consistent
//! trajectories.
//!
//! The projection is an equality-constrained least-squares problem whose KKT
//! matrix is block tridiagonal in time. It is factored once per `(A, B, T)`
//! with a backward Riccati sweep; each projection is then one backward pass
//! for the affine terms and one forward rollout.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::lti::LtiSystem;

/// Stacked trajectory layout: `x(1), ..., x(T)` followed by `u(0), ..., u(T-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub n_u: usize,
    pub horizon: usize,
}

impl Layout {
    pub fn len(&self) -> usize {
        self.horizon * (self.n + self.n_u)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Offset of `x(t)` for `1 <= t <= T`.
    pub fn x_offset(&self, t: usize) -> usize {
        (t - 1) * self.n
    }

    /// Offset of `u(t)` for `0 <= t < T`.
    pub fn u_offset(&self, t: usize) -> usize {
        self.horizon * self.n + t * self.n_u
    }

    pub fn x_range(&self, t: usize) -> std::ops::Range<usize> {
        let o = self.x_offset(t);
        o..o + self.n
    }

    pub fn u_range(&self, t: usize) -> std::ops::Range<usize> {
        let o = self.u_offset(t);
        o..o + self.n_u
    }
}

/// Factorization of the dynamics projection for a fixed `(A, B, T)`.
///
/// Immutable once built; share it freely between solves.
#[derive(Debug, Clone)]
pub struct DynamicsProjector {
    layout: Layout,
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    /// Feedback gains `K_t`, `t = 0..T`.
    gains: Vec<DMatrix<f64>>,
    /// `(I + Bᵀ P_{t+1} B)^{-1}`, `t = 0..T`.
    quu_inv: Vec<DMatrix<f64>>,
    /// Metric on `x(1..T)`; inputs always carry unit weight.
    state_metric: Vec<f64>,
}

/// Scratch buffers for [`DynamicsProjector::project_into`].
#[derive(Debug, Clone)]
pub struct ProjectorWorkspace {
    p: Vec<f64>,
    p_next: Vec<f64>,
    qu: Vec<f64>,
    feedforward: Vec<f64>,
}

impl DynamicsProjector {
    pub fn new(sys: &LtiSystem, horizon: usize) -> Result<Self> {
        Self::with_metric(sys, &vec![1.0; horizon])
    }

    /// Projection in the metric `Σ q_t‖x(t) − x̂(t)‖² + Σ ‖u(t) − û(t)‖²`
    /// with `q = state_metric` indexed `t = 1..T`.
    pub fn with_metric(sys: &LtiSystem, state_metric: &[f64]) -> Result<Self> {
        let horizon = state_metric.len();
        if horizon == 0 {
            return Err(Error::InvalidInput("horizon must be at least 1".into()));
        }
        if state_metric.iter().any(|q| !(q.is_finite() && *q > 0.0)) {
            return Err(Error::InvalidInput("projection metric must be positive".into()));
        }
        let (n, m) = (sys.n(), sys.n_u());
        let a = sys.a().clone();
        let b = sys.b().clone();
        let mut p = DMatrix::<f64>::identity(n, n) * state_metric[horizon - 1];
        let mut gains = vec![DMatrix::zeros(m, n); horizon];
        let mut quu_inv = vec![DMatrix::zeros(m, m); horizon];
        for t in (0..horizon).rev() {
            let pb = &p * &b;
            let quu = DMatrix::<f64>::identity(m, m) + b.transpose() * &pb;
            let qux = pb.transpose() * &a;
            let chol = quu.cholesky().ok_or_else(|| {
                Error::Numerical(format!("dynamics projection factorization failed at t = {t}"))
            })?;
            let inv = chol.inverse();
            let k = &inv * &qux;
            if t > 0 {
                let mut next = DMatrix::<f64>::identity(n, n) * state_metric[t - 1]
                    + a.transpose() * &p * &a
                    - qux.transpose() * &k;
                // keep P symmetric against rounding drift
                next = (&next + next.transpose()) * 0.5;
                p = next;
            }
            gains[t] = k;
            quu_inv[t] = inv;
        }
        Ok(Self {
            layout: Layout { n, n_u: m, horizon },
            a,
            b,
            gains,
            quu_inv,
            state_metric: state_metric.to_vec(),
        })
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn workspace(&self) -> ProjectorWorkspace {
        let Layout { n, n_u, horizon } = self.layout;
        ProjectorWorkspace {
            p: vec![0.0; n],
            p_next: vec![0.0; n],
            qu: vec![0.0; n_u],
            feedforward: vec![0.0; horizon * n_u],
        }
    }

    /// Writes into `out` the closest dynamics-consistent trajectory to
    /// `target` (both in [`Layout`] order), starting from `x0`.
    pub fn project_into(&self, x0: &[f64], target: &[f64], out: &mut [f64], ws: &mut ProjectorWorkspace) {
        let Layout { n, n_u, horizon } = self.layout;
        let lay = self.layout;
        debug_assert_eq!(target.len(), lay.len());
        debug_assert_eq!(out.len(), lay.len());

        // backward pass for the affine part: value gradient p_t
        let q_last = self.state_metric[horizon - 1];
        for (pi, xi) in ws.p.iter_mut().zip(&target[lay.x_range(horizon)]) {
            *pi = -q_last * xi;
        }
        for t in (0..horizon).rev() {
            // Qu = -û_t + Bᵀ p_{t+1}
            gemv_t(&self.b, &ws.p, &mut ws.qu, 1.0, 0.0);
            for (q, uh) in ws.qu.iter_mut().zip(&target[lay.u_range(t)]) {
                *q -= uh;
            }
            let kff = &mut ws.feedforward[t * n_u..(t + 1) * n_u];
            gemv(&self.quu_inv[t], &ws.qu, kff, 1.0, 0.0);
            if t > 0 {
                // p_t = -q_t x̂_t + Aᵀ p_{t+1} - K_tᵀ Qu
                gemv_t(&self.a, &ws.p, &mut ws.p_next, 1.0, 0.0);
                gemv_t(&self.gains[t], &ws.qu, &mut ws.p_next, -1.0, 1.0);
                let q = self.state_metric[t - 1];
                for (pn, xh) in ws.p_next.iter_mut().zip(&target[lay.x_range(t)]) {
                    *pn -= q * xh;
                }
                std::mem::swap(&mut ws.p, &mut ws.p_next);
            }
        }

        // forward rollout with u_t = -K_t x_t - k_t
        let (xs, us) = out.split_at_mut(horizon * n);
        for t in 0..horizon {
            let (done, rest) = xs.split_at_mut(t * n);
            let x_prev: &[f64] = if t == 0 { x0 } else { &done[(t - 1) * n..] };
            let u = &mut us[t * n_u..(t + 1) * n_u];
            u.copy_from_slice(&ws.feedforward[t * n_u..(t + 1) * n_u]);
            gemv(&self.gains[t], x_prev, u, -1.0, -1.0);
            let x_next = &mut rest[..n];
            gemv(&self.a, x_prev, x_next, 1.0, 0.0);
            gemv(&self.b, u, x_next, 1.0, 1.0);
        }
    }
}

/// Projection of a stacked `(x̂(1..T), û(0..T-1))` target onto the set of
/// trajectories with `x(t+1) = A x(t) + B u(t)` and `x(0) = x0`.
pub fn project_dynamics(sys: &LtiSystem, x0: &DVector<f64>, target: &DVector<f64>, horizon: usize) -> Result<DVector<f64>> {
    check_dim("initial state", sys.n(), x0.len())?;
    let proj = DynamicsProjector::new(sys, horizon)?;
    check_dim("stacked trajectory", proj.layout().len(), target.len())?;
    let mut out = DVector::zeros(target.len());
    let mut ws = proj.workspace();
    proj.project_into(x0.as_slice(), target.as_slice(), out.as_mut_slice(), &mut ws);
    Ok(out)
}

/// `y = alpha·M·x + beta·y` on column-major storage.
#[inline]
pub(crate) fn gemv(m: &DMatrix<f64>, x: &[f64], y: &mut [f64], alpha: f64, beta: f64) {
    let rows = m.nrows();
    if beta == 0.0 {
        y.iter_mut().for_each(|v| *v = 0.0);
    } else if beta != 1.0 {
        y.iter_mut().for_each(|v| *v *= beta);
    }
    for (j, col) in m.as_slice().chunks_exact(rows).enumerate() {
        let s = alpha * x[j];
        for (yi, mij) in y.iter_mut().zip(col) {
            *yi += mij * s;
        }
    }
}

/// `y = alpha·Mᵀ·x + beta·y` on column-major storage.
#[inline]
pub(crate) fn gemv_t(m: &DMatrix<f64>, x: &[f64], y: &mut [f64], alpha: f64, beta: f64) {
    let rows = m.nrows();
    for (yj, col) in y.iter_mut().zip(m.as_slice().chunks_exact(rows)) {
        let dot: f64 = col.iter().zip(x).map(|(a, b)| a * b).sum();
        *yj = alpha * dot + if beta == 0.0 { 0.0 } else { beta * *yj };
    }
}
