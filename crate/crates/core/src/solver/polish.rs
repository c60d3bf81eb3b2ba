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

//! Exact zeroing of a nearly-zero trajectory tail.
//!
//! A first-order solve leaves states of order the stopping tolerance where
//! the minimizer has exact zeros. Given a candidate start `t0` of the zero
//! tail, the inputs from `t0` on are dropped and the earlier inputs are moved
//! by Gauss-Newton steps until `x(t0) = 0`. Only directions that keep each
//! input admissible are used: interior inputs move freely, inputs on the
//! sphere of an ℓ2 ball move tangentially and are pulled back onto it, and
//! saturated box coordinates stay put.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::lti::LtiSystem;
use crate::sets::AdmissibleSet;

const MAX_STEPS: usize = 20;
const REACH_ITERS: usize = 3000;
const SNAP_TOL: f64 = 1e-6;

/// Returns modified inputs with `x(t0) = 0` (to rounding), or `None` when the
/// admissible directions cannot remove the residual.
pub(crate) fn zero_tail(
    sys: &LtiSystem,
    set: &AdmissibleSet,
    x0: &DVector<f64>,
    inputs: &[DVector<f64>],
    t0: usize,
) -> Result<Option<Vec<DVector<f64>>>> {
    let n_u = sys.n_u();
    let mut u = inputs.to_vec();
    u[t0..].iter_mut().for_each(|v| v.fill(0.0));
    let delta = sys.build_delta(t0)?;
    let target_tol = 1e-13 * (1.0 + x0.norm());

    let mut residual = sys.simulate(x0, &u[..t0])?.pop().unwrap();
    for _ in 0..MAX_STEPS {
        let norm = residual.norm();
        if norm <= target_tol {
            return Ok(Some(u));
        }
        let directions = admissible_directions(set, &u[..t0]);
        if directions.ncols() == 0 {
            return Ok(None);
        }
        let jac = &delta * &directions;
        let Ok(step) = jac.svd(true, true).solve(&(-&residual), 1e-13) else {
            return Ok(None);
        };
        let moved = &directions * step;
        let mut trial = u.clone();
        for (t, v) in trial[..t0].iter_mut().enumerate() {
            *v += moved.rows(t * n_u, n_u);
            *v = set.project(v)?;
        }
        let next = sys.simulate(x0, &trial[..t0])?.pop().unwrap();
        if next.norm() >= norm {
            return Ok(None);
        }
        u = trial;
        residual = next;
    }
    Ok((residual.norm() <= target_tol).then_some(u))
}

/// Admissible inputs closest to `anchor[..t0]` that drive the state to zero
/// at `t0`, followed by zeros; `None` when no such inputs were found.
///
/// The projection onto `{u ∈ U^t0 : x(t0) = 0}` is computed by a small ADMM
/// splitting between the affine constraint and `U^t0`, then finished by
/// [`zero_tail`] so the terminal state is zero to rounding.
pub(crate) fn reach_zero_near(
    sys: &LtiSystem,
    set: &AdmissibleSet,
    x0: &DVector<f64>,
    anchor: &[DVector<f64>],
    t0: usize,
) -> Result<Option<Vec<DVector<f64>>>> {
    let n_u = sys.n_u();
    let m = t0 * n_u;
    let delta = sys.build_delta(t0)?;
    let free = sys.powers(t0).pop().unwrap() * x0;
    let scale = 1.0 + x0.norm();
    let Ok(pinv) = delta.clone().pseudo_inverse(1e-12 * delta.norm().max(f64::MIN_POSITIVE)) else {
        return Ok(None);
    };
    let c = DVector::from_iterator(m, anchor[..t0].iter().flat_map(|v| v.iter().copied()));
    // affine projection onto Δu = -A^t0 x0
    let affine = |v: DVector<f64>| {
        let r = &delta * &v + &free;
        v - &pinv * r
    };
    let project_set = |v: &mut DVector<f64>| -> Result<()> {
        for t in 0..t0 {
            let block = set.project(&v.rows(t * n_u, n_u).into_owned())?;
            v.rows_mut(t * n_u, n_u).copy_from(&block);
        }
        Ok(())
    };

    let mut z = c.clone();
    let mut y = DVector::<f64>::zeros(m);
    for _ in 0..REACH_ITERS {
        let u = affine((&c + &z - &y) * 0.5);
        let mut z_next = &u + &y;
        project_set(&mut z_next)?;
        y += &u - &z_next;
        let gap = (&u - &z_next).norm() + (&z_next - &z).norm();
        z = z_next;
        if gap <= 1e-12 * scale {
            break;
        }
    }
    let reach = (&delta * &z + &free).norm();
    if reach > 1e-6 * scale {
        return Ok(None);
    }
    let mut u: Vec<DVector<f64>> = (0..t0).map(|t| z.rows(t * n_u, n_u).into_owned()).collect();
    u.resize(anchor.len(), DVector::zeros(n_u));
    // near-vertex solutions converge slowly; snapping the almost active
    // constraints lets the Newton finish see the true active set
    let snapped: Vec<_> = u.iter().map(|v| snap_to_boundary(set, v, SNAP_TOL)).collect();
    if let Some(done) = zero_tail(sys, set, x0, &snapped, t0)? {
        return Ok(Some(done));
    }
    zero_tail(sys, set, x0, &u, t0)
}

fn snap_to_boundary(set: &AdmissibleSet, v: &DVector<f64>, tol: f64) -> DVector<f64> {
    match set {
        AdmissibleSet::Ball2 { r, .. } => {
            let norm = v.norm();
            if norm > r * (1.0 - tol) && norm > 0.0 {
                set.project(&(v * (r / norm))).unwrap_or_else(|_| v.clone())
            } else {
                v.clone()
            }
        }
        AdmissibleSet::BallInf { radii } => DVector::from_iterator(
            v.len(),
            v.iter().zip(radii).map(|(c, r)| if c.abs() > r * (1.0 - tol) { r.copysign(*c) } else { *c }),
        ),
    }
}

/// Columns spanning the first-order admissible perturbations of the stacked
/// inputs.
fn admissible_directions(set: &AdmissibleSet, u: &[DVector<f64>]) -> DMatrix<f64> {
    let n_u = set.n_u();
    let total = u.len() * n_u;
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for (t, v) in u.iter().enumerate() {
        let base = t * n_u;
        match set {
            AdmissibleSet::Ball2 { r, .. } => {
                let norm = v.norm();
                if norm < r * (1.0 - 1e-9) {
                    for i in 0..n_u {
                        let mut c = DVector::zeros(total);
                        c[base + i] = 1.0;
                        cols.push(c);
                    }
                } else if n_u > 1 {
                    // tangent space of the sphere: I - ûûᵀ (rank n_u - 1)
                    let dir = v / norm;
                    for i in 0..n_u {
                        let mut c = DVector::zeros(total);
                        for j in 0..n_u {
                            let id = if i == j { 1.0 } else { 0.0 };
                            c[base + j] = id - dir[i] * dir[j];
                        }
                        cols.push(c);
                    }
                }
            }
            AdmissibleSet::BallInf { radii } => {
                for (i, (c, r)) in v.iter().zip(radii).enumerate() {
                    if c.abs() < r * (1.0 - 1e-9) {
                        let mut col = DVector::zeros(total);
                        col[base + i] = 1.0;
                        cols.push(col);
                    }
                }
            }
        }
    }
    if cols.is_empty() {
        return DMatrix::zeros(total, 0);
    }
    DMatrix::from_columns(&cols)
}
