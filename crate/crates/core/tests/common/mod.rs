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


//! Helpers shared by the integration tests.

#![allow(dead_code)]

use mintime_core::{AdmissibleSet, LtiSystem};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// System with entries uniform in `[-1, 1]`.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize, n_u: usize) -> LtiSystem {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..=1.0));
    let b = DMatrix::from_fn(n, n_u, |_, _| rng.random_range(-1.0..=1.0));
    LtiSystem::new(a, b).unwrap()
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, half_width: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(-half_width..=half_width))
}

/// Re-simulation and set-membership checks on an emitted trajectory.
pub fn assert_consistent(sys: &LtiSystem, set: &AdmissibleSet, x0: &DVector<f64>, u: &[DVector<f64>], x: &[DVector<f64>]) {
    assert!(u.iter().all(|v| set.contains(v)), "emitted control outside U");
    let resim = sys.simulate(x0, u).unwrap();
    for (a, b) in resim.iter().zip(x) {
        assert!((a - b).norm() <= 1e-12 * (1.0 + x0.norm()), "emitted states do not re-simulate");
    }
}

/// Distance from `p` to the planar zonotope `{Σ c_i g_i : |c_i| <= 1}`.
///
/// Vertices are enumerated over all sign patterns, hulled, and the point is
/// tested against the polygon directly. Independent of the ADMM solver.
pub fn zonotope_distance(generators: &DMatrix<f64>, p: [f64; 2]) -> f64 {
    assert_eq!(generators.nrows(), 2);
    let k = generators.ncols();
    assert!(k <= 16, "vertex enumeration is exponential");
    let mut pts = Vec::with_capacity(1 << k);
    for mask in 0u32..(1 << k) {
        let (mut x, mut y) = (0.0, 0.0);
        for i in 0..k {
            let s = if mask & (1 << i) != 0 { 1.0 } else { -1.0 };
            x += s * generators[(0, i)];
            y += s * generators[(1, i)];
        }
        pts.push([x, y]);
    }
    let hull = convex_hull(pts);
    point_polygon_distance(&hull, p)
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain, counter-clockwise, collinear points dropped.
fn convex_hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<[f64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 1e-14 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn segment_distance(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let s = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    ((a[0] + s * dx - p[0]).powi(2) + (a[1] + s * dy - p[1]).powi(2)).sqrt()
}

fn point_polygon_distance(hull: &[[f64; 2]], p: [f64; 2]) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => ((hull[0][0] - p[0]).powi(2) + (hull[0][1] - p[1]).powi(2)).sqrt(),
        2 => segment_distance(hull[0], hull[1], p),
        m => {
            let inside = (0..m).all(|i| cross(hull[i], hull[(i + 1) % m], p) >= 0.0);
            if inside {
                return 0.0;
            }
            (0..m)
                .map(|i| segment_distance(hull[i], hull[(i + 1) % m], p))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

/// Exhaustive search of `Σ w(t)‖x(t)‖` over a uniform input grid on
/// `[-1, 1]^t_star`, inputs zero afterwards. Single input only.
pub fn grid_search_objective(sys: &LtiSystem, x0: &DVector<f64>, weights: &[f64], t_star: usize, step: f64) -> f64 {
    assert_eq!(sys.n_u(), 1);
    let n = sys.n();
    let a: Vec<f64> = sys.a().transpose().as_slice().to_vec(); // row-major
    let b: Vec<f64> = sys.b().column(0).iter().copied().collect();
    let count = (2.0 / step).round() as usize;
    let levels: Vec<f64> = (0..=count).map(|i| (-1.0 + i as f64 * step).clamp(-1.0, 1.0)).collect();
    let horizon = weights.len();
    let mut best = f64::INFINITY;
    let mut idx = vec![0usize; t_star];
    let (mut x, mut next) = (vec![0.0; n], vec![0.0; n]);
    // odometer over the grid
    loop {
        x.copy_from_slice(x0.as_slice());
        let mut cost = 0.0;
        for (t, w) in weights.iter().enumerate().take(horizon) {
            let u = if t < t_star { levels[idx[t]] } else { 0.0 };
            for i in 0..n {
                next[i] = (0..n).map(|j| a[i * n + j] * x[j]).sum::<f64>() + b[i] * u;
            }
            std::mem::swap(&mut x, &mut next);
            cost += w * x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if cost >= best {
                break;
            }
        }
        best = best.min(cost);
        let mut k = 0;
        loop {
            if k == t_star {
                return best;
            }
            idx[k] += 1;
            if idx[k] < levels.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Rigorous lower bound on `min_{u ∈ U^t} ‖A^t x0 + Δ_t u‖₂` for an ℓ2 ball of
/// radius `r`, from the direction `c` of a candidate residual:
/// `cᵀA^t x0 − r Σ_k ‖(A^k B)ᵀ c‖₂`.
pub fn ball2_distance_lower_bound(sys: &LtiSystem, r: f64, x0: &DVector<f64>, t: usize, witness: &[DVector<f64>]) -> f64 {
    let free = sys.powers(t).pop().unwrap() * x0;
    let xs = sys.simulate(x0, witness).unwrap();
    let resid = &xs[t];
    if resid.norm() == 0.0 {
        return 0.0;
    }
    let c = resid / resid.norm();
    let delta = sys.build_delta(t).unwrap();
    let n_u = sys.n_u();
    let support: f64 = (0..t).map(|k| (delta.columns(k * n_u, n_u).transpose() * &c).norm()).sum();
    (c.dot(&free) - r * support).max(0.0)
}
