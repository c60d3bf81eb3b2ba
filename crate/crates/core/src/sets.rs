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

//! Admissible input sets: an ℓ2 ball and an axis-aligned box, both centred
//! at the origin.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_dim, Error, Result};

/// Convex set `U` every input `u(t)` must lie in. Always contains the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum AdmissibleSet {
    /// `{u : ‖u‖₂ ≤ r}`
    Ball2 { r: f64, n_u: usize },
    /// `{u : |u_i| ≤ radii_i}`
    BallInf { radii: Vec<f64> },
}

impl AdmissibleSet {
    pub fn ball2(r: f64, n_u: usize) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidInput(format!("ball radius must be positive, got {r}")));
        }
        if n_u == 0 {
            return Err(Error::InvalidInput("input dimension must be at least 1".into()));
        }
        Ok(Self::Ball2 { r, n_u })
    }

    pub fn ball_inf(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidInput("box needs at least one radius".into()));
        }
        if let Some(bad) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::InvalidInput(format!("box radii must be positive, got {bad}")));
        }
        Ok(Self::BallInf { radii })
    }

    pub fn n_u(&self) -> usize {
        match self {
            Self::Ball2 { n_u, .. } => *n_u,
            Self::BallInf { radii } => radii.len(),
        }
    }

    /// Euclidean projection onto the set.
    ///
    /// The result is guaranteed to be a fixed point of `project`, so
    /// `project(project(v)) == project(v)` holds bit for bit.
    pub fn project(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        check_dim("input", self.n_u(), v.len())?;
        let mut out = v.clone();
        self.project_in_place(out.as_mut_slice());
        Ok(out)
    }

    pub(crate) fn project_in_place(&self, v: &mut [f64]) {
        match self {
            Self::Ball2 { r, .. } => {
                let norm = norm2(v);
                if norm <= *r {
                    return;
                }
                let scale = *r / norm;
                v.iter_mut().for_each(|c| *c *= scale);
                // rounding can leave the norm an ulp above r
                while norm2(v) > *r {
                    v.iter_mut().for_each(|c| *c *= 1.0 - f64::EPSILON);
                }
            }
            Self::BallInf { radii } => {
                for (c, r) in v.iter_mut().zip(radii) {
                    *c = c.clamp(-r, *r);
                }
            }
        }
    }

    /// Bound on `‖u‖₂` over the set.
    pub fn radius_bound(&self) -> f64 {
        match self {
            Self::Ball2 { r, .. } => *r,
            Self::BallInf { radii } => norm2(radii),
        }
    }

    /// Minkowski difference `U ⊖ U = {a - b : a, b ∈ U}`.
    pub fn self_difference(&self) -> Self {
        self.scaled(2.0)
    }

    /// The set `s·U` for `s > 0`.
    pub fn scaled(&self, s: f64) -> Self {
        match self {
            Self::Ball2 { r, n_u } => Self::Ball2 { r: r * s, n_u: *n_u },
            Self::BallInf { radii } => Self::BallInf {
                radii: radii.iter().map(|r| r * s).collect(),
            },
        }
    }

    /// A point drawn uniformly from the set.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        match self {
            Self::Ball2 { r, n_u } => {
                let dir = loop {
                    let g: DVector<f64> = DVector::from_fn(*n_u, |_, _| StandardNormal.sample(rng));
                    let norm = g.norm();
                    if norm > 0.0 {
                        break g / norm;
                    }
                };
                let radius = r * rng.random::<f64>().powf(1.0 / *n_u as f64);
                let mut out = dir * radius;
                self.project_in_place(out.as_mut_slice());
                out
            }
            Self::BallInf { radii } => {
                DVector::from_iterator(radii.len(), radii.iter().map(|r| rng.random_range(-r..=*r)))
            }
        }
    }

    /// Whether `v` lies in the set exactly, i.e. it is its own projection.
    pub fn contains(&self, v: &DVector<f64>) -> bool {
        self.project(v).map(|p| &p == v).unwrap_or(false)
    }

    /// Whether `v` sits on the boundary of the set within `tol`.
    ///
    /// For the box every coordinate has to be saturated.
    pub fn on_boundary(&self, v: &DVector<f64>, tol: f64) -> bool {
        match self {
            Self::Ball2 { r, .. } => (v.norm() - r).abs() <= tol,
            Self::BallInf { radii } => v
                .iter()
                .zip(radii)
                .all(|(c, r)| (c.abs() - r).abs() <= tol),
        }
    }
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}
