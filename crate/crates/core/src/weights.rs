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

//! Weight sequences `w(1), ..., w(T)` for the sum-of-norms objective.

use std::fmt;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::lti::{spectral_norm, LtiSystem};
use crate::sets::AdmissibleSet;

/// Weights above this value abort the recursive construction.
pub const OVERFLOW_GUARD: f64 = 1e300;

/// How a schedule was constructed.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Linear { a: f64 },
    Theorem1 { eta: f64, r: f64, safety: f64 },
    Explicit,
}

/// Weights indexed `t = 1..=T`; `weights()[t - 1]` is `w(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSchedule {
    w: Vec<f64>,
    provenance: Provenance,
}

impl WeightSchedule {
    /// Arbitrary nonnegative weights. Zeros are allowed so that a single
    /// state can be singled out (see the feasibility oracle).
    pub fn explicit(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidInput("weight schedule is empty".into()));
        }
        if let Some((i, v)) = w.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidInput(format!(
                "weight w({}) = {v} must be finite and nonnegative",
                i + 1
            )));
        }
        if w.iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidInput("all weights are zero".into()));
        }
        Ok(Self {
            w,
            provenance: Provenance::Explicit,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// `w(t)` for `1 <= t <= T`.
    pub fn at(&self, t: usize) -> f64 {
        self.w[t - 1]
    }

    pub fn horizon(&self) -> usize {
        self.w.len()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn max(&self) -> f64 {
        self.w.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.w.windows(2).all(|p| p[1] > p[0])
    }

    /// The schedule restricted to `w(start+1), ..., w(start+len)`.
    pub fn window(&self, start: usize, len: usize) -> Result<Self> {
        if start + len > self.w.len() || len == 0 {
            return Err(Error::InvalidInput(format!(
                "weight window {}..{} outside schedule of length {}",
                start + 1,
                start + len,
                self.w.len()
            )));
        }
        Ok(Self {
            w: self.w[start..start + len].to_vec(),
            provenance: self.provenance.clone(),
        })
    }

    /// Checks the invariants required of a relaxation objective: positive
    /// and strictly increasing unless the schedule is explicit.
    pub fn validate_for_objective(&self) -> Result<()> {
        if self.provenance == Provenance::Explicit {
            return Ok(());
        }
        if let Some(v) = self.w.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidInput(format!("weight {v} is not positive")));
        }
        if !self.is_strictly_increasing() {
            return Err(Error::InvalidInput("weights must be strictly increasing".into()));
        }
        Ok(())
    }
}

/// `w(t) = a·t`.
pub fn linear_weights(a: f64, horizon: usize) -> Result<WeightSchedule> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidInput(format!("slope a must be positive, got {a}")));
    }
    if horizon == 0 {
        return Err(Error::InvalidInput("horizon must be at least 1".into()));
    }
    Ok(WeightSchedule {
        w: (1..=horizon).map(|t| a * t as f64).collect(),
        provenance: Provenance::Linear { a },
    })
}

/// Recursive schedule guaranteeing exact recovery of the minimum time:
///
/// `w(1) = 1`, `w(t) = safety · (2r/eta) · Σ_{k<t} √k ‖Δ_k‖₂ w(k)`.
///
/// `r` is the ℓ2 radius bound of `set`. The recursion grows quickly for
/// unstable systems; values past [`OVERFLOW_GUARD`] are an error.
pub fn theorem1_weights(
    sys: &LtiSystem,
    set: &AdmissibleSet,
    eta: f64,
    safety: f64,
    horizon: usize,
) -> Result<WeightSchedule> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidInput(format!("eta must be positive, got {eta}")));
    }
    if !(safety.is_finite() && safety > 1.0) {
        return Err(Error::InvalidInput(format!("safety must exceed 1, got {safety}")));
    }
    if horizon == 0 {
        return Err(Error::InvalidInput("horizon must be at least 1".into()));
    }
    let r = set.radius_bound();
    let gain = 2.0 * r / eta;
    let mut w = Vec::with_capacity(horizon);
    w.push(1.0);
    let mut sum = 0.0;
    for t in 2..=horizon {
        let k = t - 1;
        let delta_norm = spectral_norm(&sys.build_delta(k)?);
        sum += (k as f64).sqrt() * delta_norm * w[k - 1];
        let value = safety * gain * sum;
        if !value.is_finite() || value > OVERFLOW_GUARD {
            return Err(Error::WeightOverflow { t, value });
        }
        w.push(value);
    }
    let schedule = WeightSchedule {
        w,
        provenance: Provenance::Theorem1 { eta, r, safety },
    };
    if !schedule.is_strictly_increasing() {
        log::warn!("recursive weights are not strictly increasing: {:?}", schedule.w);
    }
    Ok(schedule)
}

/// Divides every weight by the largest one.
pub fn normalize(ws: &WeightSchedule) -> WeightSchedule {
    let m = ws.max();
    if m <= 0.0 || m == 1.0 {
        return ws.clone();
    }
    let provenance = match ws.provenance {
        Provenance::Linear { a } => Provenance::Linear { a: a / m },
        ref other => other.clone(),
    };
    WeightSchedule {
        w: ws.w.iter().map(|v| v / m).collect(),
        provenance,
    }
}

/// What a weight strategy may look at when building a schedule.
#[derive(Debug, Clone, Copy)]
pub struct WeightContext<'a> {
    pub sys: &'a LtiSystem,
    pub set: &'a AdmissibleSet,
    pub x0: &'a DVector<f64>,
}

/// A named way of producing a weight schedule for a given horizon.
///
/// Schedules are indexed by absolute time, so the receding-horizon loop asks
/// for `t_abs + tau` weights and takes a window.
pub trait WeightStrategy: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;

    fn schedule(&self, ctx: &WeightContext<'_>, horizon: usize) -> Result<WeightSchedule>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearStrategy {
    pub a: f64,
}

impl WeightStrategy for LinearStrategy {
    fn name(&self) -> &'static str {
        "linear"
    }

    fn schedule(&self, _ctx: &WeightContext<'_>, horizon: usize) -> Result<WeightSchedule> {
        linear_weights(self.a, horizon)
    }
}

/// Recursive schedule; `eta` defaults to `1e-3·(1 + ‖x0‖₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Strategy {
    pub eta: Option<f64>,
    pub safety: f64,
}

impl Theorem1Strategy {
    pub const DEFAULT_SAFETY: f64 = 1.01;

    pub fn eta_for(&self, x0: &DVector<f64>) -> f64 {
        self.eta.unwrap_or_else(|| 1e-3 * (1.0 + x0.norm()))
    }
}

impl WeightStrategy for Theorem1Strategy {
    fn name(&self) -> &'static str {
        "theorem1"
    }

    fn schedule(&self, ctx: &WeightContext<'_>, horizon: usize) -> Result<WeightSchedule> {
        theorem1_weights(ctx.sys, ctx.set, self.eta_for(ctx.x0), self.safety, horizon)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitStrategy {
    pub values: Vec<f64>,
}

impl WeightStrategy for ExplicitStrategy {
    fn name(&self) -> &'static str {
        "explicit"
    }

    fn schedule(&self, _ctx: &WeightContext<'_>, horizon: usize) -> Result<WeightSchedule> {
        if self.values.len() < horizon {
            return Err(Error::InvalidInput(format!(
                "explicit weights provide {} values, horizon {horizon} needs more",
                self.values.len()
            )));
        }
        WeightSchedule::explicit(self.values[..horizon].to_vec())
    }
}
