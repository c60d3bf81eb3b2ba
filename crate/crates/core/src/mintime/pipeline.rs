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

//! Relaxation, zero-tail detection and certification in one call.

use std::sync::Arc;

use nalgebra::DVector;

use super::mu::{estimate_mu, MuEstimate};
use super::oracle::{feasibility_distance, oracle_scan, LinearScan, OracleResult, ScanStrategy};
use super::{default_tolerance, detect_t1};
use crate::error::Result;
use crate::lti::{rank_b_full, LtiSystem};
use crate::sets::AdmissibleSet;
use crate::solver::{solve_relaxation, RelaxationProblem, SolveOutput, SolverConfig};
use crate::weights::WeightSchedule;

/// Controls within this distance of the boundary of `U` count as extreme.
pub const BOUNDARY_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct MuOptions {
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    /// Defaults to `1e-6·(1 + ‖x0‖₂)`.
    pub feas_tol: Option<f64>,
    /// Defaults to `1e-6·(1 + ‖x0‖₂)`.
    pub zero_tol: Option<f64>,
    /// Oracle scan limit; defaults to the relaxation horizon.
    pub t_max: Option<usize>,
    pub scan: Arc<dyn ScanStrategy>,
    pub mu: Option<MuOptions>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            feas_tol: None,
            zero_tol: None,
            t_max: None,
            scan: Arc::new(LinearScan),
            mu: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub relaxation: SolveOutput,
    /// First time from which the relaxed trajectory stays at zero.
    pub t1: Option<usize>,
    pub certified: bool,
    pub t_star: Option<usize>,
    pub oracle: OracleResult,
    /// `d(T1)` and `d(T1 - 1)` as used for certification, `d(0) = ‖x0‖₂`.
    pub distance_at_t1: Option<f64>,
    pub distance_before_t1: Option<f64>,
    pub mu: Option<MuEstimate>,
    pub mu_lower_bound: Option<f64>,
    pub condition12_refuted: Option<bool>,
    /// `rank(B) = n_u`, under which the time-optimal sequence is unique.
    pub uniqueness_hint: bool,
    /// Every control before `T1` lies on the boundary of `U`.
    pub bang_bang: bool,
    pub feas_tol: f64,
    pub zero_tol: f64,
}

/// Solves the relaxation over `weights.horizon()` steps and certifies the
/// detected zero time against the exact oracle.
///
/// `T1` is certified when `d(T1) <= feas_tol`, `d(T1 - 1) > feas_tol` and it
/// agrees with the scanned minimum time.
pub fn run_pipeline(
    sys: &LtiSystem,
    set: &AdmissibleSet,
    x0: &DVector<f64>,
    weights: &WeightSchedule,
    cfg: &SolverConfig,
    opts: &PipelineOptions,
) -> Result<PipelineReport> {
    let horizon = weights.horizon();
    let problem = RelaxationProblem::new(sys.clone(), x0.clone(), set.clone(), weights.clone())?;
    let feas_tol = opts.feas_tol.unwrap_or_else(|| default_tolerance(x0));
    let zero_tol = opts.zero_tol.unwrap_or_else(|| default_tolerance(x0));

    let relaxation = solve_relaxation(&problem, cfg)?;
    let t1 = detect_t1(&relaxation.x, zero_tol);

    let distance = |t: usize| -> Result<f64> {
        if t == 0 {
            Ok(x0.norm())
        } else {
            Ok(feasibility_distance(sys, set, x0, t, cfg)?.distance)
        }
    };
    let (distance_at_t1, distance_before_t1) = match t1 {
        Some(0) => (Some(x0.norm()), None),
        Some(t) => (Some(distance(t)?), Some(distance(t - 1)?)),
        None => (None, None),
    };

    let oracle = oracle_scan(sys, set, x0, opts.t_max.unwrap_or(horizon), feas_tol, opts.scan.as_ref(), cfg)?;
    let t_star = oracle.t_star;

    let checks_pass = match t1 {
        Some(0) => x0.norm() <= feas_tol,
        Some(_) => {
            distance_at_t1.is_some_and(|d| d <= feas_tol) && distance_before_t1.is_some_and(|d| d > feas_tol)
        }
        None => false,
    };
    let certified = checks_pass && t1 == t_star;

    let mu = match (&opts.mu, t1) {
        (Some(m), Some(t)) if t >= 1 => Some(estimate_mu(sys, set, weights, t, horizon, m.samples, m.seed)?),
        _ => None,
    };
    let mu_lower_bound = mu.as_ref().map(|m| m.lower_bound);
    let condition12_refuted = mu.as_ref().map(MuEstimate::refutes_condition);

    let active = t1.unwrap_or(horizon);
    let bang_bang = relaxation.u[..active]
        .iter()
        .all(|u| set.on_boundary(u, BOUNDARY_TOL));

    Ok(PipelineReport {
        relaxation,
        t1,
        certified,
        t_star,
        oracle,
        distance_at_t1,
        distance_before_t1,
        mu,
        mu_lower_bound,
        condition12_refuted,
        uniqueness_hint: rank_b_full(sys, None),
        bang_bang,
        feas_tol,
        zero_tol,
    })
}
