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


//! Report files: JSON mirrors of the library results that read back to
//! identical values.
//!
//! Wall-clock timings are kept out of these files (they go to a separate
//! `*.timings.json`) so that a report depends only on its inputs.

use mintime_core::mintime::{OracleResult, PipelineReport};
use mintime_core::mpc::{ClosedLoopTrace, MpcConfig};
use mintime_core::SolverConfig;
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::problem::ProblemFile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Tool {
    pub fn current() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverEcho {
    pub rho: f64,
    pub eps_abs: f64,
    pub eps_rel: f64,
    pub max_iters: usize,
    pub over_relaxation: f64,
}

impl From<&SolverConfig> for SolverEcho {
    fn from(c: &SolverConfig) -> Self {
        Self {
            rho: c.rho,
            eps_abs: c.eps_abs,
            eps_rel: c.eps_rel,
            max_iters: c.max_iters,
            over_relaxation: c.over_relaxation,
        }
    }
}

/// Effective settings after defaults, file and flags were merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub solver: SolverEcho,
    pub feas_tol: f64,
    pub zero_tol: f64,
    pub t_max: usize,
    pub scan: String,
    pub seed: u64,
    pub mu_samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceRow {
    pub t: usize,
    pub distance: f64,
    pub status: String,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuSummary {
    pub lower_bound: f64,
    pub accepted: usize,
    pub discarded: usize,
    pub refutes_condition: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveResult {
    pub t1: Option<usize>,
    pub certified: bool,
    pub t_star: Option<usize>,
    pub distance_at_t1: Option<f64>,
    pub distance_before_t1: Option<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub status: String,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub uniqueness_hint: bool,
    pub bang_bang: bool,
    pub mu: Option<MuSummary>,
    pub weights: Vec<f64>,
    pub oracle: Vec<DistanceRow>,
    pub inputs: Vec<Vec<f64>>,
    pub states: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub tool: Tool,
    pub problem: ProblemFile,
    pub settings: Settings,
    /// Horizon actually solved; larger than `problem.horizon` only when the
    /// demo extended it to reach the origin.
    pub horizon_used: usize,
    pub auto_extended: bool,
    pub result: SolveResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleReport {
    pub tool: Tool,
    pub problem: ProblemFile,
    pub settings: Settings,
    pub t_star: Option<usize>,
    pub witness: Option<Vec<Vec<f64>>>,
    pub distances: Vec<DistanceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MpcSettings {
    pub solver: SolverEcho,
    pub tau: usize,
    pub resolve_period: usize,
    pub max_steps: usize,
    pub zero_tol: f64,
    pub relative_time: bool,
    pub warm_start: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MpcReport {
    pub tool: Tool,
    pub problem: ProblemFile,
    pub settings: MpcSettings,
    pub reached_zero_at: Option<usize>,
    pub solve_times: Vec<usize>,
    pub inputs: Vec<Vec<f64>>,
    pub states: Vec<Vec<f64>>,
}

/// Wall-clock figures, written next to a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_seconds: f64,
}

pub fn rows(v: &[DVector<f64>]) -> Vec<Vec<f64>> {
    v.iter().map(|x| x.iter().copied().collect()).collect()
}

pub fn distance_rows(oracle: &OracleResult) -> Vec<DistanceRow> {
    oracle
        .distances
        .iter()
        .map(|d| DistanceRow {
            t: d.horizon,
            distance: d.distance,
            status: d.status.as_str().into(),
            iterations: d.iterations,
        })
        .collect()
}

pub fn solve_result(r: &PipelineReport, weights: &[f64]) -> SolveResult {
    SolveResult {
        t1: r.t1,
        certified: r.certified,
        t_star: r.t_star,
        distance_at_t1: r.distance_at_t1,
        distance_before_t1: r.distance_before_t1,
        objective: r.relaxation.objective,
        iterations: r.relaxation.iterations,
        status: r.relaxation.status.as_str().into(),
        primal_residual: r.relaxation.primal_residual,
        dual_residual: r.relaxation.dual_residual,
        uniqueness_hint: r.uniqueness_hint,
        bang_bang: r.bang_bang,
        mu: r.mu.as_ref().map(|m| MuSummary {
            lower_bound: m.lower_bound,
            accepted: m.accepted,
            discarded: m.discarded,
            refutes_condition: m.refutes_condition(),
        }),
        weights: weights.to_vec(),
        oracle: distance_rows(&r.oracle),
        inputs: rows(&r.relaxation.u),
        states: rows(&r.relaxation.x),
    }
}

pub fn mpc_settings(cfg: &MpcConfig, solver: &SolverConfig, zero_tol: f64) -> MpcSettings {
    MpcSettings {
        solver: solver.into(),
        tau: cfg.tau,
        resolve_period: cfg.resolve_period,
        max_steps: cfg.max_steps,
        zero_tol,
        relative_time: cfg.relative_time,
        warm_start: cfg.warm_start,
    }
}

/// Reached-zero time, solve times, inputs and states.
pub type MpcColumns = (Option<usize>, Vec<usize>, Vec<Vec<f64>>, Vec<Vec<f64>>);

pub fn mpc_result(trace: &ClosedLoopTrace) -> MpcColumns {
    (
        trace.reached_zero_at,
        trace.solve_times.clone(),
        rows(&trace.inputs),
        rows(&trace.states),
    )
}
