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

//! Exact minimum time, certification of relaxation output, and the
//! end-to-end pipeline.

pub mod mu;
pub mod oracle;
pub mod pipeline;

use nalgebra::DVector;

pub use mu::{estimate_mu, MuEstimate};
pub use oracle::{
    feasibility_distance, oracle_scan, BisectionScan, FeasibilityResult, LinearScan, OracleResult, ScanStrategy,
};
pub use pipeline::{run_pipeline, MuOptions, PipelineOptions, PipelineReport};

/// Default for both the reachability and the zero-state tolerance:
/// `1e-6·(1 + ‖x0‖₂)`.
pub fn default_tolerance(x0: &DVector<f64>) -> f64 {
    1e-6 * (1.0 + x0.norm())
}

/// Smallest `T1` such that `‖x(t)‖₂ <= zero_tol` for every `t >= T1`, or
/// `None` when the final state is not zero.
pub fn detect_t1(states: &[DVector<f64>], zero_tol: f64) -> Option<usize> {
    let last = states.len().checked_sub(1)?;
    if states[last].norm() > zero_tol {
        return None;
    }
    let mut t1 = last;
    while t1 > 0 && states[t1 - 1].norm() <= zero_tol {
        t1 -= 1;
    }
    Some(t1)
}
