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

//! Exact minimum-time oracle.
//!
//! `d(t) = min_{ū ∈ U^t} ‖A^t x0 + Δ_t ū‖₂` is the relaxation with the single
//! weight `w(t) = 1` on the final state. The origin is reachable in `t` steps
//! iff `d(t) <= feas_tol`, and since `0 ∈ U` the feasible horizons form an
//! up-set, which allows bisection.
//!
//! The solver returns a feasible trajectory, so every reported distance is an
//! upper bound on the true `d(t)`: a "reachable" verdict is never wrong.

use std::fmt;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::lti::{LtiSystem, StackedInput};
use crate::sets::AdmissibleSet;
use crate::solver::{solve_relaxation, RelaxationProblem, SolveStatus, SolverConfig};
use crate::weights::WeightSchedule;

#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    pub horizon: usize,
    pub distance: f64,
    /// Minimizing input sequence of length `horizon`.
    pub witness: StackedInput,
    pub status: SolveStatus,
    pub iterations: usize,
}

/// `d(t)` together with a minimizing input sequence.
pub fn feasibility_distance(
    sys: &LtiSystem,
    set: &AdmissibleSet,
    x0: &DVector<f64>,
    horizon: usize,
    cfg: &SolverConfig,
) -> Result<FeasibilityResult> {
    if horizon == 0 {
        return Err(Error::InvalidInput("feasibility horizon must be at least 1".into()));
    }
    let mut w = vec![0.0; horizon];
    w[horizon - 1] = 1.0;
    let problem = RelaxationProblem::new(sys.clone(), x0.clone(), set.clone(), WeightSchedule::explicit(w)?)?;
    let out = solve_relaxation(&problem, cfg)?;
    Ok(FeasibilityResult {
        horizon,
        distance: out.x[horizon].norm(),
        witness: StackedInput::from_sequence(&out.u, sys.n_u())?,
        status: out.status,
        iterations: out.iterations,
    })
}

/// Order in which horizons are probed.
pub trait ScanStrategy: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;

    /// Probes horizons in `1..=t_max` and returns every evaluation made.
    fn scan(
        &self,
        probe: &mut dyn FnMut(usize) -> Result<FeasibilityResult>,
        t_max: usize,
        feas_tol: f64,
    ) -> Result<Vec<FeasibilityResult>>;
}

/// `t = 1, 2, ...` until the first reachable horizon.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearScan;

impl ScanStrategy for LinearScan {
    fn name(&self) -> &'static str {
        "linear"
    }

    fn scan(
        &self,
        probe: &mut dyn FnMut(usize) -> Result<FeasibilityResult>,
        t_max: usize,
        feas_tol: f64,
    ) -> Result<Vec<FeasibilityResult>> {
        let mut out = Vec::new();
        for t in 1..=t_max {
            let r = probe(t)?;
            let done = r.distance <= feas_tol;
            out.push(r);
            if done {
                break;
            }
        }
        Ok(out)
    }
}

/// Checks `t_max` first, then bisects on the monotone feasibility predicate.
#[derive(Debug, Clone, Copy, Default)]
pub struct BisectionScan;

impl ScanStrategy for BisectionScan {
    fn name(&self) -> &'static str {
        "bisect"
    }

    fn scan(
        &self,
        probe: &mut dyn FnMut(usize) -> Result<FeasibilityResult>,
        t_max: usize,
        feas_tol: f64,
    ) -> Result<Vec<FeasibilityResult>> {
        let top = probe(t_max)?;
        let reachable = top.distance <= feas_tol;
        let mut out = vec![top];
        if !reachable {
            return Ok(out);
        }
        // invariant: lo unreachable (t = 0 is, since ‖x0‖ > feas_tol), hi reachable
        let (mut lo, mut hi) = (0, t_max);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let r = probe(mid)?;
            if r.distance <= feas_tol {
                hi = mid;
            } else {
                lo = mid;
            }
            out.push(r);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Minimum time, or `None` if unreachable within the scanned range.
    pub t_star: Option<usize>,
    pub witness: Option<StackedInput>,
    /// Every evaluated `d(t)`, sorted by horizon.
    pub distances: Vec<FeasibilityResult>,
    pub feas_tol: f64,
    pub t_max: usize,
}

impl OracleResult {
    pub fn distance_at(&self, t: usize) -> Option<f64> {
        self.distances.iter().find(|d| d.horizon == t).map(|d| d.distance)
    }
}

/// Exact minimum time `T* = min{t : d(t) <= feas_tol}` over `t <= t_max`.
pub fn oracle_scan(
    sys: &LtiSystem,
    set: &AdmissibleSet,
    x0: &DVector<f64>,
    t_max: usize,
    feas_tol: f64,
    strategy: &dyn ScanStrategy,
    cfg: &SolverConfig,
) -> Result<OracleResult> {
    if t_max == 0 {
        return Err(Error::InvalidInput("t_max must be at least 1".into()));
    }
    if !(feas_tol.is_finite() && feas_tol > 0.0) {
        return Err(Error::InvalidInput(format!("feas_tol must be positive, got {feas_tol}")));
    }
    if x0.norm() <= feas_tol {
        return Ok(OracleResult {
            t_star: Some(0),
            witness: Some(StackedInput::zeros(0, sys.n_u())),
            distances: Vec::new(),
            feas_tol,
            t_max,
        });
    }
    let mut probe = |t: usize| feasibility_distance(sys, set, x0, t, cfg);
    let mut distances = strategy.scan(&mut probe, t_max, feas_tol)?;
    distances.sort_by_key(|d| d.horizon);
    let first = distances.iter().find(|d| d.distance <= feas_tol);
    Ok(OracleResult {
        t_star: first.map(|d| d.horizon),
        witness: first.map(|d| d.witness.clone()),
        distances,
        feas_tol,
        t_max,
    })
}
