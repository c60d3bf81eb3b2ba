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

//! Receding-horizon controller.
//!
//! At absolute time `t` the relaxation is solved over `tau` steps from the
//! current state with weights `w(t+1), ..., w(t+tau)`; the first control is
//! applied, or the whole block when re-solving only every `resolve_period`
//! steps. A state within `zero_tol` of the origin gets the zero input.

use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};
use crate::lti::LtiSystem;
use crate::sets::AdmissibleSet;
use crate::solver::{solve_relaxation_warm, RelaxationProblem, SolverConfig, WarmStart};
use crate::weights::{WeightContext, WeightStrategy};

#[derive(Debug, Clone)]
pub struct MpcConfig {
    pub tau: usize,
    pub resolve_period: usize,
    pub max_steps: usize,
    /// Defaults to `1e-6·(1 + ‖x0‖₂)` of the run's initial state.
    pub zero_tol: Option<f64>,
    pub weights: Arc<dyn WeightStrategy>,
    /// Use `w(1..tau)` at every step instead of the absolute-time window.
    pub relative_time: bool,
    pub warm_start: bool,
}

impl MpcConfig {
    /// Horizon `n + 3`, re-solving every step.
    pub fn with_defaults(sys: &LtiSystem, weights: Arc<dyn WeightStrategy>) -> Self {
        Self {
            tau: sys.n() + 3,
            resolve_period: 1,
            max_steps: 100,
            zero_tol: None,
            weights,
            relative_time: false,
            warm_start: true,
        }
    }

    pub fn validate(&self, sys: &LtiSystem) -> Result<()> {
        if self.tau <= sys.n() {
            return Err(Error::InvalidInput(format!(
                "tau = {} must exceed the state dimension n = {}",
                self.tau,
                sys.n()
            )));
        }
        if self.resolve_period == 0 || self.resolve_period > self.tau {
            return Err(Error::InvalidInput(format!(
                "resolve_period = {} must lie in [1, tau = {}]",
                self.resolve_period, self.tau
            )));
        }
        if let Some(tol) = self.zero_tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Error::InvalidInput(format!("zero_tol must be positive, got {tol}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct MpcStep {
    /// `u(t|t), ..., u(t+tau-1|t)`.
    pub block: Vec<DVector<f64>>,
    /// False when the zero-state short circuit applied.
    pub solved: bool,
    pub iterations: usize,
}

/// One receding-horizon solve from `x_current` at absolute time `t_abs`.
pub fn mpc_step(
    sys: &LtiSystem,
    set: &AdmissibleSet,
    x_current: &DVector<f64>,
    t_abs: usize,
    cfg: &MpcConfig,
    solver_cfg: &SolverConfig,
    warm: Option<&WarmStart>,
) -> Result<MpcStep> {
    check_dim("state", sys.n(), x_current.len())?;
    cfg.validate(sys)?;
    let zero_tol = cfg.zero_tol.unwrap_or_else(|| 1e-6 * (1.0 + x_current.norm()));
    if x_current.norm() <= zero_tol {
        return Ok(MpcStep {
            block: vec![DVector::zeros(sys.n_u()); cfg.tau],
            solved: false,
            iterations: 0,
        });
    }
    let ctx = WeightContext {
        sys,
        set,
        x0: x_current,
    };
    let start = if cfg.relative_time { 0 } else { t_abs };
    let weights = cfg.weights.schedule(&ctx, start + cfg.tau)?.window(start, cfg.tau)?;
    let problem = RelaxationProblem::new(sys.clone(), x_current.clone(), set.clone(), weights)?;
    let out = solve_relaxation_warm(&problem, solver_cfg, warm)?;
    Ok(MpcStep {
        block: out.u,
        solved: true,
        iterations: out.iterations,
    })
}

#[derive(Debug, Clone)]
pub struct ClosedLoopTrace {
    pub states: Vec<DVector<f64>>,
    pub inputs: Vec<DVector<f64>>,
    /// Steps at which the finite-horizon problem was solved.
    pub solve_times: Vec<usize>,
    pub reached_zero_at: Option<usize>,
    pub zero_tol: f64,
}

/// Closed-loop simulation until the state is within `zero_tol` of the
/// origin or `max_steps` inputs have been applied.
pub fn mpc_run(
    sys: &LtiSystem,
    set: &AdmissibleSet,
    x0: &DVector<f64>,
    cfg: &MpcConfig,
    solver_cfg: &SolverConfig,
) -> Result<ClosedLoopTrace> {
    check_dim("initial state", sys.n(), x0.len())?;
    cfg.validate(sys)?;
    let zero_tol = cfg.zero_tol.unwrap_or_else(|| 1e-6 * (1.0 + x0.norm()));
    let step_cfg = MpcConfig {
        zero_tol: Some(zero_tol),
        ..cfg.clone()
    };
    let mut trace = ClosedLoopTrace {
        states: vec![x0.clone()],
        inputs: Vec::new(),
        solve_times: Vec::new(),
        reached_zero_at: None,
        zero_tol,
    };
    if x0.norm() <= zero_tol {
        trace.reached_zero_at = Some(0);
        return Ok(trace);
    }
    let mut block: Vec<DVector<f64>> = Vec::new();
    let mut cursor = 0;
    let mut x = x0.clone();
    for step in 0..cfg.max_steps {
        if step % cfg.resolve_period == 0 {
            let warm = (cfg.warm_start && !block.is_empty())
                .then(|| WarmStart::shifted(&block, cursor, cfg.tau, sys.n_u()));
            let solved = mpc_step(sys, set, &x, step, &step_cfg, solver_cfg, warm.as_ref())?;
            block = solved.block;
            cursor = 0;
            trace.solve_times.push(step);
        }
        let u = block[cursor].clone();
        cursor += 1;
        x = sys.step(&x, &u)?;
        trace.inputs.push(u);
        trace.states.push(x.clone());
        if x.norm() <= zero_tol {
            trace.reached_zero_at = Some(step + 1);
            break;
        }
    }
    Ok(trace)
}
