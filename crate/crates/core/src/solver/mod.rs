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

//! Operator-splitting solver for the weighted sum-of-norms relaxation
//!
//! ```text
//! minimize   Σ_{t=1}^T w(t) ‖x(t)‖₂
//! subject to x(t+1) = A x(t) + B u(t),  x(0) = x0,  u(t) ∈ U.
//! ```
//!
//! The trajectory `z = (x(1..T), u(0..T-1))` is split into a copy constrained
//! to the dynamics (closed-form projection, see [`kkt`]) and a copy carrying
//! the separable terms (block soft-thresholding on states, projection onto
//! `U` on inputs). Iterates are over-relaxed ADMM with a fixed penalty.

pub mod kkt;
mod polish;
pub mod prox;

use nalgebra::DVector;

pub use kkt::{project_dynamics, DynamicsProjector, Layout};
pub use prox::block_soft_threshold;

use crate::error::{check_dim, Error, Result};
use crate::lti::LtiSystem;
use crate::sets::{norm2, AdmissibleSet};
use crate::weights::WeightSchedule;

/// Re-simulated states below `POLISH_THRESHOLD·(1 + ‖x0‖₂)` are candidates
/// for exact zeroing after the iterations stop.
const POLISH_THRESHOLD: f64 = 1e-4;

/// One instance of the relaxation.
#[derive(Debug, Clone)]
pub struct RelaxationProblem {
    pub sys: LtiSystem,
    pub x0: DVector<f64>,
    pub set: AdmissibleSet,
    pub weights: WeightSchedule,
}

impl RelaxationProblem {
    pub fn new(sys: LtiSystem, x0: DVector<f64>, set: AdmissibleSet, weights: WeightSchedule) -> Result<Self> {
        check_dim("initial state", sys.n(), x0.len())?;
        check_dim("admissible set dimension", sys.n_u(), set.n_u())?;
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("initial state must be finite".into()));
        }
        weights.validate_for_objective()?;
        Ok(Self { sys, x0, set, weights })
    }

    pub fn horizon(&self) -> usize {
        self.weights.horizon()
    }

    /// `Σ w(t)‖x(t)‖₂` for a state sequence `x(0..=T)`.
    pub fn objective(&self, states: &[DVector<f64>]) -> f64 {
        self.weights
            .weights()
            .iter()
            .zip(&states[1..])
            .map(|(w, x)| w * x.norm())
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub rho: f64,
    pub eps_abs: f64,
    pub eps_rel: f64,
    pub max_iters: usize,
    pub over_relaxation: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rho: 1.0,
            eps_abs: 1e-8,
            eps_rel: 1e-6,
            max_iters: 50_000,
            over_relaxation: 1.6,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.rho) || !positive(self.eps_abs) || !positive(self.eps_rel) {
            return Err(Error::InvalidInput(
                "rho, eps_abs and eps_rel must be positive".into(),
            ));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidInput("max_iters must be positive".into()));
        }
        if !(1.0..=1.9).contains(&self.over_relaxation) {
            return Err(Error::InvalidInput(format!(
                "over_relaxation must lie in [1, 1.9], got {}",
                self.over_relaxation
            )));
        }
        Ok(())
    }

    /// Same configuration with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            eps_abs: self.eps_abs / factor,
            eps_rel: self.eps_rel / factor,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIters,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::MaxIters => "max_iters",
        }
    }
}

/// Result of a relaxation solve.
///
/// `u` is exactly admissible and `x` is the forward simulation of `u`, so
/// both feasibility properties hold without tolerance.
#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub u: Vec<DVector<f64>>,
    pub x: Vec<DVector<f64>>,
    pub objective: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

impl SolveOutput {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    /// Trivial solution for `x0 = 0`.
    fn at_origin(p: &RelaxationProblem) -> Self {
        let horizon = p.horizon();
        Self {
            u: vec![DVector::zeros(p.sys.n_u()); horizon],
            x: vec![DVector::zeros(p.sys.n()); horizon + 1],
            objective: 0.0,
            iterations: 0,
            status: SolveStatus::Converged,
            primal_residual: 0.0,
            dual_residual: 0.0,
        }
    }
}

/// Initial trajectory for a solve, in original (unscaled) units.
#[derive(Debug, Clone, Default)]
pub struct WarmStart {
    pub u: Vec<DVector<f64>>,
}

impl WarmStart {
    /// Drops the first `shift` inputs and pads the tail with zeros.
    pub fn shifted(u: &[DVector<f64>], shift: usize, horizon: usize, n_u: usize) -> Self {
        let mut out: Vec<_> = u.iter().skip(shift).take(horizon).cloned().collect();
        out.resize(horizon, DVector::zeros(n_u));
        Self { u: out }
    }
}

pub fn solve_relaxation(p: &RelaxationProblem, cfg: &SolverConfig) -> Result<SolveOutput> {
    solve_relaxation_warm(p, cfg, None)
}

/// Solves the relaxation, optionally starting from `warm`.
///
/// The problem is scaled by `1/(1 + ‖x0‖₂)` and the weights by their maximum
/// before iterating; neither changes the minimizer.
pub fn solve_relaxation_warm(p: &RelaxationProblem, cfg: &SolverConfig, warm: Option<&WarmStart>) -> Result<SolveOutput> {
    cfg.validate()?;
    if p.x0.iter().all(|v| *v == 0.0) {
        return Ok(SolveOutput::at_origin(p));
    }
    let projector = DynamicsProjector::new(&p.sys, p.horizon())?;
    Admm::new(p, cfg, &projector).run(warm)
}

struct Admm<'a> {
    p: &'a RelaxationProblem,
    cfg: &'a SolverConfig,
    projector: &'a DynamicsProjector,
    layout: Layout,
    scale: f64,
    scaled_set: AdmissibleSet,
    thresholds: Vec<f64>,
    x0: Vec<f64>,
}

impl<'a> Admm<'a> {
    fn new(p: &'a RelaxationProblem, cfg: &'a SolverConfig, projector: &'a DynamicsProjector) -> Self {
        let scale = 1.0 / (1.0 + p.x0.norm());
        let wmax = p.weights.max();
        Self {
            p,
            cfg,
            projector,
            layout: projector.layout(),
            scale,
            scaled_set: p.set.scaled(scale),
            thresholds: p.weights.weights().iter().map(|w| w / wmax / cfg.rho).collect(),
            x0: p.x0.iter().map(|v| v * scale).collect(),
        }
    }

    fn run(&self, warm: Option<&WarmStart>) -> Result<SolveOutput> {
        let lay = self.layout;
        let len = lay.len();
        let alpha = self.cfg.over_relaxation;
        let mut ws = self.projector.workspace();

        let mut z = vec![0.0; len];
        if let Some(warm) = warm {
            self.load_warm_start(warm, &mut z)?;
        }
        let mut y = vec![0.0; len];
        let mut v = vec![0.0; len];
        let mut target = vec![0.0; len];
        let mut z_prev = vec![0.0; len];

        let sqrt_len = (len as f64).sqrt();
        let mut best: Option<SolveOutput> = None;
        let mut status = SolveStatus::MaxIters;
        let (mut r_pri, mut r_dual) = (f64::INFINITY, f64::INFINITY);
        let mut iterations = 0;

        for k in 1..=self.cfg.max_iters {
            iterations = k;
            for i in 0..len {
                target[i] = z[i] - y[i];
            }
            self.projector.project_into(&self.x0, &target, &mut v, &mut ws);
            z_prev.copy_from_slice(&z);
            for i in 0..len {
                let relaxed = alpha * v[i] + (1.0 - alpha) * z_prev[i];
                z[i] = relaxed + y[i];
                // stash the relaxed point in target for the dual update
                target[i] = relaxed;
            }
            self.prox(&mut z);
            let (mut rp, mut rd, mut ny) = (0.0, 0.0, 0.0);
            for i in 0..len {
                y[i] += target[i] - z[i];
                rp += (v[i] - z[i]).powi(2);
                rd += (z[i] - z_prev[i]).powi(2);
                ny += y[i] * y[i];
            }
            r_pri = rp.sqrt();
            r_dual = self.cfg.rho * rd.sqrt();
            if !(r_pri.is_finite() && r_dual.is_finite()) {
                return Err(Error::Numerical(format!("non-finite residual at iteration {k}")));
            }
            let eps_pri = self.cfg.eps_abs * sqrt_len + self.cfg.eps_rel * norm2(&v).max(norm2(&z));
            let eps_dual = self.cfg.eps_abs * sqrt_len + self.cfg.eps_rel * self.cfg.rho * ny.sqrt();
            if r_pri <= eps_pri && r_dual <= eps_dual {
                status = SolveStatus::Converged;
                break;
            }
            if k % 100 == 0 {
                let candidate = self.extract(&z, k, status, r_pri, r_dual)?;
                if best.as_ref().is_none_or(|b| candidate.objective < b.objective) {
                    best = Some(candidate);
                }
            }
        }

        let last = self.polish(self.extract(&z, iterations, status, r_pri, r_dual)?)?;
        if status == SolveStatus::Converged {
            return Ok(last);
        }
        Ok(match best {
            Some(b) if b.objective < last.objective => SolveOutput {
                iterations,
                primal_residual: r_pri,
                dual_residual: r_dual,
                ..b
            },
            _ => last,
        })
    }

    /// Looks for a cheaper trajectory with an exactly zero tail.
    ///
    /// Tail starts are tried from `T` downwards. A start whose re-simulated
    /// tail is already below a loose threshold is polished in place; other
    /// starts use the nearest admissible inputs that reach zero there. Since
    /// feasibility is monotone in the start, the scan stops at the first
    /// start that cannot be reached. The cheapest of the raw output and all
    /// candidates is kept.
    fn polish(&self, raw: SolveOutput) -> Result<SolveOutput> {
        let horizon = self.layout.horizon;
        let threshold = POLISH_THRESHOLD * (1.0 + self.p.x0.norm());
        let mut near_zero = horizon + 1;
        while near_zero > 1 && raw.x[near_zero - 1].norm() <= threshold {
            near_zero -= 1;
        }
        let (sys, set, x0) = (&self.p.sys, &self.p.set, &self.p.x0);
        let mut best = raw.clone();
        for start in (1..=horizon).rev() {
            let mut u = None;
            if start >= near_zero {
                u = polish::zero_tail(sys, set, x0, &raw.u, start)?;
            }
            if u.is_none() {
                u = polish::reach_zero_near(sys, set, x0, &raw.u, start)?;
            }
            let Some(u) = u else { break };
            let candidate = self.finish_candidate(u, &raw)?;
            // ties go to the earlier zero tail
            if candidate.objective <= best.objective {
                best = candidate;
            }
        }
        Ok(best)
    }

    fn finish_candidate(&self, u: Vec<DVector<f64>>, like: &SolveOutput) -> Result<SolveOutput> {
        let x = self.p.sys.simulate(&self.p.x0, &u)?;
        let objective = self.p.objective(&x);
        if !objective.is_finite() {
            return Err(Error::Numerical("non-finite objective".into()));
        }
        Ok(SolveOutput {
            u,
            x,
            objective,
            ..like.clone()
        })
    }

    /// Separable step: shrink state blocks, project input blocks.
    fn prox(&self, z: &mut [f64]) {
        let lay = self.layout;
        for t in 1..=lay.horizon {
            prox::block_soft_threshold_in_place(&mut z[lay.x_range(t)], self.thresholds[t - 1]);
        }
        for t in 0..lay.horizon {
            self.scaled_set.project_in_place(&mut z[lay.u_range(t)]);
        }
    }

    fn load_warm_start(&self, warm: &WarmStart, z: &mut [f64]) -> Result<()> {
        let lay = self.layout;
        check_dim("warm start horizon", lay.horizon, warm.u.len())?;
        let mut x = self.x0.clone();
        for (t, u) in warm.u.iter().enumerate() {
            check_dim("warm start input", lay.n_u, u.len())?;
            let range = lay.u_range(t);
            for (dst, src) in z[range.clone()].iter_mut().zip(u.iter()) {
                *dst = src * self.scale;
            }
            self.scaled_set.project_in_place(&mut z[range.clone()]);
            let mut next = vec![0.0; lay.n];
            kkt::gemv(self.p.sys.a(), &x, &mut next, 1.0, 0.0);
            kkt::gemv(self.p.sys.b(), &z[range], &mut next, 1.0, 1.0);
            z[lay.x_range(t + 1)].copy_from_slice(&next);
            x = next;
        }
        Ok(())
    }

    /// Maps the split iterate back to original units: inputs projected onto
    /// `U`, states re-simulated.
    fn extract(&self, z: &[f64], iterations: usize, status: SolveStatus, r_pri: f64, r_dual: f64) -> Result<SolveOutput> {
        let lay = self.layout;
        let mut u = Vec::with_capacity(lay.horizon);
        for t in 0..lay.horizon {
            let raw = DVector::from_iterator(lay.n_u, z[lay.u_range(t)].iter().map(|v| v / self.scale));
            u.push(self.p.set.project(&raw)?);
        }
        let x = self.p.sys.simulate(&self.p.x0, &u)?;
        let objective = self.p.objective(&x);
        if !objective.is_finite() {
            return Err(Error::Numerical("non-finite objective".into()));
        }
        Ok(SolveOutput {
            u,
            x,
            objective,
            iterations,
            status,
            primal_residual: r_pri,
            dual_residual: r_dual,
        })
    }
}
