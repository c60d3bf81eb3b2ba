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

//! Minimum-time control of discrete-time linear systems.
//!
//! The minimum-time problem is attacked through a convex surrogate: a
//! weighted sum of state norms over a fixed horizon, whose minimizers have
//! zero tails. A splitting solver computes the surrogate, an exact
//! feasibility oracle certifies the resulting reach time, and a receding
//! horizon loop runs the controller online.

pub mod demos;
pub mod error;
pub mod lti;
pub mod mintime;
pub mod mpc;
pub mod registry;
pub mod sets;
pub mod solver;
pub mod weights;

pub use error::{Error, Result};
pub use lti::{rank_b_full, spectral_norm, LtiSystem, StackedInput};
pub use sets::AdmissibleSet;
pub use solver::{
    block_soft_threshold, project_dynamics, solve_relaxation, solve_relaxation_warm, RelaxationProblem,
    SolveOutput, SolveStatus, SolverConfig, WarmStart,
};
pub use weights::{
    linear_weights, normalize, theorem1_weights, WeightContext, WeightSchedule, WeightStrategy,
};
