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

//! Bundled demonstration problems.
//!
//! The double integrator with unit sampling time and the three-state,
//! two-input system are kept verbatim; a checksum test guards the numbers.

use nalgebra::{dmatrix, DVector};

use crate::error::Result;
use crate::lti::LtiSystem;
use crate::sets::AdmissibleSet;

/// Horizon used by both demos.
pub const DEMO_HORIZON: usize = 10;

/// `A = [[1, Te], [0, 1]]`, `B = [0, Te]ᵀ`.
pub fn double_integrator(te: f64) -> LtiSystem {
    LtiSystem::new(dmatrix![1.0, te; 0.0, 1.0], dmatrix![0.0; te]).expect("valid double integrator")
}

/// `|u| <= 1`.
pub fn double_integrator_set() -> AdmissibleSet {
    AdmissibleSet::ball_inf(vec![1.0]).expect("valid box")
}

/// Row-major `A` of the three-state, two-input demo.
pub const MULTI_INPUT_A: [[f64; 3]; 3] = [
    [-0.093, 0.25, 0.500],
    [-0.540, -0.255, 0.160],
    [-0.072, 0.525, -0.445],
];

/// Row-major `B` of the three-state, two-input demo.
pub const MULTI_INPUT_B: [[f64; 2]; 3] = [[0.580, -0.360], [0.0, 0.0], [0.0, 2.230]];

pub fn multi_input() -> LtiSystem {
    let a: Vec<Vec<f64>> = MULTI_INPUT_A.iter().map(|r| r.to_vec()).collect();
    let b: Vec<Vec<f64>> = MULTI_INPUT_B.iter().map(|r| r.to_vec()).collect();
    LtiSystem::from_rows(&a, &b).expect("valid multi-input system")
}

/// `‖u‖₂ <= 1`.
pub fn multi_input_set() -> AdmissibleSet {
    AdmissibleSet::ball2(1.0, 2).expect("valid ball")
}

/// Initial states of the double-integrator demo; every one reaches the
/// origin within [`DEMO_HORIZON`] steps.
pub const DOUBLE_INTEGRATOR_GRID: [[f64; 2]; 8] = [
    [0.0, 1.0],
    [0.0, -1.0],
    [1.0, 0.0],
    [-1.0, 0.0],
    [2.0, 1.0],
    [-3.0, 2.0],
    [5.0, -1.0],
    [-6.0, -1.0],
];

/// Initial states of the multi-input demo.
pub const MULTI_INPUT_STATES: [[f64; 3]; 2] = [[10.0, -10.0, 5.0], [50.0, -50.0, -50.0]];

pub fn grid_states() -> Vec<DVector<f64>> {
    DOUBLE_INTEGRATOR_GRID
        .iter()
        .map(|r| DVector::from_column_slice(r))
        .collect()
}

pub fn multi_input_states() -> Vec<DVector<f64>> {
    MULTI_INPUT_STATES
        .iter()
        .map(|r| DVector::from_column_slice(r))
        .collect()
}

/// Little-endian bytes of every demo constant, in declaration order.
pub fn fixture_bytes() -> Vec<u8> {
    let values = MULTI_INPUT_A
        .iter()
        .flatten()
        .chain(MULTI_INPUT_B.iter().flatten())
        .chain(DOUBLE_INTEGRATOR_GRID.iter().flatten())
        .chain(MULTI_INPUT_STATES.iter().flatten());
    values.flat_map(|v| v.to_le_bytes()).collect()
}

/// Validates that a demo system and set fit together.
pub fn check() -> Result<()> {
    crate::error::check_dim("double integrator inputs", double_integrator(1.0).n_u(), double_integrator_set().n_u())?;
    crate::error::check_dim("multi-input inputs", multi_input().n_u(), multi_input_set().n_u())
}
