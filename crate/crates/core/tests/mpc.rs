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


mod common;

use std::sync::Arc;

use mintime_core::demos;
use mintime_core::mintime::{oracle_scan, LinearScan};
use mintime_core::mpc::{mpc_run, mpc_step, MpcConfig};
use mintime_core::weights::LinearStrategy;
use mintime_core::{spectral_norm, LtiSystem, SolverConfig};
use nalgebra::DVector;

fn config(sys: &LtiSystem, tau: usize, resolve_period: usize) -> MpcConfig {
    MpcConfig {
        tau,
        resolve_period,
        ..MpcConfig::with_defaults(sys, Arc::new(LinearStrategy { a: 1.0 }))
    }
}

#[test]
fn resolve_period_does_not_change_the_trace() {
    let sys = demos::double_integrator(1.0);
    let set = demos::double_integrator_set();
    let x0 = DVector::from_vec(vec![0.0, 1.0]);
    let solver = SolverConfig::default();
    let every = mpc_run(&sys, &set, &x0, &config(&sys, 5, 1), &solver).unwrap();
    let block = mpc_run(&sys, &set, &x0, &config(&sys, 5, 5), &solver).unwrap();
    assert_eq!(every.reached_zero_at, Some(3));
    assert_eq!(block.reached_zero_at, Some(3));
    assert_eq!(block.solve_times, vec![0]);
    assert_eq!(every.states.len(), block.states.len());
    for (a, b) in every.states.iter().zip(&block.states) {
        assert!((a - b).norm() <= 1e-8);
    }
    for (a, b) in every.inputs.iter().zip(&block.inputs) {
        assert!((a - b).norm() <= 1e-8);
    }
}

#[test]
fn full_block_equals_open_loop_solve() {
    let sys = demos::multi_input();
    let set = demos::multi_input_set();
    let x0 = demos::multi_input_states()[0].clone();
    let solver = SolverConfig::default();
    let cfg = config(&sys, 6, 6);
    let step = mpc_step(&sys, &set, &x0, 0, &cfg, &solver, None).unwrap();
    let open = sys.simulate(&x0, &step.block).unwrap();
    let closed = mpc_run(&sys, &set, &x0, &cfg, &solver).unwrap();
    for (t, x) in closed.states.iter().enumerate() {
        assert!((x - &open[t]).norm() <= 1e-12 * (1.0 + x0.norm()));
    }
}

#[test]
fn demos_reach_zero_at_the_minimum_time() {
    let solver = SolverConfig::default();
    let cases = [
        (demos::double_integrator(1.0), demos::double_integrator_set(), demos::grid_states()),
        (demos::multi_input(), demos::multi_input_set(), demos::multi_input_states()),
    ];
    for (sys, set, states) in cases {
        for x0 in states {
            let tol = 1e-6 * (1.0 + x0.norm());
            let t_star = oracle_scan(&sys, &set, &x0, demos::DEMO_HORIZON, tol, &LinearScan, &solver)
                .unwrap()
                .t_star
                .unwrap();
            let trace = mpc_run(&sys, &set, &x0, &config(&sys, demos::DEMO_HORIZON, 1), &solver).unwrap();
            assert_eq!(trace.reached_zero_at, Some(t_star), "x0 = {x0:?}");
            common::assert_consistent(&sys, &set, &x0, &trace.inputs, &trace.states);
        }
    }
}

#[test]
fn zero_is_absorbing() {
    let sys = demos::multi_input();
    let set = demos::multi_input_set();
    let x0 = demos::multi_input_states()[0].clone();
    let solver = SolverConfig::default();
    let cfg = config(&sys, 6, 1);
    let trace = mpc_run(&sys, &set, &x0, &cfg, &solver).unwrap();
    let k = trace.reached_zero_at.unwrap();
    let x_end = trace.states[k].clone();
    assert!(x_end.norm() <= trace.zero_tol);
    let fixed = MpcConfig {
        zero_tol: Some(trace.zero_tol),
        ..cfg
    };
    let next = mpc_step(&sys, &set, &x_end, k, &fixed, &solver, None).unwrap();
    assert!(!next.solved);
    let x_next = sys.step(&x_end, &next.block[0]).unwrap();
    assert!(x_next.norm() <= spectral_norm(sys.a()) * trace.zero_tol);
}

#[test]
fn relative_time_weights_also_reach_zero() {
    let sys = demos::double_integrator(1.0);
    let set = demos::double_integrator_set();
    let x0 = DVector::from_vec(vec![-3.0, 2.0]);
    let cfg = MpcConfig {
        relative_time: true,
        warm_start: false,
        ..config(&sys, 5, 1)
    };
    let trace = mpc_run(&sys, &set, &x0, &cfg, &SolverConfig::default()).unwrap();
    assert!(trace.reached_zero_at.is_some());
    common::assert_consistent(&sys, &set, &x0, &trace.inputs, &trace.states);
}
