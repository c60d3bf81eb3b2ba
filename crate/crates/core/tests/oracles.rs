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


//! Cross-checks of the feasibility oracle and the pipeline against
//! solver-independent computations.

mod common;

use std::sync::Arc;

use mintime_core::demos;
use mintime_core::mintime::{
    estimate_mu, feasibility_distance, oracle_scan, run_pipeline, BisectionScan, LinearScan, PipelineOptions,
};
use mintime_core::{linear_weights, SolverConfig};
use nalgebra::DVector;
use sha2::{Digest, Sha256};

/// Exact double-integrator `d(t)`: distance from `-A^t x0` to the zonotope
/// spanned by the columns of `Δ_t`.
fn exact_distance(x0: &DVector<f64>, t: usize) -> f64 {
    let sys = demos::double_integrator(1.0);
    let delta = sys.build_delta(t).unwrap();
    let free = sys.powers(t).pop().unwrap() * x0;
    common::zonotope_distance(&delta, [-free[0], -free[1]])
}

fn exact_t_star(x0: &DVector<f64>, t_max: usize) -> Option<usize> {
    if x0.norm() == 0.0 {
        return Some(0);
    }
    (1..=t_max).find(|&t| exact_distance(x0, t) <= 1e-9)
}

#[test]
fn zonotope_oracle_matches_hand_values() {
    // x0 = [0, 1]: (-1, -1, 1) is the unique three-step solution
    let x0 = DVector::from_vec(vec![0.0, 1.0]);
    assert!((exact_distance(&x0, 1) - 1.0).abs() < 1e-12);
    assert_eq!(exact_t_star(&x0, 10), Some(3));
}

#[test]
fn feasibility_distance_matches_vertex_enumeration() {
    let sys = demos::double_integrator(1.0);
    let set = demos::double_integrator_set();
    let cfg = SolverConfig::default();
    let mut rng = common::rng(8);
    let mut states = demos::grid_states();
    states.extend((0..6).map(|_| common::random_vector(&mut rng, 2, 4.0)));
    for x0 in &states {
        let scale = 1.0 + x0.norm();
        for t in 1..=8 {
            let exact = exact_distance(x0, t);
            let d = feasibility_distance(&sys, &set, x0, t, &cfg).unwrap();
            assert!(set.contains(&d.witness.block(0)));
            // the oracle can only overestimate, and not by much
            assert!(d.distance >= exact - 1e-9 * scale, "x0 {x0:?} t {t}: {} < {exact}", d.distance);
            assert!(d.distance <= exact + 1e-6 * scale, "x0 {x0:?} t {t}: {} vs {exact}", d.distance);
        }
    }
}

#[test]
fn grid_minimum_times_match_vertex_enumeration() {
    let sys = demos::double_integrator(1.0);
    let set = demos::double_integrator_set();
    let cfg = SolverConfig::default();
    for x0 in demos::grid_states() {
        let tol = 1e-6 * (1.0 + x0.norm());
        let lin = oracle_scan(&sys, &set, &x0, demos::DEMO_HORIZON, tol, &LinearScan, &cfg).unwrap();
        let bis = oracle_scan(&sys, &set, &x0, demos::DEMO_HORIZON, tol, &BisectionScan, &cfg).unwrap();
        let exact = exact_t_star(&x0, demos::DEMO_HORIZON);
        assert!(exact.is_some(), "grid state {x0:?} must be reachable");
        assert_eq!(lin.t_star, exact);
        assert_eq!(bis.t_star, exact);
        let w = lin.witness.unwrap();
        let xs = sys.simulate(&x0, &w.to_sequence()).unwrap();
        assert!(xs.last().unwrap().norm() <= tol);
    }
}

#[test]
fn certification_survives_tighter_solver_tolerances() {
    let sys = demos::double_integrator(1.0);
    let set = demos::double_integrator_set();
    let cfg = SolverConfig::default();
    let tight = cfg.tightened(10.0);
    let w = linear_weights(1.0, demos::DEMO_HORIZON).unwrap();
    for x0 in demos::grid_states() {
        let report = run_pipeline(&sys, &set, &x0, &w, &cfg, &PipelineOptions::default()).unwrap();
        assert!(report.certified);
        let t1 = report.t1.unwrap();
        let at = feasibility_distance(&sys, &set, &x0, t1, &tight).unwrap().distance;
        assert!(at <= report.feas_tol);
        if t1 > 0 {
            let before = feasibility_distance(&sys, &set, &x0, t1 - 1, &tight).unwrap().distance;
            assert!(before > report.feas_tol);
        }
    }
}

#[test]
fn bisection_pipeline_agrees_with_linear_scan() {
    let sys = demos::multi_input();
    let set = demos::multi_input_set();
    let w = linear_weights(1.0, demos::DEMO_HORIZON).unwrap();
    let cfg = SolverConfig::default();
    let x0 = demos::multi_input_states()[0].clone();
    let lin = run_pipeline(&sys, &set, &x0, &w, &cfg, &PipelineOptions::default()).unwrap();
    let opts = PipelineOptions {
        scan: Arc::new(BisectionScan),
        ..PipelineOptions::default()
    };
    let bis = run_pipeline(&sys, &set, &x0, &w, &cfg, &opts).unwrap();
    assert_eq!(lin.t_star, bis.t_star);
    assert_eq!(lin.certified, bis.certified);
}

#[test]
fn distance_may_grow_but_reachability_is_monotone() {
    // x(t+1) = 2x + u, |u| <= 1, x0 = 2: d(1) = 4 - 1 = 3, d(2) = 8 - 2 - 1 = 5
    let sys = mintime_core::LtiSystem::from_rows(&[vec![2.0]], &[vec![1.0]]).unwrap();
    let set = mintime_core::AdmissibleSet::ball_inf(vec![1.0]).unwrap();
    let x0 = DVector::from_vec(vec![2.0]);
    let cfg = SolverConfig::default();
    let d1 = feasibility_distance(&sys, &set, &x0, 1, &cfg).unwrap().distance;
    let d2 = feasibility_distance(&sys, &set, &x0, 2, &cfg).unwrap().distance;
    assert!((d1 - 3.0).abs() < 1e-9 && (d2 - 5.0).abs() < 1e-9);
    // from x0 = 0.75 the origin is reachable in two steps and stays reachable
    let x0 = DVector::from_vec(vec![0.75]);
    let scan = oracle_scan(&sys, &set, &x0, 5, 1e-9, &LinearScan, &cfg).unwrap();
    assert_eq!(scan.t_star, Some(2));
    for t in 2..=5 {
        assert!(feasibility_distance(&sys, &set, &x0, t, &cfg).unwrap().distance <= 1e-9);
    }
}

#[test]
fn mu_regression_baseline() {
    let sys = demos::double_integrator(1.0);
    let set = demos::double_integrator_set();
    let w = linear_weights(1.0, 10).unwrap();
    let est = estimate_mu(&sys, &set, &w, 2, 10, 10_000, 20240611).unwrap();
    assert_eq!(est.accepted, 10_000);
    assert_eq!(est.lower_bound.to_bits(), 0x3fbf144c77384d1f, "got {}", est.lower_bound);
    assert!(!est.refutes_condition());
}

#[test]
fn demo_fixture_checksum() {
    let digest = Sha256::digest(demos::fixture_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(hex, "e368aa9c3f4ceb9c8394411d1feb58817003eb4295e06b28440a726a13c37a05");
    demos::check().unwrap();
}
