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

use mintime_core::mintime::{default_tolerance, detect_t1};
use mintime_core::{
    linear_weights, normalize, solve_relaxation, spectral_norm, theorem1_weights, AdmissibleSet, RelaxationProblem,
    SolverConfig, StackedInput, WeightSchedule,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn simulate_matches_condensed_form() {
    let mut rng = common::rng(91);
    for _ in 0..200 {
        let n = rng.random_range(1..=4);
        let n_u = rng.random_range(1..=2);
        let sys = common::random_system(&mut rng, n, n_u);
        let x0 = common::random_vector(&mut rng, n, 3.0);
        let horizon = rng.random_range(1..=10);
        let u: Vec<_> = (0..horizon).map(|_| common::random_vector(&mut rng, n_u, 1.0)).collect();
        let xs = sys.simulate(&x0, &u).unwrap();
        let mut worst: f64 = 0.0;
        for t in 0..=horizon {
            let stacked = StackedInput::from_sequence(&u[..t], n_u).unwrap();
            let xc = sys.condensed_state(&x0, &stacked).unwrap();
            worst = worst.max((&xs[t] - xc).norm());
        }
        assert!(worst <= 1e-10 * (1.0 + x0.norm()), "disagreement {worst}");
    }
}

#[test]
fn delta_satisfies_block_recursion() {
    // Δ_{t+1} = [A·Δ_t, B]
    let mut rng = common::rng(3);
    for _ in 0..30 {
        let sys = common::random_system(&mut rng, 3, 2);
        for t in 1..8 {
            let d = sys.build_delta(t).unwrap();
            let next = sys.build_delta(t + 1).unwrap();
            let left = sys.a() * &d;
            assert!((next.columns(0, 2 * t) - left).amax() <= 1e-12);
            assert_eq!(next.columns(2 * t, 2).into_owned(), sys.b().clone());
        }
    }
}

#[test]
fn spectral_norm_bounds_every_probe() {
    let mut rng = common::rng(4);
    for _ in 0..25 {
        let rows = rng.random_range(1..=5);
        let cols = rng.random_range(1..=7);
        let m = DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-2.0..2.0));
        let s = spectral_norm(&m);
        for _ in 0..20 {
            let v = common::random_vector(&mut rng, cols, 1.0);
            if v.norm() > 0.0 {
                assert!((&m * &v).norm() / v.norm() <= s + 1e-9);
            }
        }
        // attained by the top right singular vector
        let svd = m.clone().svd(false, false);
        assert!((svd.singular_values.max() - s).abs() <= 1e-9 * (1.0 + s));
    }
}

#[test]
fn theorem1_weights_satisfy_their_defining_inequality() {
    for (eta, horizon) in [(1e-2, 6), (0.1, 8), (1.0, 10)] {
        let sys = mintime_core::demos::double_integrator(1.0);
        let set = mintime_core::demos::double_integrator_set();
        let w = theorem1_weights(&sys, &set, eta, 1.01, horizon).unwrap();
        let r = set.radius_bound();
        assert_eq!(w.at(1), 1.0);
        for t in 2..=horizon {
            let bound: f64 = (1..t)
                .map(|k| (k as f64).sqrt() * spectral_norm(&sys.build_delta(k).unwrap()) * w.at(k))
                .sum::<f64>()
                * 2.0
                * r
                / eta;
            assert!(w.at(t) > bound * (1.0 - 1e-12), "t = {t}: {} <= {bound}", w.at(t));
        }
    }
}

#[test]
fn normalization_does_not_change_the_minimizer() {
    let mut rng = common::rng(12);
    let cfg = SolverConfig::default();
    for _ in 0..10 {
        let sys = common::random_system(&mut rng, 2, 1);
        let x0 = common::random_vector(&mut rng, 2, 1.0);
        let set = AdmissibleSet::ball2(1.0, 1).unwrap();
        let w = linear_weights(3.0, 8).unwrap();
        let a = solve_relaxation(&RelaxationProblem::new(sys.clone(), x0.clone(), set.clone(), w.clone()).unwrap(), &cfg).unwrap();
        let nw = normalize(&w);
        let b = solve_relaxation(&RelaxationProblem::new(sys, x0, set, nw).unwrap(), &cfg).unwrap();
        let ratio = a.objective / b.objective;
        assert!((ratio - w.max()).abs() <= 1e-8 * w.max(), "ratio {ratio}");
        for (xa, xb) in a.x.iter().zip(&b.x) {
            assert!((xa - xb).norm() <= 1e-5);
        }
    }
}

#[test]
fn converged_relaxations_keep_zero_tails() {
    let mut rng = common::rng(77);
    let cfg = SolverConfig::default();
    let mut checked = 0;
    for _ in 0..40 {
        let n = rng.random_range(1..=3);
        let n_u = rng.random_range(1..=2);
        let sys = common::random_system(&mut rng, n, n_u);
        let x0 = common::random_vector(&mut rng, n, 1.0);
        let set = AdmissibleSet::ball2(1.0, n_u).unwrap();
        let p = RelaxationProblem::new(sys.clone(), x0.clone(), set.clone(), linear_weights(1.0, 12).unwrap()).unwrap();
        let out = solve_relaxation(&p, &cfg).unwrap();
        common::assert_consistent(&sys, &set, &x0, &out.u, &out.x);
        if !out.converged() {
            continue;
        }
        let tol = default_tolerance(&x0);
        if let Some(first) = out.x.iter().position(|x| x.norm() <= tol) {
            assert!(out.x[first..].iter().all(|x| x.norm() <= 10.0 * tol));
            checked += 1;
        }
        assert_eq!(detect_t1(&out.x, tol).is_some(), out.x.last().unwrap().norm() <= tol);
    }
    assert!(checked > 10);
}

#[test]
fn explicit_terminal_weights_are_accepted_by_the_solver() {
    // the feasibility oracle relies on zero weights being allowed here
    let sys = mintime_core::demos::double_integrator(1.0);
    let set = mintime_core::demos::double_integrator_set();
    let w = WeightSchedule::explicit(vec![0.0, 0.0, 1.0]).unwrap();
    let p = RelaxationProblem::new(sys, DVector::from_vec(vec![0.0, 1.0]), set, w).unwrap();
    let out = solve_relaxation(&p, &SolverConfig::default()).unwrap();
    assert!(out.x[3].norm() <= 1e-12);
}

fn ball_and_box() -> impl Strategy<Value = AdmissibleSet> {
    prop_oneof![
        (0.1f64..5.0).prop_map(|r| AdmissibleSet::ball2(r, 3).unwrap()),
        prop::collection::vec(0.1f64..5.0, 3).prop_map(|r| AdmissibleSet::ball_inf(r).unwrap()),
    ]
}

proptest! {
    #[test]
    fn projection_is_nonexpansive(set in ball_and_box(), a in prop::collection::vec(-10.0f64..10.0, 3), b in prop::collection::vec(-10.0f64..10.0, 3)) {
        let (a, b) = (DVector::from_vec(a), DVector::from_vec(b));
        let (pa, pb) = (set.project(&a).unwrap(), set.project(&b).unwrap());
        prop_assert!((&pa - &pb).norm() <= (&a - &b).norm() + 1e-12);
        prop_assert!(set.contains(&pa));
    }

    #[test]
    fn linear_weights_increase(a in 0.01f64..100.0, horizon in 1usize..50) {
        let w = linear_weights(a, horizon).unwrap();
        prop_assert!(w.is_strictly_increasing());
        prop_assert_eq!(w.horizon(), horizon);
        prop_assert!((normalize(&w).max() - 1.0).abs() == 0.0);
    }
}
