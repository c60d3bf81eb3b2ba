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

//! Monte-Carlo lower bound on the trajectory-norm ratio
//!
//! ```text
//! μ_U(T1, T) = sup_{u ∈ (U ⊖ U)^T} ρ_{T1}(u) / ρ_T(u),   ρ_T(u) = Σ_{t=1}^T w(t) ‖Δ_t ū_t‖₂
//! ```
//!
//! Sampling only ever finds a lower bound of the supremum. A value of at
//! least 1/2 refutes the sufficient condition `μ < 1/2`; a smaller value
//! proves nothing.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lti::LtiSystem;
use crate::sets::AdmissibleSet;
use crate::weights::WeightSchedule;

/// Samples drawn from each generator stream.
const STREAM_CHUNK: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct MuEstimate {
    pub lower_bound: f64,
    /// Running maximum after each accepted sample.
    pub running_max: Vec<f64>,
    pub accepted: usize,
    pub discarded: usize,
}

impl MuEstimate {
    /// Whether the estimate already violates `μ < 1/2`.
    pub fn refutes_condition(&self) -> bool {
        self.lower_bound >= 0.5
    }
}

/// Draws `num_samples` input sequences from `(U ⊖ U)^T` and returns the
/// largest ratio `ρ_{T1}/ρ_T`. Samples with `ρ_T = 0` are discarded.
///
/// Sample `i` comes from ChaCha stream `i / 256` seeded with `seed`, so the
/// result depends only on the seed and the sample count.
pub fn estimate_mu(
    sys: &LtiSystem,
    set: &AdmissibleSet,
    weights: &WeightSchedule,
    t1: usize,
    horizon: usize,
    num_samples: usize,
    seed: u64,
) -> Result<MuEstimate> {
    if t1 == 0 || t1 > horizon {
        return Err(Error::InvalidInput(format!("need 1 <= T1 <= T, got T1 = {t1}, T = {horizon}")));
    }
    if num_samples == 0 {
        return Err(Error::InvalidInput("num_samples must be at least 1".into()));
    }
    if weights.horizon() < horizon {
        return Err(Error::InvalidInput(format!(
            "weight schedule has {} entries, T = {horizon}",
            weights.horizon()
        )));
    }
    let diff = set.self_difference();
    let mut running_max = Vec::with_capacity(num_samples);
    let mut best = f64::NEG_INFINITY;
    let mut discarded = 0;
    let mut remaining = num_samples;
    let mut stream = 0u64;
    let mut x = DVector::zeros(sys.n());
    while remaining > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        stream += 1;
        for _ in 0..remaining.min(STREAM_CHUNK) {
            // Δ_t ū_t is the state at t of the zero-initial-state response
            x.fill(0.0);
            let (mut partial, mut total) = (0.0, 0.0);
            for t in 1..=horizon {
                let u = diff.sample_uniform(&mut rng);
                x = sys.a() * &x + sys.b() * u;
                total += weights.at(t) * x.norm();
                if t == t1 {
                    partial = total;
                }
            }
            if total > 0.0 {
                best = best.max(partial / total);
                running_max.push(best);
            } else {
                discarded += 1;
            }
        }
        remaining -= remaining.min(STREAM_CHUNK);
    }
    if running_max.is_empty() {
        return Err(Error::DegenerateSampling { samples: num_samples });
    }
    Ok(MuEstimate {
        lower_bound: best,
        accepted: running_max.len(),
        running_max,
        discarded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::linear_weights;
    use nalgebra::dmatrix;

    fn double_integrator() -> LtiSystem {
        LtiSystem::new(dmatrix![1.0, 1.0; 0.0, 1.0], dmatrix![0.0; 1.0]).unwrap()
    }

    #[test]
    fn full_horizon_ratio_is_one() {
        let set = AdmissibleSet::ball_inf(vec![1.0]).unwrap();
        let ws = linear_weights(1.0, 6).unwrap();
        let est = estimate_mu(&double_integrator(), &set, &ws, 6, 6, 300, 1).unwrap();
        assert_eq!(est.lower_bound, 1.0);
        assert!(est.refutes_condition());
    }

    #[test]
    fn equal_weights_give_ratios_at_most_one() {
        let set = AdmissibleSet::ball2(1.0, 1).unwrap();
        let ws = WeightSchedule::explicit(vec![1.0; 8]).unwrap();
        let est = estimate_mu(&double_integrator(), &set, &ws, 3, 8, 1000, 9).unwrap();
        assert!(est.lower_bound <= 1.0);
        assert!(est.running_max.windows(2).all(|p| p[1] >= p[0]));
    }

    #[test]
    fn reproducible_and_prefix_stable() {
        let set = AdmissibleSet::ball_inf(vec![1.0]).unwrap();
        let ws = linear_weights(1.0, 10).unwrap();
        let sys = double_integrator();
        let a = estimate_mu(&sys, &set, &ws, 2, 10, 1000, 42).unwrap();
        let b = estimate_mu(&sys, &set, &ws, 2, 10, 1000, 42).unwrap();
        assert_eq!(a, b);
        // more samples extend the same sequence of draws
        let c = estimate_mu(&sys, &set, &ws, 2, 10, 1500, 42).unwrap();
        assert_eq!(&c.running_max[..1000], &a.running_max[..]);
    }

    #[test]
    fn degenerate_sampling_is_an_error() {
        let sys = LtiSystem::new(dmatrix![1.0, 0.0; 0.0, 1.0], dmatrix![0.0; 0.0]).unwrap();
        let set = AdmissibleSet::ball2(1.0, 1).unwrap();
        let ws = linear_weights(1.0, 3).unwrap();
        assert_eq!(
            estimate_mu(&sys, &set, &ws, 1, 3, 10, 0),
            Err(Error::DegenerateSampling { samples: 10 })
        );
    }

    #[test]
    fn argument_checks() {
        let set = AdmissibleSet::ball2(1.0, 1).unwrap();
        let ws = linear_weights(1.0, 3).unwrap();
        let sys = double_integrator();
        assert!(estimate_mu(&sys, &set, &ws, 0, 3, 10, 0).is_err());
        assert!(estimate_mu(&sys, &set, &ws, 4, 3, 10, 0).is_err());
        assert!(estimate_mu(&sys, &set, &ws, 1, 3, 0, 0).is_err());
        assert!(estimate_mu(&sys, &set, &ws, 1, 5, 10, 0).is_err());
    }
}
