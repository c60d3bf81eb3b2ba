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


//! Problem files.
//!
//! A problem is a TOML document:
//!
//! ```toml
//! horizon = 10
//! x0 = [0.0, 1.0]
//! seed = 7                      # optional
//!
//! [system]
//! A = [[1.0, 1.0], [0.0, 1.0]]  # row-major
//! B = [[0.0], [1.0]]
//!
//! [set]
//! type = "ballinf"              # or "ball2" with `r`
//! radii = [1.0]
//!
//! [weights]
//! type = "linear"               # "theorem1" (eta, safety) or "explicit" (values)
//! a = 1.0
//!
//! [solver]                      # optional overrides
//! eps_abs = 1e-8
//!
//! [options]                     # optional
//! scan = "bisect"
//! ```
//!
//! Unknown keys are rejected; the `[set]` and `[weights]` parameters are
//! checked by the registry that builds them.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use mintime_core::registry::{admissible_sets, scan_strategies, weight_strategies, Params};
use mintime_core::weights::{WeightContext, WeightStrategy};
use mintime_core::{AdmissibleSet, LtiSystem, SolverConfig, WeightSchedule};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub horizon: usize,
    pub x0: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub system: SystemSpec,
    pub set: TypedSpec,
    pub weights: TypedSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
}

/// A registry name plus its flat parameter table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypedSpec {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(flatten)]
    pub params: Params,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub rho: Option<f64>,
    pub eps_abs: Option<f64>,
    pub eps_rel: Option<f64>,
    pub max_iters: Option<usize>,
    pub over_relaxation: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSection {
    pub feas_tol: Option<f64>,
    pub zero_tol: Option<f64>,
    pub t_max: Option<usize>,
    pub scan: Option<String>,
    /// Monte-Carlo samples for the μ refuter; off when absent.
    pub mu_samples: Option<usize>,
}

/// A validated problem, ready to solve.
#[derive(Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub sys: LtiSystem,
    pub set: AdmissibleSet,
    pub x0: DVector<f64>,
    pub weights: Arc<dyn WeightStrategy>,
}

impl Problem {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let file: ProblemFile = toml::from_str(&text).with_context(|| format!("invalid problem file {}", path.display()))?;
        Self::from_file(file).with_context(|| format!("invalid problem file {}", path.display()))
    }

    pub fn from_file(file: ProblemFile) -> Result<Self> {
        if file.horizon == 0 {
            bail!("field `horizon` must be at least 1");
        }
        let sys = LtiSystem::from_rows(&file.system.a, &file.system.b).context("field `system`")?;
        if file.x0.len() != sys.n() {
            bail!("field `x0` has {} entries but `system.A` is {}x{}", file.x0.len(), sys.n(), sys.n());
        }
        let set = admissible_sets(sys.n_u())
            .create(&file.set.kind, &file.set.params)
            .context("field `set`")?;
        let weights = weight_strategies()
            .create(&file.weights.kind, &file.weights.params)
            .context("field `weights`")?;
        let options = file.options.clone().unwrap_or_default();
        if let Some(scan) = &options.scan {
            scan_strategies().create(scan, &Params::new()).context("field `options.scan`")?;
        }
        let x0 = DVector::from_vec(file.x0.clone());
        Ok(Self {
            file,
            sys,
            set,
            x0,
            weights: Arc::from(weights),
        })
    }

    pub fn options(&self) -> OptionsSection {
        self.file.options.clone().unwrap_or_default()
    }

    pub fn schedule(&self, horizon: usize) -> Result<WeightSchedule> {
        let ctx = WeightContext {
            sys: &self.sys,
            set: &self.set,
            x0: &self.x0,
        };
        Ok(self.weights.schedule(&ctx, horizon)?)
    }
}

/// Solver settings after applying the file section and then the flags.
pub fn solver_config(section: Option<&SolverSection>, flags: &SolverSection) -> Result<SolverConfig> {
    let mut cfg = SolverConfig::default();
    for s in section.into_iter().chain(std::iter::once(flags)) {
        cfg.rho = s.rho.unwrap_or(cfg.rho);
        cfg.eps_abs = s.eps_abs.unwrap_or(cfg.eps_abs);
        cfg.eps_rel = s.eps_rel.unwrap_or(cfg.eps_rel);
        cfg.max_iters = s.max_iters.unwrap_or(cfg.max_iters);
        cfg.over_relaxation = s.over_relaxation.unwrap_or(cfg.over_relaxation);
    }
    cfg.validate().context("solver settings")?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DI: &str = r#"
horizon = 10
x0 = [0.0, 1.0]

[system]
A = [[1.0, 1.0], [0.0, 1.0]]
B = [[0.0], [1.0]]

[set]
type = "ballinf"
radii = [1.0]

[weights]
type = "linear"
a = 1.0
"#;

    fn parse(text: &str) -> Result<Problem> {
        Problem::from_file(toml::from_str(text)?)
    }

    #[test]
    fn parses_the_double_integrator() {
        let p = parse(DI).unwrap();
        assert_eq!(p.sys.n(), 2);
        assert_eq!(p.set, AdmissibleSet::ball_inf(vec![1.0]).unwrap());
        assert_eq!(p.schedule(3).unwrap().weights(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn missing_field_is_named() {
        let text = DI.replace("B = [[0.0], [1.0]]\n", "");
        let err = format!("{:#}", parse(&text).unwrap_err());
        assert!(err.contains("`B`"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = format!("{:#}", parse(&DI.replace("horizon = 10", "horizon = 10\nhorzion = 3")).unwrap_err());
        assert!(err.contains("horzion"), "{err}");
        let err = format!("{:#}", parse(&DI.replace("a = 1.0", "slope = 1.0")).unwrap_err());
        assert!(err.contains("weights.slope"), "{err}");
        let err = format!("{:#}", parse(&DI.replace("\"ballinf\"", "\"ball3\"")).unwrap_err());
        assert!(err.contains("ball3") && err.contains("ball2"), "{err}");
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = format!("{:#}", parse(&DI.replace("x0 = [0.0, 1.0]", "x0 = [0.0]")).unwrap_err());
        assert!(err.contains("x0"), "{err}");
    }

    #[test]
    fn flags_override_the_file() {
        let file = SolverSection {
            eps_abs: Some(1e-9),
            max_iters: Some(10),
            ..SolverSection::default()
        };
        let flags = SolverSection {
            max_iters: Some(20),
            ..SolverSection::default()
        };
        let cfg = solver_config(Some(&file), &flags).unwrap();
        assert_eq!((cfg.eps_abs, cfg.max_iters), (1e-9, 20));
        let bad = SolverSection {
            rho: Some(-1.0),
            ..SolverSection::default()
        };
        assert!(solver_config(None, &bad).is_err());
    }
}
