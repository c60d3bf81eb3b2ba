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

//! Name-keyed registries for the interchangeable pieces of the toolkit.
//!
//! Weight schedules, admissible sets and oracle scan orders are each selected
//! at runtime by a string name plus a flat parameter table, as found in a
//! problem file. Factories consume the parameters they understand and reject
//! anything left over.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mintime::oracle::{BisectionScan, LinearScan, ScanStrategy};
use crate::sets::AdmissibleSet;
use crate::weights::{ExplicitStrategy, LinearStrategy, Theorem1Strategy, WeightStrategy};

/// A parameter value: a number or a list of numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    List(Vec<f64>),
}

pub type Params = BTreeMap<String, ParamValue>;

/// Pulls typed values out of a [`Params`] table and tracks which keys were
/// used, so that [`ParamReader::finish`] can reject unknown ones.
pub struct ParamReader<'a> {
    params: &'a Params,
    prefix: &'a str,
    seen: Vec<&'a str>,
}

impl<'a> ParamReader<'a> {
    pub fn new(params: &'a Params, prefix: &'a str) -> Self {
        Self {
            params,
            prefix,
            seen: Vec::new(),
        }
    }

    fn key(&self, key: &str) -> String {
        if self.prefix.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.prefix)
        }
    }

    pub fn number(&mut self, key: &'a str) -> Result<Option<f64>> {
        self.seen.push(key);
        match self.params.get(key) {
            None => Ok(None),
            Some(ParamValue::Number(v)) => Ok(Some(*v)),
            Some(ParamValue::List(_)) => Err(Error::Parameter {
                key: self.key(key),
                message: "expected a number, found a list".into(),
            }),
        }
    }

    pub fn list(&mut self, key: &'a str) -> Result<Option<Vec<f64>>> {
        self.seen.push(key);
        match self.params.get(key) {
            None => Ok(None),
            Some(ParamValue::List(v)) => Ok(Some(v.clone())),
            Some(ParamValue::Number(_)) => Err(Error::Parameter {
                key: self.key(key),
                message: "expected a list of numbers".into(),
            }),
        }
    }

    pub fn require<T>(&self, key: &str, value: Option<T>) -> Result<T> {
        value.ok_or_else(|| Error::Parameter {
            key: self.key(key),
            message: "missing required parameter".into(),
        })
    }

    pub fn finish(self) -> Result<()> {
        match self.params.keys().find(|k| !self.seen.contains(&k.as_str())) {
            Some(k) => Err(Error::Parameter {
                key: self.key(k),
                message: "unknown parameter".into(),
            }),
            None => Ok(()),
        }
    }
}

/// Builds an `O` from a parameter table.
pub type Factory<O> = Box<dyn Fn(&Params) -> Result<O> + Send + Sync>;

/// Factories keyed by name.
pub struct Registry<O> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Factory<O>>,
}

impl<O> fmt::Debug for Registry<O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("kind", &self.kind)
            .field("entries", &self.names())
            .finish()
    }
}

impl<O> Registry<O> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Adds or replaces the factory registered under `name`.
    pub fn register<F>(&mut self, name: &'static str, factory: F) -> &mut Self
    where
        F: Fn(&Params) -> Result<O> + Send + Sync + 'static,
    {
        self.entries.insert(name, Box::new(factory));
        self
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn create(&self, name: &str, params: &Params) -> Result<O> {
        let factory = self.entries.get(name).ok_or_else(|| Error::UnknownStrategy {
            kind: self.kind,
            name: name.to_string(),
            available: self.names().join(", "),
        })?;
        factory(params)
    }
}

/// `linear` (`a`, default 1), `theorem1` (`eta`, `safety`) and `explicit`
/// (`values`).
pub fn weight_strategies() -> Registry<Box<dyn WeightStrategy>> {
    let mut reg: Registry<Box<dyn WeightStrategy>> = Registry::new("weight schedule");
    reg.register("linear", |p| {
        let mut r = ParamReader::new(p, "weights");
        let a = r.number("a")?.unwrap_or(1.0);
        r.finish()?;
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Parameter {
                key: "weights.a".into(),
                message: format!("must be positive, got {a}"),
            });
        }
        Ok(Box::new(LinearStrategy { a }) as Box<dyn WeightStrategy>)
    });
    reg.register("theorem1", |p| {
        let mut r = ParamReader::new(p, "weights");
        let eta = r.number("eta")?;
        let safety = r.number("safety")?.unwrap_or(Theorem1Strategy::DEFAULT_SAFETY);
        r.finish()?;
        if let Some(eta) = eta.filter(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(Error::Parameter {
                key: "weights.eta".into(),
                message: format!("must be positive, got {eta}"),
            });
        }
        if !(safety.is_finite() && safety > 1.0) {
            return Err(Error::Parameter {
                key: "weights.safety".into(),
                message: format!("must exceed 1, got {safety}"),
            });
        }
        Ok(Box::new(Theorem1Strategy { eta, safety }) as Box<dyn WeightStrategy>)
    });
    reg.register("explicit", |p| {
        let mut r = ParamReader::new(p, "weights");
        let values = r.list("values")?;
        let values = r.require("values", values)?;
        r.finish()?;
        Ok(Box::new(ExplicitStrategy { values }) as Box<dyn WeightStrategy>)
    });
    reg
}

/// `ball2` (`r`) and `ballinf` (`radii`, or a scalar `r` repeated). The
/// input dimension comes from the system.
pub fn admissible_sets(n_u: usize) -> Registry<AdmissibleSet> {
    let mut reg = Registry::new("admissible set");
    reg.register("ball2", move |p| {
        let mut r = ParamReader::new(p, "set");
        let radius = r.number("r")?;
        let radius = r.require("r", radius)?;
        r.finish()?;
        AdmissibleSet::ball2(radius, n_u)
    });
    reg.register("ballinf", move |p| {
        let mut r = ParamReader::new(p, "set");
        let radii = r.list("radii")?;
        let scalar = r.number("r")?;
        r.finish()?;
        let radii = match (radii, scalar) {
            (Some(v), None) => v,
            (None, Some(s)) => vec![s; n_u],
            (Some(_), Some(_)) => {
                return Err(Error::Parameter {
                    key: "set.r".into(),
                    message: "give either `radii` or `r`, not both".into(),
                })
            }
            (None, None) => {
                return Err(Error::Parameter {
                    key: "set.radii".into(),
                    message: "missing required parameter".into(),
                })
            }
        };
        if radii.len() != n_u {
            return Err(Error::Parameter {
                key: "set.radii".into(),
                message: format!("expected {n_u} radii, got {}", radii.len()),
            });
        }
        AdmissibleSet::ball_inf(radii)
    });
    reg
}

/// `linear` (ascending scan) and `bisect`.
pub fn scan_strategies() -> Registry<Box<dyn ScanStrategy>> {
    let mut reg: Registry<Box<dyn ScanStrategy>> = Registry::new("scan order");
    reg.register("linear", |p| {
        ParamReader::new(p, "scan").finish()?;
        Ok(Box::new(LinearScan) as Box<dyn ScanStrategy>)
    });
    reg.register("bisect", |p| {
        ParamReader::new(p, "scan").finish()?;
        Ok(Box::new(BisectionScan) as Box<dyn ScanStrategy>)
    });
    reg
}
