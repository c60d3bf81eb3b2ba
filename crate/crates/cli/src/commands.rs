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


//! Subcommand implementations. Each returns the process exit code.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Result};
use mintime_core::demos;
use mintime_core::mintime::{default_tolerance, oracle_scan, run_pipeline, MuOptions, PipelineOptions, PipelineReport};
use mintime_core::mpc::{mpc_run, MpcConfig};
use mintime_core::registry::{scan_strategies, Params, ParamValue};
use mintime_core::SolverConfig;

use crate::output::{fmt_float, trajectory_csv, write_atomic, write_json};
use crate::problem::{solver_config, Problem, ProblemFile, SolverSection, SystemSpec, TypedSpec};
use crate::report::{self, OracleReport, Settings, SolveReport, Timings, Tool};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_UNCERTIFIED: u8 = 2;
pub const EXIT_UNREACHABLE: u8 = 3;

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Common {
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub solver: SolverSection,
    pub t_max: Option<usize>,
    pub bisect: bool,
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "problem".into(), |s| s.to_string_lossy().into_owned())
}

fn settings(p: &Problem, common: &Common, cfg: &SolverConfig, horizon: usize) -> Settings {
    let opts = p.options();
    let scan = if common.bisect {
        "bisect".to_string()
    } else {
        opts.scan.clone().unwrap_or_else(|| "linear".into())
    };
    Settings {
        solver: cfg.into(),
        feas_tol: opts.feas_tol.unwrap_or_else(|| default_tolerance(&p.x0)),
        zero_tol: opts.zero_tol.unwrap_or_else(|| default_tolerance(&p.x0)),
        t_max: common.t_max.or(opts.t_max).unwrap_or(horizon),
        scan,
        seed: common.seed.or(p.file.seed).unwrap_or(0),
        mu_samples: opts.mu_samples,
    }
}

fn pipeline_options(s: &Settings) -> Result<PipelineOptions> {
    Ok(PipelineOptions {
        feas_tol: Some(s.feas_tol),
        zero_tol: Some(s.zero_tol),
        t_max: Some(s.t_max),
        scan: Arc::from(scan_strategies().create(&s.scan, &Params::new())?),
        mu: s.mu_samples.map(|samples| MuOptions { samples, seed: s.seed }),
    })
}

/// Runs the pipeline; with `extend`, doubles the horizon (up to 8x) while
/// the oracle finds the origin unreachable.
pub fn solve_problem(p: &Problem, common: &Common, extend: bool) -> Result<(SolveReport, PipelineReport)> {
    let cfg = solver_config(p.file.solver.as_ref(), &common.solver)?;
    let mut horizon = p.file.horizon;
    loop {
        let s = settings(p, common, &cfg, horizon);
        let weights = p.schedule(horizon)?;
        let r = run_pipeline(&p.sys, &p.set, &p.x0, &weights, &cfg, &pipeline_options(&s)?)?;
        if extend && r.t_star.is_none() && horizon < 8 * p.file.horizon {
            horizon *= 2;
            continue;
        }
        let report = SolveReport {
            tool: Tool::current(),
            problem: p.file.clone(),
            settings: s,
            horizon_used: horizon,
            auto_extended: horizon != p.file.horizon,
            result: report::solve_result(&r, weights.weights()),
        };
        return Ok((report, r));
    }
}

fn write_solve_outputs(out_dir: &Path, name: &str, p: &Problem, report: &SolveReport, seconds: f64) -> Result<()> {
    write_json(&out_dir.join(format!("{name}.report.json")), report)?;
    let table = trajectory_csv(&report.result.states, &report.result.inputs, p.sys.n_u(), None)?;
    write_atomic(&out_dir.join(format!("{name}.trajectory.csv")), &table)?;
    write_json(&out_dir.join(format!("{name}.timings.json")), &Timings { total_seconds: seconds })
}

fn summary(name: &str, r: &SolveReport) -> String {
    let show = |v: Option<usize>| v.map_or_else(|| "none".into(), |t| t.to_string());
    format!(
        "{name}: T1 = {}, t* = {}, certified = {}, objective = {}, horizon = {}{}",
        show(r.result.t1),
        show(r.result.t_star),
        r.result.certified,
        fmt_float(r.result.objective),
        r.horizon_used,
        if r.auto_extended { " (extended)" } else { "" }
    )
}

pub fn solve(path: &Path, common: &Common) -> Result<u8> {
    let start = Instant::now();
    let p = Problem::load(path)?;
    let (report, _) = solve_problem(&p, common, false)?;
    let name = stem(path);
    write_solve_outputs(&common.out_dir, &name, &p, &report, start.elapsed().as_secs_f64())?;
    println!("{}", summary(&name, &report));
    Ok(if report.result.certified { EXIT_OK } else { EXIT_UNCERTIFIED })
}

pub fn oracle(path: &Path, common: &Common) -> Result<u8> {
    let start = Instant::now();
    let p = Problem::load(path)?;
    let cfg = solver_config(p.file.solver.as_ref(), &common.solver)?;
    let s = settings(&p, common, &cfg, p.file.horizon);
    if s.t_max == 0 {
        bail!("--tmax must be at least 1");
    }
    let scan = scan_strategies().create(&s.scan, &Params::new())?;
    let r = oracle_scan(&p.sys, &p.set, &p.x0, s.t_max, s.feas_tol, scan.as_ref(), &cfg)?;
    let rows = report::distance_rows(&r);
    let out = OracleReport {
        tool: Tool::current(),
        problem: p.file.clone(),
        t_star: r.t_star,
        witness: r.witness.as_ref().map(|w| report::rows(&w.to_sequence())),
        distances: rows.clone(),
        settings: s.clone(),
    };
    let name = stem(path);
    write_json(&common.out_dir.join(format!("{name}.oracle.json")), &out)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "distance", "reachable"])?;
    for row in &rows {
        let reachable = if row.distance <= s.feas_tol { "1" } else { "0" };
        w.write_record([row.t.to_string(), fmt_float(row.distance), reachable.into()])?;
    }
    write_atomic(&common.out_dir.join(format!("{name}.oracle.csv")), &w.into_inner()?)?;
    write_json(
        &common.out_dir.join(format!("{name}.oracle.timings.json")),
        &Timings {
            total_seconds: start.elapsed().as_secs_f64(),
        },
    )?;
    match r.t_star {
        Some(t) => {
            println!("{name}: t* = {t}");
            Ok(EXIT_OK)
        }
        None => {
            println!("{name}: unreachable within {} steps", s.t_max);
            Ok(EXIT_UNREACHABLE)
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct MpcFlags {
    pub tau: Option<usize>,
    pub resolve_period: Option<usize>,
    pub max_steps: Option<usize>,
    pub relative_time: bool,
    pub no_warm_start: bool,
}

pub fn mpc(path: &Path, common: &Common, flags: &MpcFlags) -> Result<u8> {
    let start = Instant::now();
    let p = Problem::load(path)?;
    let solver = solver_config(p.file.solver.as_ref(), &common.solver)?;
    let defaults = MpcConfig::with_defaults(&p.sys, Arc::clone(&p.weights));
    let zero_tol = p.options().zero_tol.unwrap_or_else(|| default_tolerance(&p.x0));
    let cfg = MpcConfig {
        tau: flags.tau.unwrap_or(defaults.tau),
        resolve_period: flags.resolve_period.unwrap_or(defaults.resolve_period),
        max_steps: flags.max_steps.unwrap_or(defaults.max_steps),
        zero_tol: Some(zero_tol),
        relative_time: flags.relative_time,
        warm_start: !flags.no_warm_start,
        ..defaults
    };
    let trace = mpc_run(&p.sys, &p.set, &p.x0, &cfg, &solver)?;
    let (reached_zero_at, solve_times, inputs, states) = report::mpc_result(&trace);
    let out = report::MpcReport {
        tool: Tool::current(),
        problem: p.file.clone(),
        settings: report::mpc_settings(&cfg, &solver, zero_tol),
        reached_zero_at,
        solve_times,
        inputs,
        states,
    };
    let name = stem(path);
    write_json(&common.out_dir.join(format!("{name}.mpc.json")), &out)?;
    let table = trajectory_csv(&out.states, &out.inputs, p.sys.n_u(), Some(&out.solve_times))?;
    write_atomic(&common.out_dir.join(format!("{name}.mpc.csv")), &table)?;
    write_json(
        &common.out_dir.join(format!("{name}.mpc.timings.json")),
        &Timings {
            total_seconds: start.elapsed().as_secs_f64(),
        },
    )?;
    match reached_zero_at {
        Some(k) => {
            println!("{name}: reached zero at step {k}");
            Ok(EXIT_OK)
        }
        None => {
            println!("{name}: not at zero after {} steps", cfg.max_steps);
            Ok(EXIT_UNCERTIFIED)
        }
    }
}

pub const DEMO_NAMES: [&str; 2] = ["double-integrator", "multi-input"];

fn rows_of<const C: usize>(m: &[[f64; C]]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn linear_spec() -> TypedSpec {
    TypedSpec {
        kind: "linear".into(),
        params: Params::from([("a".to_string(), ParamValue::Number(1.0))]),
    }
}

/// Problem files of a bundled demo, one per initial state.
pub fn demo_problems(name: &str) -> Result<Vec<ProblemFile>> {
    let (system, set, states) = match name {
        "double-integrator" => (
            SystemSpec {
                a: vec![vec![1.0, 1.0], vec![0.0, 1.0]],
                b: vec![vec![0.0], vec![1.0]],
            },
            TypedSpec {
                kind: "ballinf".into(),
                params: Params::from([("radii".to_string(), ParamValue::List(vec![1.0]))]),
            },
            rows_of(&demos::DOUBLE_INTEGRATOR_GRID),
        ),
        "multi-input" => (
            SystemSpec {
                a: rows_of(&demos::MULTI_INPUT_A),
                b: rows_of(&demos::MULTI_INPUT_B),
            },
            TypedSpec {
                kind: "ball2".into(),
                params: Params::from([("r".to_string(), ParamValue::Number(1.0))]),
            },
            rows_of(&demos::MULTI_INPUT_STATES),
        ),
        other => bail!("unknown demo `{other}`; available: {}", DEMO_NAMES.join(", ")),
    };
    Ok(states
        .into_iter()
        .map(|x0| ProblemFile {
            horizon: demos::DEMO_HORIZON,
            x0,
            seed: None,
            system: system.clone(),
            set: set.clone(),
            weights: linear_spec(),
            solver: None,
            options: None,
        })
        .collect())
}

pub fn demo(name: &str, common: &Common) -> Result<u8> {
    let files = demo_problems(name)?;
    let mut all_certified = true;
    for (i, file) in files.into_iter().enumerate() {
        let start = Instant::now();
        let p = Problem::from_file(file)?;
        let (report, _) = solve_problem(&p, common, true)?;
        let label = format!("{name}-{}", i + 1);
        write_solve_outputs(&common.out_dir, &label, &p, &report, start.elapsed().as_secs_f64())?;
        println!("{}", summary(&label, &report));
        all_certified &= report.result.certified;
    }
    Ok(if all_certified { EXIT_OK } else { EXIT_UNCERTIFIED })
}
