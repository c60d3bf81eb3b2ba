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


//! `mintime`: minimum-time control of discrete-time linear systems from the
//! command line.

mod commands;
mod output;
mod problem;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{Common, MpcFlags};
use crate::problem::SolverSection;

const EXIT_CODES: &str = "\
Exit codes:
  0  success: solve certified, oracle reachable, mpc reached zero, all demos certified
  1  error: unreadable or invalid input, solver failure
  2  solved but not certified (solve, demo) or not at zero after --max-steps (mpc)
  3  origin unreachable within --tmax (oracle)";

#[derive(Parser, Debug)]
#[command(name = "mintime", version, about = "Minimum-time control via sum-of-norms relaxation", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the relaxation, detect T1 and certify it against the oracle.
    Solve {
        problem: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Scan the feasibility oracle for the minimum time.
    Oracle {
        problem: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the receding-horizon controller in closed loop.
    Mpc {
        problem: PathBuf,
        /// Prediction horizon; must exceed the state dimension [default: n + 3].
        #[arg(long)]
        tau: Option<usize>,
        /// Re-solve every this many steps, between 1 and tau [default: 1].
        #[arg(long)]
        resolve_period: Option<usize>,
        /// Stop after this many applied inputs [default: 100].
        #[arg(long)]
        max_steps: Option<usize>,
        /// Use w(1..tau) at every step instead of absolute-time weights.
        #[arg(long)]
        relative_time: bool,
        /// Start every solve from zero instead of the shifted previous block.
        #[arg(long)]
        no_warm_start: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reproduce a bundled experiment: double-integrator or multi-input.
    Demo {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(commands::DEMO_NAMES))]
        name: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Directory for reports and tables.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Seed for the Monte-Carlo refuter; overrides the problem file.
    #[arg(long, env = "MINTIME_SEED")]
    seed: Option<u64>,
    /// Oracle scan limit [default: the problem horizon].
    #[arg(long)]
    tmax: Option<usize>,
    /// Bisect over the horizon instead of scanning upwards.
    #[arg(long)]
    bisect: bool,
    /// Absolute residual tolerance of the splitting solver
    #[arg(long)]
    eps_abs: Option<f64>,
    /// Relative residual tolerance of the splitting solver
    #[arg(long)]
    eps_rel: Option<f64>,
    /// Iteration cap of the splitting solver
    #[arg(long)]
    max_iters: Option<usize>,
}

impl From<CommonArgs> for Common {
    fn from(a: CommonArgs) -> Self {
        Self {
            out_dir: a.out_dir,
            seed: a.seed,
            solver: SolverSection {
                eps_abs: a.eps_abs,
                eps_rel: a.eps_rel,
                max_iters: a.max_iters,
                ..SolverSection::default()
            },
            t_max: a.tmax,
            bisect: a.bisect,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { problem, common } => commands::solve(&problem, &common.into()),
        Command::Oracle { problem, common } => commands::oracle(&problem, &common.into()),
        Command::Mpc {
            problem,
            tau,
            resolve_period,
            max_steps,
            relative_time,
            no_warm_start,
            common,
        } => {
            let flags = MpcFlags {
                tau,
                resolve_period,
                max_steps,
                relative_time,
                no_warm_start,
            };
            commands::mpc(&problem, &common.into(), &flags)
        }
        Command::Demo { name, common } => commands::demo(&name, &common.into()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::EXIT_ERROR)
        }
    }
}
