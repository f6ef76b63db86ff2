use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hillpath::ea::{run, run_from, MutationRate, RunOptions, StopAt};
use hillpath::harness::{self, SweepConfig};
use hillpath::oracle::verify_path;
use hillpath::theory::{analyze, calibrate, ModelParams};
use hillpath::{BitString, Error, Instance, PathLength};

#[derive(Parser)]
#[command(
    name = "hillpath",
    version,
    about = "HillPathJump experiments for the (1+1) EA"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Start {
    Random,
    /// The last path point.
    Xplus,
    /// The optimum.
    Xstar,
    /// The first path point.
    Z1,
}

#[derive(clap::Args)]
struct InstanceArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Path length.
    #[arg(long = "L", conflicts_with = "a", required_unless_present = "a")]
    path_len: Option<u128>,
    /// Path-length coefficient: L = floor(a·n^(k−1)).
    #[arg(long)]
    a: Option<f64>,
}

impl InstanceArgs {
    fn build(&self) -> hillpath::Result<Instance> {
        let length = match (self.path_len, self.a) {
            (Some(l), _) => PathLength::Explicit(l),
            (None, Some(a)) => PathLength::Coefficient(a),
            (None, None) => return Err(Error::Config("one of --L and --a is required".into())),
        };
        Instance::new(self.n, self.k, length)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Coefficient a whose optimal rate constant is c.
    Calibrate {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        k: u32,
    },
    /// Optimal rate constant and predicted runtime for coefficient a.
    Theory {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: Option<f64>,
    },
    /// One EA run; prints the run record.
    Run {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "random")]
        start: Start,
        #[arg(long)]
        budget: Option<u64>,
        /// Stop once x+ is reached.
        #[arg(long)]
        stop_at_xplus: bool,
        /// Print a CSV row (with header) instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Mutation-rate sweep from a JSON config; flags override config keys.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long = "L")]
        path_len: Option<u128>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        c_grid: Option<Vec<f64>>,
        #[arg(long)]
        trials_per_c: Option<u64>,
        #[arg(long)]
        master_seed: Option<u64>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        output_path: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Compare the implicit path against an explicit construction.
    VerifyPath {
        #[command(flatten)]
        instance: InstanceArgs,
    },
}

enum Failure {
    Mismatch,
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> hillpath::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Calibrate { c, k } => {
            let a = calibrate(c, k)?;
            print_json(&serde_json::json!({ "c": c, "k": k, "a": a }))?;
        }
        Command::Theory { a, k, n } => {
            print_json(&analyze(&ModelParams::new(a, k)?, n)?)?;
        }
        Command::Run {
            instance,
            c,
            seed,
            start,
            budget,
            stop_at_xplus,
            csv,
        } => {
            let inst = instance.build()?;
            let rate = MutationRate::from_c(c, inst.n())?;
            let opts = RunOptions {
                budget,
                stop: if stop_at_xplus {
                    StopAt::SecondBest
                } else {
                    StopAt::Optimum
                },
            };
            let start_point: Option<BitString> = match start {
                Start::Random => None,
                Start::Xplus => Some(inst.x_plus().clone()),
                Start::Xstar => Some(inst.x_star().clone()),
                Start::Z1 => Some(inst.path_point(1)?),
            };
            let record = match start_point {
                None => run(&inst, rate, seed, opts),
                Some(s) => run_from(&inst, rate, seed, s, opts)?,
            };
            if csv {
                let bytes = harness::run_records_csv(std::slice::from_ref(&record))?;
                print!("{}", String::from_utf8_lossy(&bytes));
            } else {
                print_json(&record)?;
            }
        }
        Command::Sweep {
            config,
            n,
            k,
            path_len,
            a,
            c_grid,
            trials_per_c,
            master_seed,
            budget,
            output_path,
            threads,
        } => {
            let mut cfg = SweepConfig::load(&config)?;
            if let Some(v) = n {
                cfg.n = v;
            }
            if let Some(v) = k {
                cfg.k = v;
            }
            if path_len.is_some() {
                cfg.path_len = path_len;
                cfg.a = None;
            }
            if a.is_some() {
                cfg.a = a;
                cfg.path_len = None;
            }
            if let Some(v) = c_grid {
                cfg.c_grid = v;
            }
            if let Some(v) = trials_per_c {
                cfg.trials_per_c = v;
            }
            if let Some(v) = master_seed {
                cfg.master_seed = v;
            }
            if budget.is_some() {
                cfg.budget = budget;
            }
            if output_path.is_some() {
                cfg.output_path = output_path;
            }
            if threads.is_some() {
                cfg.threads = threads;
            }
            if cfg.output_path.is_none() {
                cfg.output_path = Some(harness::default_output_path("sweep.csv"));
            }
            let result = harness::sweep(&cfg)?;
            print_json(&result)?;
            if let Some(path) = &cfg.output_path {
                eprintln!(
                    "wrote {} and {}",
                    path.display(),
                    path.with_extension("json").display()
                );
            }
        }
        Command::VerifyPath { instance } => {
            let inst = instance.build()?;
            let report = verify_path(&inst)?;
            print_json(&report)?;
            if !report.passed() {
                return Err(Failure::Mismatch);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
