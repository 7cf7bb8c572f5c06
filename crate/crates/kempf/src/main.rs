use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use kempf::instance::{self, Instance, Problem};
use kempf::random::{self, GroupChoice, RandomParams};
use kempf::report::{self, parse_engines, CompareOptions, Report};
use kempf::{gallery, probe};
use kempf_core::flow::FlowOptions;
use kempf_core::stability::Budget;

#[derive(Parser)]
#[command(name = "kempf", version, about = "Stability of points under torus and GL(r) actions")]
struct Cli {
    /// Worker threads (default: $KEMPF_THREADS, else all cores).
    #[arg(long, global = true, env = "KEMPF_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Seed for the randomized parts of the engines.
    #[arg(long)]
    seed: Option<u64>,
    /// Only this point.
    #[arg(long)]
    point: Option<String>,
    /// Record wall-clock time per engine.
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the points of an instance file.
    Analyze {
        file: PathBuf,
        /// analytic, flow, kn or all.
        #[arg(long, default_value = "analytic")]
        engine: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run several engines and cross-check their verdicts.
    Compare {
        file: PathBuf,
        /// Comma-separated list of analytic, flow, kn, or all.
        #[arg(long, default_value = "all")]
        engines: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Kempf–Ness descent with its trajectory.
    Flow {
        file: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        /// Plain gradient descent instead of the Newton-scaled one.
        #[arg(long)]
        plain: bool,
        #[arg(long)]
        point: Option<String>,
    },
    /// Seeded random instances, printed as a JSON array.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, value_enum, default_value_t = GroupArg::Torus)]
        group: GroupArg,
        /// Largest torus rank, or r for gl.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Largest representation dimension.
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        bound: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-1,0,1")]
        tau_set: Vec<f64>,
    },
    /// The built-in instances; with --emit, write instances and reports.
    Gallery {
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Maximal weight, Kempf–Ness samples and limit point along a direction.
    Weights {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        s: Vec<f64>,
        #[arg(long)]
        point: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Torus,
    Gl,
}

fn load(path: &Path) -> Result<Vec<Problem>> {
    instance::read_instances(path)?
        .iter()
        .map(Instance::build)
        .collect()
}

fn options(engines: &str, run: &RunArgs) -> Result<CompareOptions> {
    let mut budget = Budget::default();
    if let Some(seed) = run.seed {
        budget.seed = seed;
    }
    Ok(CompareOptions {
        engines: parse_engines(engines)?,
        budget,
        timings: run.timings,
        point: run.point.clone(),
    })
}

fn emit_reports(reports: &[Report]) -> i32 {
    if let [single] = reports {
        print!("{}", report::to_json(single));
    } else {
        print!("{}", report::to_json(&reports));
    }
    let total = report::total(reports);
    eprintln!(
        "{} points: {} disagreements, {} failed checks, {} inconclusive, {} errors",
        total.points, total.disagreements, total.check_failures, total.inconclusive, total.errors
    );
    total.exit_code()
}

fn single_or_list(values: Vec<serde_json::Value>) -> String {
    let v = if values.len() == 1 {
        values.into_iter().next().unwrap()
    } else {
        serde_json::Value::Array(values)
    };
    report::to_json(&v)
}

fn run(cli: Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Analyze { file, engine, run } | Command::Compare {
            file,
            engines: engine,
            run,
        } => {
            let opts = options(&engine, &run)?;
            let problems = load(&file)?;
            let reports = report::compare_all(&problems, &opts)?;
            Ok(emit_reports(&reports))
        }
        Command::Flow {
            file,
            tol,
            max_iter,
            plain,
            point,
        } => {
            let mut opts = FlowOptions::default();
            if let Some(t) = tol {
                opts.tol = t;
            }
            if let Some(m) = max_iter {
                opts.max_iter = m;
            }
            opts.precondition = !plain;
            let out = load(&file)?
                .iter()
                .map(|p| probe::flow_runs(p, &opts, point.as_deref()))
                .collect::<Result<Vec<_>>>()?;
            print!("{}", single_or_list(out));
            Ok(0)
        }
        Command::Random {
            seed,
            count,
            group,
            k,
            n,
            bound,
            tau_set,
        } => {
            let params = RandomParams {
                seed,
                count,
                group: match group {
                    GroupArg::Torus => GroupChoice::Torus,
                    GroupArg::Gl => GroupChoice::Gl,
                },
                k,
                n,
                bound,
                tau_set,
            };
            print!("{}", instance::list_to_json(&random::generate(&params)));
            Ok(0)
        }
        Command::Gallery { emit } => {
            let list = gallery::gallery();
            let problems = list.iter().map(Instance::build).collect::<Result<Vec<_>>>()?;
            let reports = report::compare_all(&problems, &CompareOptions::default())?;
            match emit {
                Some(dir) => {
                    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                    for (inst, rep) in list.iter().zip(&reports) {
                        let path = dir.join(format!("{}.json", inst.id));
                        std::fs::write(&path, instance::to_json(inst))
                            .with_context(|| format!("writing {}", path.display()))?;
                        let path = dir.join(format!("{}.report.json", inst.id));
                        std::fs::write(&path, report::to_json(rep))
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                }
                None => {
                    for rep in &reports {
                        for p in &rep.points {
                            let verdicts: Vec<String> = p
                                .results
                                .iter()
                                .map(|r| format!("{}={}", r.engine, r.verdict.unwrap_or("-")))
                                .collect();
                            println!("{:<8} {:<12} {}", rep.instance, p.name, verdicts.join(" "));
                        }
                    }
                }
            }
            Ok(report::total(&reports).exit_code())
        }
        Command::Weights { file, s, point } => {
            let out = load(&file)?
                .iter()
                .map(|p| {
                    let dir = probe::direction(p.sympl.kind(), &s)?;
                    probe::weights(p, &dir, point.as_deref())
                })
                .collect::<Result<Vec<_>>>()?;
            print!("{}", single_or_list(out));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
