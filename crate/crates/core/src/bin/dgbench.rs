use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dgbench::fixture::{write_synthetic, FixtureSpec};
use dgbench::io::load_manifest_with_fps;
use dgbench::report::{emit, parse_formats, prepare_and_validate, MetricReport};
use dgbench::{EngineConfig, Error, Execution, MetricSelection, RunError, RunOptions, Track};

const VALIDATION_FAILURE: u8 = 1;
const COMPUTATION_FAILURE: u8 = 2;

#[derive(Parser)]
#[command(name = "dgbench", version, about = "Score generated driving videos and rank models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long)]
    manifest: PathBuf,
    /// Comma-separated metric names, or `all`.
    #[arg(long, default_value = "all")]
    metrics: String,
    /// TOML file overriding default parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every requested metric has the inputs it needs.
    Validate(Common),
    /// Compute metrics, aggregates and ranks and write the reports.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "json,markdown")]
        formats: String,
        /// Run on a single thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Recompute average ranks from a written report.
    Rank {
        #[arg(long)]
        report: PathBuf,
    },
    /// Write a seeded synthetic dataset.
    Fixture {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "ego_conditioned")]
        tracks: Vec<String>,
    },
}

fn options(common: &Common, exec: Execution) -> Result<RunOptions, Error> {
    let config = match &common.config {
        Some(p) => EngineConfig::from_file(p)?,
        None => EngineConfig::default(),
    };
    Ok(RunOptions {
        config,
        seed: common.seed,
        selection: MetricSelection::parse(&common.metrics)?,
        exec,
    })
}

fn fail(code: u8, e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(code)
}

fn parse_track(s: &str) -> Result<Track, Error> {
    serde_json::from_value(serde_json::Value::String(s.trim().to_string()))
        .map_err(|_| Error::Config(format!("unknown track '{s}'")))
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Validate(common) => {
            let result = options(&common, Execution::default()).and_then(|opts| {
                let dataset = load_manifest_with_fps(&common.manifest, opts.config.mmp.rate)?;
                prepare_and_validate(&dataset, &opts).map(|(_, _, report)| report)
            });
            match result {
                Err(e) => fail(VALIDATION_FAILURE, e),
                Ok(report) => {
                    for entry in &report.entries {
                        println!("{entry}");
                    }
                    if report.has_errors() {
                        ExitCode::from(VALIDATION_FAILURE)
                    } else {
                        println!("ok");
                        ExitCode::SUCCESS
                    }
                }
            }
        }
        Command::Run {
            common,
            out,
            formats,
            sequential,
        } => {
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let opts = match options(&common, exec) {
                Ok(o) => o,
                Err(e) => return fail(VALIDATION_FAILURE, e),
            };
            let formats = match parse_formats(&formats) {
                Ok(f) => f,
                Err(e) => return fail(VALIDATION_FAILURE, e),
            };
            let dataset = match load_manifest_with_fps(&common.manifest, opts.config.mmp.rate) {
                Ok(d) => d,
                Err(e) => return fail(VALIDATION_FAILURE, e),
            };
            match dgbench::run(&dataset, &opts) {
                Err(RunError::Validation(report)) => {
                    for entry in &report.entries {
                        eprintln!("{entry}");
                    }
                    ExitCode::from(VALIDATION_FAILURE)
                }
                Err(RunError::Failed(e)) => fail(COMPUTATION_FAILURE, e),
                Ok(report) => match emit(&report, &out, &formats) {
                    Err(e) => fail(COMPUTATION_FAILURE, e),
                    Ok(paths) => {
                        for p in paths {
                            println!("{}", p.display());
                        }
                        ExitCode::SUCCESS
                    }
                },
            }
        }
        Command::Rank { report } => {
            let ranks = match MetricReport::load(&report).and_then(|r| r.rerank()) {
                Ok(r) => r,
                Err(e) => return fail(COMPUTATION_FAILURE, e),
            };
            for (track, ranking) in &ranks {
                for (model, rank) in &ranking.ranks {
                    println!("{track}\t{model}\t{rank}");
                }
                for (model, missing) in &ranking.excluded {
                    println!("{track}\t{model}\texcluded (missing {})", missing.join(", "));
                }
            }
            ExitCode::SUCCESS
        }
        Command::Fixture { out, seed, tracks } => {
            let tracks = match tracks.iter().map(|t| parse_track(t)).collect::<Result<Vec<_>, _>>() {
                Ok(t) => t,
                Err(e) => return fail(VALIDATION_FAILURE, e),
            };
            let spec = FixtureSpec {
                seed,
                tracks,
                ..FixtureSpec::default()
            };
            match write_synthetic(&spec, &out) {
                Ok(p) => {
                    println!("{}", p.display());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(COMPUTATION_FAILURE, e),
            }
        }
    }
}
