use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use multiproj::instance::random_arrangement;
use multiproj::{FieldSpec, Instance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod analyze;
mod exit;
mod verify;

use exit::{classify, Failure};

#[derive(Parser)]
#[command(name = "multiproj", version, about = "Multidegrees, initial ideals and Hilbert polynomials of products of linear projections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank table, dimension, support, initial ideal and Hilbert polynomial.
    Analyze {
        file: PathBuf,
        /// Write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Cross-check the combinatorial answers against independent oracles.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Prime used for point counts of rational instances.
        #[arg(long, default_value_t = 101)]
        q: u64,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Largest number of tuples enumerated per point count.
        #[arg(long, default_value_t = multiproj::oracle::DEFAULT_POINT_BUDGET)]
        point_budget: u64,
        /// Largest number of variables handed to Buchberger's algorithm.
        #[arg(long, default_value_t = 12)]
        max_vars: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write a random arrangement with the given subspace dimensions.
    Gen {
        #[arg(long)]
        ambient: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// `rational` or `prime:Q`.
        #[arg(long, default_value = "rational", value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Matroid,
    Hilbert,
    Groebner,
    Pointcount,
    All,
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    match s.trim() {
        "rational" | "Q" => Ok(FieldSpec::Rational),
        other => {
            let q = other
                .strip_prefix("prime:")
                .and_then(|q| q.parse::<u64>().ok())
                .ok_or_else(|| format!("expected `rational` or `prime:Q`, got `{other}`"))?;
            FieldSpec::prime(q).map_err(|e| e.to_string())
        }
    }
}

fn load(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::parse(&text).with_context(|| format!("loading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze { file, json } => {
            let inst = load(&file)?;
            let report = analyze::analyze(&inst)?;
            print!("{}", analyze::summary(&report));
            if let Some(path) = json {
                write(&path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, which, seed, q, trials, point_budget, max_vars, json } => {
            let inst = load(&file)?;
            let opts = verify::Options { which, seed, q, trials, point_budget, max_vars };
            let report = verify::verify(&inst, &opts)?;
            print!("{}", verify::summary(&report));
            if let Some(path) = json {
                write(&path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            }
            Ok(ExitCode::from(report.exit_code()))
        }
        Command::Gen { ambient, dims, field, seed, output } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_arrangement(field, ambient, &dims, &mut rng, 200)?;
            write(&output, &Instance::Concrete(a).to_json())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(match classify(&err) {
                Failure::Budget => 3,
                Failure::Input => 2,
            })
        }
    }
}
