//! `sklyrep`: command-line front end to the representation pipeline.

mod commands;
mod fmt;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sklyrep::sklyanin::GridSpec;
use sklyrep::solver::{Algebra, JordanKind};
use sklyrep::C64;

/// Seed used when neither `--seed` nor `SKLYREP_SEED` is given.
pub const DEFAULT_SEED: u64 = 20240517;

#[derive(Parser, Debug)]
#[command(name = "sklyrep", version, about = "2-dimensional representations of S(1,1,c) and C_{-1}[x,y]")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "SKLYREP_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Relation residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Residual, irreducibility, fingerprint and central character of one rep.
    Verify {
        /// Rep JSON file.
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        rep: Option<PathBuf>,
        /// Family id, e.g. `t3f2`.
        #[arg(long, requires = "set")]
        family: Option<String>,
        /// Parameter bindings `k=v,...`, e.g. `c=2,z4=1`.
        #[arg(long, allow_hyphen_values = true)]
        set: Option<String>,
        #[arg(long, default_value = "principal")]
        branch: String,
        /// Also fail (exit 1) when the rep is reducible.
        #[arg(long)]
        expect_irreducible: bool,
    },
    /// Equivalence classes of a JSON array of reps.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Order of the automorphism sigma of E.
    Sigma {
        #[arg(long, allow_hyphen_values = true, value_parser = complex)]
        a: C64,
        #[arg(long, allow_hyphen_values = true, value_parser = complex)]
        b: C64,
        #[arg(long, allow_hyphen_values = true, value_parser = complex)]
        c: C64,
        #[arg(long, default_value_t = 12)]
        max_order: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// Random-start Gauss-Newton search for 2-dimensional reps.
    Solve {
        #[arg(long, default_value = "sklyanin", value_parser = parsed::<Algebra>)]
        algebra: Algebra,
        #[arg(long, allow_hyphen_values = true, value_parser = complex, default_value = "5")]
        c: C64,
        #[arg(long, value_parser = parsed::<JordanKind>)]
        jordan: JordanKind,
        #[arg(long, default_value_t = 200)]
        starts: usize,
        /// Number of random affine slices; defaults per Jordan kind.
        #[arg(long)]
        slices: Option<usize>,
    },
    /// 1-dimensional reps (scalar solutions).
    Scalars {
        #[arg(long, default_value = "sklyanin", value_parser = parsed::<Algebra>)]
        algebra: Algebra,
        #[arg(long, allow_hyphen_values = true, value_parser = complex, default_value = "5")]
        c: C64,
    },
    /// The slice u1 = const of X_c over a (u2, u3) grid.
    Slice {
        #[arg(long, allow_hyphen_values = true, value_parser = complex)]
        c: C64,
        #[arg(long, allow_hyphen_values = true)]
        u1: f64,
        /// `min:max:steps`.
        #[arg(long, allow_hyphen_values = true, value_parser = parsed::<GridSpec>)]
        grid: GridSpec,
    },
    /// The (u1, u2) center plane of the skew ring, axes marked.
    SkewPlane {
        #[arg(long, allow_hyphen_values = true, value_parser = parsed::<GridSpec>)]
        grid: GridSpec,
    },
}

fn complex(s: &str) -> Result<C64, String> {
    sklyrep::parse_complex(s).map_err(|e| e.to_string())
}

fn parsed<T: std::str::FromStr<Err = sklyrep::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: sklyrep::Error| e.to_string())
}

/// Text to print and the exit status it carries.
pub struct Output {
    pub text: String,
    pub code: u8,
}

/// Exit status for a library error: failed checks are 1, bad input is 2.
fn error_code(e: &sklyrep::Error) -> u8 {
    match e {
        sklyrep::Error::NonScalarCentral(_) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> sklyrep::Result<Output> {
    let opts = commands::Opts {
        seed: cli.seed,
        tol: cli.tol,
        format: cli.format,
    };
    match cli.cmd {
        Cmd::Verify {
            rep,
            family,
            set,
            branch,
            expect_irreducible,
        } => {
            let input = match (rep, family) {
                (Some(path), _) => commands::VerifyInput::File(path),
                (None, Some(id)) => commands::VerifyInput::Family {
                    id,
                    set: set.unwrap_or_default(),
                    branch,
                },
                (None, None) => unreachable!("clap requires one of --rep, --family"),
            };
            commands::verify(&opts, input, expect_irreducible)
        }
        Cmd::Classify { input } => commands::classify(&opts, &input),
        Cmd::Sigma {
            a,
            b,
            c,
            max_order,
            trials,
        } => commands::sigma(&opts, a, b, c, max_order, trials),
        Cmd::Solve {
            algebra,
            c,
            jordan,
            starts,
            slices,
        } => commands::solve(&opts, algebra, c, jordan, starts, slices),
        Cmd::Scalars { algebra, c } => commands::scalars(&opts, algebra, c),
        Cmd::Slice { c, u1, grid } => commands::slice(&opts, c, u1, &grid),
        Cmd::SkewPlane { grid } => commands::skew_plane(&opts, &grid),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let out = match run(cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(error_code(&e));
        }
    };
    let written = match output {
        Some(path) => std::fs::write(&path, &out.text),
        None => std::io::stdout().lock().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(out.code)
}
