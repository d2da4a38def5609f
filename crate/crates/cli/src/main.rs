//! `hmplanes`: classify planes of P4 under the Horrocks-Mumford bundle and
//! reproduce the certificates behind the classification.
//!
//! Exit codes: 0 success, 1 certificate mismatch or unresolved result,
//! 2 input validation error, 3 internal invariant violation.

mod certify;
mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hmplanes::scalar::DEFAULT_PRIME;
use hmplanes::{Cyclo5, Rational};

use crate::input::CliField;
use crate::report::Output;

#[derive(Debug)]
pub enum CliError {
    /// The result could not be certified (mismatch or unresolved).
    Mismatch(String),
    Validation(String),
    Invariant(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Mismatch(m) => write!(f, "not certified: {m}"),
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Invariant(m) => write!(f, "internal invariant violated: {m}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    /// The rationals.
    Q,
    /// The cyclotomic field Q(ζ₅); scalars are polynomials in `z`.
    Cyclo5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "hmplanes", version, about = "Exact classification of planes in P4 under the Horrocks-Mumford bundle")]
pub struct Cli {
    /// Seed for every random choice; fixed seed, fixed output.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Prime used for modular cross-checks.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    #[arg(long, global = true, value_enum, default_value_t = FieldArg::Q)]
    pub field: FieldArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for commands that process many independent items.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct InputArgs {
    /// Inline items; see the input grammar in `hmplanes help-input`.
    pub items: Vec<String>,
    /// File with one item per line; blank lines and `#` comments are skipped.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The admissible resolution pairs with their cohomology tables.
    EnumeratePairs {
        /// Last twist of the h⁰ table.
        #[arg(long, default_value_t = 3)]
        t_max: i64,
    },
    /// Rank of M, jumping flag and resolution of each plane.
    Classify {
        #[command(flatten)]
        planes: InputArgs,
        /// Append this many seeded random planes.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// Jumping order of each line.
    LineOrder {
        #[command(flatten)]
        lines: InputArgs,
    },
    /// Lines of at least the given order inside each plane.
    JumpingLinesInPlane {
        #[command(flatten)]
        planes: InputArgs,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
        min_order: u8,
    },
    /// Dimension of the tangent space to the rank stratum at each plane.
    TangentDim {
        #[command(flatten)]
        planes: InputArgs,
        /// Expected rank of M; defaults to the computed rank.
        #[arg(long)]
        rank: Option<usize>,
        /// Shuffle the anchor minor with this seed instead of using pivots.
        #[arg(long)]
        anchor_seed: Option<u64>,
    },
    /// Degree of the rank-14 locus on pencils of planes through a line.
    PencilDegree {
        /// Pencils as `x*; y*; z*`, the planes `{x* = s y* + t z* = 0}`.
        #[command(flatten)]
        pencils: InputArgs,
        /// Append this many seeded random pencils (one if no pencil is given).
        #[arg(long)]
        random: Option<usize>,
    },
    /// Jumping planes through each line, on the P² of planes containing it.
    Incidence {
        #[command(flatten)]
        lines: InputArgs,
    },
    /// The 25 lines L(k,j) with their orders and Heisenberg orbit membership.
    HmLines,
    /// The conics of jumping planes through the 25 lines L(k,j).
    HmConics,
    /// Dimensions of the Heisenberg-invariant part of Sym^i.
    Invariants {
        #[arg(long, default_value_t = 5)]
        max_degree: usize,
    },
    /// Re-run a certificate and compare with its expected value.
    Certify {
        #[arg(value_enum)]
        kind: certify::Kind,
    },
    /// Print the input grammar.
    HelpInput,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::EnumeratePairs { .. } => "enumerate-pairs",
            Command::Classify { .. } => "classify",
            Command::LineOrder { .. } => "line-order",
            Command::JumpingLinesInPlane { .. } => "jumping-lines-in-plane",
            Command::TangentDim { .. } => "tangent-dim",
            Command::PencilDegree { .. } => "pencil-degree",
            Command::Incidence { .. } => "incidence",
            Command::HmLines => "hm-lines",
            Command::HmConics => "hm-conics",
            Command::Invariants { .. } => "invariants",
            Command::Certify { .. } => "certify",
            Command::HelpInput => "help-input",
        }
    }

    fn tabular(&self) -> bool {
        matches!(self, Command::EnumeratePairs { .. } | Command::Classify { .. } | Command::LineOrder { .. } | Command::HmLines | Command::Invariants { .. })
    }
}

const INPUT_HELP: &str = "\
Items are groups separated by ';', each group a comma-separated list of
scalars with an optional 'label:' prefix that is ignored.

  plane   two covectors x*; y* (the plane x* = y* = 0), or ten Plücker
          coordinates p01 p02 p03 p04 p12 p13 p14 p23 p24 p34 with
          p_ij = x_i y_j - x_j y_i; these must satisfy the Plücker quadrics
  line    three covectors, or L(k,j) for the lines of the Heisenberg orbit
  pencil  three covectors x*; y*; z*, the planes x* = s y* + t z* = 0

Scalars: n or n/d with --field q; polynomials in z such as 1+2*z^3 or
-1/2*z with --field cyclo5, where z is a primitive fifth root of unity.

Examples:
  hmplanes classify 'x*: 1,0,0,0,0; y*: 0,1,1,0,0'
  hmplanes classify 'p: 1,0,0,0,0,0,0,0,0,0'
  hmplanes --field cyclo5 line-order 'L(1,2)'
";

fn run<F: CliField>(cli: &Cli) -> Result<Output, CliError> {
    commands::run::<F>(cli)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::HelpInput = cli.command {
        print!("{INPUT_HELP}");
        return ExitCode::SUCCESS;
    }
    if cli.format == Format::Csv && !cli.command.tabular() {
        eprintln!("error: {}", CliError::Validation(format!("{} has no CSV form; use --format json", cli.command.name())));
        return ExitCode::from(2);
    }
    if cli.jobs == 0 {
        eprintln!("error: {}", CliError::Validation("--jobs must be at least 1".into()));
        return ExitCode::from(2);
    }
    let result = match cli.field {
        FieldArg::Q => run::<Rational>(&cli),
        FieldArg::Cyclo5 => run::<Cyclo5>(&cli),
    };
    match result {
        Ok(out) => {
            if let Err(e) = out.write(cli.format, &mut std::io::stdout().lock()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(3);
            }
            match out.failure {
                Some(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code())
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
