//! `sks`: monodromy arithmetic and local-model checks from the command line.

mod commands;
mod error;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::{CliError, EXIT_PARSE};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  validation mismatch (a check ran and did not match)
  3  parse error (bad matrix, group spec, model, file or arguments)
  4  enumeration cap exceeded
  5  numeric failure (continuation, quadrature, domain)
  6  input rejected (not in SL2(Z), hyperbolic, non-integral rescale, ...)";

#[derive(Parser, Debug)]
#[command(name = "sks", version, about = "Monodromy arithmetic of integral special Kähler structures", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy, Default)]
pub struct Format {
    /// Machine-readable JSON (the default for every command except `table3`).
    #[arg(long, conflicts_with = "pretty")]
    pub json: bool,
    /// Human-readable text.
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute N(G), the number of SL2(R)-conjugates of G inside SL2(Z).
    Ng {
        #[arg(long)]
        group: String,
        #[command(flatten)]
        fmt: Format,
    },
    /// Recompute every row of the N(G) table and compare with the expected values.
    Table3 {
        /// Alternative table in the embedded fixture format.
        #[arg(long)]
        file: Option<PathBuf>,
        #[command(flatten)]
        fmt: Format,
    },
    /// Kodaira type of a monodromy matrix.
    Classify {
        #[arg(long)]
        matrix: String,
        /// Treat the matrix as an element of PSL2(Z).
        #[arg(long)]
        projective: bool,
        #[command(flatten)]
        fmt: Format,
    },
    /// Fiber configurations.
    #[command(subcommand)]
    Config(ConfigCommand),
    /// Subgroups of SL2(Z).
    #[command(subcommand)]
    Group(GroupCommand),
    /// Monodromy of a local model by analytic continuation.
    Monodromy {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0.1)]
        radius: f64,
        #[arg(long, default_value_t = sks_core::analytic::DEFAULT_STEPS)]
        steps: usize,
        #[command(flatten)]
        fmt: Format,
    },
    /// Circumference over radial distance at a small radius.
    Coneangle {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1e-3)]
        radius: f64,
        #[command(flatten)]
        fmt: Format,
    },
    /// Kähler density at a point.
    Density {
        #[command(flatten)]
        model: ModelArgs,
        /// Point `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        fmt: Format,
    },
    /// Ratio of the Weil-Petersson form to the Kähler form at a point.
    Curvature {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Finite-difference spacing.
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
        #[command(flatten)]
        fmt: Format,
    },
    /// The six-fiber Γ(4) example and its rescalings by q = 2 and q = 4.
    ExampleHjmm {
        /// Rescale by this factor only.
        #[arg(long)]
        q: Option<String>,
        #[command(flatten)]
        fmt: Format,
    },
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Model as inline JSON, a path to a JSON file, or a bare kind such as `II` or `Type3(1/4)`.
    #[arg(long)]
    pub model: String,
}

#[derive(Args, Debug)]
pub struct ConfigSource {
    /// JSON file: `{"mode":"based","fibers":[...]}`, `{"mode":"types",...}` or a list of matrices.
    #[arg(long, conflicts_with = "matrix")]
    pub file: Option<PathBuf>,
    /// Loop matrices in order, repeated.
    #[arg(long)]
    pub matrix: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum ConfigCommand {
    /// Check the product, the index sum and the fiber types.
    Validate {
        #[command(flatten)]
        src: ConfigSource,
        #[command(flatten)]
        fmt: Format,
    },
    /// Rescale every loop matrix by q.
    Rescale {
        #[command(flatten)]
        src: ConfigSource,
        #[arg(long)]
        q: String,
        #[command(flatten)]
        fmt: Format,
    },
    /// Index of the monodromy group and the named groups it equals.
    Group {
        #[command(flatten)]
        src: ConfigSource,
        #[arg(long, default_value_t = sks_core::modgroup::DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        fmt: Format,
    },
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    /// Index in PSL2(Z).
    Index {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = sks_core::modgroup::DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        fmt: Format,
    },
    /// Equality of two subgroups; exits 2 if they differ.
    Equal {
        #[arg(long, num_args = 1, required = true)]
        group: Vec<String>,
        #[command(flatten)]
        fmt: Format,
    },
    /// Conjugate by `--matrix B`, or search for a conjugator between two groups.
    Conjugate {
        #[arg(long, num_args = 1, required = true)]
        group: Vec<String>,
        #[arg(long)]
        matrix: Option<String>,
        #[command(flatten)]
        fmt: Format,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    use commands as c;
    match cli.command {
        Command::Ng { group, fmt } => c::ng(&group, fmt),
        Command::Table3 { file, fmt } => c::table3(file.as_deref(), fmt),
        Command::Classify { matrix, projective, fmt } => c::classify(&matrix, projective, fmt),
        Command::Config(ConfigCommand::Validate { src, fmt }) => c::config_validate(&src, fmt),
        Command::Config(ConfigCommand::Rescale { src, q, fmt }) => c::config_rescale(&src, &q, fmt),
        Command::Config(ConfigCommand::Group { src, cap, fmt }) => c::config_group(&src, cap, fmt),
        Command::Group(GroupCommand::Index { group, cap, fmt }) => c::group_index(&group, cap, fmt),
        Command::Group(GroupCommand::Equal { group, fmt }) => c::group_equal(&group, fmt),
        Command::Group(GroupCommand::Conjugate { group, matrix, fmt }) => c::group_conjugate(&group, matrix.as_deref(), fmt),
        Command::Monodromy { model, radius, steps, fmt } => c::monodromy(&model, radius, steps, fmt),
        Command::Coneangle { model, radius, fmt } => c::coneangle(&model, radius, fmt),
        Command::Density { model, point, fmt } => c::density(&model, &point, fmt),
        Command::Curvature { model, point, h, fmt } => c::curvature(&model, &point, h, fmt),
        Command::ExampleHjmm { q, fmt } => c::example_hjmm(q.as_deref(), fmt),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap reports usage errors with exit status 2, which is reserved for mismatches here.
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(error::EXIT_MISMATCH as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
