mod commands;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cluster_crystal::Rational;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "cluster-crystal", version, about = "Geometric and tropical crystals on cluster tori of double Bruhat cells")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build seeds and sample points.
    #[command(subcommand)]
    Seed(SeedCommand),
    /// Mutate a seed, or a point together with its seed.
    Mutate(MutateArgs),
    /// Map an A-point to its X-point.
    Ensemble(EnsembleArgs),
    /// Apply the geometric crystal operator `e_j^c` to a point.
    Act(ActArgs),
    /// A-coordinates of a matrix of the cell (type A).
    Minors(MinorsArgs),
    /// The twist map of the cell, or its inverse (type A).
    Twist(TwistArgs),
    /// Cross-checks against the matrix model.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Tropical crystal operators on integer points.
    #[command(subcommand)]
    Trop(TropCommand),
    /// Crystal graph of a box of integer points, in DOT.
    Graph(GraphArgs),
}

/// A seed given as a JSON file, or built from a Cartan matrix and a word.
#[derive(Args, Debug, Clone)]
pub struct SeedSource {
    /// Seed JSON file (`-` for stdin).
    #[arg(long, conflicts_with_all = ["cartan", "word"])]
    pub seed: Option<PathBuf>,
    /// Cartan label such as `A4`, or inline JSON `{"type":"A","rank":4}` / `{"matrix":[[…]]}`.
    #[arg(long)]
    pub cartan: Option<String>,
    /// Reduced word, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub word: Option<Vec<usize>>,
    /// Mutations applied after loading, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub mutations: Vec<i64>,
}

#[derive(Subcommand, Debug)]
pub enum SeedCommand {
    /// Initial seed of a reduced word.
    Build {
        #[command(flatten)]
        source: SeedSource,
        #[arg(long, value_enum, default_value_t = SeedPrint::Json)]
        print: SeedPrint,
    },
    /// Random point of a seed: positive rationals, or integers with `--box`.
    Sample {
        #[command(flatten)]
        source: SeedSource,
        #[arg(long, value_enum)]
        structure: StructureArg,
        /// Draw an integer point from `[-R, R]^I` instead.
        #[arg(long = "box", value_name = "R")]
        radius: Option<i64>,
        #[arg(long, env = "CLUSTER_CRYSTAL_RNG_SEED", default_value_t = 0)]
        rng_seed: u64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedPrint {
    Json,
    BTilde,
    B,
    M,
    Hash,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureArg {
    A,
    X,
}

#[derive(Args, Debug)]
pub struct MutateArgs {
    #[command(flatten)]
    pub source: SeedSource,
    /// Point JSON file; when given, the point is mutated instead of the seed.
    #[arg(long, conflicts_with_all = ["seed", "cartan", "word", "mutations"], requires = "structure")]
    pub point: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub structure: Option<StructureArg>,
    /// Mutation directions, applied left to right.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub k: Vec<i64>,
}

#[derive(Args, Debug)]
pub struct EnsembleArgs {
    #[arg(long)]
    pub point: PathBuf,
}

#[derive(Args, Debug)]
pub struct ActArgs {
    #[arg(long, value_enum)]
    pub structure: StructureArg,
    #[arg(long)]
    pub j: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Rational,
    #[arg(long)]
    pub point: PathBuf,
    /// Use the type A closed form on the word (1,…,r,…,1,2,1).
    #[arg(long = "closed-form-typeA")]
    pub closed_form_type_a: bool,
}

#[derive(Args, Debug)]
pub struct MinorsArgs {
    #[command(flatten)]
    pub source: SeedSource,
    /// Matrix JSON file: rows of rationals.
    #[arg(long, required_unless_present = "random", conflicts_with = "random")]
    pub matrix: Option<PathBuf>,
    /// Sample a matrix of the cell instead.
    #[arg(long)]
    pub random: bool,
    #[arg(long, env = "CLUSTER_CRYSTAL_RNG_SEED", default_value_t = 0)]
    pub rng_seed: u64,
}

#[derive(Args, Debug)]
pub struct TwistArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub word: Vec<usize>,
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub inverse: bool,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Run every identity check; exits 0 iff all pass.
    Verify {
        #[arg(long)]
        cartan: String,
        #[arg(long, value_delimiter = ',', required = true)]
        word: Vec<usize>,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, env = "CLUSTER_CRYSTAL_RNG_SEED", default_value_t = 0)]
        rng_seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum TropCommand {
    /// Apply `ẽ_j^n` (n > 0) or `f̃_j^{-n}` (n < 0).
    Act {
        #[arg(long, value_enum)]
        structure: Option<StructureArg>,
        #[arg(long)]
        j: usize,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        point: PathBuf,
    },
    /// Tropical mutation of an integer point.
    Mutate {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        k: Vec<i64>,
        #[arg(long)]
        point: PathBuf,
    },
    /// Check the crystal axioms on random box points; exits 0 iff all pass.
    Check(TropCheckArgs),
    /// Crystal graph of a box, in DOT.
    Graph(GraphArgs),
}

#[derive(Args, Debug)]
pub struct TropCheckArgs {
    #[command(flatten)]
    pub source: SeedSource,
    /// Structure to check; both when omitted.
    #[arg(long, value_enum)]
    pub structure: Option<StructureArg>,
    #[arg(long = "box", value_name = "R", default_value_t = 20)]
    pub radius: i64,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    /// `all` or a comma separated list.
    #[arg(long, default_value = "all")]
    pub letters: String,
    /// Also check every chart within this many mutations, and the gluing maps.
    #[arg(long, default_value_t = 0)]
    pub depth: usize,
    #[arg(long, env = "CLUSTER_CRYSTAL_RNG_SEED", default_value_t = 0)]
    pub rng_seed: u64,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    #[command(flatten)]
    pub source: SeedSource,
    #[arg(long, value_enum, default_value_t = StructureArg::A)]
    pub structure: StructureArg,
    #[arg(long = "box", value_name = "R")]
    pub radius: i64,
    #[arg(long, default_value = "all")]
    pub letters: String,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::usage(e.render().to_string().trim_end());
            eprintln!("{err}");
            return ExitCode::from(err.exit_code());
        }
    };
    match commands::run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}
