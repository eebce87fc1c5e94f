//! Batch front end for `dfchar`: fixtures, computations, verification suites
//! and character tables, reported as deterministic JSON.

pub mod commands;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dfchar::complex::DEFAULT_BUDGET;

pub use report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "dfchar", version, about = "Exact discrete differential characters on simplicial complexes")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    /// Rational below the exact-size limit, iterative above it.
    Auto,
    Exact,
    Iterative,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Named fixture, e.g. torus, genus2, rp3, cp2, sphere2, grid3, lens5_2, or A*B.
    #[arg(long, global = true)]
    pub space: Option<String>,
    /// Complex JSON file.
    #[arg(long, global = true, conflicts_with = "space")]
    pub input: Option<PathBuf>,
    /// Degree.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub k: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Weights JSON file {"k": [w per simplex]}.
    #[arg(long, global = true)]
    pub weights: Option<PathBuf>,
    /// Solver tolerance as a rational, e.g. 1/10000000000.
    #[arg(long, global = true)]
    pub tol: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Solver::Auto)]
    pub solver: Solver,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,
    /// Largest number of simplices a construction may create.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Add wall time to the report; the output is then no longer reproducible.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a complex and print it with its f-vector.
    Build,
    /// Integral cohomology with generators.
    Cohomology,
    /// Character group structure in degree --k, or the whole table.
    Characters,
    /// Smooth dual structure in degree --k, or all degrees, against duality.
    Dual,
    /// Character tables; `A*B` names use the Künneth formula.
    Tables,
    /// Sparks: construction, invariants, products and pairings.
    #[command(subcommand)]
    Spark(SparkCmd),
    /// Hodge decomposition, Hodge sparks and Abel–Jacobi periods.
    #[command(subcommand)]
    Hodge(HodgeCmd),
    /// Algebraic Morse theory for an acyclic matching.
    Morse(MorseCmd),
    /// Circle functions, lattice connections and gerbes.
    #[command(subcommand)]
    Lowdeg(LowdegCmd),
    /// Run the invariant suite on one space.
    Verify,
}

#[derive(Subcommand, Debug)]
pub enum SparkCmd {
    /// Spark from an integral cocycle file, or a random spark of degree --k.
    New {
        #[arg(long)]
        cocycle: Option<PathBuf>,
    },
    /// Curvature φ = δa + R.
    D1 {
        #[arg(long)]
        spark: PathBuf,
    },
    /// Integral class of R.
    D2 {
        #[arg(long)]
        spark: PathBuf,
    },
    /// Whether two sparks define the same character.
    Equiv {
        #[arg(long)]
        spark: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Holonomy on a cycle file, or on a lattice basis of cycles.
    Holonomy {
        #[arg(long)]
        spark: PathBuf,
        #[arg(long)]
        cycle: Option<PathBuf>,
    },
    /// Product of two sparks.
    Star {
        #[arg(long)]
        spark: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Pairing of complementary degrees on the fundamental class.
    Pair {
        #[arg(long)]
        spark: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Torsion linking matrix between H^{k+1} and H^{n-k}.
    Link,
}

#[derive(Subcommand, Debug)]
pub enum HodgeCmd {
    /// Harmonic, exact and coexact parts of a cochain.
    Project {
        #[arg(long)]
        cochain: PathBuf,
    },
    /// Green's operator applied to a cochain.
    Green {
        #[arg(long)]
        cochain: PathBuf,
    },
    /// Hodge spark (σ(R), R) of an integral cocycle.
    Spark {
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Abel–Jacobi periods of a chain, or of the path between two vertices.
    Aj {
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long, requires = "to")]
        from: Option<usize>,
        #[arg(long, requires = "from")]
        to: Option<usize>,
    },
    /// Whether all periods of a chain are integral.
    Principal {
        #[arg(long)]
        chain: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct MorseCmd {
    /// Matching JSON file; the greedy matching is used otherwise.
    #[arg(long, global = true)]
    pub matching: Option<PathBuf>,
    /// Use the empty matching.
    #[arg(long, global = true, conflicts_with = "matching")]
    pub empty: bool,
    #[command(subcommand)]
    pub op: MorseOp,
}

#[derive(Subcommand, Debug)]
pub enum MorseOp {
    /// The matching and its critical cells.
    Match,
    /// Boundary operator on critical cells and its homology.
    Complex,
    /// Projection P applied to a cochain.
    #[command(name = "P")]
    P {
        #[arg(long)]
        cochain: PathBuf,
    },
    /// Homotopy T applied to a cochain.
    #[command(name = "T")]
    T {
        #[arg(long)]
        cochain: PathBuf,
    },
    /// Spark (Tφ, Pφ) of a cocycle with integral critical periods.
    Spark {
        #[arg(long)]
        cochain: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum LowdegCmd {
    /// Circle-valued function from a file, or a random one.
    Circle {
        #[arg(long)]
        function: Option<PathBuf>,
    },
    /// Lattice connection from a file or a monopole, with a section.
    Conn {
        #[arg(long, conflicts_with = "monopole")]
        connection: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        monopole: Option<i64>,
        /// Vertex phases {"values": [...]}; random when absent.
        #[arg(long)]
        section: Option<PathBuf>,
    },
    /// Gerbe from a file, or the flat gerbe with the given surface holonomy.
    Gerbe {
        #[arg(long, conflicts_with = "fraction")]
        gerbe: Option<PathBuf>,
        #[arg(long)]
        fraction: Option<String>,
        /// Cover JSON; closed vertex stars otherwise.
        #[arg(long)]
        cover: Option<PathBuf>,
    },
}

/// What a run produced: text for standard output, diagnostics, exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Parses a command line (including the program name) and runs it.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => commands::execute(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_PASS, stdout: text, stderr: String::new() }
            }
        }
    }
}
