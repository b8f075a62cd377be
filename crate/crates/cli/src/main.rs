mod commands;
mod manifest;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ffgaps::Error;

/// Exact experiments with primes and primitive roots in F_q[t].
#[derive(Debug, Parser)]
#[command(name = "ffgaps", version)]
pub struct Cli {
    /// Emit JSON instead of tab-separated text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the run manifest to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe the field F_q: modulus, generator, optionally every element.
    Field {
        #[arg(long)]
        q: u64,
        /// List elements with their discrete logs and orders.
        #[arg(long)]
        elements: bool,
    },
    /// Factor polynomials (arguments, or one per line on stdin) as JSON lines.
    Factor {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        seed: Option<u64>,
        polys: Vec<String>,
    },
    /// The d-th power residue symbol (a/b)_d for monic b.
    Symbol {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        a: String,
        b: String,
    },
    /// Primitive roots modulo primes.
    #[command(subcommand)]
    Primroot(PrimrootCmd),
    /// Admissible tuples.
    #[command(subcommand)]
    Tuple(TupleCmd),
    /// Sieve weights and sums.
    #[command(subcommand)]
    Sieve(SieveCmd),
    /// Genus formulas and the Castelnuovo bound.
    #[command(subcommand)]
    Genus(GenusCmd),
    /// Count degree-l primes in P_r against the predicted density.
    Density(DensityArgs),
    /// The explicit admissible 105-tuple and its gap bound.
    Example5 {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value = "t")]
        g: String,
    },
    /// W, alpha, weights, sums and the gap report from one config file.
    Pipeline {
        #[arg(long)]
        config: std::path::PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exp,
    Reciprocity,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum PrimrootCmd {
    /// List P_g over a degree range with gaps; optionally scan shifts of a tuple.
    Scan {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "t")]
        g: String,
        #[arg(long)]
        lo: usize,
        #[arg(long)]
        hi: usize,
        /// Comma-separated tuple elements.
        #[arg(long)]
        tuple: Option<String>,
        /// Minimum shifts in P_g for a hit (default min(2, k)).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Brute-force count of primitive polynomials against phi(q^n - 1)/n.
    Count {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
    },
    /// Order of g modulo a prime p.
    Check {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        g: String,
        #[arg(long)]
        p: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum TupleCmd {
    /// g times the first k primes of norm exceeding k.
    Build {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1")]
        g: String,
    },
    /// Admissibility certificate for explicit elements.
    Check {
        #[arg(long)]
        q: u64,
        elements: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SieveCmd {
    /// Weights, S_1, S_2 and main terms for a config file.
    Run {
        #[arg(long)]
        config: std::path::PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenusCmd {
    Kummer {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: String,
        #[arg(long)]
        r: u64,
    },
    Cyclotomic {
        #[arg(long)]
        q: u64,
        #[arg(long = "M", alias = "m")]
        m: String,
    },
    Castelnuovo {
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        g1: u64,
        #[arg(long)]
        n2: u64,
        #[arg(long)]
        g2: u64,
    },
    /// Bound for K(g^(1/r), Lambda_M) composed from the two formulas.
    Compositum {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "t")]
        g: String,
        #[arg(long)]
        r: u64,
        #[arg(long = "M", alias = "m")]
        m: String,
    },
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub l: usize,
    /// A single prime r; every admissible r when omitted.
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long = "M", alias = "m", default_value = "1")]
    pub m: String,
    #[arg(long, default_value = "t")]
    pub g: String,
    #[arg(long, default_value = "1")]
    pub alpha: String,
}

/// Failures with their exit codes.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => 3,
            CliError::Core(Error::Mismatch(_)) => 4,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
