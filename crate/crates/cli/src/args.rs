//! Command-line arguments.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "reinhardt", version, about = "Serre-class decisions for hyperbolic Reinhardt domains in C²")]
pub struct Cli {
    /// Seed for every sampled check (decimal or 0x-prefixed hex).
    #[arg(long, global = true, env = "REINHARDT_SEED", default_value = "0xC0EFFEE", value_parser = parse_seed)]
    pub seed: u64,

    /// Write the main output here (atomically) instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide membership and print the verdict with its certificate.
    Classify {
        /// Model JSON file.
        model: PathBuf,
        /// Also re-verify the certificate (runs the numerical suites).
        #[arg(long)]
        verify: bool,
    },
    /// Recession cone of the log image and the hyperbolic-matrix search.
    Cone {
        model: PathBuf,
        /// Entry bound for the hyperbolic-matrix search.
        #[arg(long, default_value_t = 50)]
        entry_bound: u64,
    },
    /// Automorphism structure, generator and non-compactness witness.
    Aut { model: PathBuf },
    /// Plurisubharmonicity, exhaustion and boundedness checks.
    Stehle(StehleArgs),
    /// The non-membership construction for a hyperbolic-type model.
    Counterexample(CounterexampleArgs),
    /// Classify and verify every bundled model.
    Selftest {
        /// Skip the numerical certificate checks.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Args)]
pub struct StehleArgs {
    pub model: PathBuf,
    /// Exhaustion function; defaults to the one in the model's certificate.
    #[arg(long = "fn", value_enum)]
    pub function: Option<FnName>,
    /// JSON list of automorphisms; defaults to seeded random ones.
    #[arg(long)]
    pub aut_file: Option<PathBuf>,
    /// Log-moduli nodes per axis of the psh grid.
    #[arg(long, default_value_t = 20)]
    pub radial: usize,
    /// Arguments per coordinate of the psh grid.
    #[arg(long, default_value_t = 20)]
    pub angular: usize,
    /// Tolerance for the normalised minimum Levi eigenvalue.
    #[arg(long, default_value_t = 1e-6)]
    pub psh_tol: f64,
    /// Samples for the sublevel statistics.
    #[arg(long, default_value_t = 10_000)]
    pub exhaustion_samples: usize,
    /// Samples for the boundedness of `u∘F − u`.
    #[arg(long, default_value_t = 100_000)]
    pub bounded_samples: usize,
    /// Number of random automorphisms when no file is given.
    #[arg(long, default_value_t = 10)]
    pub automorphisms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FnName {
    U4,
    U5,
    #[value(name = "u5_rho")]
    U5Rho,
    #[value(name = "u_tilde6")]
    UTilde6,
    #[value(name = "rho_u_tilde6")]
    RhoUTilde6,
    U6,
    #[value(name = "u_parabolic")]
    UParabolic,
    #[value(name = "neg_square")]
    NegSquare,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    /// Hyperbolic-type model JSON; defaults to the bundled Coeuré–Loeb model.
    pub params: Option<PathBuf>,
    /// Comma-separated radii, each above 1.
    #[arg(long = "R-list", value_delimiter = ',', default_values_t = [1.5, 1.1, 1.01, 1.001])]
    pub r_list: Vec<f64>,
    /// Boundary samples (power of two); defaults to a size adapted to each R.
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Sign branch of the construction.
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,
    /// Format of the main output.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write the reduction table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Also write the blow-up plot as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Radii of the membership scan grid.
    #[arg(long, default_value_t = 32)]
    pub scan_radial: usize,
    /// Angles of the membership scan grid.
    #[arg(long, default_value_t = 256)]
    pub scan_angular: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus")]
    Minus,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn seeds_parse_in_both_radices() {
        assert_eq!(parse_seed("0xC0EFFEE"), Ok(0xC0EFFEE));
        assert_eq!(parse_seed("42"), Ok(42));
        assert!(parse_seed("0xZZ").is_err());
    }

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn counterexample_flags() {
        let cli = Cli::parse_from(["reinhardt", "counterexample", "--R-list", "1.5,1.1", "--N", "512", "--sign", "-"]);
        let Command::Counterexample(a) = cli.command else { panic!() };
        assert_eq!(a.r_list, vec![1.5, 1.1]);
        assert_eq!(a.n, Some(512));
        assert_eq!(a.sign, SignArg::Minus);
    }
}
