use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "psdcone", version, about = "Outer approximations of the PSD cone")]
pub struct Cli {
    /// Write a JSON run manifest (command, parameters, seed, version, output checksum).
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test whether a matrix belongs to a cone. Exit 0 if it does, 2 if not.
    Membership(MembershipArgs),
    /// Project a matrix onto the PSD cone and print the distance.
    Project(ProjectArgs),
    /// Construct one of the special matrices.
    Make(MakeArgs),
    /// Reproduce one of the distance theorems over a range of orders.
    Verify(VerifyArgs),
    /// Closed-form bounds on the k-PSD closure distance.
    Bounds(BoundsArgs),
    /// Largest sampled distance for a set and normalization.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConeArg {
    Psd,
    DdStar,
    SddStar,
    KPsd,
    Dd,
}

#[derive(Debug, Args)]
pub struct MembershipArgs {
    #[arg(long, value_enum)]
    pub cone: ConeArg,
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Submatrix order for `k-psd`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Absolute tolerance; defaults to 1e-9 · max(1, ‖X‖_F).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct MakeArgs {
    #[command(subcommand)]
    pub kind: MakeKind,
    /// Write the matrix here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum MakeKind {
    /// G(a, b, n) = (a + b)I − a·eeᵀ.
    G {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long)]
        n: usize,
    },
    /// Star matrix: unit last diagonal entry, ±½ in the last row/column.
    Star {
        #[arg(long)]
        n: usize,
        /// String over {+,-} of length n − 1.
        #[arg(long, allow_hyphen_values = true)]
        signs: String,
    },
    /// G(1/n, 1/n, n).
    WorstSdd {
        #[arg(long)]
        n: usize,
    },
    /// Vertex candidate with unit diagonal entry at q (1-based).
    Candidate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, allow_hyphen_values = true)]
        signs: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub theorem: u8,
    /// Orders to check, `LO..HI` (inclusive) or a single `N`.
    #[arg(long, value_parser = parse_range)]
    pub n: RangeInclusive<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
    /// Candidates mixed into each DD* sample.
    #[arg(long, default_value_t = psdcone::analysis::DEFAULT_MIXTURE)]
    pub mixture: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    DdStar,
    SddStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Trace,
    Frobenius,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub set: SetArg,
    #[arg(long, value_enum)]
    pub normalization: NormArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = psdcone::analysis::DEFAULT_MIXTURE)]
    pub mixture: usize,
}

pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{t}` is not a non-negative integer"))
    };
    match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(format!("empty range {lo}..{hi}"));
            }
            Ok(lo..=hi)
        }
        None => {
            let n = parse(s)?;
            Ok(n..=n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..12").unwrap(), 2..=12);
        assert_eq!(parse_range("2..=12").unwrap(), 2..=12);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn hyphen_sign_patterns_parse() {
        let cli = Cli::try_parse_from(["psdcone", "make", "star", "--n", "3", "--signs", "-+"]).unwrap();
        match cli.command {
            Command::Make(MakeArgs { kind: MakeKind::Star { signs, .. }, .. }) => assert_eq!(signs, "-+"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn command_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
