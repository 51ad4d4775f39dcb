use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "shadowsum", version, about = "Modular data, fusion rules and link invariants in surface x circle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Largest Weyl group order to enumerate.
    #[arg(long, global = true)]
    pub weyl_cap: Option<u128>,

    /// Tolerance for the matrix identities.
    #[arg(long, global = true, value_parser = positive)]
    pub tol_modular: Option<f64>,

    /// Tolerance between Verlinde values and Racah integers.
    #[arg(long, global = true, value_parser = positive)]
    pub tol_fusion: Option<f64>,

    /// Relative tolerance between the shadow and torus-gauge routes.
    #[arg(long, global = true, value_parser = positive)]
    pub tol_theorem: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Alcove, S, T, C and quantum dimensions.
    Modular(Target),
    /// Fusion tables from the Verlinde formula and the quantum Racah formula.
    Fusion(Target),
    /// Shadow invariant |X_L| of a link document, cross-checked against the CS sum.
    Shadow(LinkArgs),
    /// Torus-gauge state sum ST_CS of a link document, cross-checked against |X_L|.
    CsSum(LinkArgs),
    /// Normalized Wilson loop observable by both routes.
    Wlo(LinkArgs),
    /// Run the invariant suite on one (algebra, level) pair or the default grid.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct Target {
    #[arg(long)]
    pub algebra: String,
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    pub level: i64,
}

#[derive(Args, Debug)]
pub struct LinkArgs {
    /// Link document (JSON); `-` reads standard input.
    pub input: PathBuf,
    /// Overrides the algebra named in the document.
    #[arg(long)]
    pub algebra: Option<String>,
    /// Overrides the level named in the document.
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    pub level: Option<i64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub algebra: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    pub level: Option<i64>,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}
