use std::path::PathBuf;

use blowsplit::rational::parse_rational;
use blowsplit::Rational;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "blowsplit", version, about = "Exact split-generation checks for point blowups")]
pub struct Cli {
    /// Novikov truncation E as p/q
    #[arg(long, global = true, default_value = "2/1")]
    pub cutoff: String,
    /// Embed cyclotomic output into this order (a multiple of the natural one)
    #[arg(long, global = true)]
    pub order: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Pn,
    Exceptional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TreeMode {
    Associahedron,
    Treed,
    Weighted,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    #[command(subcommand)]
    Trees(TreesCmd),
    #[command(subcommand)]
    Ainfty(AinftyCmd),
    #[command(subcommand)]
    Hh(HhCmd),
    #[command(subcommand)]
    Potential(PotentialCmd),
    #[command(subcommand)]
    Oc(OcCmd),
    #[command(subcommand)]
    Blowup(BlowupCmd),
    /// Run all acceptance checks and print a summary table
    VerifyAll(VerifyAllArgs),
}

#[derive(Debug, Subcommand)]
pub enum TreesCmd {
    /// Stable types counted by dimension
    Enumerate {
        #[arg(long)]
        boundary: usize,
        #[arg(long, default_value_t = 0)]
        interior: usize,
        #[arg(long, value_enum, default_value = "associahedron")]
        mode: TreeMode,
    },
}

#[derive(Debug, Subcommand)]
pub enum AinftyCmd {
    /// Check the A∞ relations, units and curvature of an algebra file
    Verify { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum HhCmd {
    /// Hochschild homology dimensions by degree up to a chain length
    Dims {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        length: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum PotentialCmd {
    /// Critical points, Hessians and Clifford algebras
    Crit(PotentialArgs),
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub eps: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum OcCmd {
    /// The quantized Fourier matrix with its determinant split
    Matrix(PotentialArgs),
}

#[derive(Debug, Subcommand)]
pub enum BlowupCmd {
    /// Quantum cohomology splitting and generation for Bl_p P^n
    Split {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: String,
    },
}

#[derive(Debug, Args)]
pub struct VerifyAllArgs {
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub hh_length: usize,
    #[arg(long, default_value = "1/10")]
    pub eps: String,
}

/// Only the exact form p/q is accepted on the command line.
pub fn rational(s: &str) -> blowsplit::Result<Rational> {
    if !s.contains('/') {
        return Err(blowsplit::Error::MalformedRational(s.to_string()));
    }
    parse_rational(s)
}
