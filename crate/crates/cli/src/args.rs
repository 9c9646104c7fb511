use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rsr_core::C64;

use crate::parse::{parse_complex, parse_pair, parse_triple};

#[derive(Debug, Parser)]
#[command(name = "rsr", version, about = "Character varieties, abelianization monodromy and the dodecahedral RSR example")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Flat key=value file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tol_alg: Option<f64>,
    #[arg(long, global = true)]
    pub tol_char: Option<f64>,
    #[arg(long, global = true)]
    pub tol_mono: Option<f64>,
    #[arg(long, global = true)]
    pub tol_root: Option<f64>,
    /// Accepted-step budget per transported path.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to a file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

impl Format {
    pub fn name(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
            Format::Text => "text",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Character-variety utilities.
    Charvar {
        #[command(subcommand)]
        op: CharvarOp,
    },
    /// Hyperbolic tetrahedron data.
    Lorentz {
        #[command(subcommand)]
        op: LorentzOp,
    },
    /// Cyclic covering checks.
    Covering {
        #[command(subcommand)]
        op: CoveringOp,
    },
    /// Monodromy of one connection.
    Monodromy(MonodromyArgs),
    /// Real η-invariant locus sweep.
    Locus(LocusArgs),
    /// Solve Re tr Y = target on a real slice.
    Match(MatchArgs),
    /// Rank of the (a, τ) ↦ (x, y) Jacobian.
    Jacobian(JacobianArgs),
    /// Spin classes under grafting.
    Spin(SpinArgs),
}

#[derive(Debug, Subcommand)]
pub enum VerifyTarget {
    /// All trace, order and word identities of the dodecahedral example.
    Dodeca {
        /// Overrides --tol-alg.
        #[arg(long)]
        tol: Option<f64>,
        /// Same as --format json.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Surface {
    Torus,
    Sphere,
}

#[derive(Debug, Clone, Args)]
pub struct WeightArgs {
    /// l/k. Torus commands read r, sphere commands read r̃.
    #[arg(long)]
    pub weight: String,
    /// Map weights outside the canonical range to their mirror instead of rejecting.
    #[arg(long)]
    pub normalize_weight: bool,
}

#[derive(Debug, Subcommand)]
pub enum CharvarOp {
    /// Fricke residual of trace coordinates.
    Residual {
        #[arg(long, value_enum)]
        surface: Surface,
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        coords: [C64; 3],
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Torus traces (x, y, z) at r to sphere traces at r̃.
    Abelianize {
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        coords: [C64; 3],
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Sphere traces at r̃ to all torus lifts.
    Lift {
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        coords: [C64; 3],
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Both z with (x, y, z) on the torus variety at r.
    SolveZ {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        x: C64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        y: C64,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// SU(2) / SL(2,R) / not real.
    Classify {
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        coords: [C64; 3],
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Explicit X, Y realizing (x, y, z).
    Reconstruct {
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        coords: [C64; 3],
    },
    /// Genus of the cyclic cover for sphere weight r̃.
    Genus {
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// η-locus residual at real (x, y), torus weight r.
    Eta {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<f64>,
        #[command(flatten)]
        weight: WeightArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum LorentzOp {
    /// Dihedral cosine multiset and the six lift checks.
    Angles,
}

#[derive(Debug, Subcommand)]
pub enum CoveringOp {
    /// Kernel values of the local monodromies on the cyclic cover.
    Check {
        /// Sphere weight r̃ = l/k. Omit with --max-order to check every admissible weight.
        #[arg(long)]
        weight: Option<String>,
        #[arg(long, default_value = "+1,-1,-1", allow_hyphen_values = true)]
        signs: String,
        #[arg(long)]
        max_order: Option<i64>,
        #[arg(long)]
        normalize_weight: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct MonodromyArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: C64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub chi: C64,
    /// Torus weight r, decimal or l/k.
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: f64,
    /// Also transport along homotopic wiggly loops.
    #[arg(long)]
    pub homotopy: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChiArg {
    /// χ₀ = π/(4τ), a real.
    Real,
    /// χ₀ = iπ/4, a imaginary.
    Imaginary,
}

#[derive(Debug, Clone, Args)]
pub struct LocusArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,
    /// Single modulus; without it a default scan over τ is run.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// Comma-separated moduli.
    #[arg(long, value_delimiter = ',', conflicts_with = "tau")]
    pub taus: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "real")]
    pub chi: ChiArg,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "-3,3")]
    pub range: (f64, f64),
    #[arg(long, default_value_t = 121)]
    pub samples: usize,
    /// Only rows flagged real.
    #[arg(long)]
    pub real_only: bool,
}

#[derive(Debug, Clone, Args)]
pub struct MatchArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: f64,
    #[arg(long, value_enum, default_value = "real")]
    pub chi: ChiArg,
    /// Slice-parameter bracket; defaults to [a₀, a₀ + 1.6] with a₀ = −π/(4τ).
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub bracket: Option<(f64, f64)>,
    #[arg(long, default_value_t = 60)]
    pub max_evals: usize,
}

#[derive(Debug, Clone, Args)]
pub struct JacobianArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,
    #[arg(long, default_value_t = 1e-4)]
    pub h: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SpinArgs {
    /// Initial class, e.g. +,-.
    #[arg(long, default_value = "+,+", allow_hyphen_values = true)]
    pub state: String,
    /// Grafting sequence such as xyx.
    #[arg(long, default_value = "")]
    pub graft: String,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Translation length of the grafting monodromy.
    #[arg(long, default_value_t = 1.0)]
    pub ell: f64,
}
