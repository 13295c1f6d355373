use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilflow::liealg::Family;

pub const DEFAULT_SEED: u64 = nilflow::coadjoint::DEFAULT_SEED;

#[derive(Parser, Debug)]
#[command(
    name = "nilflow",
    version,
    about = "Exact computations on nilpotent Lie algebras and their Euler flows"
)]
pub struct Cli {
    /// Seed for every sampled computation.
    #[arg(long, global = true, env = "NILFLOW_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure report for an algebra; optionally extend it or save it.
    Algebra(AlgebraCmd),
    /// Casimir generators of the Lie–Poisson structure.
    Casimir(CasimirCmd),
    /// Generic rank of the Poisson matrix.
    Rank(RankCmd),
    /// Coadjoint orbit through a point of V_n*.
    Orbit(OrbitCmd),
    /// Integrate Euler or magnetic Euler equations.
    Flow(FlowCmd),
    /// Left-invariant forms: differentials, certificates, Betti numbers.
    Forms(FormsCmd),
    /// BCH group law: products, axiom checks, lattice closure.
    Group(GroupCmd),
    /// Regenerate reference tables into one report.
    Reproduce(ReproduceCmd),
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraSource {
    /// Algebra family (qn or vn); requires --dim.
    #[arg(long, requires = "dim", conflicts_with = "algebra")]
    pub family: Option<Family>,
    /// Dimension of the family member.
    #[arg(long, requires = "family")]
    pub dim: Option<usize>,
    /// Algebra file in JSON form.
    #[arg(long)]
    pub algebra: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AlgebraCmd {
    #[command(flatten)]
    pub source: AlgebraSource,
    /// Central extension by a 2-cocycle, as 1-based triples "i,j,c;i,j,c".
    #[arg(long)]
    pub extend: Option<String>,
    /// Include the invariant profile (generic rank, b1, b2).
    #[arg(long)]
    pub profile: bool,
    /// Write the (possibly extended) algebra to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct CasimirCmd {
    #[command(flatten)]
    pub source: AlgebraSource,
    /// Degree cap for the polynomial ansatz used outside the Q_n/V_n families.
    #[arg(long, default_value_t = nilflow::coadjoint::DEFAULT_ANSATZ_DEGREE)]
    pub max_degree: u32,
    /// `text` prints one generator per line.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct RankCmd {
    #[command(flatten)]
    pub source: AlgebraSource,
    /// Confirm the sampled rank with a symbolic minor and a term-rank bound.
    #[arg(long)]
    pub symbolic: bool,
}

#[derive(Args, Debug)]
pub struct OrbitCmd {
    #[command(flatten)]
    pub source: AlgebraSource,
    /// Point of 𝔤*, comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MonitorSet {
    /// H and every Casimir generator.
    Casimirs,
    /// H only.
    H,
    None,
}

#[derive(Args, Debug)]
pub struct FlowCmd {
    #[command(flatten)]
    pub source: AlgebraSource,
    /// `identity` or a JSON file holding a symmetric matrix of rationals.
    #[arg(long, default_value = "identity")]
    pub metric: String,
    /// Initial state, comma-separated floats.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = MonitorSet::Casimirs)]
    pub monitor: MonitorSet,
    /// Magnetic 2-cocycle as 1-based triples "i,j,c;...".
    #[arg(long)]
    pub cocycle: Option<String>,
    /// Comma-separated charges for a magnetic sweep (requires --cocycle).
    #[arg(long, requires = "cocycle", allow_hyphen_values = true)]
    pub charges: Option<String>,
    /// Also run the symbolic extension/magnetic equivalence checks.
    #[arg(long, requires = "cocycle")]
    pub check_equivalence: bool,
    /// Trajectory CSV; with several charges `_c<k>` is inserted before the extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormsCheck {
    /// Certify the standard 2-form (even dimension).
    Symplectic,
    /// Certify ω_n as a contact form.
    Contact,
    /// All Betti numbers b_0..b_n.
    Cohomology,
}

#[derive(Args, Debug)]
pub struct FormsCmd {
    #[command(flatten)]
    pub source: AlgebraSource,
    /// Standard checks; may be repeated.
    #[arg(long, value_enum)]
    pub check: Vec<FormsCheck>,
    /// Form to differentiate, e.g. "w5" or "3*w1^w4 + w2^w3".
    #[arg(long, allow_hyphen_values = true)]
    pub differential: Option<String>,
    /// 2-form to certify, or `standard` for the family form on V_{2m}.
    #[arg(long, allow_hyphen_values = true)]
    pub symplectic: Option<String>,
    /// 1-form to certify, or `standard` for ω_n.
    #[arg(long, allow_hyphen_values = true)]
    pub contact: Option<String>,
    /// Betti numbers b_0..b_P.
    #[arg(long)]
    pub betti: Option<usize>,
    /// Verify d∘d = 0 on every basis form.
    #[arg(long)]
    pub check_d2: bool,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GroupCmd {
    #[command(flatten)]
    pub source: AlgebraSource,
    /// Two elements, each comma-separated rationals.
    #[arg(long, num_args = 2, value_names = ["U", "V"], allow_hyphen_values = true)]
    pub mul: Option<Vec<String>>,
    /// Check the group axioms on this many seeded random triples.
    #[arg(long)]
    pub axioms: Option<usize>,
    /// Test closure of integer points with coordinates in [-R, R].
    #[arg(long, value_name = "R")]
    pub lattice: Option<i64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReproduceTarget {
    PaperTables,
}

#[derive(Args, Debug)]
pub struct ReproduceCmd {
    #[arg(value_enum)]
    pub target: ReproduceTarget,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
