use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "dhardy",
    version,
    about = "Discrete Hardy-space operators, bounds and certificates"
)]
pub struct Cli {
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Cap on worker threads for parallel harnesses.
    #[arg(long, global = true, env = "DISCRETE_HARDY_THREADS")]
    pub threads: Option<usize>,

    /// Omit the `generated_at` field so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply an operator at a point or over a window.
    Apply {
        #[arg(value_enum)]
        operator: OperatorKind,
        #[command(flatten)]
        input: SeqInput,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// Defaults to (1 - gamma) / 2.
        #[arg(long)]
        alpha: Option<f64>,
        /// Defaults to (1 - gamma) / 2.
        #[arg(long)]
        beta: Option<f64>,
        /// Use the FFT path for window evaluation (hilbert, riesz).
        #[arg(long)]
        fast: bool,
    },
    /// ℓ^p norm or H^p quasi-norm enclosure.
    Norm {
        #[command(subcommand)]
        kind: NormCmd,
    },
    /// Validate, generate or project atoms.
    Atom {
        #[command(subcommand)]
        action: AtomCmd,
    },
    /// The second-difference counter-example.
    Counterexample {
        #[command(subcommand)]
        action: CounterCmd,
    },
    /// Empirical inequality harnesses.
    Lab {
        #[command(subcommand)]
        action: LabCmd,
    },
    /// Direct vs FFT throughput of the Hilbert transform.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [1024usize, 2048, 4096, 8192, 16384])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Hilbert,
    Maximal,
    Riesz,
    Frac,
}

impl OperatorKind {
    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Hilbert => "hilbert",
            OperatorKind::Maximal => "maximal",
            OperatorKind::Riesz => "riesz",
            OperatorKind::Frac => "frac",
        }
    }
}

/// A sequence given inline or as a file, both as `{"offset": n, "values": [...]}`.
#[derive(Args, Debug, Clone)]
pub struct SeqInput {
    /// Inline sequence JSON.
    #[arg(long, conflicts_with = "input")]
    pub seq: Option<String>,
    /// Path to a sequence JSON file.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Single evaluation point.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["j_lo", "j_hi"])]
    pub j: Option<i64>,
    /// First index of an evaluation window.
    #[arg(long, allow_hyphen_values = true, requires = "j_hi")]
    pub j_lo: Option<i64>,
    /// Last index of an evaluation window.
    #[arg(long, allow_hyphen_values = true, requires = "j_lo")]
    pub j_hi: Option<i64>,
}

#[derive(Subcommand, Debug)]
pub enum NormCmd {
    /// ‖b‖_p for p in (0, inf]; pass `inf` for the sup norm.
    Lp {
        #[command(flatten)]
        input: SeqInput,
        #[arg(long)]
        p: f64,
    },
    /// Enclosure of ‖b‖_p + ‖Hb‖_p for p in (0, 1].
    Hardy {
        #[command(flatten)]
        input: SeqInput,
        #[arg(long)]
        p: f64,
        #[arg(long = "J", default_value_t = 10_000)]
        cutoff: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct AtomArgs {
    #[arg(long)]
    pub p: f64,
    /// Size exponent; `inf` allowed.
    #[arg(long, default_value_t = f64::INFINITY)]
    pub q: f64,
    /// Moment degree; defaults to floor(1/p - 1).
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    pub center: i64,
    #[arg(long, default_value_t = 1)]
    pub half_width: u64,
}

#[derive(Subcommand, Debug)]
pub enum AtomCmd {
    /// Check support, size and moment conditions.
    Validate {
        #[command(flatten)]
        input: SeqInput,
        #[command(flatten)]
        spec: AtomArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Draw a random atom.
    Random {
        #[command(flatten)]
        spec: AtomArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Nearest sequence on a window with vanishing moments through `degree`.
    Project {
        #[command(flatten)]
        input: SeqInput,
        #[arg(long)]
        degree: u32,
        /// Defaults to the support of the input.
        #[arg(long, allow_hyphen_values = true, requires = "window_hi")]
        window_lo: Option<i64>,
        #[arg(long, allow_hyphen_values = true, requires = "window_lo")]
        window_hi: Option<i64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CounterCmd {
    /// Enclosure of Σ_j (U_γ b)(j).
    Sum {
        #[arg(long)]
        gamma: f64,
        #[arg(long = "J", default_value_t = 1_000_000)]
        cutoff: u64,
    },
    /// Step-by-step check of the inequalities giving a negative sum.
    Chain {
        #[arg(long)]
        gamma: f64,
    },
    /// Enclosure of the first root of g - h in (0, 1/3).
    Epsilon {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Non-boundedness certificate for U_γ : H^p → H^q.
    Certify {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        p: f64,
        /// Optional; must satisfy 1/q = 1/p - gamma.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long = "J", default_value_t = 1_000_000)]
        cutoff: u64,
    },
    /// Sign of the image sum over a grid of gamma values.
    Scan {
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<f64>,
        #[arg(long = "J", default_value_t = 100_000)]
        cutoff: u64,
    },
    /// Image sums of moment-free projections of b on growing windows.
    Probe {
        #[arg(long)]
        gamma: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 4, 8, 16])]
        half_widths: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long = "J", default_value_t = 10_000)]
        cutoff: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum LabCmd {
    /// Hilbert's inequality with constant 2π on random inputs.
    HilbertIneq {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 64)]
        max_support: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hardy-Littlewood-Pólya empirical constants across sizes.
    Hlp {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// H(H b) = -b on a truncated window.
    Involution {
        #[command(flatten)]
        input: SeqInput,
        #[arg(long = "J", default_value_t = 10_000)]
        cutoff: u64,
    },
    /// Level-set counts of the maximal function.
    WeakType {
        #[command(flatten)]
        input: SeqInput,
        #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.2, 0.5])]
        alphas: Vec<f64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        window_lo: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        window_hi: i64,
    },
    /// Pointwise I₁ / I₂ / I₃ estimates for T_{α,β} with γ = 0.
    Domination {
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 64)]
        max_j0: i64,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// ‖T a‖_q over random atoms of growing width.
    AtomSweep {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        gamma: f64,
        /// Optional; must satisfy 1/q = 1/p - gamma.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1u64, 4, 16, 64])]
        m_values: Vec<u64>,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Delta and logarithmic unboundedness examples.
    UnboundedDemo {
        #[arg(long)]
        gamma: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [100u64, 10_000, 1_000_000])]
        cutoffs: Vec<u64>,
    },
}
