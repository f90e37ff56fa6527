use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "padic-spectrum",
    version,
    about = "Certified spectra of the p-adic tree derivative"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// The prime p.
    #[arg(long, default_value_t = 2)]
    pub p: u64,

    /// Relative precision target in decimal digits (at least 6).
    #[arg(long, env = "PADIC_SPECTRUM_DIGITS", default_value_t = 12)]
    pub digits: u32,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
    /// Graphviz, `tree` only.
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Prefactor `(1 - 1/p)/(1 - p^{1-2s})` and reference sequence `pⁿ`.
    Paper,
    /// Multiplicity-generating prefactor and `p^{2n-2}` reference sequence.
    Verified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrefactorArg {
    Paper,
    Totient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReferenceArg {
    Paper,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaKind {
    /// ζ of the half-line operator.
    D0,
    /// ζ of the full operator, prefactor times ζ_{D₀}.
    D,
    /// Tr (D*D)^{-s} for real s > 1/2.
    Trace,
    /// ζ of the full operator summed pair by pair.
    Double,
    /// ζ_{D₀} by reference-sequence subtraction, Re s > -2.
    Continued,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified brackets for λ_1..λ_count.
    Eigenvalues {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        count: u32,
    },
    /// Expansion coefficients of the eigenvector for λ_n and its residual.
    Eigenvector {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Number of coefficients K.
        #[arg(long, default_value_t = 25)]
        terms: u32,
        /// Sites used for the residual.
        #[arg(long, default_value_t = 60)]
        samples: usize,
    },
    /// Eigenvalues of D*D with multiplicities up to a cutoff.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Upper limit, as a decimal or fraction.
        #[arg(long, default_value = "100")]
        cutoff: String,
    },
    /// Spectral zeta values and pole lists.
    Zeta {
        #[command(flatten)]
        common: Common,
        /// `re` or `re,im`.
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        s: String,
        #[arg(long, value_enum, default_value_t = ZetaKind::D)]
        which: ZetaKind,
        /// Absolute error budget.
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Mode::Verified)]
        mode: Mode,
        /// Overrides the prefactor chosen by --mode.
        #[arg(long, value_enum)]
        prefactor_mode: Option<PrefactorArg>,
        /// Overrides the reference sequence chosen by --mode.
        #[arg(long, value_enum)]
        reference_mode: Option<ReferenceArg>,
        /// Also list poles with |k| ≤ this value.
        #[arg(long)]
        poles: Option<u32>,
    },
    /// Vertices of the truncated tree.
    Tree {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        depth: u32,
    },
    /// Re-run the oracle checks; exit status 1 if any fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Half-line truncation size.
        #[arg(long = "n", default_value_t = 60)]
        n: u32,
        #[arg(long, default_value_t = 5)]
        count: u32,
        /// Tree depth for the multiplicity check.
        #[arg(long, default_value_t = 6)]
        depth: u32,
    },
}
