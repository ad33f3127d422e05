use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("lattice is disconnected: {components} components")]
    Disconnected { components: usize },

    #[error("dot region {dot} is empty")]
    EmptyDot { dot: usize },

    #[error("pruning removed every site")]
    EmptyLattice,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "eigensolver did not converge after {iterations} iterations \
         ({converged}/{requested} pairs, worst residual {worst_residual:.3e})"
    )]
    NoConvergence {
        iterations: usize,
        converged: usize,
        requested: usize,
        worst_residual: f64,
    },

    #[error("singular shifted matrix at pivot {pivot}")]
    SingularShift { pivot: usize },

    #[error("not enough confined states: found {found}, need {needed}")]
    NotConfined { found: usize, needed: usize },

    #[error("orbital for dot {dot} has localization {fraction:.3} below {threshold}")]
    Delocalized {
        dot: usize,
        fraction: f64,
        threshold: f64,
    },

    #[error("pulse `{label}` is not in the operation set of pair {pair} ({flavor})")]
    InvalidPulse {
        label: String,
        pair: usize,
        flavor: String,
    },

    #[error("invalid pulse schedule: {0}")]
    InvalidSchedule(String),

    #[error("gate compilation failed: {0}")]
    Compilation(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty sweep: {0}")]
    EmptySweep(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable snake-case name of the variant, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGeometry(_) => "invalid_geometry",
            Error::Disconnected { .. } => "disconnected",
            Error::EmptyDot { .. } => "empty_dot",
            Error::EmptyLattice => "empty_lattice",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::NoConvergence { .. } => "no_convergence",
            Error::SingularShift { .. } => "singular_shift",
            Error::NotConfined { .. } => "not_confined",
            Error::Delocalized { .. } => "delocalized",
            Error::InvalidPulse { .. } => "invalid_pulse",
            Error::InvalidSchedule(_) => "invalid_schedule",
            Error::Compilation(_) => "compilation",
            Error::Parse { .. } => "parse",
            Error::EmptySweep(_) => "empty_sweep",
            Error::Io(_) => "io",
        }
    }
}
