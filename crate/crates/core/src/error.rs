use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a fundamental discriminant")]
    InvalidCharacter(i64),
    #[error("pole at s = {0}")]
    Pole(String),
    #[error("precision target unreachable: {0}")]
    Precision(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("rotated L-value not real (imaginary residue {residue:e} at t = {t})")]
    Phase { t: f64, residue: f64 },
    #[error("contour passes too close to a zero: {0}")]
    Contour(String),
    #[error("zero list is empty")]
    EmptyList,
    #[error("tail bound too large: {0}")]
    Tail(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("series needs {needed:e} terms (cap {cap:e})")]
    Convergence { needed: f64, cap: f64 },
    #[error("raw representation overflows for k = {0}")]
    Overflow(u32),
    #[error("nearest zero not unique near s = {s}; try [{suggest_lo}, {suggest_hi}]")]
    Tie {
        s: f64,
        suggest_lo: f64,
        suggest_hi: f64,
    },
    #[error("no certified crossing up to k_max = {k_max} (onset K* = {onset})")]
    NoFindings { k_max: u32, onset: u64 },
    #[error("real zero does not dominate: {0}")]
    Dominance(String),
    #[error("no (a, b) pair found with |b| <= {0}")]
    Search(u64),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("zero data insufficient: {0}")]
    Height(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
