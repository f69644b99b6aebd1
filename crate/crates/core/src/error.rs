use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("input is not conjugate-symmetric: mode {mode:?} deviates by {deviation:e}")]
    Asymmetric { mode: [i32; 3], deviation: f64 },

    #[error("field invariant violated: {0}")]
    InvariantViolation(String),

    #[error("physical grid too small: need at least {required} points per axis, got {got}")]
    GridTooSmall { required: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("time {t} outside trajectory interval [0, {end}]")]
    OutOfRange { t: f64, end: f64 },

    #[error("solution blew up at t = {time}: ||u||_1 = {norm:e} exceeds guard")]
    BlowUp { time: f64, norm: f64 },

    #[error("non-finite coefficient encountered at t = {time}")]
    NonFinite { time: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
