use thiserror::Error;

/// Errors produced by the simulator and the numerical evaluators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported contestant count {0} (expected 3 or 4)")]
    UnsupportedContestants(usize),

    #[error("half-apple count {0} out of range (expected 0..=3 halves)")]
    HalfIntegerRange(u8),

    #[error("qubit index {index} out of range for a {qubits}-qubit state")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{name} = {value} is outside [0, 1]")]
    OutOfUnitInterval { name: &'static str, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("team has {team} contestants but the game expects {game}")]
    ArityMismatch { team: usize, game: usize },

    #[error("transcript has no played rounds")]
    EmptyTranscript,

    #[error("apple total {halves}/2 is not an integer")]
    NonIntegerTotal { halves: u32 },

    #[error("limit did not converge below {tolerance} by N = {last_rounds}")]
    NonConvergence {
        tolerance: f64,
        last_rounds: u64,
        record: Vec<(u64, f64)>,
    },

    #[error("search space of {size} exceeds the configured bound {bound}")]
    ResourceGuard { size: u128, bound: u128 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfUnitInterval { name, value })
    }
}

pub(crate) fn check_contestants(c: usize) -> Result<usize> {
    match c {
        3 | 4 => Ok(c),
        _ => Err(Error::UnsupportedContestants(c)),
    }
}
