use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Pauli index {0} out of range (expected 1..=3)")]
    PauliIndex(usize),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("partial trace needs a nonempty keep set")]
    EmptyKeep,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("steering functional defined for n = 2 or 3, got {0}")]
    SettingsCount(usize),

    #[error("invalid measurement settings: {0}")]
    InvalidSettings(String),

    #[error("invalid cloner spec: {0}")]
    InvalidSpec(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("unphysical Bell-diagonal triple ({c1}, {c2}, {c3}): eigenvalue {eigenvalue}")]
    UnphysicalTriple {
        c1: f64,
        c2: f64,
        c3: f64,
        eigenvalue: f64,
    },

    #[error("theorem hypothesis unmet: {0}")]
    Hypothesis(String),

    #[error("theorem bound violated: {0}")]
    BoundViolated(String),

    #[error("machine Gram matrix is not PSD (min eigenvalue {0:e}); spec is unrealizable")]
    Unrealizable(f64),

    #[error("isometry check failed: ‖V†V − I‖ = {0:e}")]
    NotIsometry(f64),

    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
