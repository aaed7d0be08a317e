use std::fmt;

use thiserror::Error;

use crate::state::PhotonLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A positioned problem in a text input (netlist or target document).
///
/// Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot normalize a zero vector")]
    ZeroVector,
    #[error("state is not normalized: squared norm {norm_sqr}")]
    StateNotNormalized { norm_sqr: f64 },
    #[error("photon label sets differ")]
    LabelMismatch,
    #[error("photon {0} appears more than once")]
    LabelCollision(PhotonLabel),
    #[error("photon label index must be >= 1")]
    InvalidLabel,
    #[error("target{} is not normalized: |alpha1|^2 + |alpha2|^2 = {norm_sqr}", for_label(.label))]
    NotNormalized { label: Option<PhotonLabel>, norm_sqr: f64 },
    #[error("expected {expected} photons, got {got}")]
    WrongPhotonCount { expected: usize, got: usize },
    #[error("empty stage list")]
    EmptyList,
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("mode {mode} out of range for a {num_modes}-mode circuit")]
    ModeOutOfRange { mode: usize, num_modes: usize },
    #[error("state spans {got} modes, circuit has {expected}")]
    ModeCountMismatch { expected: usize, got: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("post-selection probability{} is vanishing ({probability:e})", for_label(.label))]
    VanishingProbability {
        label: Option<PhotonLabel>,
        probability: f64,
    },
    #[error("dense state would need {size} entries")]
    StateTooLarge { size: String },
    #[error("value {0} out of range")]
    OutOfRange(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0}")]
    Diagnostic(Diagnostic),
}

fn for_label(label: &Option<PhotonLabel>) -> String {
    label.map(|l| format!(" for photon {l}")).unwrap_or_default()
}

impl Error {
    /// Parse problems, as opposed to domain errors.
    pub fn is_diagnostic(&self) -> bool {
        matches!(self, Error::Diagnostic(_))
    }
}

impl From<Diagnostic> for Error {
    fn from(d: Diagnostic) -> Self {
        Error::Diagnostic(d)
    }
}
