use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration guard exceeded: {0}")]
    Guard(String),
    #[error("not a closed pseudo-manifold: {0}")]
    NotPseudoManifold(String),
    #[error("unknown manifold: {0}")]
    UnknownManifold(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("points not in general position: {reason} (points {points:?})")]
    GeneralPosition { reason: String, points: Vec<usize> },
    #[error("{kind} id {id} out of range ({len})")]
    IdOutOfRange { kind: &'static str, id: usize, len: usize },
    #[error("chain is not a cycle: {0} boundary violations")]
    NotCycle(usize),
    #[error("complex is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("parity precondition: {0}")]
    Parity(String),
    #[error("topology precondition: {0}")]
    Topology(String),
    #[error("qubit count {0} exceeds the cap of {1}")]
    SizeGuard(usize, usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
