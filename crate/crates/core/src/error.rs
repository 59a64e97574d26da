use thiserror::Error;

/// Every failure the library can report.
///
/// Variant names double as the stable diagnostic names printed by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("`{op}` expects {expected} argument(s), got {found}")]
    ArityMismatch { op: String, expected: usize, found: usize },
    #[error("line {line}: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("operation `{0}` declared twice")]
    DuplicateOp(String),
    #[error("the tree is infinite (a cycle is reachable from the root)")]
    InfiniteTree,
    #[error("not an increasing chain at position {0}")]
    NotAChain(usize),
    #[error("no periodic closure with at most {bound} states (needed {needed})")]
    NotRational { bound: usize, needed: usize },
    #[error("presentation `{0}` has no exact canonical forms")]
    NotExact(String),
    #[error("presentation `{0}` needs an explicit depth bound")]
    DepthRequired(String),
    #[error("unknown built-in presentation `{0}`")]
    UnknownBuiltin(String),
    #[error("bad parameters for `{name}`: {message}")]
    BadParams { name: String, message: String },
    #[error("{found} distinct children exceed the capacity {cap}")]
    CapacityExceeded { cap: usize, found: usize },
    #[error("elements belong to different presentations (`{0}` vs `{1}`)")]
    MixedPresentations(String, String),
    #[error("order query undecided within depth bound {0}")]
    Undecided(usize),
    #[error("presentation `{0}` has no stage enumerator")]
    NoEnumerator(String),
    #[error("stage would exceed the size cap {cap}")]
    CapExceeded { cap: usize },
    #[error("`{0}` is not a valid cut point (must be a nullary operation or a variable)")]
    BadCutPoint(String),
    #[error("equation for `{0}` is unguarded")]
    Unguarded(String),
    #[error("{0}")]
    Precondition(String),
}

impl Error {
    /// The variant name, used as the diagnostic tag on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            Error::UnknownOp(_) => "UnknownOp",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::SyntaxError { .. } => "SyntaxError",
            Error::DuplicateOp(_) => "DuplicateOp",
            Error::InfiniteTree => "InfiniteTree",
            Error::NotAChain(_) => "NotAChain",
            Error::NotRational { .. } => "NotRational",
            Error::NotExact(_) => "NotExact",
            Error::DepthRequired(_) => "DepthRequired",
            Error::UnknownBuiltin(_) => "UnknownBuiltin",
            Error::BadParams { .. } => "BadParams",
            Error::CapacityExceeded { .. } => "CapacityExceeded",
            Error::MixedPresentations(..) => "MixedPresentations",
            Error::Undecided(_) => "Undecided",
            Error::NoEnumerator(_) => "NoEnumerator",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::BadCutPoint(_) => "BadCutPoint",
            Error::Unguarded(_) => "Unguarded",
            Error::Precondition(_) => "Precondition",
        }
    }

    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::SyntaxError {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
