//! Error type shared by all modules.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or analysing a circuit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A physical parameter violates its invariant (non-positive, NaN, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A grid or lattice cannot represent the requested problem.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operator and state (or basis) do not belong together.
    #[error("incompatible basis: {0}")]
    Incompatible(String),

    /// A function argument is out of range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Metastable-well state selection found fewer than two localized states.
    #[error("no metastable qubit: {0}")]
    NoMetastableQubit(String),

    /// The two wells are degenerate and "shallow" is undefined.
    #[error("ambiguous well selection: {0}")]
    AmbiguousWells(String),

    /// An eigensolver failed or did not reach its tolerance.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A sweep produced no usable points.
    #[error("empty result: {0}")]
    EmptyResult(String),

    /// Bad configuration file or CSV input.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code: 1 for invalid input, 2 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_)
            | Error::Domain(_)
            | Error::Incompatible(_)
            | Error::InvalidArgument(_)
            | Error::Config(_)
            | Error::Io(_) => 1,
            Error::NoMetastableQubit(_)
            | Error::AmbiguousWells(_)
            | Error::Numeric(_)
            | Error::EmptyResult(_) => 2,
        }
    }
}
