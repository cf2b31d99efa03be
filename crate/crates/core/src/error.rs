use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a valid prime spot (expected -1 or a rational prime)")]
    InvalidPrime(i128),
    #[error("zero argument where a nonzero rational is required")]
    ZeroArgument,
    #[error("{value} is not a unit at p = {p}")]
    NonUnit { value: String, p: i64 },
    #[error("singular form (determinant 0)")]
    SingularForm,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("polynomial has a repeated root")]
    RepeatedRoot,
    #[error("polynomial is not irreducible over Q: {0}")]
    NotAField(String),
    #[error("bad basis: {0}")]
    BadBasis(String),
    #[error("internal limit reached: {0}")]
    InternalLimit(String),
    #[error("cap exceeded: {0}")]
    LimitExceeded(String),
    #[error("splitting of p = {0} cannot be computed (p divides the index of every tried generator); supply it in the record")]
    UnsupportedSplitting(u64),
    #[error("p = {0} is wildly ramified")]
    Wild(u64),
    #[error("inconsistent data: {0}")]
    Consistency(String),
    #[error("Galois flag inconsistent with splitting shape: {0}")]
    FlagInconsistency(String),
    #[error("no applicable criterion: {0}")]
    NoApplicableTheorem(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("invariant failed: {0}")]
    InvariantFailure(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command line front end.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Parse { .. } | DuplicateLabel(_) | UnknownLabel(_) | BadBasis(_) | NotAField(_)
            | RepeatedRoot | Io(_) | InvalidPrime(_) | ZeroArgument | NonUnit { .. }
            | SingularForm | NotSymmetric | DimensionMismatch(_) | OutOfRange(_)
            | LimitExceeded(_) | InternalLimit(_) => 2,
            UnsupportedSplitting(_) | Wild(_) => 3,
            Hypothesis(_) | NoApplicableTheorem(_) | FlagInconsistency(_) => 4,
            Consistency(_) | InvariantFailure(_) => 5,
        }
    }

    /// Whether this failure comes from the tameness / splitting gate.
    pub fn is_tameness(&self) -> bool {
        matches!(self, Error::UnsupportedSplitting(_) | Error::Wild(_))
    }
}
