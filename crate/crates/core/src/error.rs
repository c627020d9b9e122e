use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: char, rank: usize },
    #[error("simple-root index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("not a root: {0}")]
    NotARoot(String),
    #[error("invalid parabolic set: {0}")]
    InvalidXi(String),
    #[error("Ξ⁻ and Ξ⁺ do not partition Ξ")]
    NotAPartition,
    #[error("degree {degree} outside [-{k}, {k}]")]
    DegreeOutOfRange { degree: i64, k: i64 },
    #[error("unknown real form `{0}`")]
    UnknownForm(String),
    #[error("parameters out of range for {form}: {detail}")]
    ParamOutOfRange { form: String, detail: String },
    #[error("Ξ = {xi} is not admissible for {form}")]
    Inadmissible { form: String, xi: String },
    #[error("parabolic data mismatch: {0}")]
    XiMismatch(String),
    #[error("component ({i},{j}) does not exist for this grading")]
    NoSuchComponent { i: String, j: String },
    #[error("component {0} is not regular (homogeneity {1})")]
    NonRegular(String, i64),
    #[error("lowest weight vector of {0} takes values outside g₋")]
    ImageNotInGMinus(String),
    #[error("Jacobi identity fails for the deformed bracket: {0}")]
    JacobiFailure(String),
    #[error("element has support outside p₊")]
    SupportOutsidePPlus,
    #[error("invalid phase assignment: {0}")]
    InvalidPhases(String),
    #[error("operation requires an order-2 action, got class {0}")]
    WrongClass(String),
    #[error("malformed specification: {0}")]
    Malformed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("catalog hash mismatch: golden data expects {expected}, catalog is {found}")]
    CatalogHashMismatch { expected: String, found: String },
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
