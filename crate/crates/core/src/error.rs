use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("table is not skew at generators ({i},{j}): difference {difference}")]
    SkewViolation {
        i: usize,
        j: usize,
        difference: String,
    },
    #[error("r-tensor is not skew: r^{{{k}{l}}}_{{{i}{j}}} + r^{{{l}{k}}}_{{{j}{i}}} = {value}")]
    RSkewViolation {
        k: usize,
        l: usize,
        i: usize,
        j: usize,
        value: String,
    },
    #[error("parameters {0} and {1} coincide")]
    DegenerateParameters(usize, usize),
    #[error("bilinear form is singular")]
    SingularForm,
    #[error("parity constraint violated: {0}")]
    BadParity(String),
    #[error("bracket is not adapted to the involution: {0}")]
    NotPhiAdapted(String),
    #[error("relation system is inconsistent")]
    InconsistentRelations,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("no value assigned to variable {0}")]
    MissingVariable(String),
    #[error("assignment violates relation: {0}")]
    RelationViolated(String),
    #[error("invalid involution: {0}")]
    InvalidInvolution(String),
    #[error("invalid matrix involution: {0}")]
    InvalidMatrixInvolution(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}
