use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("polynomials live in different rings: {0}")]
    DomainMismatch(String),
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("cannot homogenize degree {degree} polynomial to degree {target}")]
    DegreeTooSmall { degree: u32, target: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed coefficient `{0}`")]
    BadCoefficient(String),
    #[error("malformed polynomial document: {0}")]
    BadDocument(String),
    #[error("evaluation point has {got} coordinates, expected {expected}")]
    PointLength { got: usize, expected: usize },
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
