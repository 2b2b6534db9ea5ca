use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("jet {var} is not declared in the {frame} frame")]
    Frame { var: String, frame: String },
    #[error("jet order budget {max} exceeded while differentiating {var}")]
    Budget { var: String, max: u8 },
    #[error("substitution error: {0}")]
    Substitution(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("operators live in different frames ({0} vs {1})")]
    FrameMismatch(String, String),
    #[error("not in type A image: {0}")]
    NotInTypeAImage(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, KernelError>;
