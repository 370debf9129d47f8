use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("field order {p}^{m} exceeds the 2^20 cap")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("length {got} does not match expected {want}")]
    LengthMismatch { want: usize, got: usize },
    #[error("matrix row {row} is not constant")]
    NotConstantRow { row: usize },
    #[error("evaluation points are not pairwise distinct")]
    DuplicatePoints,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("enumerating {needed} codewords exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("pole of order {pole} at the expansion place is deeper than start exponent {start}")]
    PoleDeeperThanStart { pole: i64, start: i64 },
    #[error("function is not in the Riemann-Roch space: {0}")]
    NotInRiemannRochSpace(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
