use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("cyclotomic orders {0} and {1} do not embed into each other")]
    OrderMismatch(u32, u32),
    #[error("a primitive {needed}-th root of unity is not available in Q(zeta_{order})")]
    MissingRoot { needed: u32, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("series known only up to q^{have}, needed q^{need}")]
    InsufficientPrecision { need: String, have: String },
    #[error("series is not a unit")]
    NotUnit,
    #[error("mode level {0} is not admissible for generator {1}")]
    InadmissibleLevel(String, String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("module has no odd zero mode squaring to a scalar: parity stable, no split")]
    ParityStable,
    #[error("no bimultiplicative cocycle realizes the commutator map")]
    NoCocycle,
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
