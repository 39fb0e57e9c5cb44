use alloc::string::String;

/// Errors raised by the core algorithms.
///
/// Resource errors (bit budget, precision cap, search limit) are kept apart
/// from validation errors so callers can map them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid recurrence spec: {0}")]
    InvalidSpec(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("term U_{n} needs more than {budget} bits")]
    BitBudgetExceeded { n: u64, budget: u64 },
    #[error("root moduli could not be separated within {max_bits} bits of precision")]
    PrecisionExhausted { max_bits: u32 },
    #[error("U_{0} is zero")]
    ZeroTerm(u64),
    #[error("sieve bound {hi} exceeds the configured maximum {max}")]
    RangeTooLarge { hi: u64, max: u64 },
    #[error("no admissible prime found below the search limit {0}")]
    SearchLimit(u64),
}

impl Error {
    /// True for errors caused by exhausting a configured resource.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::BitBudgetExceeded { .. }
                | Error::PrecisionExhausted { .. }
                | Error::RangeTooLarge { .. }
                | Error::SearchLimit(_)
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
