use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value {value} lies outside the support [{lo}, {hi}]")]
    OutOfSupport { value: f64, lo: f64, hi: f64 },

    #[error("hazard rate undefined at {value}: cdf is 1")]
    SaturatedCdf { value: f64 },

    #[error("{what} has no sign change on the support")]
    NoSignChange { what: &'static str },

    #[error("allocation decreases by {drop:e} near value {at}")]
    NonMonotoneAllocation { at: f64, drop: f64 },

    #[error("invalid order statistic: rank {rank} of {draws} draws")]
    InvalidRank { rank: usize, draws: usize },

    #[error("prizes sum to {sum}, expected 1")]
    PrizeSum { sum: f64 },

    #[error("operation requires a symmetric contest")]
    AsymmetricContest,

    #[error("the max-payment virtual value is never positive; the optimal contest rewards nobody")]
    AllNegativeVirtualValue,

    #[error("distribution is not regular for revenue; supply an external revenue benchmark")]
    IrregularForRevenue,

    #[error("ratio undefined: expected maximum payment is zero")]
    DegenerateContest,

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Numerical failures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoSignChange { .. }
                | Error::NonMonotoneAllocation { .. }
                | Error::SaturatedCdf { .. }
                | Error::AllNegativeVirtualValue
                | Error::DegenerateContest
        )
    }
}
