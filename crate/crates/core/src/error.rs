use thiserror::Error;

use crate::qseries::Exponent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision {prec} does not exceed the leading exponent {exponent}")]
    InvalidPrecision { exponent: Exponent, prec: Exponent },

    #[error("series has no known nonzero coefficient and cannot be inverted")]
    NotInvertible,

    #[error("half twist needs exponent denominator 1 or 2, got {0}")]
    UnsupportedTwist(u32),

    #[error("argument {0} lies on a pole")]
    PoleAtArgument(String),

    #[error("eta quotient has leading exponent {0}, whose denominator does not divide 2")]
    FractionalExponent(Exponent),

    #[error("unknown level {0} (supported: 1..=10)")]
    UnknownLevel(i64),

    #[error("unsupported weight {0}")]
    UnsupportedWeight(i64),

    #[error("no generator E({weight},{level},{index}) in the registry")]
    UnknownGenerator { level: u32, weight: u32, index: u32 },

    #[error("M_{weight}(Gamma0({level})) is the zero space")]
    EmptySpace { level: u32, weight: u32 },

    #[error("insufficient precision: need {needed}, have {available}")]
    InsufficientPrecision { needed: i64, available: i64 },

    #[error("series is not in the span of the basis: residual coefficient at q^{0}")]
    NotInSpan(Exponent),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("weight mismatch in sum: {0} vs {1}")]
    WeightMismatch(Exponent, Exponent),

    #[error("registry validation failed: {0}")]
    RegistryValidation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
