//! Exact q-expansions of modular forms on `Gamma0(N)` for `1 <= N <= 10`.

pub mod error;
pub mod eta;
pub mod identities;
pub mod levels;
pub mod parse;
pub mod qseries;
pub mod weierstrass;

pub use error::{Error, Result};
pub use qseries::{Exponent, QSeries, Rational};
