//! Level registry, expression evaluation, and echelon bases of
//! `M_{2k}(Gamma0(N))`.

mod basis;
mod expr;
mod registry;

pub use basis::{BasisBuilder, BasisElement, BasisSet};
pub use expr::FormExpr;
pub use registry::{LevelSpec, Registry};

use crate::error::Result;
use crate::qseries::{QSeries, Rational};

pub fn dimension(level: i64, weight: i64) -> Result<u32> {
    Registry::global().dimension(level, weight)
}

pub fn basis(level: i64, weight: i64, prec: i64) -> Result<BasisSet> {
    BasisBuilder::new(Registry::global(), level, prec)?.build(weight)
}

/// `E_{weight,level}^{(index)} + O(q^prec)` and its defining expression.
pub fn generator(level: u32, weight: u32, index: u32, prec: i64) -> Result<(FormExpr, QSeries)> {
    Registry::global().generator(level, weight, index, prec)
}

pub fn expand_expr(e: &FormExpr, prec: i64) -> Result<QSeries> {
    Registry::global().expand(e, prec)
}

pub fn reduce(f: &QSeries, level: i64, weight: i64) -> Result<Vec<Rational>> {
    basis::reduce(Registry::global(), f, level, weight)
}

/// Reduction against a caller-supplied registry.
pub fn reduce_with(reg: &Registry, f: &QSeries, level: i64, weight: i64) -> Result<Vec<Rational>> {
    basis::reduce(reg, f, level, weight)
}
