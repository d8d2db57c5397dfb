//! Dedekind eta quotients and the strong modular units `Delta_N`.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qseries::{Exponent, QSeries, Rational};

/// The formal product `prod eta(m tau)^e` over distinct multipliers `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EtaQuotient {
    factors: Vec<(u32, i32)>,
}

impl EtaQuotient {
    /// Builds a quotient from `(m, e)` pairs. Repeated multipliers are merged
    /// and vanishing exponents dropped.
    pub fn new(factors: impl IntoIterator<Item = (u32, i32)>) -> Self {
        let mut merged: Vec<(u32, i32)> = Vec::new();
        let mut all: Vec<(u32, i32)> = factors.into_iter().collect();
        all.sort_by_key(|&(m, _)| m);
        for (m, e) in all {
            assert!(m >= 1, "eta multiplier must be positive");
            match merged.last_mut() {
                Some((lm, le)) if *lm == m => *le += e,
                _ => merged.push((m, e)),
            }
        }
        merged.retain(|&(_, e)| e != 0);
        Self { factors: merged }
    }

    pub fn factors(&self) -> &[(u32, i32)] {
        &self.factors
    }

    /// `(1/2) sum e`.
    pub fn weight(&self) -> Exponent {
        let s: i64 = self.factors.iter().map(|&(_, e)| e as i64).sum();
        Exponent::new(s, 2)
    }

    /// `sum m e / 24`, the exponent of the `q` prefactor.
    pub fn leading_exponent(&self) -> Exponent {
        let s: i64 = self.factors.iter().map(|&(m, e)| m as i64 * e as i64).sum();
        Exponent::new(s, 24)
    }

    /// `q^(sum m e/24) prod_i prod_n (1 - q^(m_i n))^(e_i) + O(q^prec)`.
    pub fn expand(&self, prec: i64) -> Result<QSeries> {
        let lead = self.leading_exponent();
        if !(lead * 2).is_integer() {
            return Err(Error::FractionalExponent(lead));
        }
        let prec_e = Exponent::from_integer(prec);
        if prec_e <= lead {
            return Err(Error::InvalidPrecision { exponent: lead, prec: prec_e });
        }
        let rel = (prec_e - lead).ceil().to_integer();

        let euler = euler_product(rel as usize);
        let mut unit = QSeries::from_ints(0, &{
            let mut v = vec![0; rel as usize];
            v[0] = 1;
            v
        });
        for &(m, e) in &self.factors {
            let base = euler.substitute_power(m).truncate(Exponent::from_integer(rel));
            let mut p = base.pow(e.unsigned_abs());
            if e < 0 {
                p = p.invert()?;
            }
            unit = unit.mul(&p);
        }

        let shift =
            QSeries::monomial(Rational::from_integer(1.into()), *lead.numer(), *lead.denom() as u32, lead + rel)?;
        Ok(unit.mul(&shift).truncate(prec_e))
    }
}

/// `prod_{n>=1} (1 - q^n) + O(q^len)` from the pentagonal number theorem.
fn euler_product(len: usize) -> QSeries {
    let mut coeffs = vec![0i64; len];
    let mut k: i64 = 0;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let p1 = k * (3 * k - 1) / 2;
        let p2 = k * (3 * k + 1) / 2;
        if p1 as usize >= len {
            break;
        }
        coeffs[p1 as usize] += sign;
        if k > 0 && (p2 as usize) < len {
            coeffs[p2 as usize] += sign;
        }
        k += 1;
    }
    QSeries::from_coeffs(1, 0, coeffs.into_iter().map(|c| Rational::from_integer(BigInt::from(c))).collect())
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("eta(")?;
        for (i, (m, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{m},{e}")?;
        }
        f.write_str(")")
    }
}

/// Eta quotient defining the strong modular unit `Delta_N`, `1 <= N <= 10`.
pub fn delta_quotient(level: i64) -> Result<EtaQuotient> {
    let factors: &[(u32, i32)] = match level {
        1 => &[(1, 24)],
        2 => &[(1, -8), (2, 16)],
        3 => &[(1, -6), (3, 18)],
        4 => &[(2, -4), (4, 8)],
        5 => &[(1, -2), (5, 10)],
        6 => &[(1, 2), (2, -4), (3, -6), (6, 12)],
        7 => &[(1, -2), (7, 14)],
        8 => &[(4, -4), (8, 8)],
        9 => &[(3, -2), (9, 6)],
        10 => &[(1, 2), (2, -4), (5, -10), (10, 20)],
        _ => return Err(Error::UnknownLevel(level)),
    };
    Ok(EtaQuotient::new(factors.iter().copied()))
}

/// `Delta_N + O(q^prec)`.
pub fn delta(level: i64, prec: i64) -> Result<QSeries> {
    delta_quotient(level)?.expand(prec)
}

/// One row of the `dump-levels` export.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LevelRecord {
    #[serde(rename = "N")]
    pub level: u32,
    pub rho: i64,
    pub nu: i64,
    pub eta: Vec<[i64; 2]>,
}

pub fn level_records() -> Vec<LevelRecord> {
    (1..=10)
        .map(|n| {
            let q = delta_quotient(n).expect("levels 1..=10 are registered");
            LevelRecord {
                level: n as u32,
                rho: q.weight().to_integer(),
                nu: q.leading_exponent().to_integer(),
                eta: q.factors().iter().map(|&(m, e)| [m as i64, e as i64]).collect(),
            }
        })
        .collect()
}
