//! Lambert-series primitives: divisor sums and `1/sin(pi w)^2` at torsion
//! points `w = c*tau + b`.
//!
//! With `x = e^(2 i pi w)`, `1/sin(pi w)^2 = -4x/(1-x)^2 = -4 sum_d d x^d`,
//! and for `b` in `{0, 1/2}` we have `x = (+-1) q^c`, so every value is a
//! rational series in `q^(1/2)`.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use super::{integer, Exponent, QSeries, Rational};
use crate::error::{Error, Result};

/// The real shift `b` of a torsion point `c*tau + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shift {
    Zero,
    Half,
}

impl Shift {
    /// `b + 1/2 mod 1`.
    pub fn flip(self) -> Shift {
        match self {
            Shift::Zero => Shift::Half,
            Shift::Half => Shift::Zero,
        }
    }

    pub fn as_exponent(self) -> Exponent {
        match self {
            Shift::Zero => Exponent::from_integer(0),
            Shift::Half => Exponent::new(1, 2),
        }
    }

    pub fn from_exponent(b: Exponent) -> Option<Shift> {
        let r = b - b.floor();
        if r == Exponent::from_integer(0) {
            Some(Shift::Zero)
        } else if r == Exponent::new(1, 2) {
            Some(Shift::Half)
        } else {
            None
        }
    }
}

/// Dense accumulator for linear combinations of `1/sin^2` values on the
/// half-integer grid, truncated at an integer precision.
pub(crate) struct LambertSum {
    /// Coefficient of `q^(i/2)`.
    coeffs: Vec<Rational>,
    prec: i64,
}

impl LambertSum {
    pub fn new(prec: i64) -> Self {
        let len = (2 * prec).max(0) as usize;
        Self { coeffs: vec![Rational::zero(); len], prec }
    }

    pub fn add_constant(&mut self, k: &Rational) {
        if let Some(c) = self.coeffs.first_mut() {
            *c += k;
        }
    }

    /// Whether `S(c, b)` contributes below the precision. `c` is folded to
    /// `|c|` first.
    pub fn reaches(&self, c: Exponent) -> bool {
        c.abs() < Exponent::from_integer(self.prec)
    }

    /// `acc += k * 1/sin(pi (c tau + b))^2`, folding negative `c` by evenness.
    pub fn add_inv_sin2(&mut self, k: &Rational, c: Exponent, b: Shift) -> Result<()> {
        let c = c.abs();
        let step2 = c * 2;
        debug_assert!(step2.is_integer(), "torsion coefficient must be half-integral");
        let step = step2.to_integer() as usize;
        if step == 0 {
            return match b {
                Shift::Half => {
                    self.add_constant(k);
                    Ok(())
                }
                Shift::Zero => Err(Error::PoleAtArgument("1/sin(pi*0)^2".into())),
            };
        }
        let minus_four_k = k * integer(-4);
        let mut e = step;
        let mut d: i64 = 1;
        while e < self.coeffs.len() {
            let sign = if b == Shift::Half && d % 2 == 1 { -1 } else { 1 };
            self.coeffs[e] += &minus_four_k * integer(sign * d);
            e += step;
            d += 1;
        }
        Ok(())
    }

    pub fn finish(self) -> QSeries {
        QSeries::from_coeffs(2, 0, self.coeffs)
    }
}

/// `1/sin(pi (c tau + b))^2 + O(q^prec)` for `c >= 0` with denominator
/// dividing 2. At `c = 0` only `b = 1/2` is allowed and gives the constant 1.
pub fn inv_sin2(c: Exponent, b: Shift, prec: i64) -> Result<QSeries> {
    if !(c * 2).is_integer() {
        return Err(Error::PoleAtArgument(format!("coefficient {c} is not half-integral")));
    }
    let mut acc = LambertSum::new(prec);
    acc.add_inv_sin2(&Rational::one(), c, b)?;
    Ok(acc.finish())
}

/// `sum_{n>=1} sigma_k(n) q^(m n) + O(q^prec)`.
pub fn sigma_series(k: u32, m: u32, prec: i64) -> QSeries {
    assert!(m >= 1, "substitution power must be positive");
    let len = prec.max(0) as usize;
    let m = m as usize;
    let top = if len == 0 { 0 } else { (len - 1) / m };
    let mut sigma = vec![BigInt::zero(); top + 1];
    for d in 1..=top {
        let dk = Pow::pow(BigInt::from(d), k);
        let mut n = d;
        while n <= top {
            sigma[n] += &dk;
            n += d;
        }
    }
    let mut coeffs = vec![Rational::zero(); len];
    for (n, s) in sigma.into_iter().enumerate().skip(1) {
        coeffs[n * m] = Rational::from_integer(s);
    }
    QSeries::from_coeffs(1, 0, coeffs)
}

/// Bernoulli number `B_n` with `B_1 = +1/2` (Akiyama–Tanigawa).
pub(crate) fn bernoulli(n: usize) -> Rational {
    let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * integer(j as i64);
        }
    }
    a.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::rational;

    #[test]
    fn divisor_sums() {
        assert_eq!(sigma_series(1, 1, 5), QSeries::from_ints(1, &[1, 3, 4, 7]));
        assert_eq!(sigma_series(3, 1, 4), QSeries::from_ints(1, &[1, 9, 28]));
        assert_eq!(sigma_series(1, 2, 7), QSeries::from_ints(2, &[1, 0, 3, 0, 4]));
    }

    #[test]
    fn sin_squared_values() {
        let s = inv_sin2(Exponent::from_integer(1), Shift::Zero, 5).unwrap();
        assert_eq!(s, QSeries::from_ints(1, &[-4, -8, -12, -16]));
        let t = inv_sin2(Exponent::from_integer(1), Shift::Half, 4).unwrap();
        assert_eq!(t, QSeries::from_ints(1, &[4, -8, 12]));
        let one = inv_sin2(Exponent::from_integer(0), Shift::Half, 3).unwrap();
        assert_eq!(one, QSeries::from_ints(0, &[1, 0, 0]));
        assert!(matches!(inv_sin2(Exponent::from_integer(0), Shift::Zero, 3), Err(Error::PoleAtArgument(_))));
        let h = inv_sin2(Exponent::new(1, 2), Shift::Zero, 2).unwrap();
        assert_eq!(h.den(), 2);
        assert_eq!(h.coeff(Exponent::new(3, 2)), Some(integer(-12)));
    }

    #[test]
    fn bernoulli_numbers() {
        assert_eq!(bernoulli(0), integer(1));
        assert_eq!(bernoulli(2), rational(1, 6));
        assert_eq!(bernoulli(4), rational(-1, 30));
        assert_eq!(bernoulli(12), rational(-691, 2730));
        assert_eq!(bernoulli(3), integer(0));
    }
}
