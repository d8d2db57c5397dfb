//! Truncated Puiseux series in `q^(1/D)` with exact rational coefficients.
//!
//! A [`QSeries`] stores a dense run of coefficients starting at its valuation
//! together with an absolute precision bound: the series is known modulo
//! `O(q^prec)`. Every operation returns a canonical representative (leading
//! zeros stripped, exponent denominator minimal) so that equality is
//! structural.
//!
//! Multiplication tracks precision relative to the valuation: the product of
//! `f` and `g` is known to `min(prec_f + val_g, prec_g + val_f)`. High powers
//! of series with large valuation therefore only ever compute the handful of
//! terms above the valuation.

mod lambert;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) use lambert::{bernoulli, LambertSum};
pub use lambert::{inv_sin2, sigma_series, Shift};

/// Exact rational coefficient.
pub type Rational = BigRational;

/// Exponent of `q`; all exponents and precisions are small rationals.
pub type Exponent = Ratio<i64>;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    den: u32,
    val: i64,
    prec: i64,
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// The series `0 + O(q^prec)`.
    pub fn zero(prec: Exponent) -> Self {
        let den = *prec.denom() as u32;
        let p = *prec.numer();
        Self::canonical(den, p, p, Vec::new())
    }

    pub fn one(prec: Exponent) -> Result<Self> {
        Self::monomial(Rational::one(), 0, 1, prec)
    }

    /// `c * q^(num/den) + O(q^prec)`.
    pub fn monomial(c: Rational, num: i64, den: u32, prec: Exponent) -> Result<Self> {
        assert!(den >= 1, "exponent denominator must be positive");
        let exponent = Exponent::new(num, den as i64);
        if prec <= exponent {
            return Err(Error::InvalidPrecision { exponent, prec });
        }
        let grid = (den as i64).lcm(prec.denom());
        let val = num * (grid / den as i64);
        let p = *prec.numer() * (grid / prec.denom());
        let mut coeffs = vec![Rational::zero(); (p - val) as usize];
        coeffs[0] = c;
        Ok(Self::canonical(grid as u32, val, p, coeffs))
    }

    /// Dense coefficients on the grid `q^(1/den)`, the first one at exponent
    /// `val/den`; precision is `(val + len)/den`.
    pub fn from_coeffs(den: u32, val: i64, coeffs: Vec<Rational>) -> Self {
        assert!(den >= 1, "exponent denominator must be positive");
        let prec = val + coeffs.len() as i64;
        Self::canonical(den, val, prec, coeffs)
    }

    /// Integer-exponent series with integer coefficients starting at `q^val`.
    pub fn from_ints(val: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(1, val, coeffs.iter().map(|&c| integer(c)).collect())
    }

    fn canonical(den: u32, mut val: i64, prec: i64, mut coeffs: Vec<Rational>) -> Self {
        debug_assert!(val <= prec);
        coeffs.truncate((prec - val).max(0) as usize);
        match coeffs.iter().position(|c| !c.is_zero()) {
            None => {
                coeffs.clear();
                val = prec;
            }
            Some(i) => {
                coeffs.drain(..i);
                val += i as i64;
            }
        }

        let mut g = (den as i64).gcd(&prec);
        for (i, c) in coeffs.iter().enumerate() {
            if g == 1 {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(&(val + i as i64));
            }
        }
        if g == 1 {
            return Self { den, val, prec, coeffs };
        }

        // Coarsen the grid; `prec` is a multiple of `g`.
        let mut out = Vec::with_capacity(coeffs.len() / g as usize + 1);
        let mut e = val;
        let mut iter = coeffs.into_iter();
        while e < prec {
            let c = iter.next().unwrap_or_else(Rational::zero);
            if e % g == 0 {
                out.push(c);
            }
            e += 1;
        }
        let new_val = if out.is_empty() { prec / g } else { val / g };
        Self::canonical(den / g as u32, new_val, prec / g, out)
    }

    /// Exponent denominator `D`: exponents are integers divided by `D`.
    pub fn den(&self) -> u32 {
        self.den
    }

    /// Lowest exponent with a known nonzero coefficient, or the precision for
    /// a series that is zero so far.
    pub fn valuation(&self) -> Exponent {
        Exponent::new(self.val, self.den as i64)
    }

    pub fn precision(&self) -> Exponent {
        Exponent::new(self.prec, self.den as i64)
    }

    /// Number of coefficients known above the valuation, in grid steps.
    pub fn relative_len(&self) -> usize {
        (self.prec - self.val) as usize
    }

    pub fn is_zero_so_far(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Dense coefficients from the valuation up to the precision, one per
    /// grid step `1/D`.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    /// Coefficient of `q^e`, or `None` when `e` is at or beyond the precision.
    pub fn coeff(&self, e: Exponent) -> Option<Rational> {
        if e >= self.precision() {
            return None;
        }
        let scaled = e * self.den as i64;
        if !scaled.is_integer() {
            return Some(Rational::zero());
        }
        let idx = scaled.to_integer() - self.val;
        if idx < 0 {
            return Some(Rational::zero());
        }
        Some(self.coeffs[idx as usize].clone())
    }

    pub fn coeff_int(&self, n: i64) -> Option<Rational> {
        self.coeff(Exponent::from_integer(n))
    }

    /// Nonzero terms as `(exponent, coefficient)` in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &Rational)> + '_ {
        let den = self.den as i64;
        let val = self.val;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (Exponent::new(val + i as i64, den), c))
    }

    /// First exponent below the precision where `self` and `other` differ.
    pub fn first_difference(&self, other: &QSeries) -> Option<Exponent> {
        let diff = self - other;
        let first = diff.terms().next().map(|(e, _)| e);
        first
    }

    /// Lower the precision to `prec` (no-op if already lower).
    pub fn truncate(&self, prec: Exponent) -> QSeries {
        if prec >= self.precision() {
            return self.clone();
        }
        let grid = (self.den as i64).lcm(prec.denom());
        let (val, _, coeffs) = self.on_grid(grid as u32);
        let p = *prec.numer() * (grid / prec.denom());
        if val >= p {
            return QSeries::zero(prec);
        }
        Self::canonical(grid as u32, val, p, coeffs)
    }

    /// `(val, prec, coeffs)` on the finer grid `q^(1/den)`.
    fn on_grid(&self, den: u32) -> (i64, i64, Vec<Rational>) {
        debug_assert_eq!(den % self.den, 0);
        let f = (den / self.den) as i64;
        if f == 1 {
            return (self.val, self.prec, self.coeffs.clone());
        }
        let val = self.val * f;
        let prec = self.prec * f;
        let mut coeffs = vec![Rational::zero(); (prec - val) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * f as usize] = c.clone();
        }
        (val, prec, coeffs)
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        self.linear(other, &Rational::one())
    }

    /// `self + k * other`.
    fn linear(&self, other: &QSeries, k: &Rational) -> QSeries {
        let den = self.den.lcm(&other.den);
        let (va, pa, ca) = self.on_grid(den);
        let (vb, pb, cb) = other.on_grid(den);
        let prec = pa.min(pb);
        let val = va.min(vb).min(prec);
        let mut coeffs = vec![Rational::zero(); (prec - val) as usize];
        for (i, c) in ca.into_iter().enumerate() {
            let e = va + i as i64;
            if e >= prec {
                break;
            }
            coeffs[(e - val) as usize] = c;
        }
        for (i, c) in cb.iter().enumerate() {
            let e = vb + i as i64;
            if e >= prec {
                break;
            }
            if !c.is_zero() {
                coeffs[(e - val) as usize] += c * k;
            }
        }
        Self::canonical(den, val, prec, coeffs)
    }

    pub fn neg(&self) -> QSeries {
        QSeries { den: self.den, val: self.val, prec: self.prec, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.linear(other, &-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self::canonical(self.den, self.val, self.prec, coeffs)
    }

    /// Cauchy product with relative precision tracking.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let den = self.den.lcm(&other.den);
        let (va, pa, ca) = self.on_grid(den);
        let (vb, pb, cb) = other.on_grid(den);
        let val = va + vb;
        let prec = (pa + vb).min(pb + va);
        let len = (prec - val) as usize;
        let coeffs = convolve(&ca[..len.min(ca.len())], &cb[..len.min(cb.len())], len);
        Self::canonical(den, val, prec, coeffs)
    }

    /// `self^n` by repeated squaring; `self^0` is one, known to the relative
    /// precision of `self`.
    pub fn pow(&self, n: u32) -> QSeries {
        if n == 0 {
            let rel = self.prec - self.val;
            let mut coeffs = vec![Rational::zero(); rel as usize];
            if let Some(c) = coeffs.first_mut() {
                *c = Rational::one();
            }
            return Self::canonical(self.den, 0, rel, coeffs);
        }
        let mut base = self.clone();
        let mut acc: Option<QSeries> = None;
        let mut k = n;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc.expect("n > 0")
    }

    /// Multiplicative inverse; the valuation is negated and the relative
    /// precision is preserved.
    pub fn invert(&self) -> Result<QSeries> {
        if self.is_zero_so_far() {
            return Err(Error::NotInvertible);
        }
        let len = self.coeffs.len();
        let scale = common_denominator(&self.coeffs);
        let unit: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * Rational::from_integer(scale.clone())).to_integer()).collect();
        let lead = unit[0].clone();

        let coeffs: Vec<Rational> = if lead.abs().is_one() {
            // Integral recurrence: b_k = -lead * sum_{i>=1} u_i b_{k-i}.
            let mut b: Vec<BigInt> = Vec::with_capacity(len);
            b.push(lead.clone());
            for k in 1..len {
                let mut s = BigInt::zero();
                for i in 1..=k {
                    if !unit[i].is_zero() && !b[k - i].is_zero() {
                        s += &unit[i] * &b[k - i];
                    }
                }
                b.push(-(&lead * s));
            }
            b.into_iter().map(|x| Rational::new(x * &scale, BigInt::one())).collect()
        } else {
            let inv_lead = Rational::new(BigInt::one(), lead.clone());
            let u: Vec<Rational> = unit.into_iter().map(Rational::from_integer).collect();
            let mut b: Vec<Rational> = Vec::with_capacity(len);
            b.push(inv_lead.clone());
            for k in 1..len {
                let mut s = Rational::zero();
                for i in 1..=k {
                    if !u[i].is_zero() {
                        s += &u[i] * &b[k - i];
                    }
                }
                b.push(-(&inv_lead * s));
            }
            let sc = Rational::from_integer(scale);
            b.into_iter().map(|x| x * &sc).collect()
        };
        let val = -self.val;
        Ok(Self::canonical(self.den, val, val + len as i64, coeffs))
    }

    /// `q -> q^m`.
    pub fn substitute_power(&self, m: u32) -> QSeries {
        assert!(m >= 1, "substitution power must be positive");
        let m = m as i64;
        let val = self.val * m;
        let prec = self.prec * m;
        let mut coeffs = vec![Rational::zero(); (prec - val) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * m as usize] = c.clone();
        }
        Self::canonical(self.den, val, prec, coeffs)
    }

    /// `tau -> tau + 1`, which sends `q^(1/2)` to `-q^(1/2)`.
    pub fn half_twist(&self) -> Result<QSeries> {
        match self.den {
            1 => Ok(self.clone()),
            2 => {
                let coeffs = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if (self.val + i as i64).rem_euclid(2) == 1 { -c } else { c.clone() })
                    .collect();
                Ok(Self::canonical(2, self.val, self.prec, coeffs))
            }
            d => Err(Error::UnsupportedTwist(d)),
        }
    }
}

/// Least common multiple of the coefficient denominators.
fn common_denominator(coeffs: &[Rational]) -> BigInt {
    let mut l = BigInt::one();
    for c in coeffs {
        if !c.denom().is_one() {
            l = l.lcm(c.denom());
        }
    }
    l
}

/// Truncated Cauchy product. Coefficients are cleared of denominators first
/// so the inner loop runs on integers.
fn convolve(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let da = common_denominator(a);
    let db = common_denominator(b);
    let to_int = |xs: &[Rational], d: &BigInt| -> Vec<Option<BigInt>> {
        xs.iter()
            .map(|x| {
                if x.is_zero() {
                    None
                } else if d.is_one() {
                    Some(x.numer().clone())
                } else {
                    Some((x * Rational::from_integer(d.clone())).to_integer())
                }
            })
            .collect()
    };
    let ia = to_int(a, &da);
    let ib = to_int(b, &db);
    let nz_b: Vec<(usize, &BigInt)> = ib.iter().enumerate().filter_map(|(j, x)| x.as_ref().map(|x| (j, x))).collect();

    let mut acc = vec![BigInt::zero(); len];
    for (i, x) in ia.iter().enumerate() {
        let Some(x) = x else { continue };
        for &(j, y) in &nz_b {
            let k = i + j;
            if k >= len {
                break;
            }
            acc[k] += x * y;
        }
    }
    let d = da * db;
    if d.is_one() {
        acc.into_iter().map(Rational::from_integer).collect()
    } else {
        acc.into_iter().map(|c| Rational::new(c, d.clone())).collect()
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}

pub(crate) fn format_exponent(e: Exponent) -> String {
    if e.is_integer() {
        e.to_integer().to_string()
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

/// Renders `1 + 6q + 18q^2 - 9/2*q^3 + O(q^4)`.
impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let is_const = e.is_zero();
            if is_const {
                write!(f, "{}", mag)?;
                continue;
            }
            if !mag.is_one() {
                if mag.is_integer() {
                    write!(f, "{}", mag)?;
                } else {
                    write!(f, "{}*", mag)?;
                }
            }
            if e.is_one() {
                f.write_str("q")?;
            } else {
                write!(f, "q^{}", format_exponent(e))?;
            }
        }
        if !first {
            f.write_str(" + ")?;
        }
        let p = self.precision();
        if p.is_one() {
            f.write_str("O(q)")
        } else {
            write!(f, "O(q^{})", format_exponent(p))
        }
    }
}

/// Exact conversion for diagnostics and tests.
pub fn to_i128(c: &Rational) -> Option<i128> {
    c.is_integer().then(|| c.to_integer().to_i128()).flatten()
}
