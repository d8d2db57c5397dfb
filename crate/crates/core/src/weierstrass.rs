//! Renormalized Weierstrass functions at torsion points.
//!
//! `wp_hat(a, b, m)` is `wp(a tau + b; Z + m tau Z) / pi^2` and `wpt_hat` its
//! companion shifted by the half period `(1 + m tau)/2`. Both are written as
//! lattice sums of `1/sin(pi w)^2`, so every value is a rational series in
//! `q^(1/2)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qseries::{integer, rational, sigma_series, Exponent, LambertSum, QSeries, Rational, Shift};

/// A torsion point `a tau + b` on the lattice `Z + m tau Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionArg {
    pub a: Exponent,
    pub b: Shift,
    pub m: u32,
}

impl TorsionArg {
    /// Checks that `a` is half-integral and `m >= 1`.
    pub fn new(a: Exponent, b: Shift, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::PoleAtArgument("lattice multiplier 0".into()));
        }
        if !(a * 2).is_integer() {
            return Err(Error::PoleAtArgument(format!("tau coefficient {a} is not half-integral")));
        }
        Ok(Self { a, b, m })
    }

    pub fn int(a: i64, b: Shift, m: u32) -> Self {
        Self { a: Exponent::from_integer(a), b, m }
    }

    pub fn half(a2: i64, b: Shift, m: u32) -> Self {
        Self { a: Exponent::new(a2, 2), b, m }
    }
}

impl fmt::Display for TorsionArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match self.b {
            Shift::Zero => "0",
            Shift::Half => "1/2",
        };
        write!(f, "{},{},{}", self.a, b, self.m)
    }
}

/// `wp_hat(a tau + b, m tau) + O(q^prec)`.
///
/// `a` is reduced modulo `m` first; points on the lattice are poles.
pub fn wp_hat(arg: TorsionArg, prec: i64) -> Result<QSeries> {
    let m = Exponent::from_integer(arg.m as i64);
    let a = arg.a - (arg.a / m).floor() * m;
    if a.is_zero() && arg.b == Shift::Zero {
        return Err(Error::PoleAtArgument(format!("wp({arg})")));
    }
    let mut acc = LambertSum::new(prec);
    acc.add_constant(&rational(-1, 3));
    let one = Rational::one();
    let minus_two = integer(-2);
    if acc.reaches(a) {
        acc.add_inv_sin2(&one, a, arg.b)?;
    }
    for n in 1i64.. {
        let nm = m * n;
        if !acc.reaches(nm - a) {
            break;
        }
        acc.add_inv_sin2(&one, nm - a, arg.b)?;
        if acc.reaches(nm + a) {
            acc.add_inv_sin2(&one, nm + a, arg.b)?;
        }
        if acc.reaches(nm) {
            acc.add_inv_sin2(&minus_two, nm, Shift::Zero)?;
        }
    }
    Ok(acc.finish())
}

/// `wpt_hat(a tau + b, m tau) + O(q^prec)`.
pub fn wpt_hat(arg: TorsionArg, prec: i64) -> Result<QSeries> {
    let m = Exponent::from_integer(arg.m as i64);
    let half = Exponent::new(1, 2);
    let mut acc = LambertSum::new(prec);
    let one = Rational::one();
    let minus_one = -Rational::one();
    let p = Exponent::from_integer(prec);

    // Terms with |(n + 1/2) m + a| < prec.
    let lo = ((-p - arg.a) / m - half).floor().to_integer();
    let hi = ((p - arg.a) / m - half).ceil().to_integer();
    for n in lo..=hi {
        let c = (Exponent::from_integer(n) + half) * m + arg.a;
        if acc.reaches(c) {
            acc.add_inv_sin2(&one, c, arg.b.flip()).map_err(|_| Error::PoleAtArgument(format!("wpt({arg})")))?;
        }
    }
    let lo = (-p / m - half).floor().to_integer();
    let hi = (p / m - half).ceil().to_integer();
    for n in lo..=hi {
        let c = (Exponent::from_integer(n) + half) * m;
        if acc.reaches(c) {
            acc.add_inv_sin2(&minus_one, c, Shift::Half)?;
        }
    }
    Ok(acc.finish())
}

/// How `Phi_N` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhiMode {
    /// Parity-reduced sum of `wp_hat(k tau, N tau)`.
    Weierstrass,
    /// `1 + 24/(N-1) (sigma_1(q) - N sigma_1(q^N))`.
    Divisor,
}

/// The weight-2 form `Phi_N = -3/(N-1) sum_{k=1}^{N-1} wp_hat(k tau, N tau)`.
pub fn phi_n(level: i64, prec: i64, mode: PhiMode) -> Result<QSeries> {
    if level < 2 {
        return Err(Error::UnknownLevel(level));
    }
    let n = level as u32;
    match mode {
        PhiMode::Weierstrass => {
            let wp = |k: i64| wp_hat(TorsionArg::int(k, Shift::Zero, n), prec);
            let half = level / 2;
            let mut sum = QSeries::zero(Exponent::from_integer(prec));
            for k in 1..=half {
                let term = wp(k)?;
                // For even N the middle point k = N/2 is its own mirror image.
                let w = if level % 2 == 0 && k == half { rational(1, 2) } else { integer(1) };
                sum = sum.add(&term.scale(&w));
            }
            // sum now equals half of the full k = 1..N-1 sum.
            Ok(sum.scale(&rational(-6, level - 1)))
        }
        PhiMode::Divisor => {
            let s1 = sigma_series(1, 1, prec);
            let sn = sigma_series(1, n, prec);
            let mut out = s1.sub(&sn.scale(&integer(level))).scale(&rational(24, level - 1));
            out = out.add(&QSeries::one(Exponent::from_integer(prec))?);
            Ok(out)
        }
    }
}

/// The Eisenstein series `E_k(m tau)`, normalized to constant term 1.
pub fn eisenstein(k: u32, m: u32, prec: i64) -> Result<QSeries> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::UnsupportedWeight(k as i64));
    }
    if m == 0 {
        return Err(Error::PoleAtArgument("Eisenstein series at m = 0".into()));
    }
    let b = crate::qseries::bernoulli(k as usize);
    let c = -(integer(2 * k as i64) / b);
    let s = sigma_series(k - 1, m, prec).scale(&c);
    Ok(s.add(&QSeries::one(Exponent::from_integer(prec))?))
}

/// `wpt_hat(1/2, tau)` from its infinite-product factorization, computed on
/// the `q^(1/2)` grid with integer arithmetic only.
pub fn twpa_half_product(prec: i64) -> QSeries {
    let p = Exponent::from_integer(prec);
    if prec <= 0 {
        return QSeries::zero(p);
    }
    // Unit part: exponents j/2 for j < 2 prec - 1.
    let len = (2 * prec - 1) as usize;
    let mut v = vec![BigInt::zero(); len];
    v[0] = BigInt::one();

    let mul_binomial = |v: &mut [BigInt], step: usize, sign: i64| {
        for i in (step..v.len()).rev() {
            let t = &v[i - step] * sign;
            v[i] += t;
        }
    };
    // 1/(1 - x^step)
    let div_binomial = |v: &mut [BigInt], step: usize| {
        for i in step..v.len() {
            let t = v[i - step].clone();
            v[i] += t;
        }
    };

    for _ in 0..4 {
        // prod (1 - q^(2n+2))
        let mut s = 4;
        while s < len {
            mul_binomial(&mut v, s, -1);
            s += 4;
        }
        // prod (1 - q^(n+1/2))
        let mut s = 1;
        while s < len {
            mul_binomial(&mut v, s, -1);
            s += 2;
        }
        // prod (1 + q^(n+1))
        let mut s = 2;
        while s < len {
            mul_binomial(&mut v, s, 1);
            s += 2;
        }
        // prod 1/(1 - q^(n+1/2))
        let mut s = 1;
        while s < len {
            div_binomial(&mut v, s);
            s += 2;
        }
    }

    let coeffs = v.into_iter().map(|c| Rational::from_integer(c * -16)).collect();
    QSeries::from_coeffs(2, 1, coeffs).truncate(p)
}
