use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::eta::{delta_quotient, EtaQuotient};
use crate::qseries::{Exponent, Rational, Shift};
use crate::weierstrass::{PhiMode, TorsionArg};

/// Expression tree over the named objects of the registry.
///
/// The canonical form, which is what the parser produces and what the
/// printer round-trips, keeps rational factors of a summand in the `Sum`
/// coefficient: a `Product` never contains a `Const`, a `Sum` term whose body
/// is `Const` always has body `Const(1)`, and a one-term `Sum` never has
/// coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FormExpr {
    Const(Rational),
    /// `E_{weight,level}^{(index)}`.
    Generator {
        level: u32,
        weight: u32,
        index: u32,
    },
    /// The strong modular unit `Delta_N`.
    Delta(u32),
    Wp(TorsionArg),
    Wpt(TorsionArg),
    Eta(EtaQuotient),
    /// `E_k(m tau)`.
    Eisenstein {
        k: u32,
        m: u32,
    },
    Phi {
        level: u32,
        mode: PhiMode,
    },
    /// `f(tau + 1)` for a series in `q^(1/2)`.
    HalfTwist(Box<FormExpr>),
    Sum(Vec<(Rational, FormExpr)>),
    Product(Vec<FormExpr>),
    Power(Box<FormExpr>, u32),
}

impl FormExpr {
    pub fn constant(c: Rational) -> Self {
        FormExpr::Const(c)
    }

    pub fn generator(level: u32, weight: u32, index: u32) -> Self {
        FormExpr::Generator { level, weight, index }
    }

    pub fn pow(self, n: u32) -> Self {
        FormExpr::Power(Box::new(self), n)
    }

    pub fn twist(self) -> Self {
        FormExpr::HalfTwist(Box::new(self))
    }

    /// Product of `factors`, collapsing the one-factor case.
    pub fn product(mut factors: Vec<FormExpr>) -> Self {
        if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            FormExpr::Product(factors)
        }
    }

    pub fn sum(terms: Vec<(Rational, FormExpr)>) -> Self {
        FormExpr::Sum(terms)
    }

    /// `self - other`.
    pub fn minus(self, other: FormExpr) -> Self {
        FormExpr::Sum(vec![(Rational::one(), self), (-Rational::one(), other)])
    }

    /// Whether this is a leaf that prints without brackets.
    fn is_atom(&self) -> bool {
        !matches!(self, FormExpr::Sum(_) | FormExpr::Product(_) | FormExpr::Power(..))
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_exponent(e: Exponent) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

fn fmt_torsion(f: &mut fmt::Formatter<'_>, name: &str, t: &TorsionArg) -> fmt::Result {
    let b = match t.b {
        Shift::Zero => "0",
        Shift::Half => "1/2",
    };
    write!(f, "{name}({},{b},{})", fmt_exponent(t.a), t.m)
}

impl FormExpr {
    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormExpr::Const(c) if !c.is_negative() => f.write_str(&fmt_rational(c)),
            e if e.is_atom() && !matches!(e, FormExpr::Const(_)) => write!(f, "{e}"),
            e => write!(f, "({e})"),
        }
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormExpr::Const(c) => f.write_str(&fmt_rational(c)),
            FormExpr::Generator { level, weight, index } => write!(f, "E({weight},{level},{index})"),
            FormExpr::Delta(n) => write!(f, "Delta({n})"),
            FormExpr::Wp(t) => fmt_torsion(f, "wp", t),
            FormExpr::Wpt(t) => fmt_torsion(f, "wpt", t),
            FormExpr::Eta(q) => write!(f, "{q}"),
            FormExpr::Eisenstein { k, m } => {
                if *m == 1 && matches!(k, 4 | 6 | 8 | 10 | 12) {
                    write!(f, "E{k}")
                } else {
                    write!(f, "Eis({k},{m})")
                }
            }
            FormExpr::Phi { level, mode: PhiMode::Weierstrass } => write!(f, "Phi({level})"),
            FormExpr::Phi { level, mode: PhiMode::Divisor } => write!(f, "PhiSigma({level})"),
            FormExpr::HalfTwist(e) => write!(f, "twist({e})"),
            FormExpr::Sum(terms) => {
                for (i, (c, body)) in terms.iter().enumerate() {
                    let neg = c.is_negative();
                    match (i, neg) {
                        (0, true) => f.write_str("-")?,
                        (0, false) => {}
                        (_, true) => f.write_str(" - ")?,
                        (_, false) => f.write_str(" + ")?,
                    }
                    let a = c.abs();
                    let unit_body = matches!(body, FormExpr::Const(b) if b.is_one());
                    if unit_body {
                        f.write_str(&fmt_rational(&a))?;
                    } else {
                        if !a.is_one() {
                            write!(f, "{}*", fmt_rational(&a))?;
                        }
                        match body {
                            FormExpr::Sum(_) | FormExpr::Const(_) => write!(f, "({body})")?,
                            _ => write!(f, "{body}")?,
                        }
                    }
                }
                Ok(())
            }
            FormExpr::Product(factors) => {
                for (i, x) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    match x {
                        FormExpr::Power(..) => write!(f, "{x}")?,
                        _ => x.fmt_factor(f)?,
                    }
                }
                Ok(())
            }
            FormExpr::Power(base, n) => {
                base.fmt_factor(f)?;
                write!(f, "^{n}")
            }
        }
    }
}

impl FormExpr {
    /// Weight of the expression; every `Sum` must be homogeneous.
    pub fn weight(&self) -> Result<Exponent> {
        let w = |n: i64| Ok(Exponent::from_integer(n));
        match self {
            FormExpr::Const(_) => w(0),
            FormExpr::Generator { weight, .. } => w(*weight as i64),
            FormExpr::Delta(n) => Ok(delta_quotient(*n as i64)?.weight()),
            FormExpr::Wp(_) | FormExpr::Wpt(_) | FormExpr::Phi { .. } => w(2),
            FormExpr::Eta(q) => Ok(q.weight()),
            FormExpr::Eisenstein { k, .. } => w(*k as i64),
            FormExpr::HalfTwist(e) => e.weight(),
            FormExpr::Sum(terms) => {
                let mut out: Option<Exponent> = None;
                for (_, t) in terms {
                    let wt = t.weight()?;
                    match out {
                        None => out = Some(wt),
                        Some(o) if o != wt => return Err(Error::WeightMismatch(o, wt)),
                        _ => {}
                    }
                }
                Ok(out.unwrap_or_else(Exponent::zero))
            }
            FormExpr::Product(f) => {
                let mut total = Exponent::zero();
                for x in f {
                    total += x.weight()?;
                }
                Ok(total)
            }
            FormExpr::Power(b, n) => Ok(b.weight()? * Exponent::from_integer(*n as i64)),
        }
    }
}

/// Sum of exponent-sized lower bounds, used for precision propagation.
pub(crate) fn sum_bounds(bounds: &[Exponent]) -> Exponent {
    bounds.iter().fold(Exponent::zero(), |a, b| a + b)
}
