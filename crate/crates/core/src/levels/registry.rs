use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::expr::{sum_bounds, FormExpr};
use crate::error::{Error, Result};
use crate::eta::{delta_quotient, EtaQuotient};
use crate::parse::parse_expr;
use crate::qseries::{Exponent, QSeries, Shift};
use crate::weierstrass::{eisenstein, phi_n, wp_hat, wpt_hat};

/// Registry entry for one level `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSpec {
    pub level: u32,
    /// Weight of `Delta_N`.
    pub rho: u32,
    /// Valuation of `Delta_N`.
    pub nu: u32,
    pub delta: EtaQuotient,
    /// Base generators by weight, for even weights up to `rho`; position in
    /// the list is the index `s`.
    pub base: BTreeMap<u32, Vec<FormExpr>>,
}

impl LevelSpec {
    fn new(level: u32, base: &[(u32, &[&str])]) -> Self {
        let delta = delta_quotient(level as i64).expect("registered level");
        let rho = delta.weight().to_integer() as u32;
        let nu = delta.leading_exponent().to_integer() as u32;
        let base = base
            .iter()
            .map(|&(w, gens)| {
                let exprs = gens
                    .iter()
                    .map(|src| parse_expr(src).unwrap_or_else(|e| panic!("generator `{src}`: {e}")))
                    .collect();
                (w, exprs)
            })
            .collect();
        Self { level, rho, nu, delta, base }
    }

    /// Dimension at a base weight `w <= rho`.
    pub fn base_dimension(&self, weight: u32) -> u32 {
        self.base.get(&weight).map_or(0, |g| g.len() as u32)
    }
}

/// The immutable table of levels 1..=10. Kept as a value so that tests can
/// work with altered copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Registry {
    levels: Vec<LevelSpec>,
}

fn wp_sum(range: std::ops::RangeInclusive<u32>, m: u32) -> String {
    range.map(|k| format!("wp({k},0,{m})")).collect::<Vec<_>>().join(" + ")
}

/// `-(1/576)(H1 - 3 H2 + 2 H3)` in the three values `wp(k tau, 7 tau)`; the
/// sign makes the leading coefficient `+1`.
fn level7_cubic() -> String {
    let w = |k: u32| format!("wp({k},0,7)");
    let (a, b, c) = (w(1), w(2), w(3));
    let h1 = format!("9*({a}^3 + {b}^3 + {c}^3)");
    let h2 = format!("9/2*({a}^2*{b} + {a}^2*{c} + {b}^2*{a} + {b}^2*{c} + {c}^2*{a} + {c}^2*{b})");
    let h3 = format!("27*{a}*{b}*{c}");
    format!("-1/576*({h1} - 3*({h2}) + 2*({h3}))")
}

impl Registry {
    pub fn standard() -> Self {
        let e4_half = |m: u32| format!("wp(0,1/2,{m})^2 + wp({m}/2,0,{m})^2 + wp(0,1/2,{m})*wp({m}/2,0,{m})");
        let s7 = wp_sum(1..=3, 7);
        let n3_w4 = "1/8*(3*wp(1,0,3)^2 - wp(0,1/2,3)^2 - wp(3/2,0,3)^2 - wp(0,1/2,3)*wp(3/2,0,3))".to_string();
        let n5_w2 = format!("-3/4*({})", wp_sum(1..=4, 5));
        let n5_w4 = format!("1/48*(9*(wp(1,0,5) + wp(2,0,5))^2 - 12*({}))", e4_half(5));
        let n7_w2 = format!("-({s7})");
        let n7_w4_1 = format!("1/8*(({s7})^2 - 3*({}))", e4_half(7));
        let n7_w4_2 = format!("1/32*(3*(wp(1,0,7)^2 + wp(2,0,7)^2 + wp(3,0,7)^2) - ({s7})^2)");
        let n7_w6_3 = level7_cubic();

        let levels = vec![
            LevelSpec::new(
                1,
                &[(4, &["E4"]), (6, &["E6"]), (8, &["E4^2"]), (10, &["E4*E6"]), (12, &["E4^3", "Delta(1)"])],
            ),
            LevelSpec::new(2, &[(2, &["-3*wp(1,0,2)"]), (4, &["E(2,2,0)^2", "1/256*wpt(0,1/2,1)^2"])]),
            LevelSpec::new(
                3,
                &[
                    (2, &["-3*wp(1,0,3)"]),
                    (4, &["E(2,3,0)^2", &n3_w4]),
                    (6, &["E(2,3,0)^3", "E(2,3,0)*E(4,3,1)", "Delta(3)"]),
                ],
            ),
            LevelSpec::new(4, &[(2, &["wpt(1,0,2)", "-1/16*wpt(0,1/2,2)"])]),
            LevelSpec::new(5, &[(2, &[&n5_w2]), (4, &["E(2,5,0)^2", &n5_w4, "1/16*(wp(1,0,5) - wp(2,0,5))^2"])]),
            LevelSpec::new(6, &[(2, &["-3*wp(1,0,2)", "-1/4*(wp(1,0,2) - wp(1,0,3))", "Delta(6)"])]),
            LevelSpec::new(
                7,
                &[
                    (2, &[&n7_w2]),
                    (4, &["E(2,7,0)^2", &n7_w4_1, &n7_w4_2]),
                    (6, &["E(2,7,0)^3", "E(2,7,0)*E(4,7,1)", "E(2,7,0)*E(4,7,2)", &n7_w6_3, "Delta(7)"]),
                ],
            ),
            LevelSpec::new(8, &[(2, &["wpt(1,0,2)", "-1/16*wpt(0,1/2,2)", "-1/16*wpt(0,1/2,4)"])]),
            LevelSpec::new(9, &[(2, &["-3*wp(3,0,9)", "-1/4*(wp(1,0,3) - wp(3,0,9))", "Delta(9)"])]),
            LevelSpec::new(
                10,
                &[
                    (
                        2,
                        &[
                            "-3*wp(5,0,10)",
                            "-1/8*(wp(1,0,2) - wp(5,0,10))",
                            "1/16*(wp(1,0,2) - 2*wp(1,0,5) - 2*wp(2,0,5) + 3*wp(5,0,10))",
                        ],
                    ),
                    (
                        4,
                        &[
                            "E(2,10,0)^2",
                            "E(2,10,0)*E(2,10,1)",
                            "E(2,10,0)*E(2,10,2)",
                            "E(2,10,1)*E(2,10,2)",
                            "E(2,10,2)^2",
                            "1/256*wpt(0,1/2,5)^2",
                            "Delta(10)",
                        ],
                    ),
                ],
            ),
        ];
        Self { levels }
    }

    /// Process-wide copy of [`Registry::standard`].
    pub fn global() -> &'static Registry {
        static REG: OnceLock<Registry> = OnceLock::new();
        REG.get_or_init(Registry::standard)
    }

    pub fn level(&self, n: i64) -> Result<&LevelSpec> {
        if (1..=10).contains(&n) {
            Ok(&self.levels[n as usize - 1])
        } else {
            Err(Error::UnknownLevel(n))
        }
    }

    pub fn level_mut(&mut self, n: i64) -> Result<&mut LevelSpec> {
        if (1..=10).contains(&n) {
            Ok(&mut self.levels[n as usize - 1])
        } else {
            Err(Error::UnknownLevel(n))
        }
    }

    pub fn levels(&self) -> &[LevelSpec] {
        &self.levels
    }

    /// `dim M_weight(Gamma0(N))`.
    pub fn dimension(&self, n: i64, weight: i64) -> Result<u32> {
        let spec = self.level(n)?;
        if weight < 2 || weight % 2 != 0 {
            return Err(Error::UnsupportedWeight(weight));
        }
        let (rho, nu) = (spec.rho as i64, spec.nu);
        let mut w = weight;
        let mut extra = 0;
        while w > rho {
            w -= rho;
            extra += nu;
        }
        Ok(spec.base_dimension(w as u32) + extra)
    }

    /// Definition of `E_{weight,N}^{(s)}`. Level 1 also provides the heads
    /// `E_4^(k/2)` and `E_4^((k-3)/2) E_6` at every even weight `2k >= 4`.
    pub fn generator_expr(&self, level: u32, weight: u32, index: u32) -> Result<FormExpr> {
        let spec = self.level(level as i64)?;
        let unknown = Error::UnknownGenerator { level, weight, index };
        if level == 1 && index == 0 && weight >= 4 && weight.is_multiple_of(2) && weight > spec.rho {
            let k = weight / 2;
            let e4 = FormExpr::Eisenstein { k: 4, m: 1 };
            return Ok(if k.is_multiple_of(2) {
                e4.pow(k / 2)
            } else {
                FormExpr::product(vec![e4.pow((k - 3) / 2), FormExpr::Eisenstein { k: 6, m: 1 }])
            });
        }
        spec.base.get(&weight).and_then(|g| g.get(index as usize)).cloned().ok_or(unknown)
    }

    /// Expansion of a generator, checked to be unitary with valuation `s`
    /// and integral exponents.
    pub fn generator(&self, level: u32, weight: u32, index: u32, prec: i64) -> Result<(FormExpr, QSeries)> {
        let expr = self.generator_expr(level, weight, index)?;
        let series = self.eval(&expr, prec)?;
        let name = format!("E({weight},{level},{index})");
        if series.den() != 1 {
            return Err(Error::RegistryValidation(format!("{name} has exponents outside Z")));
        }
        if prec > index as i64 {
            let ok = series.valuation() == Exponent::from_integer(index as i64)
                && series.leading_coefficient().is_some_and(|c| c.is_one());
            if !ok {
                return Err(Error::RegistryValidation(format!(
                    "{name} is not q^{index} + O(q^{}) (got {series})",
                    index + 1
                )));
            }
        }
        Ok((expr, series))
    }

    /// Structural lower bound for the valuation.
    pub fn lower_bound(&self, e: &FormExpr) -> Exponent {
        let half = Exponent::new(1, 2);
        match e {
            FormExpr::Const(_) | FormExpr::Wp(_) | FormExpr::Eisenstein { .. } | FormExpr::Phi { .. } => {
                Exponent::zero()
            }
            FormExpr::Generator { level, weight, index } => {
                if *level == 1 && *weight == 12 && *index == 1 {
                    Exponent::one()
                } else {
                    Exponent::from_integer(*index as i64)
                }
            }
            FormExpr::Delta(n) => {
                self.level(*n as i64).map(|s| s.delta.leading_exponent()).unwrap_or_else(|_| Exponent::zero())
            }
            FormExpr::Eta(q) => q.leading_exponent(),
            FormExpr::Wpt(t) => {
                // min over n of |(n + 1/2) m + a|, and m/2 from the subtracted terms
                let m = Exponent::from_integer(t.m as i64);
                let x = t.a / m + half;
                let frac = x - x.floor();
                let near = frac.min(Exponent::one() - frac) * m;
                near.min(m * half)
            }
            FormExpr::HalfTwist(x) => self.lower_bound(x),
            FormExpr::Sum(terms) => terms.iter().map(|(_, t)| self.lower_bound(t)).min().unwrap_or_else(Exponent::zero),
            FormExpr::Product(f) => sum_bounds(&f.iter().map(|x| self.lower_bound(x)).collect::<Vec<_>>()),
            FormExpr::Power(b, n) => self.lower_bound(b) * Exponent::from_integer(*n as i64),
        }
    }

    /// Checks every atom (levels, generators, poles, eta exponents) and
    /// returns the weight.
    pub fn check(&self, e: &FormExpr) -> Result<Exponent> {
        self.check_atoms(e)?;
        e.weight()
    }

    fn check_atoms(&self, e: &FormExpr) -> Result<()> {
        match e {
            FormExpr::Const(_) => Ok(()),
            FormExpr::Generator { level, weight, index } => self.generator_expr(*level, *weight, *index).map(|_| ()),
            FormExpr::Delta(n) => self.level(*n as i64).map(|_| ()),
            FormExpr::Wp(t) => {
                let m = Exponent::from_integer(t.m as i64);
                if (t.a / m).is_integer() && t.b == Shift::Zero {
                    Err(Error::PoleAtArgument(format!("wp({t})")))
                } else {
                    Ok(())
                }
            }
            FormExpr::Wpt(t) => {
                let m = Exponent::from_integer(t.m as i64);
                if (t.a / m + Exponent::new(1, 2)).is_integer() && t.b == Shift::Half {
                    Err(Error::PoleAtArgument(format!("wpt({t})")))
                } else {
                    Ok(())
                }
            }
            FormExpr::Eta(q) => {
                let lead = q.leading_exponent();
                if (lead * 2).is_integer() {
                    Ok(())
                } else {
                    Err(Error::FractionalExponent(lead))
                }
            }
            FormExpr::Eisenstein { k, m } => {
                if *k < 4 || k % 2 == 1 {
                    Err(Error::UnsupportedWeight(*k as i64))
                } else if *m == 0 {
                    Err(Error::PoleAtArgument(format!("Eis({k},0)")))
                } else {
                    Ok(())
                }
            }
            FormExpr::Phi { level, .. } => {
                if *level < 2 {
                    Err(Error::UnknownLevel(*level as i64))
                } else {
                    Ok(())
                }
            }
            FormExpr::HalfTwist(x) | FormExpr::Power(x, _) => self.check_atoms(x),
            FormExpr::Sum(terms) => terms.iter().try_for_each(|(_, t)| self.check_atoms(t)),
            FormExpr::Product(f) => f.iter().try_for_each(|x| self.check_atoms(x)),
        }
    }

    /// `e + O(q^prec)`.
    pub fn expand(&self, e: &FormExpr, prec: i64) -> Result<QSeries> {
        self.check(e)?;
        self.eval(e, prec)
    }

    /// Recursive evaluation; each child is expanded just far enough for the
    /// result to be known below `prec`.
    pub(crate) fn eval(&self, e: &FormExpr, prec: i64) -> Result<QSeries> {
        let p = Exponent::from_integer(prec);
        if p <= self.lower_bound(e) {
            return Ok(QSeries::zero(p));
        }
        let out = match e {
            FormExpr::Const(c) => QSeries::one(p)?.scale(c),
            FormExpr::Generator { level, weight, index } => self.generator(*level, *weight, *index, prec)?.1,
            FormExpr::Delta(n) => self.level(*n as i64)?.delta.expand(prec)?,
            FormExpr::Wp(t) => wp_hat(*t, prec)?,
            FormExpr::Wpt(t) => wpt_hat(*t, prec)?,
            FormExpr::Eta(q) => q.expand(prec)?,
            FormExpr::Eisenstein { k, m } => eisenstein(*k, *m, prec)?,
            FormExpr::Phi { level, mode } => phi_n(*level as i64, prec, *mode)?,
            FormExpr::HalfTwist(x) => self.eval(x, prec)?.half_twist()?,
            FormExpr::Sum(terms) => {
                let mut acc = QSeries::zero(p);
                for (c, t) in terms {
                    if c.is_zero() {
                        continue;
                    }
                    acc = acc.add(&self.eval(t, prec)?.scale(c));
                }
                acc
            }
            FormExpr::Product(factors) => {
                let bounds: Vec<Exponent> = factors.iter().map(|x| self.lower_bound(x)).collect();
                let total = sum_bounds(&bounds);
                let mut acc: Option<QSeries> = None;
                for (x, lb) in factors.iter().zip(&bounds) {
                    let need = (p - (total - lb)).ceil().to_integer();
                    let s = self.eval(x, need)?;
                    acc = Some(match acc {
                        None => s,
                        Some(a) => a.mul(&s),
                    });
                }
                acc.unwrap_or(QSeries::one(p)?)
            }
            FormExpr::Power(b, n) => {
                if *n == 0 {
                    QSeries::one(p)?
                } else {
                    let lb = self.lower_bound(b);
                    let need = (p - lb * Exponent::from_integer(*n as i64 - 1)).ceil().to_integer();
                    self.eval(b, need)?.pow(*n)
                }
            }
        };
        Ok(out.truncate(p))
    }
}
