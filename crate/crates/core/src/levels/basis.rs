use std::collections::HashMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::expr::FormExpr;
use super::registry::{LevelSpec, Registry};
use crate::error::{Error, Result};
use crate::qseries::{Exponent, QSeries, Rational};

/// One basis vector `Delta_N^b * head`, unitary with valuation `index`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub index: u32,
    pub label: String,
    pub expr: FormExpr,
    pub series: QSeries,
}

/// Echelon basis of `M_weight(Gamma0(level))` to `O(q^precision)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSet {
    pub level: u32,
    pub weight: u32,
    pub precision: i64,
    pub elements: Vec<BasisElement>,
}

impl BasisSet {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn to_json(&self) -> Value {
        let elements: Vec<Value> = self
            .elements
            .iter()
            .map(|e| {
                let from = e.series.valuation().to_integer().min(self.precision);
                let coefficients: Vec<[String; 2]> = (from..self.precision)
                    .map(|n| {
                        let c = e.series.coeff_int(n).unwrap_or_else(Rational::zero);
                        [c.numer().to_string(), c.denom().to_string()]
                    })
                    .collect();
                json!({
                    "s": e.index,
                    "valuation": e.series.valuation().to_integer(),
                    "label": e.label,
                    "coefficients": coefficients,
                })
            })
            .collect();
        json!({
            "level": self.level,
            "weight": self.weight,
            "precision": self.precision,
            "elements": elements,
        })
    }
}

/// Builds bases of several weights at one level and precision, sharing the
/// generator series, the powers of `E_{2,N}^{(0)}` and the powers of
/// `Delta_N`.
pub struct BasisBuilder<'r> {
    reg: &'r Registry,
    spec: &'r LevelSpec,
    prec: i64,
    gens: HashMap<(u32, u32), QSeries>,
    e2_pows: Vec<QSeries>,
    delta_pows: Vec<QSeries>,
}

impl<'r> BasisBuilder<'r> {
    pub fn new(reg: &'r Registry, level: i64, prec: i64) -> Result<Self> {
        let spec = reg.level(level)?;
        if prec < 0 {
            return Err(Error::InvalidPrecision { exponent: Exponent::zero(), prec: Exponent::from_integer(prec) });
        }
        let p = Exponent::from_integer(prec);
        Ok(Self {
            reg,
            spec,
            prec,
            gens: HashMap::new(),
            e2_pows: vec![QSeries::one(p)?],
            delta_pows: vec![QSeries::one(p)?],
        })
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    fn generator(&mut self, weight: u32, index: u32) -> Result<QSeries> {
        if let Some(s) = self.gens.get(&(weight, index)) {
            return Ok(s.clone());
        }
        let (_, s) = self.reg.generator(self.spec.level, weight, index, self.prec)?;
        self.gens.insert((weight, index), s.clone());
        Ok(s)
    }

    fn e2_pow(&mut self, k: usize) -> Result<QSeries> {
        while self.e2_pows.len() <= k {
            let e2 = self.generator(2, 0)?;
            let next = self.e2_pows.last().expect("nonempty").mul(&e2);
            self.e2_pows.push(next.truncate(Exponent::from_integer(self.prec)));
        }
        Ok(self.e2_pows[k].clone())
    }

    fn delta_pow(&mut self, b: usize) -> Result<QSeries> {
        if self.delta_pows.len() <= b {
            let d = self.spec.delta.expand(self.prec.max(self.spec.nu as i64 + 1))?;
            while self.delta_pows.len() <= b {
                let next = self.delta_pows.last().expect("nonempty").mul(&d);
                self.delta_pows.push(next.truncate(Exponent::from_integer(self.prec)));
            }
        }
        Ok(self.delta_pows[b].clone())
    }

    pub fn build(&mut self, weight: i64) -> Result<BasisSet> {
        let n = self.spec.level;
        let dim = self.reg.dimension(n as i64, weight)?;
        if dim == 0 {
            return Err(Error::EmptySpace { level: n, weight: weight as u32 });
        }
        if self.prec < dim as i64 {
            return Err(Error::InsufficientPrecision { needed: dim as i64, available: self.prec });
        }
        let (rho, nu) = (self.spec.rho, self.spec.nu);
        let p = Exponent::from_integer(self.prec);
        let mut elements = Vec::with_capacity(dim as usize);
        let mut b = 0u32;
        let mut wb = weight as u32;
        loop {
            let head_prec = Exponent::from_integer(self.prec - (nu * b) as i64);
            let mut heads: Vec<(u32, String, FormExpr, QSeries)> = Vec::new();
            let last = wb <= rho;
            if last {
                for s in 0..self.spec.base_dimension(wb) {
                    let series = self.generator(wb, s)?;
                    heads.push((s, format!("E({wb},{n},{s})"), FormExpr::generator(n, wb, s), series));
                }
            } else if n == 1 {
                let series = self.generator(wb, 0)?;
                heads.push((0, format!("E({wb},1,0)"), FormExpr::generator(1, wb, 0), series));
            } else {
                let k = (wb - rho) / 2;
                let e2k = self.e2_pow(k as usize)?.truncate(head_prec);
                for s in 0..nu {
                    let g = self.generator(rho, s)?.truncate(head_prec);
                    let e2 = FormExpr::generator(n, 2, 0);
                    let (label, expr) = if rho == 2 && s == 0 {
                        (format!("E(2,{n},0)^{}", k + 1), e2.pow(k + 1))
                    } else {
                        let power = if k > 1 { format!("^{k}") } else { String::new() };
                        let e2k = if k > 1 { e2.pow(k) } else { e2 };
                        (
                            format!("E({rho},{n},{s})·E(2,{n},0){power}"),
                            FormExpr::product(vec![FormExpr::generator(n, rho, s), e2k]),
                        )
                    };
                    heads.push((s, label, expr, g.mul(&e2k)));
                }
            }
            let dpow = self.delta_pow(b as usize)?;
            for (s, head_label, head_expr, head) in heads {
                let (label, expr, series) = if b == 0 {
                    (head_label, head_expr, head.truncate(p))
                } else {
                    let dl = if b > 1 { format!("Δ_{n}^{b}") } else { format!("Δ_{n}") };
                    let de = if b > 1 { FormExpr::Delta(n).pow(b) } else { FormExpr::Delta(n) };
                    let series = dpow.mul(&head.truncate(head_prec)).truncate(p);
                    (format!("{dl}·{head_label}"), FormExpr::product(vec![de, head_expr]), series)
                };
                elements.push(BasisElement { index: nu * b + s, label, expr, series });
            }
            if last {
                break;
            }
            b += 1;
            wb -= rho;
        }

        for e in &elements {
            if (e.index as i64) < self.prec {
                let ok = e.series.valuation() == Exponent::from_integer(e.index as i64)
                    && e.series.leading_coefficient().is_some_and(|c| c.is_one())
                    && e.series.den() == 1;
                if !ok {
                    return Err(Error::RegistryValidation(format!(
                        "basis element {} is not q^{} + ...",
                        e.label, e.index
                    )));
                }
            }
        }
        if elements.len() != dim as usize {
            return Err(Error::RegistryValidation(format!("built {} elements for dimension {dim}", elements.len())));
        }
        Ok(BasisSet { level: n, weight: weight as u32, precision: self.prec, elements })
    }
}

/// Coordinates of `f` in the echelon basis of `M_weight(Gamma0(level))`.
///
/// The expansion must reach `q^(d+4)`, `d` the dimension, so that at least
/// five coefficients past the echelon pivots are checked.
pub fn reduce(reg: &Registry, f: &QSeries, level: i64, weight: i64) -> Result<Vec<Rational>> {
    let dim = reg.dimension(level, weight)?;
    let available = f.precision().floor().to_integer();
    let needed = dim as i64 + 5;
    if available < needed {
        return Err(Error::InsufficientPrecision { needed, available });
    }
    if f.den() != 1 {
        let first = f
            .terms()
            .find(|(e, _)| !e.is_integer())
            .map(|(e, _)| e)
            .expect("non-integral grid has a non-integral term");
        return Err(Error::NotInSpan(first));
    }
    let set = BasisBuilder::new(reg, level, available)?.build(weight)?;
    let mut residual = f.truncate(Exponent::from_integer(available));
    let mut coords = Vec::with_capacity(set.dimension());
    for e in &set.elements {
        let c = residual.coeff_int(e.index as i64).unwrap_or_else(Rational::zero);
        if !c.is_zero() {
            residual = residual.sub(&e.series.scale(&c));
        }
        coords.push(c);
    }
    if residual.is_zero_so_far() {
        Ok(coords)
    } else {
        Err(Error::NotInSpan(residual.valuation()))
    }
}
