//! Named identities between q-expansions, checked coefficientwise.

use std::fmt;
use std::sync::OnceLock;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::levels::{FormExpr, Registry};
use crate::parse::parse_expr;
use crate::qseries::{format_exponent, Exponent, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCase {
    pub name: String,
    pub lhs: FormExpr,
    pub rhs: FormExpr,
    pub note: String,
    pub default_prec: i64,
}

impl IdentityCase {
    fn new(name: &str, lhs: &str, rhs: &str, note: &str) -> Self {
        let side = |s: &str| parse_expr(s).unwrap_or_else(|e| panic!("identity {name}: `{s}`: {e}"));
        let (lhs, rhs) = (side(lhs), side(rhs));
        assert_eq!(lhs.weight(), rhs.weight(), "identity {name} is not homogeneous");
        Self { name: name.into(), lhs, rhs, note: note.into(), default_prec: 200 }
    }

    fn prec(mut self, p: i64) -> Self {
        self.default_prec = p;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// First exponent where the sides differ, with the two coefficients.
    Fail {
        exponent: Exponent,
        lhs: Rational,
        rhs: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub name: String,
    pub prec: i64,
    pub status: Status,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        let (status, bad) = match &self.status {
            Status::Pass => ("pass", Value::Null),
            Status::Fail { exponent, .. } if exponent.is_integer() => ("fail", json!(exponent.to_integer())),
            Status::Fail { exponent, .. } => ("fail", json!(format!("{}/{}", exponent.numer(), exponent.denom()))),
        };
        json!({ "name": self.name, "status": status, "first_bad_exponent": bad, "prec": self.prec })
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            Status::Pass => write!(f, "{:<20} PASS  (to O(q^{}))", self.name, self.prec),
            Status::Fail { exponent, lhs, rhs } => {
                write!(f, "{:<20} FAIL  at q^{}: lhs {} rhs {}", self.name, format_exponent(*exponent), lhs, rhs)
            }
        }
    }
}

fn build_cases() -> Vec<IdentityCase> {
    // A = wpt(tau/2, tau), B = wpt(1/2, tau), t = wpt(tau, 2 tau), h = wpt(1/2, 2 tau)
    let a = "wpt(1/2,0,1)";
    let b = "wpt(0,1/2,1)";
    let t = "wpt(1,0,2)";
    let h = "wpt(0,1/2,2)";
    let w7 = |k: u32| format!("wp({k},0,7)");
    let (w1, w2, w3) = (w7(1), w7(2), w7(3));
    let h1 = format!("9*({w1}^3 + {w2}^3 + {w3}^3)");
    let h2 = format!("9/2*({w1}^2*{w2} + {w1}^2*{w3} + {w2}^2*{w1} + {w2}^2*{w3} + {w3}^2*{w1} + {w3}^2*{w2})");
    let h3 = format!("27*{w1}*{w2}*{w3}");
    let sum = |ks: std::ops::RangeInclusive<u32>, m: u32| {
        ks.map(|k| format!("wp({k},0,{m})")).collect::<Vec<_>>().join(" + ")
    };

    let mut cases = vec![
        IdentityCase::new(
            "mod1",
            "wp(1,1/2,2)",
            &format!("-1/3*({h} + {t})"),
            "wp at 1/2 + tau on Z + 2tau Z through the two level-4 wpt values",
        ),
        IdentityCase::new(
            "wp2wpt-at-half",
            b,
            "wp(1/2,0,1) - wp(1/2,1/2,1)",
            "wpt(z) = wp(z + (1+tau)/2) - wp((1+tau)/2) at z = 1/2",
        ),
        IdentityCase::new(
            "wp2wpt-at-halftau",
            a,
            "wp(0,1/2,1) - wp(1/2,1/2,1)",
            "wpt(z) = wp(z + (1+tau)/2) - wp((1+tau)/2) at z = tau/2",
        ),
        IdentityCase::new(
            "wpt2wp-at-half",
            "wp(0,1/2,1)",
            &format!("{a} - 1/3*({b} + {a})"),
            "wp(z) = wpt(z + (1+tau)/2) - (wpt(1/2) + wpt(tau/2))/3 at z = 1/2",
        ),
        IdentityCase::new(
            "wpt2wp-at-halftau",
            "wp(1/2,0,1)",
            &format!("{b} - 1/3*({b} + {a})"),
            "wp(z) = wpt(z + (1+tau)/2) - (wpt(1/2) + wpt(tau/2))/3 at z = tau/2",
        ),
        IdentityCase::new(
            "delta1-product",
            "Delta(1)",
            &format!("1/256*({b}*{a}*twist({a}))^2"),
            "discriminant as the square of the three half-period wpt values",
        ),
        IdentityCase::new(
            "e2-2-twpa",
            "E(2,2,0)",
            &format!("{t} - 2*{h}"),
            "level-2 weight-2 generator in the level-4 wpt values",
        ),
        IdentityCase::new(
            "e2-3-twpa",
            "E(2,3,0)",
            "-3*wpt(1/2,1/2,3) + wpt(0,1/2,3) + wpt(3/2,0,3)",
            "level-3 weight-2 generator through wpt on Z + 3tau Z",
        ),
        IdentityCase::new(
            "e4-ei4-wpt",
            "E4",
            &format!("1/2*({b}^2 + {a}^2 + twist({a})^2)"),
            "E4 as half the sum of squares of the three half-period wpt values",
        ),
        IdentityCase::new(
            "e4-ei4-wp",
            "E4",
            "3*(wp(0,1/2,1)^2 + wp(1/2,0,1)^2 + wp(0,1/2,1)*wp(1/2,0,1))",
            "E4 as a symmetric quadratic in wp(1/2) and wp(tau/2)",
        ),
        IdentityCase::new("e4-2tau", "E4", &format!("{t}^2 + 16*{h}^2 - 16*{t}*{h}"), "E4 in t and h"),
        IdentityCase::new("e4-sym", "E4", &format!("{a}^2 + {b}^2 - {a}*{b}"), "E4 in A and B"),
        IdentityCase::new("e6-2tau", "E6", &format!("{t}^3 + 30*{t}^2*{h} - 96*{t}*{h}^2 + 64*{h}^3"), "E6 in t and h"),
        IdentityCase::new("e6-sym", "E6", &format!("{a}^3 - 3/2*{a}^2*{b} - 3/2*{a}*{b}^2 + {b}^3"), "E6 in A and B"),
        IdentityCase::new(
            "e8-2tau",
            "E8",
            &format!("{t}^4 - 32*{t}^3*{h} + 288*{t}^2*{h}^2 - 512*{t}*{h}^3 + 256*{h}^4"),
            "E8 in t and h",
        ),
        IdentityCase::new(
            "e8-sym",
            "E8",
            &format!("{a}^4 - 2*{a}^3*{b} + 3*{a}^2*{b}^2 - 2*{a}*{b}^3 + {b}^4"),
            "E8 in A and B",
        ),
        IdentityCase::new(
            "e10-sym",
            "E10",
            &format!("{a}^5 - 5/2*{a}^4*{b} + {a}^3*{b}^2 + {a}^2*{b}^3 - 5/2*{a}*{b}^4 + {b}^5"),
            "E10 in A and B",
        ),
        IdentityCase::new(
            "e12-sym",
            "E12",
            &format!(
                "{a}^6 - 3*{a}^5*{b} + 4917/1382*{a}^4*{b}^2 - 1462/691*{a}^3*{b}^3 \
                 + 4917/1382*{a}^2*{b}^4 - 3*{a}*{b}^5 + {b}^6"
            ),
            "E12 in A and B",
        ),
        IdentityCase::new("delta2-sq", "Delta(2)", &format!("1/256*{b}^2"), "Delta_2 as a wpt square"),
        IdentityCase::new("delta4-twpa", "Delta(4)", &format!("-1/16*{h}"), "Delta_4 as a single wpt value"),
        IdentityCase::new(
            "delta5-diff-sq",
            "Delta(5)",
            "1/16*(wp(1,0,5) - wp(2,0,5))^2",
            "Delta_5 as a square of a difference of wp values",
        ),
        IdentityCase::new(
            "delta6-combo",
            "Delta(6)",
            &format!("1/48*(3*wp(1,0,2) - 8*wp(1,0,3) + {})", sum(1..=5, 6)),
            "Delta_6 as a linear combination of wp values",
        ),
        IdentityCase::new(
            "e673-h",
            &format!("-1/576*({h1} - 3*({h2}) + 2*({h3}))"),
            &format!("-1/128*(2*{w1} - {w2} - {w3})*(2*{w2} - {w1} - {w3})*(2*{w3} - {w1} - {w2})"),
            "weight-6 level-7 generator from symmetric cubics and as a product of three linear forms",
        ),
        IdentityCase::new(
            "n9-linear",
            "wp(1,0,3) + 3*wp(3,0,9)",
            &sum(1..=4, 9),
            "linear relation between wp values of levels 3 and 9",
        ),
        IdentityCase::new(
            "n10-linear",
            "2*wp(5,0,10) + wp(1,0,5) + wp(2,0,5)",
            &sum(1..=4, 10),
            "linear relation between wp values of levels 5 and 10",
        ),
    ];
    for n in 2..=10 {
        cases.push(
            IdentityCase::new(
                &format!("phi-dual-{n}"),
                &format!("Phi({n})"),
                &format!("PhiSigma({n})"),
                "Phi_N as a wp sum and as a divisor sum",
            )
            .prec(300),
        );
    }
    cases
}

/// The built-in identities, in report order.
pub fn cases() -> &'static [IdentityCase] {
    static CASES: OnceLock<Vec<IdentityCase>> = OnceLock::new();
    CASES.get_or_init(build_cases)
}

pub fn find(name: &str) -> Result<&'static IdentityCase> {
    cases().iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownIdentity(name.to_string()))
}

/// Expands both sides to `O(q^prec)` and compares them.
pub fn check_case(reg: &Registry, case: &IdentityCase, prec: i64) -> Result<IdentityReport> {
    let lhs = reg.expand(&case.lhs, prec)?;
    let rhs = reg.expand(&case.rhs, prec)?;
    let status = match lhs.first_difference(&rhs) {
        None => Status::Pass,
        Some(e) => {
            Status::Fail { exponent: e, lhs: lhs.coeff(e).unwrap_or_default(), rhs: rhs.coeff(e).unwrap_or_default() }
        }
    };
    Ok(IdentityReport { name: case.name.clone(), prec, status })
}

pub fn check(name: &str, prec: i64) -> Result<IdentityReport> {
    check_case(Registry::global(), find(name)?, prec)
}

pub fn check_all(prec: i64) -> Result<Vec<IdentityReport>> {
    cases().iter().map(|c| check_case(Registry::global(), c, prec)).collect()
}
