#![allow(dead_code)]

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use qmodular::levels::Registry;
use qmodular::parse::parse_expr;
use qmodular::qseries::Shift;
use qmodular::{Exponent, QSeries, Rational};

/// A displayed expansion: `scale * (c_0 q^val + c_1 q^(val+1) + ...) + O(q^prec)`,
/// with one entry per exponent below `prec`.
pub struct Anchor {
    pub label: &'static str,
    pub expr: &'static str,
    pub scale: &'static str,
    pub val: i64,
    pub coeffs: &'static [&'static str],
    pub prec: i64,
}

const fn a(
    label: &'static str,
    expr: &'static str,
    scale: &'static str,
    val: i64,
    coeffs: &'static [&'static str],
    prec: i64,
) -> Anchor {
    Anchor { label, expr, scale, val, coeffs, prec }
}

const WP7_SUM: &str = "wp(1,0,7) + wp(2,0,7) + wp(3,0,7)";

pub const ANCHORS: &[Anchor] = &[
    // Weight-2 forms on Gamma0(2), Gamma0(3), Gamma0(4)
    a("wpt(tau,2tau)", "wpt(1,0,2)", "1", 0, &["1", "-8", "24"], 3),
    a("wpt(1/2,2tau)", "wpt(0,1/2,2)", "1", 1, &["-16", "0"], 3),
    a("wp(1/2+tau,2tau)", "wp(1,1/2,2)", "-1/3", 0, &["1", "-24", "24"], 3),
    a("E_{2,2}^(0)", "E(2,2,0)", "1", 0, &["1", "24", "24", "96", "24", "144", "96"], 7),
    a("E_{2,3}^(0)", "E(2,3,0)", "1", 0, &["1", "12", "36", "12", "84", "72", "36"], 7),
    // N = 1, 2
    a("Delta_1", "Delta(1)", "1", 1, &["1", "-24", "252", "-1472"], 5),
    a("E_{12,1}^(1)", "E(12,1,1)", "1", 1, &["1", "-24", "252", "-1472"], 5),
    a("E_{4,2}^(0)", "E(4,2,0)", "1", 0, &["1", "48", "624", "1344", "5232"], 5),
    a("E_{4,2}^(1)", "E(4,2,1)", "1", 1, &["1", "8", "28", "64"], 5),
    a("Delta_2", "Delta(2)", "1", 1, &["1", "8", "28", "64"], 5),
    a("E4", "E4", "1", 0, &["1", "240", "2160", "6720", "17520"], 5),
    a(
        "E4 (wpt squares)",
        "1/2*(wpt(0,1/2,1)^2 + wpt(1/2,0,1)^2 + twist(wpt(1/2,0,1))^2)",
        "1",
        0,
        &["1", "240", "2160", "6720", "17520"],
        5,
    ),
    a(
        "E4 (wp quadratic)",
        "3*(wp(0,1/2,1)^2 + wp(1/2,0,1)^2 + wp(0,1/2,1)*wp(1/2,0,1))",
        "1",
        0,
        &["1", "240", "2160", "6720", "17520"],
        5,
    ),
    // N = 3
    a("E_{2,3}^(0) short", "E(2,3,0)", "1", 0, &["1", "12", "36", "12", "84"], 5),
    a("E_{4,3}^(0)", "E(4,3,0)", "1", 0, &["1", "24", "216", "888", "1752"], 5),
    a("E_{4,3}^(1)", "E(4,3,1)", "1", 1, &["1", "9", "27", "73"], 5),
    a("E_{6,3}^(0)", "E(6,3,0)", "1", 0, &["1", "36", "540", "4356", "20556"], 5),
    a("E_{6,3}^(1)", "E(6,3,1)", "1", 1, &["1", "21", "171", "733", "2166", "5535"], 7),
    a("E_{6,3}^(2)", "E(6,3,2)", "1", 2, &["1", "6", "27", "80", "207"], 7),
    a("Delta_3", "Delta(3)", "1", 2, &["1", "6", "27", "80", "207"], 7),
    // N = 4; the displayed +32q^3 contradicts the eta product and is read as -32q^3
    a("E_{2,4}^(0)", "E(2,4,0)", "1", 0, &["1", "-8", "24", "-32", "24"], 5),
    a("E_{2,4}^(1)", "E(2,4,1)", "1", 1, &["1", "0", "4", "0", "6", "0", "8", "0", "13", "0"], 11),
    a("Delta_4", "Delta(4)", "1", 1, &["1", "0", "4", "0", "6", "0", "8", "0", "13", "0"], 11),
    // N = 5
    a("E_{2,5}^(0)", "E(2,5,0)", "1", 0, &["1", "6", "18", "24", "42"], 5),
    a("Phi_5", "Phi(5)", "1", 0, &["1", "6", "18", "24", "42"], 5),
    a("N=5 (i)", "(wp(1,0,5) + wp(2,0,5))^2", "4/9", 0, &["1", "12", "72", "264"], 4),
    a("N=5 (ii)", "1/16*(wp(1,0,5) - wp(2,0,5))^2", "1", 2, &["1", "2", "5", "10", "20", "26", "45"], 9),
    a("Delta_5", "Delta(5)", "1", 2, &["1", "2", "5", "10", "20", "26", "45"], 9),
    a(
        "N=5 (iii) E4(5tau)",
        "3*(wp(0,1/2,5)^2 + wp(5/2,0,5)^2 + wp(0,1/2,5)*wp(5/2,0,5))",
        "1",
        0,
        &["1", "0", "0", "0", "0", "240", "0", "0", "0", "0", "2160"],
        11,
    ),
    a("E_{4,5}^(0)", "E(4,5,0)", "1", 0, &["1", "12", "72", "264", "696"], 5),
    a("E_{4,5}^(1)", "E(4,5,1)", "1", 1, &["1", "6", "22", "58"], 5),
    a("E_{4,5}^(2)", "E(4,5,2)", "1", 2, &["1", "2", "5"], 5),
    // N = 6
    a(
        "N=6 (i)",
        "wp(1,0,6) + wp(2,0,6) + wp(3,0,6) + wp(4,0,6) + wp(5,0,6)",
        "-1/3",
        0,
        &["5", "24", "72", "96", "168"],
        5,
    ),
    a("N=6 (ii)", "wp(1,0,2)", "-1/3", 0, &["1", "24", "24", "96", "24"], 5),
    a("N=6 (iii)", "wp(1,0,3)", "-1/3", 0, &["1", "12", "36", "12", "84"], 5),
    a("E_{2,6}^(0)", "E(2,6,0)", "1", 0, &["1", "24", "24", "96", "24"], 5),
    a("E_{2,6}^(1)", "E(2,6,1)", "1", 1, &["1", "-1", "7", "-5"], 5),
    a("E_{2,6}^(2)", "E(2,6,2)", "1", 2, &["1", "-2", "3"], 5),
    a(
        "Delta_6 (wp combination)",
        "1/48*(3*wp(1,0,2) - 8*wp(1,0,3) + wp(1,0,6) + wp(2,0,6) + wp(3,0,6) + wp(4,0,6) + wp(5,0,6))",
        "1",
        2,
        &["1", "-2", "3"],
        5,
    ),
    a("Delta_6", "Delta(6)", "1", 2, &["1", "-2", "3"], 5),
    // N = 7
    a("E_{2,7}^(0)", "E(2,7,0)", "1", 0, &["1", "4", "12", "16", "28"], 5),
    a("N=7 (i)", "(wp(1,0,7) + wp(2,0,7) + wp(3,0,7))^2", "1", 0, &["1", "8", "40", "128", "328"], 5),
    a("N=7 (ii)", "3*(wp(1,0,7)^2 + wp(2,0,7)^2 + wp(3,0,7)^2)", "1", 0, &["1", "8", "72", "224", "584"], 5),
    a(
        "N=7 (iii) E4(7tau)",
        "3*(wp(0,1/2,7)^2 + wp(7/2,0,7)^2 + wp(0,1/2,7)*wp(7/2,0,7))",
        "1",
        0,
        &["1", "0", "0", "0", "0", "0", "0", "240", "0", "0", "0", "0", "0", "0", "2160", "0", "0", "0", "0", "0", "0"],
        21,
    ),
    a("E_{4,7}^(0)", "E(4,7,0)", "1", 0, &["1", "8", "40", "128", "328", "656", "1216", "1864"], 8),
    a("E_{4,7}^(1)", "E(4,7,1)", "1", 1, &["1", "5", "16", "41", "82", "152", "203", "357"], 9),
    a("E_{4,7}^(2)", "E(4,7,2)", "1", 2, &["1", "3", "8", "11", "25", "35", "57"], 9),
    a("H1", "9*(wp(1,0,7)^3 + wp(2,0,7)^3 + wp(3,0,7)^3)", "-1", 0, &["1", "12", "180", "1200", "5124"], 5),
    a(
        "H2",
        "9/2*(wp(1,0,7)^2*wp(2,0,7) + wp(1,0,7)^2*wp(3,0,7) + wp(2,0,7)^2*wp(1,0,7) \
         + wp(2,0,7)^2*wp(3,0,7) + wp(3,0,7)^2*wp(1,0,7) + wp(3,0,7)^2*wp(2,0,7))",
        "-1",
        0,
        &["1", "12", "84", "336", "1188"],
        5,
    ),
    a("H3", "27*wp(1,0,7)*wp(2,0,7)*wp(3,0,7)", "-1", 0, &["1", "12", "36", "192", "516"], 5),
    a(
        "E_{6,7}^(3) (linear-form product)",
        "-1/128*(2*wp(1,0,7) - wp(2,0,7) - wp(3,0,7))*(2*wp(2,0,7) - wp(1,0,7) - wp(3,0,7))\
         *(2*wp(3,0,7) - wp(1,0,7) - wp(2,0,7))",
        "1",
        3,
        &["1", "9/2", "12"],
        6,
    ),
    a("E_{6,7}^(0)", "E(6,7,0)", "1", 0, &["1", "12", "84", "400", "1476"], 5),
    a("E_{6,7}^(1)", "E(6,7,1)", "1", 1, &["1", "9", "48", "181"], 5),
    a("E_{6,7}^(2)", "E(6,7,2)", "1", 2, &["1", "7", "32"], 5),
    a("E_{6,7}^(3)", "E(6,7,3)", "1", 3, &["1", "9/2", "12"], 6),
    a("E_{6,7}^(4)", "E(6,7,4)", "1", 4, &["1", "2", "5", "10"], 8),
    a("Delta_7", "Delta(7)", "1", 4, &["1", "2", "5", "10"], 8),
    // N = 8
    a("E_{2,8}^(0)", "E(2,8,0)", "1", 0, &["1", "-8", "24", "-32", "24"], 5),
    a("E_{2,8}^(1)", "E(2,8,1)", "1", 1, &["1", "0", "4", "0", "6"], 6),
    a("E_{2,8}^(2)", "E(2,8,2)", "1", 2, &["1", "0", "0", "0", "4", "0", "0", "0"], 10),
    a("Delta_8", "Delta(8)", "1", 2, &["1", "0", "0", "0", "4", "0", "0", "0"], 10),
    // N = 9
    a("N=9 (i)", "wp(1,0,3)", "-1/3", 0, &["1", "12", "36", "12", "84"], 5),
    a("N=9 (ii)", "wp(3,0,9)", "-1/3", 0, &["1", "0", "0", "12", "0", "0", "36", "0", "0"], 9),
    a("N=9 (iii)", "wp(1,0,9) + wp(2,0,9) + wp(3,0,9) + wp(4,0,9)", "-4/3", 0, &["1", "3", "9", "12", "21"], 5),
    a("Delta_9", "Delta(9)", "1", 2, &["1", "0", "0", "2", "0", "0", "5", "0", "0"], 11),
    a("E_{2,9}^(0)", "E(2,9,0)", "1", 0, &["1", "0", "0", "12", "0", "0", "36", "0", "0"], 9),
    a("E_{2,9}^(1)", "E(2,9,1)", "1", 1, &["1", "3", "0", "7", "6", "0"], 7),
    a("E_{2,9}^(2)", "E(2,9,2)", "1", 2, &["1", "0", "0", "2", "0", "0", "5", "0", "0"], 11),
    // N = 10; item (iii) is read as a sum, as the constant term requires
    a("N=10 (i)", "wp(1,0,2)", "-1/3", 0, &["1", "24", "24", "96", "24", "144"], 6),
    a(
        "N=10 (ii)",
        "wp(5,0,10)",
        "-1/3",
        0,
        &["1", "0", "0", "0", "0", "24", "0", "0", "0", "0", "24", "0", "0", "0", "0"],
        15,
    ),
    a("N=10 (iii)", "wp(1,0,5) + wp(2,0,5)", "-2/3", 0, &["1", "6", "18", "24", "42", "6"], 6),
    a(
        "N=10 (iv)",
        "wp(1,0,10) + wp(2,0,10) + wp(3,0,10) + wp(4,0,10)",
        "-4/3",
        0,
        &["1", "3", "9", "12", "21", "15"],
        6,
    ),
    a(
        "E_{2,10}^(0)",
        "E(2,10,0)",
        "1",
        0,
        &["1", "0", "0", "0", "0", "24", "0", "0", "0", "0", "24", "0", "0", "0", "0"],
        15,
    ),
    a("E_{2,10}^(1)", "E(2,10,1)", "1", 1, &["1", "1", "4", "1", "5", "4", "8"], 8),
    a("E_{2,10}^(2)", "E(2,10,2)", "1", 2, &["1", "0", "3", "-4", "4", "0"], 8),
    a(
        "E_{4,10}^(0)",
        "E(4,10,0)",
        "1",
        0,
        &["1", "0", "0", "0", "0", "48", "0", "0", "0", "0", "624", "0", "0", "0", "0"],
        15,
    ),
    a("E_{4,10}^(1)", "E(4,10,1)", "1", 1, &["1", "1", "4", "1", "5", "28", "32"], 8),
    a("E_{4,10}^(2)", "E(4,10,2)", "1", 2, &["1", "0", "3", "-4", "4", "24"], 8),
    a("E_{4,10}^(3)", "E(4,10,3)", "1", 3, &["1", "1", "7", "0", "17"], 8),
    a("E_{4,10}^(4)", "E(4,10,4)", "1", 4, &["1", "0", "6", "-8"], 8),
    a(
        "E_{4,10}^(5)",
        "E(4,10,5)",
        "1",
        5,
        &["1", "0", "0", "0", "0", "8", "0", "0", "0", "0", "28", "0", "0", "0", "0"],
        20,
    ),
    a("E_{4,10}^(6)", "E(4,10,6)", "1", 6, &["1", "-2", "3", "-6"], 10),
    a("Delta_10", "Delta(10)", "1", 6, &["1", "-2", "3", "-6"], 10),
];

impl Anchor {
    pub fn expected(&self) -> QSeries {
        let scale = Rational::from_str(self.scale).expect("scale");
        let coeffs = self.coeffs.iter().map(|c| Rational::from_str(c).expect("coefficient") * &scale).collect();
        assert_eq!(self.val + self.coeffs.len() as i64, self.prec, "{}", self.label);
        QSeries::from_coeffs(1, self.val, coeffs)
    }

    /// `None` on exact agreement, otherwise a description of the mismatch.
    pub fn check(&self, reg: &Registry) -> Option<String> {
        let got = parse_expr(self.expr).and_then(|e| reg.expand(&e, self.prec));
        match got {
            Err(e) => Some(format!("{}: {e}", self.label)),
            Ok(s) if s == self.expected() => None,
            Ok(s) => Some(format!("{}: got {s}, expected {}", self.label, self.expected())),
        }
    }
}

pub fn anchor_failures(reg: &Registry) -> Vec<String> {
    ANCHORS.iter().filter_map(|a| a.check(reg)).collect()
}

/// Dimension tables for 2k = 2, 4, ..., 16.
pub const DIMS: [[u32; 8]; 10] = [
    [0, 1, 1, 1, 1, 2, 1, 2],
    [1, 2, 2, 3, 3, 4, 4, 5],
    [1, 2, 3, 3, 4, 5, 5, 6],
    [2, 3, 4, 5, 6, 7, 8, 9],
    [1, 3, 3, 5, 5, 7, 7, 9],
    [3, 5, 7, 9, 11, 13, 15, 17],
    [1, 3, 5, 5, 7, 9, 9, 11],
    [3, 5, 7, 9, 11, 13, 15, 17],
    [3, 5, 7, 9, 11, 13, 15, 17],
    [3, 7, 9, 13, 15, 19, 21, 25],
];

/// Mismatches against the table, and against `d(w) = d(w - rho) + nu`
/// wherever both weights lie in the table.
pub fn dimension_failures(reg: &Registry) -> Vec<String> {
    let mut out = Vec::new();
    for (i, row) in DIMS.iter().enumerate() {
        let n = i as i64 + 1;
        let spec = reg.level(n).expect("level");
        for (j, &want) in row.iter().enumerate() {
            let w = 2 * (j as i64 + 1);
            match reg.dimension(n, w) {
                Ok(d) if d == want => {}
                other => out.push(format!("dim M_{w}(Gamma0({n})): got {other:?}, table {want}")),
            }
            let rho = spec.rho as i64;
            if w > rho && (n != 1 || w - rho > 2) {
                let prev = row[((w - rho) / 2 - 1) as usize];
                if want != prev + spec.nu {
                    out.push(format!("recursion at N={n}, 2k={w}: table {want} vs {prev} + {}", spec.nu));
                }
            }
        }
    }
    out
}

// ---- oracles ----

/// `prod_{n>=1} (1 - q^n)^24` by multiplying out one binomial at a time.
pub fn naive_eta24(len: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); len];
    v[0] = BigInt::one();
    for n in 1..len {
        for _ in 0..24 {
            for i in (n..len).rev() {
                let t = v[i - n].clone();
                v[i] -= t;
            }
        }
    }
    v
}

/// `1/sin(pi w)^2 = -4 x / (1 - x)^2` with `x = e^(2 i pi w) = +-q^c`: the
/// geometric series is squared by explicit convolution. Returns coefficients
/// on the `q^(1/2)` grid below `q^prec`.
pub fn brute_inv_sin2(c2: usize, half: bool, prec: usize) -> Vec<BigInt> {
    let len = 2 * prec;
    let sign = if half { -1 } else { 1 };
    let mut geo = vec![BigInt::zero(); len];
    let mut k = 0usize;
    let mut xk = BigInt::one();
    while k * c2 < len {
        geo[k * c2] = xk.clone();
        xk *= sign;
        k += 1;
    }
    let mut sq = vec![BigInt::zero(); len];
    for i in 0..len {
        if geo[i].is_zero() {
            continue;
        }
        for j in 0..len - i {
            if !geo[j].is_zero() {
                sq[i + j] += &geo[i] * &geo[j];
            }
        }
    }
    let mut out = vec![BigInt::zero(); len];
    for i in 0..len {
        if i + c2 < len {
            out[i + c2] = &sq[i] * (-4 * sign);
        }
    }
    out
}

pub fn on_half_grid(s: &QSeries, prec: usize) -> Vec<BigInt> {
    (0..2 * prec as i64)
        .map(|j| {
            let c = s.coeff(Exponent::new(j, 2)).unwrap_or_else(Rational::zero);
            assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

pub fn shift(half: bool) -> Shift {
    if half {
        Shift::Half
    } else {
        Shift::Zero
    }
}

// ---- strategies ----

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |r| !r.is_zero())
}

/// Series on the integral or half grid, with a nonzero leading coefficient.
pub fn series() -> impl Strategy<Value = QSeries> {
    (1u32..=2, -3i64..=3, nonzero_rational(), prop::collection::vec(small_rational(), 0..10)).prop_map(
        |(den, val, lead, rest)| {
            let mut coeffs = vec![lead];
            coeffs.extend(rest);
            QSeries::from_coeffs(den, val, coeffs)
        },
    )
}

/// Integral-grid series with valuation 0 and nonzero constant term.
pub fn unit_series() -> impl Strategy<Value = QSeries> {
    (nonzero_rational(), prop::collection::vec(small_rational(), 0..10)).prop_map(|(lead, rest)| {
        let mut coeffs = vec![lead];
        coeffs.extend(rest);
        QSeries::from_coeffs(1, 0, coeffs)
    })
}

/// Agreement below the smaller of the two precisions.
pub fn agree(a: &QSeries, b: &QSeries) -> bool {
    a.first_difference(b).is_none()
}
