use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qmodular::eta::level_records;
use qmodular::identities::{self, IdentityReport};
use qmodular::levels::{self, Registry};
use qmodular::parse::parse_expr;
use qmodular::{Error, Exponent, QSeries};

const BENCH_EXPR: &str = "E(4,10,2)*E(2,10,0)^335*Delta(10)^336";

#[derive(Parser)]
#[command(name = "qmodular", version, about = "Exact q-expansions of modular forms on Gamma0(N), N <= 10")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    /// Write the document to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Echelon basis of M_W(Gamma0(N)).
    Basis {
        #[arg(long)]
        level: i64,
        #[arg(long)]
        weight: i64,
        /// Defaults to the dimension.
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Dimensions of M_W(Gamma0(N)); all even weights up to 16 when --weight is omitted.
    Dims {
        #[arg(long)]
        level: Option<i64>,
        #[arg(long)]
        weight: Option<i64>,
    },
    /// Expand an expression.
    Expand {
        #[arg(long)]
        expr: String,
        /// Defaults to ten past the valuation bound.
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Coordinates of an expression in the echelon basis.
    Reduce {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        level: i64,
        /// Defaults to the weight of the expression.
        #[arg(long)]
        weight: Option<i64>,
        /// Defaults to dimension + 5.
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Check built-in identities.
    Verify {
        #[arg(long, default_value = "all")]
        identity: String,
        /// Defaults to each identity's own precision.
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Expand E(4,10,2) E(2,10,0)^335 Delta_10^336 and time it.
    Bench {
        /// Number of coefficients past q^2018 to compute.
        #[arg(long, default_value_t = 10)]
        terms: i64,
    },
    /// Registry of levels and their Delta_N eta quotients.
    DumpLevels,
}

enum Failure {
    /// Verification failed or the input is outside the span; exit 1.
    Check(String),
    /// Bad arguments or input; exit 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotInSpan(_) | Error::PoleAtArgument(_) | Error::RegistryValidation(_) => {
                Failure::Check(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Run = std::result::Result<String, Failure>;

fn check_prec(p: i64) -> std::result::Result<i64, Failure> {
    if p >= 1 {
        Ok(p)
    } else {
        Err(Failure::Usage(format!("--prec must be at least 1, got {p}")))
    }
}

fn series_json(s: &QSeries) -> Value {
    let terms: Vec<Value> =
        s.terms().map(|(e, c)| json!([exponent_string(e), c.numer().to_string(), c.denom().to_string()])).collect();
    json!({
        "valuation": exponent_string(s.valuation()),
        "precision": exponent_string(s.precision()),
        "terms": terms,
    })
}

fn exponent_string(e: Exponent) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn basis(fmt: Format, level: i64, weight: i64, prec: Option<i64>) -> Run {
    let prec = match prec {
        Some(p) => check_prec(p)?,
        None => levels::dimension(level, weight)?.max(1) as i64,
    };
    let set = levels::basis(level, weight, prec)?;
    Ok(match fmt {
        Format::Json => pretty(&set.to_json()),
        Format::Text => {
            let mut out = format!("M_{weight}(Gamma0({level})): dimension {}, to O(q^{prec})\n", set.dimension());
            for e in &set.elements {
                out.push_str(&format!("[{}] {} = {}\n", e.index, e.label, e.series));
            }
            out
        }
    })
}

fn dims(fmt: Format, level: Option<i64>, weight: Option<i64>) -> Run {
    let levels: Vec<i64> = match level {
        Some(n) => vec![n],
        None => (1..=10).collect(),
    };
    let weights: Vec<i64> = match weight {
        Some(w) => vec![w],
        None => (2..=16).step_by(2).collect(),
    };
    let mut rows = Vec::new();
    for &n in &levels {
        let row = weights.iter().map(|&w| levels::dimension(n, w)).collect::<Result<Vec<_>, _>>()?;
        rows.push((n, row));
    }
    Ok(match (fmt, level, weight) {
        (Format::Text, Some(_), Some(_)) => rows[0].1[0].to_string(),
        (Format::Text, ..) => {
            let mut out = String::from("N \\ 2k");
            for w in &weights {
                out.push_str(&format!("{w:>5}"));
            }
            for (n, row) in rows {
                out.push_str(&format!("\n{n:<6}"));
                for d in row {
                    out.push_str(&format!("{d:>5}"));
                }
            }
            out
        }
        (Format::Json, ..) => pretty(&Value::Array(
            rows.into_iter()
                .flat_map(|(n, row)| {
                    weights
                        .iter()
                        .zip(row)
                        .map(move |(w, d)| json!({"level": n, "weight": w, "dimension": d}))
                        .collect::<Vec<_>>()
                })
                .collect(),
        )),
    })
}

fn expand(fmt: Format, src: &str, prec: Option<i64>) -> Run {
    let reg = Registry::global();
    let e = parse_expr(src)?;
    let weight = reg.check(&e)?;
    let prec = match prec {
        Some(p) => check_prec(p)?,
        None => reg.lower_bound(&e).ceil().to_integer() + 10,
    };
    let s = reg.expand(&e, prec)?;
    Ok(match fmt {
        Format::Text => s.to_string(),
        Format::Json => {
            let mut v = series_json(&s);
            v["expr"] = json!(e.to_string());
            v["weight"] = json!(exponent_string(weight));
            pretty(&v)
        }
    })
}

fn reduce(fmt: Format, src: &str, level: i64, weight: Option<i64>, prec: Option<i64>) -> Run {
    let reg = Registry::global();
    let e = parse_expr(src)?;
    let w = reg.check(&e)?;
    let weight = match weight {
        Some(w) => w,
        None if w.is_integer() => w.to_integer(),
        None => return Err(Failure::Usage(format!("expression has weight {w}"))),
    };
    let prec = match prec {
        Some(p) => check_prec(p)?,
        None => reg.dimension(level, weight)? as i64 + 5,
    };
    let f = reg.expand(&e, prec)?;
    let coords = levels::reduce(&f, level, weight)?;
    let set = levels::basis(level, weight, prec)?;
    Ok(match fmt {
        Format::Json => pretty(&json!({
            "level": level,
            "weight": weight,
            "precision": prec,
            "coordinates": coords
                .iter()
                .zip(&set.elements)
                .map(|(c, el)| json!({
                    "s": el.index,
                    "label": el.label,
                    "coefficient": [c.numer().to_string(), c.denom().to_string()],
                }))
                .collect::<Vec<_>>(),
        })),
        Format::Text => coords
            .iter()
            .zip(&set.elements)
            .map(|(c, el)| format!("{c:>12}  {}", el.label))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn verify(fmt: Format, which: &str, prec: Option<i64>) -> Run {
    let reg = Registry::global();
    let cases: Vec<&identities::IdentityCase> =
        if which == "all" { identities::cases().iter().collect() } else { vec![identities::find(which)?] };
    let mut reports: Vec<IdentityReport> = Vec::new();
    for c in cases {
        let p = match prec {
            Some(p) => check_prec(p)?,
            None => c.default_prec,
        };
        reports.push(identities::check_case(reg, c, p)?);
    }
    let doc = match fmt {
        Format::Json => pretty(&Value::Array(reports.iter().map(|r| r.to_json()).collect())),
        Format::Text => reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"),
    };
    if reports.iter().all(|r| r.passed()) {
        Ok(doc)
    } else {
        emit_raw(&doc);
        Err(Failure::Check(format!("{} identities failed", reports.iter().filter(|r| !r.passed()).count())))
    }
}

fn bench(fmt: Format, terms: i64) -> Run {
    if terms < 1 {
        return Err(Failure::Usage("--terms must be positive".into()));
    }
    let e = parse_expr(BENCH_EXPR)?;
    let start = Instant::now();
    let s = Registry::global().expand(&e, 2018 + terms)?;
    let elapsed = start.elapsed();
    let coeffs: Vec<String> = (2018..2018 + terms).map(|n| s.coeff_int(n).unwrap_or_default().to_string()).collect();
    Ok(match fmt {
        Format::Json => pretty(&json!({
            "expr": BENCH_EXPR,
            "weight": 2018,
            "valuation": exponent_string(s.valuation()),
            "coefficients": coeffs,
            "seconds": elapsed.as_secs_f64(),
        })),
        Format::Text => {
            let mut out = format!("{BENCH_EXPR}\nweight 2018, valuation {}\n", s.valuation());
            for (i, c) in coeffs.iter().enumerate() {
                out.push_str(&format!("q^{}: {c}\n", 2018 + i as i64));
            }
            out.push_str(&format!("elapsed: {:.3} s", elapsed.as_secs_f64()));
            out
        }
    })
}

fn dump_levels(fmt: Format) -> Run {
    let recs = level_records();
    Ok(match fmt {
        Format::Json => serde_json::to_string_pretty(&recs).expect("records serialize"),
        Format::Text => recs
            .iter()
            .map(|r| {
                let eta = r.eta.iter().map(|[m, e]| format!("eta({m}tau)^{e}")).collect::<Vec<_>>();
                format!("N={:<3} rho={:<3} nu={:<3} {}", r.level, r.rho, r.nu, eta.join(" "))
            })
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

static OUT: std::sync::OnceLock<Option<String>> = std::sync::OnceLock::new();

fn emit_raw(doc: &str) {
    let text = if doc.ends_with('\n') { doc.to_string() } else { format!("{doc}\n") };
    match OUT.get().and_then(|o| o.as_deref()) {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {path}: {e}");
            }
        }
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    OUT.set(cli.out.clone()).expect("set once");
    let fmt = cli.format;
    let result = match cli.command {
        Command::Basis { level, weight, prec } => basis(fmt, level, weight, prec),
        Command::Dims { level, weight } => dims(fmt, level, weight),
        Command::Expand { expr, prec } => expand(fmt, &expr, prec),
        Command::Reduce { expr, level, weight, prec } => reduce(fmt, &expr, level, weight, prec),
        Command::Verify { identity, prec } => verify(fmt, &identity, prec),
        Command::Bench { terms } => bench(fmt, terms),
        Command::DumpLevels => dump_levels(fmt),
    };
    match result {
        Ok(doc) => {
            emit_raw(&doc);
            ExitCode::SUCCESS
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
