//! Text syntax for [`FormExpr`].
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := rational | '(' expr ')'
//!         | 'Delta(' N ')' | 'E(' W ',' N ',' s ')'
//!         | 'wp(' a ',' b ',' m ')' | 'wpt(' a ',' b ',' m ')'
//!         | 'eta(' m ')' | 'eta(' m ',' e (';' m ',' e)* ')'
//!         | 'E4' | 'E6' | 'E8' | 'E10' | 'E12' | 'Eis(' k ',' m ')'
//!         | 'Phi(' N ')' | 'PhiSigma(' N ')' | 'twist(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::eta::EtaQuotient;
use crate::levels::FormExpr;
use crate::qseries::{Exponent, Rational, Shift};
use crate::weierstrass::{PhiMode, TorsionArg};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    End,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Num(src[start..i].parse().expect("ascii digits"))
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                Tok::Ident(src[start..i].to_string())
            }
            _ => {
                i += 1;
                match c {
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b',' => Tok::Comma,
                    b';' => Tok::Semi,
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    _ => {
                        return Err(Error::Syntax {
                            offset: start,
                            message: format!("unexpected character `{}`", src[start..].chars().next().unwrap_or('?')),
                        })
                    }
                }
            }
        };
        out.push((start, tok));
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.offset(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<FormExpr> {
        let mut terms: Vec<(Rational, Option<FormExpr>)> = Vec::new();
        let mut negate = false;
        if *self.peek() == Tok::Minus {
            self.bump();
            negate = true;
        }
        loop {
            let (c, body) = self.term()?;
            terms.push((if negate { -c } else { c }, body));
            match self.peek() {
                Tok::Plus => negate = false,
                Tok::Minus => negate = true,
                _ => break,
            }
            self.bump();
        }
        if terms.len() == 1 {
            let (c, body) = terms.pop().expect("one term");
            return Ok(match body {
                None => FormExpr::Const(c),
                Some(b) if c.is_one() => b,
                Some(b) => FormExpr::Sum(vec![(c, b)]),
            });
        }
        Ok(FormExpr::Sum(
            terms.into_iter().map(|(c, b)| (c, b.unwrap_or_else(|| FormExpr::Const(Rational::one())))).collect(),
        ))
    }

    fn term(&mut self) -> Result<(Rational, Option<FormExpr>)> {
        let mut coeff = Rational::one();
        let mut factors = Vec::new();
        loop {
            match self.factor()? {
                FormExpr::Const(c) => coeff *= c,
                f => factors.push(f),
            }
            if *self.peek() != Tok::Star {
                break;
            }
            self.bump();
        }
        let body = if factors.is_empty() { None } else { Some(FormExpr::product(factors)) };
        Ok((coeff, body))
    }

    fn factor(&mut self) -> Result<FormExpr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let n = self.uint()?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<u32> {
        match self.peek().clone() {
            Tok::Num(n) => match n.to_u32() {
                Some(v) => {
                    self.bump();
                    Ok(v)
                }
                None => self.error("integer out of range"),
            },
            _ => self.error("expected a nonnegative integer"),
        }
    }

    fn int(&mut self) -> Result<i32> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let v = self.uint()?;
        let v = i32::try_from(v).or_else(|_| self.error("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    /// `p` or `p/q`, without sign.
    fn unsigned_rational(&mut self) -> Result<Rational> {
        let Tok::Num(p) = self.peek().clone() else {
            return self.error("expected a number");
        };
        self.bump();
        if *self.peek() == Tok::Slash {
            self.bump();
            let Tok::Num(q) = self.peek().clone() else {
                return self.error("expected a denominator");
            };
            if q.is_zero() {
                return self.error("zero denominator");
            }
            self.bump();
            return Ok(Rational::new(p, q));
        }
        Ok(Rational::from_integer(p))
    }

    /// A signed rational small enough for an exponent.
    fn small_rational(&mut self) -> Result<Exponent> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        let r = self.unsigned_rational()?;
        let (Some(p), Some(q)) = (r.numer().to_i64(), r.denom().to_i64()) else {
            return Err(Error::Syntax { offset: at, message: "number out of range".into() });
        };
        let e = Exponent::new(p, q);
        Ok(if neg { -e } else { e })
    }

    fn torsion(&mut self) -> Result<TorsionArg> {
        self.expect(Tok::LParen, "`(`")?;
        let at = self.offset();
        let a = self.small_rational()?;
        if !(a * 2).is_integer() {
            return Err(Error::Syntax { offset: at, message: "tau coefficient must have denominator 1 or 2".into() });
        }
        self.expect(Tok::Comma, "`,`")?;
        let at = self.offset();
        let b = self.small_rational()?;
        let Some(b) = Shift::from_exponent(b) else {
            return Err(Error::Syntax { offset: at, message: "real shift must be 0 or 1/2".into() });
        };
        self.expect(Tok::Comma, "`,`")?;
        let at = self.offset();
        let m = self.uint()?;
        if m == 0 {
            return Err(Error::Syntax { offset: at, message: "lattice multiplier must be positive".into() });
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(TorsionArg { a, b, m })
    }

    fn args(&mut self, n: usize) -> Result<Vec<u32>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 {
                self.expect(Tok::Comma, "`,`")?;
            }
            out.push(self.uint()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(out)
    }

    fn eta(&mut self) -> Result<FormExpr> {
        self.expect(Tok::LParen, "`(`")?;
        let mut factors = Vec::new();
        loop {
            let at = self.offset();
            let m = self.uint()?;
            if m == 0 {
                return Err(Error::Syntax { offset: at, message: "eta multiplier must be positive".into() });
            }
            let e = if *self.peek() == Tok::Comma {
                self.bump();
                self.int()?
            } else {
                1
            };
            factors.push((m, e));
            if *self.peek() != Tok::Semi {
                break;
            }
            self.bump();
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(FormExpr::Eta(EtaQuotient::new(factors)))
    }

    fn atom(&mut self) -> Result<FormExpr> {
        match self.peek().clone() {
            Tok::Num(_) => Ok(FormExpr::Const(self.unsigned_rational()?)),
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.offset();
                self.bump();
                match name.as_str() {
                    "Delta" => Ok(FormExpr::Delta(self.args(1)?[0])),
                    "E" if *self.peek() == Tok::LParen => {
                        let a = self.args(3)?;
                        Ok(FormExpr::Generator { weight: a[0], level: a[1], index: a[2] })
                    }
                    "E4" | "E6" | "E8" | "E10" | "E12" => {
                        Ok(FormExpr::Eisenstein { k: name[1..].parse().expect("digits"), m: 1 })
                    }
                    "Eis" => {
                        let a = self.args(2)?;
                        Ok(FormExpr::Eisenstein { k: a[0], m: a[1] })
                    }
                    "wp" => Ok(FormExpr::Wp(self.torsion()?)),
                    "wpt" => Ok(FormExpr::Wpt(self.torsion()?)),
                    "eta" => self.eta(),
                    "Phi" => Ok(FormExpr::Phi { level: self.args(1)?[0], mode: PhiMode::Weierstrass }),
                    "PhiSigma" => Ok(FormExpr::Phi { level: self.args(1)?[0], mode: PhiMode::Divisor }),
                    "twist" => {
                        self.expect(Tok::LParen, "`(`")?;
                        let e = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(e.twist())
                    }
                    _ => Err(Error::Syntax { offset: at, message: format!("unknown name `{name}`") }),
                }
            }
            Tok::End => self.error("unexpected end of input"),
            _ => self.error("expected an operand"),
        }
    }
}

/// Parses `src` and checks that every sum is homogeneous in weight.
pub fn parse_expr(src: &str) -> Result<FormExpr> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error("unexpected trailing input");
    }
    e.weight()?;
    Ok(e)
}
