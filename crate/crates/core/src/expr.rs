//! Parser for initial wall-function expressions such as `1 + p[1,1]*x + p[1,3]*x^3`
//! or `(1+s*x)^3`.
//!
//! Grammar: integer literals, `p[i,j]`, `s`, `t`, one formal variable (`x` or
//! `y`), binary `+ - *`, unary `-`, `^` with a nonnegative integer exponent,
//! and parentheses.

use std::fmt;

use num_bigint::BigInt;

use crate::coeffring::{CoeffPolynomial, Var};
use crate::data::SideFunction;
use crate::error::{Error, Result};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 1000;

/// A parsed univariate polynomial with coefficients in the coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedPoly {
    /// `'x'` or `'y'`, `None` if the formal variable never occurs.
    pub variable: Option<char>,
    /// `coeffs[j]` multiplies `z^j`; `coeffs[0] == 1`, no trailing zeros.
    pub coeffs: Vec<CoeffPolynomial>,
}

impl ParsedPoly {
    /// The side this expression belongs to: 1 for `x`, 2 for `y`.
    pub fn side(&self) -> Option<u8> {
        self.variable.map(|v| if v == 'x' { 1 } else { 2 })
    }

    pub fn to_side_function(&self) -> Result<SideFunction> {
        SideFunction::from_coeffs(self.coeffs.clone())
    }
}

impl fmt::Display for ParsedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self.variable.unwrap_or('x'), &self.coeffs))
    }
}

/// Pretty-prints `sum_j coeffs[j] z^j` in the input grammar.
pub fn format_poly(variable: char, coeffs: &[CoeffPolynomial]) -> String {
    let mut parts = Vec::new();
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let z = match j {
            0 => String::new(),
            1 => variable.to_string(),
            _ => format!("{variable}^{j}"),
        };
        let single_positive = c
            .as_single_term()
            .is_some_and(|(_, k)| *k > BigInt::from(0));
        let cs = if single_positive {
            c.to_string()
        } else {
            format!("({c})")
        };
        parts.push(match (j, c.is_one()) {
            (0, _) => cs,
            (_, true) => z,
            _ => format!("{cs}*{z}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Parses an initial function; the constant term must be 1.
pub fn parse_poly(src: &str) -> Result<ParsedPoly> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        variable: None,
    };
    let mut coeffs = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected input"));
    }
    trim(&mut coeffs);
    let c0 = coeffs.first().cloned().unwrap_or_default();
    if !c0.is_one() {
        return Err(Error::ConstantTermNotOne(c0.to_string()));
    }
    Ok(ParsedPoly {
        variable: p.variable,
        coeffs,
    })
}

/// Parses an initial function for the given side (1 for `x`, 2 for `y`).
pub fn parse_side(src: &str, side: u8) -> Result<SideFunction> {
    let parsed = parse_poly(src)?;
    if let Some(s) = parsed.side() {
        if s != side {
            let want = if side == 1 { 'x' } else { 'y' };
            return Err(Error::Parse {
                pos: 0,
                msg: format!("expected a function of {want}"),
            });
        }
    }
    parsed.to_side_function()
}

type Uni = Vec<CoeffPolynomial>;

fn trim(a: &mut Uni) {
    while a.last().is_some_and(CoeffPolynomial::is_zero) {
        a.pop();
    }
}

fn add(a: &Uni, b: &Uni, sign: i64) -> Uni {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), CoeffPolynomial::zero());
    }
    for (o, c) in out.iter_mut().zip(b) {
        if sign > 0 {
            *o += c;
        } else {
            *o += &(-c.clone());
        }
    }
    trim(&mut out);
    out
}

fn mul(a: &Uni, b: &Uni) -> Uni {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![CoeffPolynomial::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    trim(&mut out);
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    variable: Option<char>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Uni> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = add(&acc, &self.term()?, 1);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = add(&acc, &self.term()?, -1);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Uni> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = mul(&acc, &self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Uni> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(add(&Vec::new(), &v, -1));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Uni> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let e = self.integer()?;
        let e: u32 = match u32::try_from(&e) {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => {
                return Err(Error::Parse {
                    pos: at,
                    msg: format!("exponent must be an integer in 0..={MAX_EXPONENT}"),
                })
            }
        };
        let mut out = vec![CoeffPolynomial::one()];
        for _ in 0..e {
            out = mul(&out, &base);
        }
        Ok(out)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("ascii digits"))
    }

    fn small_integer(&mut self) -> Result<u32> {
        self.skip_ws();
        let at = self.pos;
        let n = self.integer()?;
        u32::try_from(&n).map_err(|_| Error::Parse {
            pos: at,
            msg: "index out of range".into(),
        })
    }

    fn atom(&mut self) -> Result<Uni> {
        let at = match self.peek() {
            None => return Err(self.error("unexpected end of input")),
            Some(c) => c,
        };
        match at {
            b'(' => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            b'0'..=b'9' => {
                let n = self.integer()?;
                Ok(constant(CoeffPolynomial::constant(n)))
            }
            b'x' | b'y' => {
                let c = at as char;
                if self.variable.is_some_and(|v| v != c) {
                    return Err(self.error("only one of x and y may appear"));
                }
                self.variable = Some(c);
                self.pos += 1;
                Ok(vec![CoeffPolynomial::zero(), CoeffPolynomial::one()])
            }
            b's' => {
                self.pos += 1;
                Ok(constant(CoeffPolynomial::var(Var::S)))
            }
            b't' => {
                self.pos += 1;
                Ok(constant(CoeffPolynomial::var(Var::T)))
            }
            b'p' => {
                let start = self.pos;
                self.pos += 1;
                self.expect(b'[')?;
                let i = self.small_integer()?;
                self.expect(b',')?;
                let j = self.small_integer()?;
                self.expect(b']')?;
                if i == 0 || i > u8::MAX as u32 || j == 0 {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "p[i,j] needs i in 1..=255 and j >= 1".into(),
                    });
                }
                Ok(constant(CoeffPolynomial::var(Var::p(i as u8, j))))
            }
            _ => Err(self.error(&format!("unexpected character '{}'", at as char))),
        }
    }
}

fn constant(c: CoeffPolynomial) -> Uni {
    let mut v = vec![c];
    trim(&mut v);
    v
}
