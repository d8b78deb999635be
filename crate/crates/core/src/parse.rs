//! Parser for polynomial expressions.
//!
//! Grammar: `+ -` over terms, juxtaposition or `* /` over factors, `^` powers,
//! parentheses, `i` for the imaginary unit (unless a variable named `i` is
//! declared). Division is allowed; `parse_poly` demands the denominator reduce
//! to a constant, `parse_rational` keeps numerator/denominator split (used by
//! component parametrizations like `1/t`).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ring::Ring;

/// Quotient of two polynomials; denominators show up only in component
/// parametrizations.
#[derive(Debug, Clone)]
pub struct RationalExpr {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl RationalExpr {
    fn from_poly(p: Polynomial) -> Self {
        let one = Polynomial::one(&p.ring);
        RationalExpr { num: p, den: one }
    }

    fn add(&self, other: &RationalExpr) -> RationalExpr {
        RationalExpr {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    fn sub(&self, other: &RationalExpr) -> RationalExpr {
        RationalExpr {
            num: self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    fn mul(&self, other: &RationalExpr) -> RationalExpr {
        RationalExpr {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    fn div(&self, other: &RationalExpr) -> RationalExpr {
        RationalExpr {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        }
    }

    fn neg(&self) -> RationalExpr {
        RationalExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn pow(&self, k: u32) -> RationalExpr {
        let mut num = Polynomial::one(&self.num.ring);
        let mut den = Polynomial::one(&self.num.ring);
        for _ in 0..k {
            num = num.mul(&self.num);
            den = den.mul(&self.den);
        }
        RationalExpr { num, den }
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Complex64 {
        self.num.evaluate(point) / self.den.evaluate(point)
    }

    pub fn den_value(&self, point: &[Complex64]) -> Complex64 {
        self.den.evaluate(point)
    }

    /// Derivative as a value via the quotient rule.
    pub fn diff_value(&self, var: usize, point: &[Complex64]) -> Complex64 {
        let n = self.num.evaluate(point);
        let d = self.den.evaluate(point);
        let np = self.num.diff(var).evaluate(point);
        let dp = self.den.diff(var).evaluate(point);
        (np * d - n * dp) / (d * d)
    }

    /// Shift the *value* of the expression by a constant: `self - c`.
    pub fn sub_constant(&self, c: Complex64) -> RationalExpr {
        RationalExpr {
            num: self.num.sub(&self.den.scale(c)),
            den: self.den.clone(),
        }
    }
}

pub fn parse_poly(src: &str, ring: &Ring) -> Result<Polynomial> {
    let r = parse_rational(src, ring)?;
    if r.den.terms.len() != 1 || !r.den.terms.keys().next().unwrap().is_zero() {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: format!("non-constant denominator in polynomial: {}", r.den),
        });
    }
    let c = *r.den.terms.values().next().unwrap();
    Ok(r.num.scale(Complex64::new(1.0, 0.0) / c))
}

pub fn parse_rational(src: &str, ring: &Ring) -> Result<RationalExpr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        ring: ring.clone(),
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: Ring,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        let mut line = 1;
        let mut col = 1;
        for &b in &self.src[..self.pos.min(self.src.len())] {
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Error::Parse {
            line,
            col,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<RationalExpr> {
        let mut neg = false;
        self.skip_ws();
        while matches!(self.peek(), Some(b'+' | b'-')) {
            if self.peek() == Some(b'-') {
                neg = !neg;
            }
            self.pos += 1;
            self.skip_ws();
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalExpr> {
        self.skip_ws();
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    if f.num.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.div(&f);
                }
                // juxtaposition: a following atom multiplies
                Some(c)
                    if c == b'(' || c.is_ascii_alphabetic() || c == b'_' || c.is_ascii_digit() =>
                {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RationalExpr> {
        self.skip_ws();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let f = self.factor()?;
            return Ok(f.neg());
        }
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a non-negative integer exponent after '^'"));
            }
            let k: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("exponent out of range"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalExpr> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let v = self.number()?;
                Ok(RationalExpr::from_poly(Polynomial::constant(
                    &self.ring,
                    Complex64::new(v, 0.0),
                )))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(i) = self.ring.names.iter().position(|n| n == name) {
                    return Ok(RationalExpr::from_poly(Polynomial::variable(&self.ring, i)));
                }
                if name == "i" {
                    return Ok(RationalExpr::from_poly(Polynomial::constant(
                        &self.ring,
                        Complex64::new(0.0, 1.0),
                    )));
                }
                self.pos = start;
                Err(self.err(&format!("unknown variable '{}'", name)))
            }
            _ => Err(self.err("expected a number, variable, or '('")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        // exponent part only when digits follow
        let mark = self.pos;
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let ds = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if ds == self.pos {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map_err(|_| self.err("malformed number"))
    }
}
