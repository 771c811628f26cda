//! Recursive-descent parser for the comb expression language.
//!
//! ```text
//! expr   := term { ("+" | "-") term }
//! term   := [ scalar "*" ] prim
//! prim   := "Z(" scalar "," scalar "," uint ")"
//!         | "Y(" scalar "," scalar "," uint "," root ")"
//!         | "ft(" expr ")" | "refl(" expr ")" | "conj(" expr ")"
//!         | "proj(" root "," expr ")" | "dirac_comb(" uint ")"
//!         | "(" expr ")"
//! root   := "1" | "i" | "-1" | "-i"
//! scalar := part { ("+" | "-") part }  or  "(" scalar ")"
//! part   := signed rational [ "*sqrt(" uint ")" ] [ "*i" ]
//! ```

use eigenmeasure::measure::FourthRoot;
use eigenmeasure::scalar::QuadScalar;
use num_complex::Complex64;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Z { r: QuadScalar, s: QuadScalar, n: u64 },
    Y { r: QuadScalar, s: QuadScalar, n: u64, root: FourthRoot },
    DiracComb(u64),
    Ft(Box<Ast>),
    Refl(Box<Ast>),
    Conj(Box<Ast>),
    Proj(FourthRoot, Box<Ast>),
    Sum(Box<Ast>, Box<Ast>),
    Diff(Box<Ast>, Box<Ast>),
    Scale(Complex64, Box<Ast>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed scalar literal: exact real and imaginary components.
#[derive(Debug, Clone)]
pub struct ScalarLit {
    pub re: QuadScalar,
    pub im: QuadScalar,
}

impl ScalarLit {
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

pub fn parse(text: &str) -> Result<Ast, ParseError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    let ast = p.expr()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(ast)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        ParseError { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.bytes[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Ast::Sum(Box::new(acc), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = Ast::Diff(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        // try "scalar * prim" with backtracking; the leading "(" is shared
        // between parenthesized scalars and parenthesized subexpressions
        let save = self.pos;
        if let Ok(c) = self.scalar() {
            if self.peek() == Some(b'*') {
                self.pos += 1;
                let prim = self.prim()?;
                return Ok(Ast::Scale(c.to_complex(), Box::new(prim)));
            }
        }
        self.pos = save;
        self.prim()
    }

    fn prim(&mut self) -> Result<Ast, ParseError> {
        self.skip_ws();
        if self.eat_keyword("Z(") {
            let r = self.real_scalar()?;
            self.eat(b',')?;
            let s = self.real_scalar()?;
            self.eat(b',')?;
            let n = self.uint()?;
            self.eat(b')')?;
            return Ok(Ast::Z { r, s, n });
        }
        if self.eat_keyword("Y(") {
            let r = self.real_scalar()?;
            self.eat(b',')?;
            let s = self.real_scalar()?;
            self.eat(b',')?;
            let n = self.uint()?;
            self.eat(b',')?;
            let root = self.root()?;
            self.eat(b')')?;
            return Ok(Ast::Y { r, s, n, root });
        }
        if self.eat_keyword("ft(") {
            let e = self.expr()?;
            self.eat(b')')?;
            return Ok(Ast::Ft(Box::new(e)));
        }
        if self.eat_keyword("refl(") {
            let e = self.expr()?;
            self.eat(b')')?;
            return Ok(Ast::Refl(Box::new(e)));
        }
        if self.eat_keyword("conj(") {
            let e = self.expr()?;
            self.eat(b')')?;
            return Ok(Ast::Conj(Box::new(e)));
        }
        if self.eat_keyword("proj(") {
            let root = self.root()?;
            self.eat(b',')?;
            let e = self.expr()?;
            self.eat(b')')?;
            return Ok(Ast::Proj(root, Box::new(e)));
        }
        if self.eat_keyword("dirac_comb(") {
            let n = self.uint()?;
            self.eat(b')')?;
            return Ok(Ast::DiracComb(n));
        }
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let e = self.expr()?;
            self.eat(b')')?;
            return Ok(e);
        }
        Err(self.err("expected Z, Y, ft, refl, conj, proj, dirac_comb, or '('"))
    }

    fn root(&mut self) -> Result<FourthRoot, ParseError> {
        self.skip_ws();
        for name in ["-1", "-i", "1", "i"] {
            if self.bytes[self.pos..].starts_with(name.as_bytes()) {
                self.pos += name.len();
                return Ok(FourthRoot::parse(name).unwrap());
            }
        }
        Err(self.err("expected eigenvalue 1, i, -1, or -i"))
    }

    /// A scalar in an exact-position slot: must be real.
    fn real_scalar(&mut self) -> Result<QuadScalar, ParseError> {
        let start = self.pos;
        let lit = self.scalar()?;
        if !lit.im.is_zero() {
            return Err(ParseError {
                offset: start,
                message: "complex value not allowed here".to_string(),
            });
        }
        Ok(lit.re)
    }

    fn scalar(&mut self) -> Result<ScalarLit, ParseError> {
        // a scalar may be wrapped in parentheses
        if self.peek() == Some(b'(') {
            let save = self.pos;
            self.pos += 1;
            match self.scalar_sum() {
                Ok(lit) if self.peek() == Some(b')') => {
                    self.pos += 1;
                    return Ok(lit);
                }
                _ => self.pos = save,
            }
            return Err(self.err("expected a scalar"));
        }
        self.scalar_sum()
    }

    fn scalar_sum(&mut self) -> Result<ScalarLit, ParseError> {
        let mut acc = self.scalar_part(false)?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = self.combine(acc, self.pos, false)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = self.combine(acc, self.pos, true)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn combine(
        &mut self,
        acc: ScalarLit,
        at: usize,
        negate: bool,
    ) -> Result<ScalarLit, ParseError> {
        let part = self.scalar_part(negate)?;
        let join = |a: &QuadScalar, b: &QuadScalar| {
            a.checked_add(b).map_err(|e| ParseError { offset: at, message: e.to_string() })
        };
        Ok(ScalarLit { re: join(&acc.re, &part.re)?, im: join(&acc.im, &part.im)? })
    }

    /// One additive piece: rational [*sqrt(u)] [*i].
    fn scalar_part(&mut self, negate: bool) -> Result<ScalarLit, ParseError> {
        let start = self.pos;
        let mut sign = if negate { -1i64 } else { 1 };
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -sign;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        let p = self.int()? * sign;
        let q = if self.peek() == Some(b'/') {
            self.pos += 1;
            let q = self.int()?;
            if q <= 0 {
                return Err(self.err("denominator must be positive"));
            }
            q
        } else {
            1
        };
        let mut value = QuadScalar::from_ratio(p, q);
        let mut imaginary = false;
        while self.peek() == Some(b'*') {
            let save = self.pos;
            self.pos += 1;
            if self.eat_keyword("sqrt(") {
                let n = self.uint()?;
                self.eat(b')')?;
                let surd = QuadScalar::sqrt(n).map_err(|e| ParseError {
                    offset: start,
                    message: e.to_string(),
                })?;
                value = value.checked_mul(&surd).map_err(|e| ParseError {
                    offset: start,
                    message: e.to_string(),
                })?;
            } else if self.eat_keyword("i")
                && !matches!(self.bytes.get(self.pos), Some(c) if c.is_ascii_alphanumeric())
            {
                imaginary = true;
                break;
            } else {
                // the '*' belongs to an enclosing term
                self.pos = save;
                break;
            }
        }
        let zero = QuadScalar::zero();
        Ok(if imaginary {
            ScalarLit { re: zero, im: value }
        } else {
            ScalarLit { re: value, im: zero }
        })
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an unsigned integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError { offset: start, message: "integer overflow".to_string() })
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let mut sign = 1i64;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        }
        Ok(sign * self.uint()? as i64)
    }
}
