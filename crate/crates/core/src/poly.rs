//! Sparse multivariate polynomials with integer coefficients, and the
//! recursive-descent parser used for variety and scheme input.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' digits)?
//! atom   := digits | variable | '(' expr ')'
//! variable := 'x' digits | 'x' | 'y' | 'z'
//! ```
//!
//! Variables are `x0 … x{n-1}`; when there are at most three variables,
//! `x`, `y`, `z` are aliases for `x0`, `x1`, `x2`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("variable {name} is out of range for {nvars} variables")]
    Arity { name: String, nvars: usize },
}

/// Exponent vector of a monomial, one entry per variable.
pub type Monomial = Vec<u32>;

/// `Σ c_m x^m` with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(m, BigInt::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|m| m.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Whether variable `i` occurs in some term.
    pub fn uses_variable(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m[i] > 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(self.nvars, 1);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Substitutes the integer `value` for variable `i`; the variable stays in
    /// the arity but no longer occurs.
    pub fn substitute(&self, i: usize, value: i64) -> Self {
        let v = BigInt::from(value);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = std::mem::replace(&mut m2[i], 0);
            out.add_term(m2, c * num_traits::pow(v.clone(), e as usize));
        }
        out
    }

    /// Keeps only the listed variables, renumbered in the given order. Every
    /// dropped variable must not occur.
    pub fn select_variables(&self, keep: &[usize]) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            debug_assert!(
                m.iter().enumerate().all(|(i, &e)| e == 0 || keep.contains(&i)),
                "dropped variable occurs"
            );
            (keep.iter().map(|&i| m[i]).collect(), c.clone())
        });
        Self::from_terms(keep.len(), terms)
    }

    /// Coefficients reduced into `0..p`, dropping terms that vanish mod `p`.
    pub fn reduce_mod(&self, p: u64) -> Self {
        let modulus = BigInt::from(p);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let r = ((c % &modulus) + &modulus) % &modulus;
                (m.clone(), r)
            })
            .filter(|(_, c)| !c.is_zero());
        Self::from_terms(self.nvars, terms)
    }

    /// Parses `src` as a polynomial in `nvars` variables.
    pub fn parse(src: &str, nvars: usize) -> Result<Self, PolyError> {
        let mut parser = Parser { src: src.as_bytes(), pos: 0, nvars };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(p)
    }

    /// Canonical text form, readable back by [`Polynomial::parse`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn var_name(nvars: usize, i: usize) -> String {
    if nvars <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{i}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest monomials first
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let v = var_name(self.nvars, i);
                    if e == 1 {
                        v
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            let mag = c.abs();
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                factors.join("*")
            } else {
                format!("{mag}*{}", factors.join("*"))
            };
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits().ok_or_else(|| self.error("expected exponent"))?;
            let e: u32 = digits.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().expect("at least one digit");
                let value: BigInt = d.parse().map_err(|_| self.error("bad integer"))?;
                Ok(Polynomial::constant(self.nvars, value))
            }
            Some(c @ (b'x' | b'y' | b'z')) => {
                let start = self.pos;
                self.pos += 1;
                let index = match (c, self.digits()) {
                    (b'x', Some(d)) => d.parse::<usize>().map_err(|_| self.error("bad variable index"))?,
                    (_, Some(_)) => return Err(PolyError::Parse { pos: start, msg: "only x takes an index".into() }),
                    (b'x', None) => self.alias(0, start)?,
                    (b'y', None) => self.alias(1, start)?,
                    (_, None) => self.alias(2, start)?,
                };
                if index >= self.nvars {
                    let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                    return Err(PolyError::Arity { name, nvars: self.nvars });
                }
                Ok(Polynomial::variable(self.nvars, index))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn alias(&self, index: usize, start: usize) -> Result<usize, PolyError> {
        if self.nvars > 3 || index >= self.nvars {
            let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
            return Err(PolyError::Arity { name, nvars: self.nvars });
        }
        Ok(index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(p: &Polynomial) -> Vec<(Vec<u32>, i64)> {
        p.terms().iter().map(|(m, c)| (m.clone(), i64::try_from(c).unwrap())).collect()
    }

    #[test]
    fn parses_the_curve() {
        let p = Polynomial::parse("y^2+y-x^3", 2).unwrap();
        assert_eq!(terms(&p), vec![(vec![0, 1], 1), (vec![0, 2], 1), (vec![3, 0], -1)]);
    }

    #[test]
    fn expands_powers() {
        let p = Polynomial::parse("(x+1)^2", 1).unwrap();
        assert_eq!(terms(&p), vec![(vec![0], 1), (vec![1], 2), (vec![2], 1)]);
        let q = Polynomial::parse("(x0 - x1)*(x0 + x1) - x0^2 + x1^2", 2).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn arity_and_parse_errors() {
        assert_eq!(
            Polynomial::parse("x0*x3", 2),
            Err(PolyError::Arity { name: "x3".into(), nvars: 2 })
        );
        assert_eq!(Polynomial::parse("z", 2), Err(PolyError::Arity { name: "z".into(), nvars: 2 }));
        assert!(matches!(Polynomial::parse("x +", 1), Err(PolyError::Parse { pos: 3, .. })));
        assert!(matches!(Polynomial::parse("(x", 1), Err(PolyError::Parse { .. })));
        assert!(matches!(Polynomial::parse("x ^ y", 1), Err(PolyError::Parse { .. })));
        assert!(matches!(Polynomial::parse("x $", 1), Err(PolyError::Parse { pos: 2, .. })));
    }

    #[test]
    fn homogeneity_and_degree() {
        assert!(Polynomial::parse("x^2 + y*z", 3).unwrap().is_homogeneous());
        assert!(!Polynomial::parse("x^2 + y", 2).unwrap().is_homogeneous());
        assert_eq!(Polynomial::parse("x^2*y + 1", 2).unwrap().total_degree(), Some(3));
    }

    #[test]
    fn reduction_mod_p() {
        let p = Polynomial::parse("x^2 + 1", 1).unwrap().reduce_mod(2);
        let q = Polynomial::parse("(x + 1)^2", 1).unwrap().reduce_mod(2);
        assert_eq!(p, q);
        let r = Polynomial::parse("-3*x + 7", 1).unwrap().reduce_mod(5);
        assert_eq!(terms(&r), vec![(vec![0], 2), (vec![1], 2)]);
    }

    #[test]
    fn substitution() {
        let p = Polynomial::parse("x^2*y + y - 3", 2).unwrap();
        let q = p.substitute(0, 2);
        assert_eq!(q, Polynomial::parse("5*y - 3", 2).unwrap());
    }

    #[test]
    fn printer_output() {
        let p = Polynomial::parse("y^2+y-x^3", 2).unwrap();
        assert_eq!(p.to_text(), "-x^3 + y^2 + y");
        let q = Polynomial::parse("x3 - 2*x0*x1^2", 4).unwrap();
        assert_eq!(q.to_text(), "-2*x0*x1^2 + x3");
    }
}
