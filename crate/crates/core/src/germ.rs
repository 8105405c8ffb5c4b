//! Polynomial germs `F(z0, ..., zn)` as exponent-vector/coefficient lists.
//!
//! Shared between the Milnor-number machinery and the numerical fiber
//! integrals. The surface syntax is plain ASCII (`z0^3 + z1^3`, `*`
//! optional); the file format stores each monomial as
//! `{"exps": [..], "coef": "p/q"}`.

use crate::rational::{parse_frac, to_f64, to_string_frac, Rational};
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GermError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("monomial exponent vector has length {got}, expected {expected}")]
    ArityMismatch { got: usize, expected: usize },
}

/// A polynomial as a list of (exponent vector, coefficient) monomials.
/// No duplicate exponent vectors, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialGerm {
    nvars: usize,
    terms: Vec<(Vec<u32>, Rational)>,
}

/// Wire form of a single monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialRepr {
    pub exps: Vec<u32>,
    pub coef: String,
}

impl PolynomialGerm {
    pub fn new(nvars: usize, raw_terms: Vec<(Vec<u32>, Rational)>) -> Result<Self, GermError> {
        let mut terms: Vec<(Vec<u32>, Rational)> = Vec::new();
        for (exps, coef) in raw_terms {
            if exps.len() != nvars {
                return Err(GermError::ArityMismatch {
                    got: exps.len(),
                    expected: nvars,
                });
            }
            if coef.is_zero() {
                continue;
            }
            if let Some(existing) = terms.iter_mut().find(|(e, _)| *e == exps) {
                existing.1 += coef;
            } else {
                terms.push((exps, coef));
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(PolynomialGerm { nvars, terms })
    }

    pub fn zero(nvars: usize) -> Self {
        PolynomialGerm {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree of the highest monomial, 0 for the zero polynomial.
    pub fn max_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Lowest total degree among the monomials.
    pub fn min_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum())
            .min()
            .unwrap_or(0)
    }

    /// Constant term F(0).
    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> PolynomialGerm {
        assert!(i < self.nvars);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, c * Rational::from_integer(e[i].into()))
            })
            .collect();
        PolynomialGerm::new(self.nvars, terms).expect("derivative keeps arity")
    }

    /// All n+1 partial derivatives.
    pub fn jacobian_ideal(&self) -> Vec<PolynomialGerm> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Multiply by the monomial z^e.
    pub fn shift(&self, e: &[u32]) -> PolynomialGerm {
        assert_eq!(e.len(), self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(ex, c)| {
                let sum: Vec<u32> = ex.iter().zip(e).map(|(a, b)| a + b).collect();
                (sum, c.clone())
            })
            .collect();
        PolynomialGerm::new(self.nvars, terms).expect("shift keeps arity")
    }

    /// Evaluate at a complex point.
    pub fn eval_complex(&self, z: &[(f64, f64)]) -> (f64, f64) {
        assert_eq!(z.len(), self.nvars);
        let mut acc = (0.0f64, 0.0f64);
        for (exps, coef) in &self.terms {
            let mut m = (to_f64(coef), 0.0);
            for (e, &(re, im)) in exps.iter().zip(z) {
                for _ in 0..*e {
                    m = (m.0 * re - m.1 * im, m.0 * im + m.1 * re);
                }
            }
            acc.0 += m.0;
            acc.1 += m.1;
        }
        acc
    }

    pub fn to_monomial_reprs(&self) -> Vec<MonomialRepr> {
        self.terms
            .iter()
            .map(|(e, c)| MonomialRepr {
                exps: e.clone(),
                coef: to_string_frac(c),
            })
            .collect()
    }

    pub fn from_monomial_reprs(nvars: usize, reprs: &[MonomialRepr]) -> Result<Self, GermError> {
        let mut terms = Vec::new();
        for r in reprs {
            let coef = parse_frac(&r.coef).ok_or_else(|| GermError::Parse {
                pos: 0,
                msg: format!("bad rational {:?}", r.coef),
            })?;
            terms.push((r.exps.clone(), coef));
        }
        PolynomialGerm::new(nvars, terms)
    }

    /// Parse the ASCII surface syntax: variables `z0..zN`, `^` for powers,
    /// `*` optional between factors, integer or `p/q` coefficients.
    pub fn parse(input: &str, nvars: usize) -> Result<Self, GermError> {
        Parser::new(input, nvars).parse()
    }
}

impl std::fmt::Display for PolynomialGerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (exps, coef)) in self.terms.iter().enumerate() {
            let negative = coef < &Rational::zero();
            if idx > 0 {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            } else if negative {
                write!(f, "-")?;
            }
            let abs = if negative { -coef } else { coef.clone() };
            let mut factors = Vec::new();
            if !abs.is_one() || exps.iter().all(|&e| e == 0) {
                factors.push(to_string_frac(&abs));
            }
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("z{i}")),
                    _ => factors.push(format!("z{i}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, nvars: usize) -> Self {
        Parser {
            bytes: input.as_bytes(),
            pos: 0,
            nvars,
        }
    }

    fn err(&self, msg: &str) -> GermError {
        GermError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
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

    fn parse(mut self) -> Result<PolynomialGerm, GermError> {
        let mut terms = Vec::new();
        let mut sign = Rational::one();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = -sign;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        loop {
            let (exps, coef) = self.parse_term()?;
            terms.push((exps, coef * &sign));
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rational::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Rational::one();
                }
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
        }
        PolynomialGerm::new(self.nvars, terms)
    }

    fn parse_term(&mut self) -> Result<(Vec<u32>, Rational), GermError> {
        let mut exps = vec![0u32; self.nvars];
        let mut coef = Rational::one();
        let mut saw_factor = false;
        loop {
            match self.peek() {
                Some(b'z') => {
                    self.pos += 1;
                    let idx = self.parse_uint()? as usize;
                    if idx >= self.nvars {
                        return Err(self.err(&format!(
                            "variable z{idx} out of range (nvars = {})",
                            self.nvars
                        )));
                    }
                    let mut power = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        power = self.parse_uint()?;
                    }
                    exps[idx] += power;
                    saw_factor = true;
                }
                Some(c) if c.is_ascii_digit() => {
                    let num = self.parse_uint()? as i64;
                    let mut r = Rational::from_integer(num.into());
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let den = self.parse_uint()? as i64;
                        if den == 0 {
                            return Err(self.err("zero denominator"));
                        }
                        r /= Rational::from_integer(den.into());
                    }
                    coef *= r;
                    saw_factor = true;
                }
                Some(b'*') => {
                    self.pos += 1;
                    continue;
                }
                _ => break,
            }
        }
        if !saw_factor {
            return Err(self.err("expected a monomial"));
        }
        Ok((exps, coef))
    }

    fn parse_uint(&mut self) -> Result<u32, GermError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number too large"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn parse_node() {
        let g = PolynomialGerm::parse("z0*z1", 2).unwrap();
        assert_eq!(g.terms(), &[(vec![1, 1], rat_int(1))]);
        let g2 = PolynomialGerm::parse("z0z1", 2).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn parse_cusp_sum() {
        let g = PolynomialGerm::parse("z0^3 + z1^3", 2).unwrap();
        assert_eq!(
            g.terms(),
            &[(vec![0, 3], rat_int(1)), (vec![3, 0], rat_int(1))]
        );
    }

    #[test]
    fn parse_signs_and_fractions() {
        let g = PolynomialGerm::parse("-z0^2 + 1/2*z1^2 - 3z0z1", 2).unwrap();
        assert_eq!(
            g.terms(),
            &[
                (vec![0, 2], rat(1, 2)),
                (vec![1, 1], rat_int(-3)),
                (vec![2, 0], rat_int(-1)),
            ]
        );
    }

    #[test]
    fn parse_errors() {
        assert!(PolynomialGerm::parse("z5", 2).is_err());
        assert!(PolynomialGerm::parse("z0 +", 2).is_err());
        assert!(PolynomialGerm::parse("w0", 2).is_err());
    }

    #[test]
    fn jacobian_product_rule() {
        let g = PolynomialGerm::parse("z0*z1", 2).unwrap();
        let j = g.jacobian_ideal();
        assert_eq!(j[0], PolynomialGerm::parse("z1", 2).unwrap());
        assert_eq!(j[1], PolynomialGerm::parse("z0", 2).unwrap());
    }

    #[test]
    fn jacobian_cubic() {
        let g = PolynomialGerm::parse("z0^3+z1^3", 2).unwrap();
        let j = g.jacobian_ideal();
        assert_eq!(j[0], PolynomialGerm::parse("3z0^2", 2).unwrap());
        assert_eq!(j[1], PolynomialGerm::parse("3z1^2", 2).unwrap());
    }

    #[test]
    fn jacobian_of_constant() {
        let g = PolynomialGerm::parse("7", 2).unwrap();
        for p in g.jacobian_ideal() {
            assert!(p.is_zero());
        }
    }

    #[test]
    fn duplicate_monomials_merge() {
        let g = PolynomialGerm::parse("z0 + z0", 1).unwrap();
        assert_eq!(g.terms(), &[(vec![1], rat_int(2))]);
        let h = PolynomialGerm::parse("z0 - z0", 1).unwrap();
        assert!(h.is_zero());
    }

    #[test]
    fn wire_round_trip() {
        let g = PolynomialGerm::parse("z0^2 - 1/3*z1", 2).unwrap();
        let reprs = g.to_monomial_reprs();
        let back = PolynomialGerm::from_monomial_reprs(2, &reprs).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn eval_complex_node() {
        let g = PolynomialGerm::parse("z0*z1", 2).unwrap();
        let v = g.eval_complex(&[(2.0, 0.0), (0.0, 3.0)]);
        assert!((v.0 - 0.0).abs() < 1e-12 && (v.1 - 6.0).abs() < 1e-12);
    }

    #[test]
    fn display_round_trip() {
        let g = PolynomialGerm::parse("z0^3 - 2*z0*z1 + 1/2", 2).unwrap();
        let back = PolynomialGerm::parse(&g.to_string(), 2).unwrap();
        assert_eq!(g, back);
    }
}
