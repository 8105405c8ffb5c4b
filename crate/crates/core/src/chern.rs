//! Graded Chern-class algebra for a rank-2 bundle `N` with `c1(N) = 0`.
//!
//! Everything public lives in `Q[c2]/(c2^{T+1})`. Chern roots `x1, x2`
//! with `x1 + x2 = 0`, `x1 x2 = c2` appear only transiently inside
//! [`symmetric_reduce`] and the Todd evaluation; they are never exposed.
//!
//! The module provides the projective-bundle pushforward
//! `p_* c1(F)^m = (-1)^k c2^k (m = 2k+1), 0 (m = 2k)`, the additive E-genus
//! of ordinary-double-point degenerations, and the closed-form log
//! coefficients for nodal (codimension-2) and isolated critical loci.

use crate::rational::{factorial, rat, rat_int, Rational};
use crate::series::{td_inverse_shifted, td_series, TruncatedSeries};
use num::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChernError {
    #[error("input polynomial is not symmetric in the Chern roots (coefficient of x1^{i} x2^{j} differs from its mirror)")]
    NotSymmetric { i: usize, j: usize },
    #[error("missing characteristic number for monomial Td_{td} c2^{c2} ch_{ch}")]
    MissingCharNumber { td: usize, c2: usize, ch: usize },
}

/// Element of `Q[c2]/(c2^{truncation+1})`; index `k` stands for `c2^k`
/// (cohomological degree `4k`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedElement {
    coeffs: BTreeMap<usize, Rational>,
    truncation: usize,
}

impl GradedElement {
    pub fn zero(truncation: usize) -> Self {
        GradedElement {
            coeffs: BTreeMap::new(),
            truncation,
        }
    }

    pub fn constant(c: Rational, truncation: usize) -> Self {
        let mut g = Self::zero(truncation);
        g.set(0, c);
        g
    }

    /// c·c2^k, dropped if beyond the truncation.
    pub fn monomial(c: Rational, k: usize, truncation: usize) -> Self {
        let mut g = Self::zero(truncation);
        g.set(k, c);
        g
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    fn set(&mut self, k: usize, c: Rational) {
        if k <= self.truncation && !c.is_zero() {
            self.coeffs.insert(k, c);
        }
    }

    /// Coefficient of `c2^k` (zero when absent or beyond truncation).
    pub fn coefficient(&self, k: usize) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &GradedElement) -> GradedElement {
        let t = self.truncation.min(other.truncation);
        let mut out = GradedElement::zero(t);
        for k in 0..=t {
            let c = self.coefficient(k) + other.coefficient(k);
            out.set(k, c);
        }
        out
    }

    pub fn mul(&self, other: &GradedElement) -> GradedElement {
        let t = self.truncation.min(other.truncation);
        let mut out = GradedElement::zero(t);
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                if i + j <= t {
                    let c = out.coefficient(i + j) + a * b;
                    out.set(i + j, c);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> GradedElement {
        let mut out = GradedElement::zero(self.truncation);
        for (&k, a) in &self.coeffs {
            out.set(k, a * c);
        }
        out
    }

    pub fn neg(&self) -> GradedElement {
        self.scale(&rat_int(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Element of the fiber algebra of `P(N)` before pushforward: a polynomial
/// in `c1(F)` with rational coefficients, index = power of `c1(F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberClassElement {
    coeffs: Vec<Rational>,
}

impl FiberClassElement {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty());
        FiberClassElement { coeffs }
    }

    /// Fiber element with the coefficients of a one-variable series read as
    /// powers of `c1(F)`.
    pub fn from_series(s: &TruncatedSeries) -> Self {
        FiberClassElement {
            coeffs: s.coeffs().to_vec(),
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }
}

/// `p_* c1(F)^m` in `Q[c2]`: `(-1)^k c2^k` for `m = 2k+1`, zero for even `m`.
pub fn pushforward_power(m: usize, truncation: usize) -> GradedElement {
    if m % 2 == 0 {
        GradedElement::zero(truncation)
    } else {
        let k = (m - 1) / 2;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        GradedElement::monomial(rat_int(sign), k, truncation)
    }
}

/// Linear extension of [`pushforward_power`]: for `f = Σ a_j c1(F)^j`,
/// `p_* f = Σ_k (-1)^k a_{2k+1} c2^k`.
pub fn pushforward(f: &FiberClassElement, truncation: usize) -> GradedElement {
    let mut out = GradedElement::zero(truncation);
    for (j, a) in f.coeffs().iter().enumerate() {
        if !a.is_zero() {
            let term = pushforward_power(j, truncation).scale(a);
            out = out.add(&term);
        }
    }
    out
}

/// Polynomial in the two Chern roots, `coeffs[(i, j)]` the coefficient of
/// `x1^i x2^j`.
#[derive(Debug, Clone, Default)]
pub struct TwoRootPoly {
    pub coeffs: BTreeMap<(usize, usize), Rational>,
}

impl TwoRootPoly {
    pub fn set(&mut self, i: usize, j: usize, c: Rational) {
        if c.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), c);
        }
    }

    /// `g(x1) h(x2)` from two one-variable series.
    pub fn product_of(g: &TruncatedSeries, h: &TruncatedSeries) -> Self {
        let mut p = TwoRootPoly::default();
        for (i, a) in g.coeffs().iter().enumerate() {
            for (j, b) in h.coeffs().iter().enumerate() {
                if !a.is_zero() && !b.is_zero() {
                    let prev = p.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rational::zero);
                    p.set(i, j, prev + a * b);
                }
            }
        }
        p
    }
}

/// Rewrite a symmetric polynomial in the roots via `e1 = x1 + x2 = 0`,
/// `e2 = x1 x2 = c2`.
///
/// A symmetrized pair `x1^i x2^j + x1^j x2^i` (`i > j`) equals
/// `c2^j · p_{i-j}` with the power sum `p_m = 2 (-1)^{m/2} c2^{m/2}` for even
/// `m > 0` and `p_m = 0` for odd `m`; the diagonal `(i, i)` gives `c2^i`.
pub fn symmetric_reduce(poly: &TwoRootPoly, truncation: usize) -> Result<GradedElement, ChernError> {
    // symmetry check first
    for (&(i, j), c) in &poly.coeffs {
        let mirror = poly
            .coeffs
            .get(&(j, i))
            .cloned()
            .unwrap_or_else(Rational::zero);
        if *c != mirror {
            return Err(ChernError::NotSymmetric { i, j });
        }
    }
    let mut out = GradedElement::zero(truncation);
    for (&(i, j), c) in &poly.coeffs {
        if i < j {
            continue; // handled by its mirror
        }
        if i == j {
            let prev = out.coefficient(i);
            out.set(i, prev + c);
        } else {
            let m = i - j;
            if m % 2 == 1 {
                continue; // odd power sum vanishes under e1 = 0
            }
            let k = j + m / 2;
            let sign = if (m / 2) % 2 == 0 { 2 } else { -2 };
            let prev = out.coefficient(k);
            out.set(k, prev + c * rat_int(sign));
        }
    }
    Ok(out)
}

/// `Td(N) = Td(x1) Td(x2)` reduced to `Q[c2]` via the roots relation.
///
/// With `x2 = -x1` and `x1^2 = -c2` this is the even series
/// `Td(x) Td(-x)` with `x^{2k}` replaced by `(-c2)^k`.
pub fn todd_rank2(truncation: usize) -> GradedElement {
    let td = td_series(2 * truncation + 1);
    let even = td.mul(&td.substitute_neg_x());
    let mut out = GradedElement::zero(truncation);
    for k in 0..=truncation {
        let a = even
            .coefficient_of(2 * k)
            .expect("even series truncated long enough");
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out.set(k, a * rat_int(sign));
    }
    out
}

/// The additive E-genus of the rank-2 normal bundle as an element of
/// `Q[c2]`:
/// `E(N) = 2 Td(N) Σ_k (-1)^k a_{2k+1} c2^k` with `a_j` the coefficients of
/// `f(x) = (Td^{-1}(x) - 1)/x`. Its degree-0 part is `1/3`.
pub fn e_genus_rank2(truncation: usize) -> GradedElement {
    let f = td_inverse_shifted(2 * truncation + 2);
    let pushed = pushforward(&FiberClassElement::from_series(&f), truncation);
    todd_rank2(truncation).mul(&pushed).scale(&rat_int(2))
}

/// Characteristic numbers of the nodal critical locus: `dimension` is the
/// complex dimension `d` of the locus, and `numbers[(a, b, c)]` holds the
/// integral of `Td_a(TΣ) · c2(N)^b · ch_c(ξ)` over it. The `c = 0` entries
/// carry the bare `Td_a c2^b` integral; the bundle rank multiplies them
/// inside [`char_number_coefficient`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharNumbers {
    pub dimension: usize,
    pub numbers: BTreeMap<(usize, usize, usize), Rational>,
}

impl CharNumbers {
    /// The zero-dimensional case: `s` reduced points.
    pub fn points(count: i64) -> Self {
        let mut numbers = BTreeMap::new();
        numbers.insert((0, 0, 0), rat_int(count));
        CharNumbers {
            dimension: 0,
            numbers,
        }
    }

    fn required_keys(&self) -> Vec<(usize, usize, usize)> {
        let d = self.dimension;
        let mut keys = Vec::new();
        for b in 0..=(d / 2) {
            for a in 0..=(d - 2 * b) {
                let c = d - 2 * b - a;
                keys.push((a, b, c));
            }
        }
        keys
    }
}

/// Log coefficient for a codimension-2 nodal critical locus:
/// `-1/2 Σ Td_a(TΣ) E_b(N) ch_c(ξ)` paired against the supplied
/// characteristic numbers in total degree `d`.
pub fn char_number_coefficient(
    data: &CharNumbers,
    rank_xi: i64,
) -> Result<Rational, ChernError> {
    let d = data.dimension;
    let e = e_genus_rank2(d / 2);
    let mut total = Rational::zero();
    for (a, b, c) in data.required_keys() {
        let value = data
            .numbers
            .get(&(a, b, c))
            .ok_or(ChernError::MissingCharNumber { td: a, c2: b, ch: c })?;
        let mut term = e.coefficient(b) * value;
        if c == 0 {
            term *= rat_int(rank_xi);
        }
        total += term;
    }
    Ok(total * rat(-1, 2))
}

/// Log coefficient for isolated critical points:
/// `(-1)^n / (n+2)! · rk(ξ) · Σ μ(π, p)`.
pub fn milnor_formula_coefficient(n: u32, rank_xi: i64, milnor_sum: i64) -> Rational {
    let sign = if n % 2 == 0 { 1 } else { -1 };
    rat_int(sign) / factorial(n + 2) * rat_int(rank_xi) * rat_int(milnor_sum)
}
