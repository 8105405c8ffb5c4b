//! Truncated formal power series over the rationals in one variable, and the
//! specific generating functions the genus calculus needs.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of
//! `x^0 .. x^N`. Binary operations truncate to the minimum of the two orders
//! and record the result order explicitly. All arithmetic is exact; there is
//! no floating point anywhere in this module.

use crate::rational::{factorial, rat_int, Rational};
use num::{One, Zero};
use thiserror::Error;

pub const DEFAULT_ORDER: usize = 16;
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series reciprocal needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error("coefficient degree {degree} exceeds truncation order {order}")]
    DegreeOutOfRange { degree: usize, order: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Series from explicit coefficients of `x^0 .. x^N`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// The monomial c·x^k, truncated at `order`.
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Exact coefficient of `x^m`.
    pub fn coefficient_of(&self, m: usize) -> Result<Rational, SeriesError> {
        self.coeffs.get(m).cloned().ok_or(SeriesError::DegreeOutOfRange {
            degree: m,
            order: self.order(),
        })
    }

    /// Re-truncate to a lower (or equal) order.
    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        TruncatedSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| &self.coeffs[k] + &other.coeffs[k])
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| &self.coeffs[k] - &other.coeffs[k])
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if !other.coeffs[j].is_zero() {
                    coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
                }
            }
        }
        TruncatedSeries { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// f(-x): flip the sign of every odd coefficient.
    pub fn substitute_neg_x(&self) -> TruncatedSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| if k % 2 == 1 { -a } else { a.clone() })
            .collect();
        TruncatedSeries { coeffs }
    }

    /// Multiplicative inverse up to the truncation order.
    ///
    /// Solved by the triangular recurrence
    /// `b_0 = 1/a_0`, `b_k = -(1/a_0) Σ_{j=1..k} a_j b_{k-j}`.
    pub fn reciprocal(&self) -> Result<TruncatedSeries, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let n = self.order();
        let inv0 = Rational::one() / &self.coeffs[0];
        let mut b = vec![Rational::zero(); n + 1];
        b[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &b[k - j];
                }
            }
            b[k] = -(&inv0 * acc);
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    /// `f_-(x) = (f(x) - f(-x)) / 2x`: picks out the odd coefficients,
    /// `f_-` coefficient of `x^{2k}` is `a_{2k+1}`. The even part cancels
    /// exactly, so the odd coefficients of the result are exact zeros.
    pub fn minus_part(&self) -> TruncatedSeries {
        let n = self.order();
        let out_order = n.saturating_sub(1);
        let mut coeffs = vec![Rational::zero(); out_order + 1];
        for (j, c) in coeffs.iter_mut().enumerate() {
            if j % 2 == 0 {
                if let Some(a) = self.coeffs.get(j + 1) {
                    *c = a.clone();
                }
            }
        }
        TruncatedSeries { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// `Td^{-1}(x) = (1 - e^{-x})/x`, coefficient of `x^k` is `(-1)^k/(k+1)!`.
pub fn td_inverse_series(order: usize) -> TruncatedSeries {
    let coeffs = (0..=order)
        .map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            rat_int(sign) / factorial(k as u32 + 1)
        })
        .collect();
    TruncatedSeries::from_coeffs(coeffs)
}

/// The Todd series `Td(x) = x/(1 - e^{-x})`, reciprocal of [`td_inverse_series`].
pub fn td_series(order: usize) -> TruncatedSeries {
    td_inverse_series(order)
        .reciprocal()
        .expect("Td^{-1} has constant term 1")
}

/// The honest power-series form of `1/x - (1-e^{-x})/x^2`: the pole cancels
/// and the coefficient of `x^n` is `(-1)^n/(n+2)!`. Equals
/// `(x - 1 + e^{-x})/x^2` expanded term by term.
pub fn td_defect_series(order: usize) -> TruncatedSeries {
    let coeffs = (0..=order)
        .map(|n| {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            rat_int(sign) / factorial(n as u32 + 2)
        })
        .collect();
    TruncatedSeries::from_coeffs(coeffs)
}

/// `f(x) = (Td^{-1}(x) - 1)/x`, the series whose odd part drives the E-genus.
pub fn td_inverse_shifted(order: usize) -> TruncatedSeries {
    // (Td^{-1}(x) - 1)/x has x^k coefficient (-1)^{k+1}/(k+2)!.
    let coeffs = (0..=order)
        .map(|k| {
            let sign = if k % 2 == 0 { -1 } else { 1 };
            rat_int(sign) / factorial(k as u32 + 2)
        })
        .collect();
    TruncatedSeries::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// Independent oracle: e^{-x} by the factorial recurrence, then
    /// (1 - e^{-x})/x by explicit shift.
    fn td_inverse_oracle(order: usize) -> Vec<Rational> {
        let mut exp_neg = vec![Rational::zero(); order + 2];
        exp_neg[0] = Rational::one();
        for k in 1..=order + 1 {
            // coefficient of x^k in e^{-x} is (-1)/k times the previous one
            exp_neg[k] = &exp_neg[k - 1] * rat(-1, k as i64);
        }
        // (1 - e^{-x})/x : drop the constant, negate, shift down by one.
        (1..=order + 1).map(|k| -&exp_neg[k]).collect()
    }

    #[test]
    fn difference_of_squares() {
        let order = 4;
        let one_plus = TruncatedSeries::from_coeffs(vec![
            rat_int(1),
            rat_int(1),
            rat_int(0),
            rat_int(0),
            rat_int(0),
        ]);
        let one_minus = one_plus.substitute_neg_x();
        let prod = one_plus.mul(&one_minus);
        let mut expect = TruncatedSeries::zero(order);
        expect = expect.add(&TruncatedSeries::monomial(rat_int(1), 0, order));
        expect = expect.sub(&TruncatedSeries::monomial(rat_int(1), 2, order));
        assert_eq!(prod, expect);
    }

    #[test]
    fn multiply_by_zero() {
        let s = td_series(8);
        assert!(s.mul(&TruncatedSeries::zero(8)).is_zero());
    }

    #[test]
    fn reciprocal_geometric() {
        let one_minus_x =
            TruncatedSeries::from_coeffs(vec![rat_int(1), rat_int(-1), rat_int(0), rat_int(0)]);
        let r = one_minus_x.reciprocal().unwrap();
        assert_eq!(r.coeffs(), &[rat_int(1), rat_int(1), rat_int(1), rat_int(1)]);
        let one = TruncatedSeries::one(5);
        assert_eq!(one.reciprocal().unwrap(), one);
    }

    #[test]
    fn reciprocal_needs_unit() {
        let x = TruncatedSeries::monomial(rat_int(1), 1, 3);
        assert_eq!(x.reciprocal(), Err(SeriesError::ZeroConstantTerm));
    }

    #[test]
    fn td_inverse_matches_exponential_oracle() {
        let s = td_inverse_series(10);
        assert_eq!(s.coeffs(), &td_inverse_oracle(10)[..]);
        // k-th coefficient times (k+1)! is (-1)^k
        for k in 0..=10 {
            let c = s.coefficient_of(k).unwrap() * factorial(k as u32 + 1);
            assert_eq!(c, rat_int(if k % 2 == 0 { 1 } else { -1 }));
        }
    }

    #[test]
    fn td_inverse_low_order() {
        assert_eq!(
            td_inverse_series(4).coeffs(),
            &[rat_int(1), rat(-1, 2), rat(1, 6), rat(-1, 24), rat(1, 120)]
        );
        assert_eq!(td_inverse_series(0).coeffs(), &[rat_int(1)]);
    }

    #[test]
    fn td_series_coefficients() {
        // 1, 1/2, 1/12, 0, -1/720 : Bernoulli-type values from the
        // triangular system solved by `reciprocal`.
        assert_eq!(
            td_series(4).coeffs(),
            &[rat_int(1), rat(1, 2), rat(1, 12), rat_int(0), rat(-1, 720)]
        );
    }

    #[test]
    fn td_product_is_one() {
        for order in [0, 1, 4, 16, 32] {
            let prod = td_series(order).mul(&td_inverse_series(order));
            assert_eq!(prod, TruncatedSeries::one(order));
        }
    }

    #[test]
    fn td_reflection() {
        // Td(x) - Td(-x) = x, the reflection Td(x) e^{-x} = Td(-x) in series form.
        let td = td_series(16);
        let diff = td.sub(&td.substitute_neg_x());
        assert_eq!(diff, TruncatedSeries::monomial(rat_int(1), 1, 16));
    }

    #[test]
    fn minus_part_basics() {
        // f = x -> 1
        let x = TruncatedSeries::monomial(rat_int(1), 1, 4);
        assert_eq!(x.minus_part(), TruncatedSeries::monomial(rat_int(1), 0, 3));
        // f = x^2 -> 0
        let x2 = TruncatedSeries::monomial(rat_int(1), 2, 4);
        assert!(x2.minus_part().is_zero());
    }

    #[test]
    fn minus_part_of_shifted_td_inverse() {
        // f = (Td^{-1}(x)-1)/x; odd coefficients of f read off td_inverse
        // shifted by one: f_- = [1/6, 0, 1/120, 0, 1/5040, ...]
        let f = td_inverse_shifted(8);
        let fm = f.minus_part();
        assert_eq!(fm.coefficient_of(0).unwrap(), rat(1, 6));
        assert_eq!(fm.coefficient_of(1).unwrap(), rat_int(0));
        assert_eq!(fm.coefficient_of(2).unwrap(), rat(1, 120));
        assert_eq!(fm.coefficient_of(3).unwrap(), rat_int(0));
        assert_eq!(fm.coefficient_of(4).unwrap(), rat(1, 5040));
    }

    #[test]
    fn shifted_series_consistent_with_td_inverse() {
        let ti = td_inverse_series(9);
        let shifted = td_inverse_shifted(8);
        for k in 0..=8 {
            assert_eq!(
                shifted.coefficient_of(k).unwrap(),
                ti.coefficient_of(k + 1).unwrap()
            );
        }
    }

    #[test]
    fn defect_series_coefficients() {
        let d = td_defect_series(16);
        assert_eq!(d.coefficient_of(0).unwrap(), rat(1, 2));
        assert_eq!(d.coefficient_of(1).unwrap(), rat(-1, 6));
        assert_eq!(d.coefficient_of(2).unwrap(), rat(1, 24));
        // cross-check against the chain 1/Td(x) * (Td(x)-1)/x computed
        // independently from the Todd series itself
        let td = td_series(18);
        let td_minus_one_over_x = TruncatedSeries::from_coeffs(td.coeffs()[1..].to_vec());
        let chain = td_inverse_series(17).mul(&td_minus_one_over_x);
        for n in 0..=16 {
            assert_eq!(
                d.coefficient_of(n).unwrap(),
                chain.coefficient_of(n).unwrap()
            );
        }
    }

    #[test]
    fn coefficient_out_of_range() {
        let s = td_series(4);
        assert_eq!(
            s.coefficient_of(5),
            Err(SeriesError::DegreeOutOfRange { degree: 5, order: 4 })
        );
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
            proptest::collection::vec((-20i64..20, 1i64..12), order + 1).prop_map(|v| {
                TruncatedSeries::from_coeffs(v.into_iter().map(|(p, q)| rat(p, q)).collect())
            })
        }

        proptest! {
            #[test]
            fn mul_associative(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            }

            #[test]
            fn distributive(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            }

            #[test]
            fn minus_part_linear(a in arb_series(6), b in arb_series(6)) {
                prop_assert_eq!(a.add(&b).minus_part(), a.minus_part().add(&b.minus_part()));
            }

            #[test]
            fn minus_part_kills_even(a in arb_series(6)) {
                // even part of a
                let even = a.add(&a.substitute_neg_x()).scale(&rat(1, 2));
                prop_assert!(even.minus_part().is_zero());
            }

            #[test]
            fn reciprocal_inverts(a in arb_series(6)) {
                prop_assume!(!a.coeffs()[0].is_zero());
                let r = a.reciprocal().unwrap();
                prop_assert_eq!(a.mul(&r), TruncatedSeries::one(6));
            }
        }
    }
}
