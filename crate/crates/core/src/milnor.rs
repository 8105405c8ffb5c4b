//! Milnor numbers of isolated hypersurface critical points, by two
//! independent routes.
//!
//! The workhorse is the quotient-dimension computation: for increasing
//! degree cutoffs `D` we compute
//! `dim Q[z]/(J(f) + m^D)` as (number of monomials of degree < D) minus the
//! rank of the Macaulay matrix of Jacobian-ideal multiples, and stop once
//! the dimension agrees for two consecutive cutoffs. The Jacobian ideal of
//! an isolated singularity contains every monomial above the socle degree,
//! so the stabilized value is the Milnor number. All linear algebra is
//! exact rational.
//!
//! The second route, for quasi-homogeneous germs, is the weight count
//! `μ = Π (d/w_i - 1)`.

use crate::germ::PolynomialGerm;
use crate::rational::{is_nonneg_integer, Rational};
use num::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MilnorError {
    #[error("quotient dimension did not stabilize below degree bound (last dimension {last_dimension})")]
    BoundExceeded { last_dimension: usize },
    #[error("quasi-homogeneous count {value} is not a non-negative integer")]
    NotInteger { value: String },
    #[error("quasi-homogeneous weight gives d/w <= 1")]
    WeightOutOfRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mu {
    Finite(usize),
    /// The critical point is non-isolated: the quotient dimension keeps
    /// growing through the degree bound.
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    QuotientDimension,
    QuasiHomogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilnorResult {
    pub mu: Mu,
    pub method: Method,
    pub degree_bound_used: u32,
}

/// Classical socle-degree bound plus margin: `nvars * (maxdeg - 1) + 2`.
pub fn default_degree_bound(f: &PolynomialGerm) -> u32 {
    f.nvars() as u32 * f.max_degree().saturating_sub(1) + 2
}

/// Milnor number by stabilizing quotient dimension.
///
/// Returns `mu = 0` immediately when `f(0) != 0` or `df(0) != 0` (no
/// critical point at the origin).
pub fn milnor_number(
    f: &PolynomialGerm,
    degree_bound: Option<u32>,
) -> Result<MilnorResult, MilnorError> {
    let guard = default_degree_bound(f);
    let bound = degree_bound.unwrap_or(guard).max(2);

    if !f.constant_term().is_zero() {
        return Ok(MilnorResult {
            mu: Mu::Finite(0),
            method: Method::QuotientDimension,
            degree_bound_used: bound,
        });
    }
    let partials = f.jacobian_ideal();
    if partials.iter().any(|p| p.min_degree() == 0 && !p.is_zero()) {
        // some derivative is nonzero at the origin
        return Ok(MilnorResult {
            mu: Mu::Finite(0),
            method: Method::QuotientDimension,
            degree_bound_used: bound,
        });
    }
    if partials.iter().all(|p| p.is_zero()) {
        return Ok(MilnorResult {
            mu: Mu::Infinite,
            method: Method::QuotientDimension,
            degree_bound_used: bound,
        });
    }

    let mut prev_dim: Option<usize> = None;
    let mut last_dim = 0usize;
    for cutoff in 1..=bound {
        let dim = quotient_dimension(&partials, f.nvars(), cutoff);
        if prev_dim == Some(dim) {
            return Ok(MilnorResult {
                mu: Mu::Finite(dim),
                method: Method::QuotientDimension,
                degree_bound_used: cutoff,
            });
        }
        prev_dim = Some(dim);
        last_dim = dim;
    }
    if bound >= guard {
        Ok(MilnorResult {
            mu: Mu::Infinite,
            method: Method::QuotientDimension,
            degree_bound_used: bound,
        })
    } else {
        Err(MilnorError::BoundExceeded {
            last_dimension: last_dim,
        })
    }
}

/// Quasi-homogeneous count `Π (d/w_i - 1)`; independent oracle for
/// [`milnor_number`] on weighted-homogeneous germs.
pub fn milnor_quasihomogeneous(
    weights: &[Rational],
    degree: &Rational,
) -> Result<u64, MilnorError> {
    let mut product = Rational::one();
    for w in weights {
        let ratio = degree / w;
        if ratio <= Rational::one() {
            return Err(MilnorError::WeightOutOfRange);
        }
        product *= ratio - Rational::one();
    }
    if !is_nonneg_integer(&product) {
        return Err(MilnorError::NotInteger {
            value: product.to_string(),
        });
    }
    Ok(product.to_integer().to_u64().expect("small integer"))
}

/// `Σ_p μ(π, p)` over a list of germs, each with an isolated critical point.
/// Germs are processed in parallel; the summation order is the input order.
pub fn milnor_sum(germs: &[PolynomialGerm]) -> Result<u64, MilnorError> {
    let results: Vec<Result<MilnorResult, MilnorError>> = germs
        .par_iter()
        .map(|g| milnor_number(g, None))
        .collect();
    let mut total = 0u64;
    for r in results {
        match r?.mu {
            Mu::Finite(mu) => total += mu as u64,
            Mu::Infinite => {
                return Err(MilnorError::BoundExceeded { last_dimension: 0 });
            }
        }
    }
    Ok(total)
}

/// All exponent vectors in `nvars` variables of total degree < `cutoff`,
/// in a fixed order.
fn monomials_below(nvars: usize, cutoff: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    enumerate(&mut out, &mut current, 0, cutoff.saturating_sub(1));
    out
}

fn enumerate(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, var: usize, remaining: u32) {
    if var == current.len() {
        out.push(current.clone());
        return;
    }
    for e in 0..=remaining {
        current[var] = e;
        enumerate(out, current, var + 1, remaining - e);
        current[var] = 0;
    }
}

/// `dim Q[z]/(J + m^cutoff)`: monomials of degree < cutoff modulo the span
/// of all `g * p_i` with the degree-`>= cutoff` part discarded.
fn quotient_dimension(partials: &[PolynomialGerm], nvars: usize, cutoff: u32) -> usize {
    let basis = monomials_below(nvars, cutoff);
    let index: std::collections::HashMap<&[u32], usize> = basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_slice(), i))
        .collect();
    let ncols = basis.len();

    let mut elim = RowEchelon::new(ncols);
    for p in partials {
        if p.is_zero() {
            continue;
        }
        let min_deg = p.min_degree();
        for g in &basis {
            let gdeg: u32 = g.iter().sum();
            if gdeg + min_deg >= cutoff {
                continue;
            }
            let product = p.shift(g);
            let mut row = vec![Rational::zero(); ncols];
            let mut nonzero = false;
            for (exps, coef) in product.terms() {
                let deg: u32 = exps.iter().sum();
                if deg < cutoff {
                    let col = index[exps.as_slice()];
                    row[col] = coef.clone();
                    nonzero = true;
                }
            }
            if nonzero {
                elim.insert(row);
            }
        }
    }
    ncols - elim.rank()
}

/// Incremental exact row-echelon elimination for rank counting.
struct RowEchelon {
    ncols: usize,
    /// rows kept in echelon form, keyed by pivot column
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RowEchelon {
    fn new(ncols: usize) -> Self {
        RowEchelon {
            ncols,
            rows: Vec::new(),
        }
    }

    fn insert(&mut self, mut row: Vec<Rational>) {
        debug_assert_eq!(row.len(), self.ncols);
        loop {
            let pivot = match row.iter().position(|c| !c.is_zero()) {
                Some(p) => p,
                None => return, // reduced to zero, dependent row
            };
            if let Some((_, existing)) = self.rows.iter().find(|(p, _)| *p == pivot) {
                let factor = &row[pivot] / &existing[pivot];
                for (a, b) in row.iter_mut().zip(existing.iter()) {
                    *a -= &factor * b;
                }
            } else {
                self.rows.push((pivot, row));
                return;
            }
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}
