//! Least-squares fitting of sampled germs in the expansion basis
//! `C^∞ ⊕ ⊕_r ⊕_k |t|^{2r} (log|t|)^k C^∞`.
//!
//! The design matrix has columns `{1, |t|^2, .., |t|^{2 smooth_order},
//! log|t|^2, |t|^{2r}(log|t|)^k, ..}`; the `log|t|^2` column is the
//! divergence extractor. Columns are scaled to unit norm before solving and
//! the condition number of the scaled matrix gates the result: a model
//! with duplicated exponents (for example `r = 1, k = 0` next to the
//! smooth `|t|^2` column) is reported as ill-conditioned rather than
//! silently solved.

use crate::integrals::IntegralSample;
use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;
use thiserror::Error;

/// Exponent `r ∈ Q ∩ (0, 1]` of a `|t|^{2r}` term.
pub type Exponent = num::rational::Ratio<i64>;

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("design matrix ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("need at least {needed} samples for {params} parameters, got {got}")]
    InsufficientSamples {
        needed: usize,
        params: usize,
        got: usize,
    },
    #[error("exponent {0} outside (0, 1]")]
    ExponentOutOfRange(Exponent),
}

/// Which expansion terms to fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionModel {
    /// Taylor order of the smooth part in `|t|^2`.
    pub smooth_order: usize,
    /// Singular terms `(r, k)` for `|t|^{2r} (log|t|)^k`.
    pub pairs: Vec<(Exponent, usize)>,
}

impl ExpansionModel {
    /// Model with every `(r, k)` pair for the given exponents and
    /// `k = 0..=max_log_power`. Exponents must lie in `(0, 1]`; duplicates
    /// are not rejected here — they surface as [`FitError::IllConditioned`]
    /// when fitting.
    pub fn new(
        smooth_order: usize,
        exponents: &[Exponent],
        max_log_power: usize,
    ) -> Result<Self, FitError> {
        let mut pairs = Vec::new();
        for &r in exponents {
            if r <= Exponent::new(0, 1) || r > Exponent::new(1, 1) {
                return Err(FitError::ExponentOutOfRange(r));
            }
            for k in 0..=max_log_power {
                pairs.push((r, k));
            }
        }
        Ok(ExpansionModel {
            smooth_order,
            pairs,
        })
    }

    pub fn smooth_only(smooth_order: usize) -> Self {
        ExpansionModel {
            smooth_order,
            pairs: Vec::new(),
        }
    }

    /// constant + smooth Taylor terms + log column + singular pairs
    pub fn param_count(&self) -> usize {
        2 + self.smooth_order + self.pairs.len()
    }

    fn design_row(&self, radius: f64) -> Vec<f64> {
        let mut row = Vec::with_capacity(self.param_count());
        row.push(1.0);
        let r2 = radius * radius;
        let mut p = 1.0;
        for _ in 0..self.smooth_order {
            p *= r2;
            row.push(p);
        }
        let log_r = radius.ln();
        row.push(2.0 * log_r); // log|t|^2
        for &(r, k) in &self.pairs {
            let exp2r = 2.0 * (*r.numer() as f64) / (*r.denom() as f64);
            row.push(radius.powf(exp2r) * log_r.powi(k as i32));
        }
        row
    }
}

/// Fitted expansion with residual diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Coefficient of `log|t|^2`, the divergence extractor.
    pub log_coeff: f64,
    pub constant: f64,
    /// Coefficients of `|t|^2 .. |t|^{2 smooth_order}`.
    pub smooth_coeffs: Vec<f64>,
    /// Coefficients of the `|t|^{2r} (log|t|)^k` terms.
    pub term_coeffs: BTreeMap<(Exponent, usize), f64>,
    /// RMS residual on held-out radii (falls back to the fit radii when the
    /// sample count is too small to hold anything out).
    pub residual_rms: f64,
    pub condition_estimate: f64,
}

pub const DEFAULT_CONDITION_THRESHOLD: f64 = 1e12;

/// Linear least squares in the expansion basis.
///
/// Every fourth radius (sorted ascending) is held out for the residual
/// diagnostic; the fit itself uses the rest.
pub fn fit_b0(samples: &[IntegralSample], model: &ExpansionModel) -> Result<FitResult, FitError> {
    fit_b0_with_threshold(samples, model, DEFAULT_CONDITION_THRESHOLD)
}

pub fn fit_b0_with_threshold(
    samples: &[IntegralSample],
    model: &ExpansionModel,
    condition_threshold: f64,
) -> Result<FitResult, FitError> {
    let params = model.param_count();
    if samples.len() < 2 * params {
        return Err(FitError::InsufficientSamples {
            needed: 2 * params,
            params,
            got: samples.len(),
        });
    }
    let mut ordered: Vec<&IntegralSample> = samples.iter().collect();
    ordered.sort_by(|a, b| a.radius().total_cmp(&b.radius()));

    let holdout_possible = ordered.len() >= 2 * params + ordered.len() / 4;
    let (fit_set, holdout): (Vec<&IntegralSample>, Vec<&IntegralSample>) = if holdout_possible {
        let mut fit = Vec::new();
        let mut held = Vec::new();
        for (i, s) in ordered.iter().enumerate() {
            if i % 4 == 2 {
                held.push(*s);
            } else {
                fit.push(*s);
            }
        }
        (fit, held)
    } else {
        (ordered.clone(), Vec::new())
    };

    let m = fit_set.len();
    let mut a = DMatrix::zeros(m, params);
    let mut b = DVector::zeros(m);
    for (i, s) in fit_set.iter().enumerate() {
        let row = model.design_row(s.radius());
        for (j, v) in row.into_iter().enumerate() {
            a[(i, j)] = v;
        }
        b[i] = s.value;
    }

    // unit-norm column scaling
    let mut norms = vec![0.0f64; params];
    for j in 0..params {
        let n = a.column(j).norm();
        norms[j] = if n > 0.0 { n } else { 1.0 };
        for i in 0..m {
            a[(i, j)] /= norms[j];
        }
    }

    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > condition_threshold {
        return Err(FitError::IllConditioned { condition });
    }
    let scaled = svd.solve(&b, 0.0).expect("svd computed with u and v");
    let coeffs: Vec<f64> = scaled
        .iter()
        .zip(&norms)
        .map(|(c, n)| c / n)
        .collect();

    let predict = |radius: f64| -> f64 {
        model
            .design_row(radius)
            .iter()
            .zip(&coeffs)
            .map(|(x, c)| x * c)
            .sum()
    };
    let residual_set: &[&IntegralSample] = if holdout.is_empty() { &fit_set } else { &holdout };
    let residual_rms = (residual_set
        .iter()
        .map(|s| {
            let d = s.value - predict(s.radius());
            d * d
        })
        .sum::<f64>()
        / residual_set.len() as f64)
        .sqrt();

    let mut term_coeffs = BTreeMap::new();
    for (idx, &(r, k)) in model.pairs.iter().enumerate() {
        term_coeffs.insert((r, k), coeffs[2 + model.smooth_order + idx]);
    }
    Ok(FitResult {
        log_coeff: coeffs[1 + model.smooth_order],
        constant: coeffs[0],
        smooth_coeffs: coeffs[1..=model.smooth_order].to_vec(),
        term_coeffs,
        residual_rms,
        condition_estimate: condition,
    })
}

/// Average samples over angles at each radius; enforces the circle
/// invariance the model basis assumes. Error estimates shrink by
/// `1/sqrt(angles)`.
pub fn s1_average(raw: &[IntegralSample]) -> Vec<IntegralSample> {
    let mut groups: Vec<(f64, Vec<&IntegralSample>)> = Vec::new();
    for s in raw {
        let r = s.radius();
        match groups
            .iter_mut()
            .find(|(gr, _)| (gr - r).abs() <= 1e-9 * gr.max(r))
        {
            Some((_, v)) => v.push(s),
            None => groups.push((r, vec![s])),
        }
    }
    groups
        .into_iter()
        .map(|(r, v)| {
            let n = v.len() as f64;
            let value = v.iter().map(|s| s.value).sum::<f64>() / n;
            let est_error = v.iter().map(|s| s.est_error).sum::<f64>() / n / n.sqrt();
            IntegralSample {
                t_re: r,
                t_im: 0.0,
                value,
                est_error,
            }
        })
        .collect()
}

/// Greedy forward selection of singular terms.
///
/// Starting from `base`, repeatedly add the candidate `(r, k)` pair that
/// most reduces the held-out residual; stop when the best addition improves
/// it by less than 10%. The candidate exponent set is a heuristic: nothing
/// bounds which rational exponents a given family produces.
pub fn exponent_scan(
    samples: &[IntegralSample],
    base: &ExpansionModel,
    candidates: &[Exponent],
    max_log_power: usize,
) -> ExpansionModel {
    let mut current = base.clone();
    let mut current_res = match fit_b0(samples, &current) {
        Ok(f) => f.residual_rms,
        Err(_) => f64::INFINITY,
    };
    // below this the residual is solver noise, not model misfit
    let value_rms = (samples.iter().map(|s| s.value * s.value).sum::<f64>()
        / samples.len().max(1) as f64)
        .sqrt();
    let floor = 1e-12 * (1.0 + value_rms);
    let mut pool: Vec<(Exponent, usize)> = candidates
        .iter()
        .flat_map(|&r| (0..=max_log_power).map(move |k| (r, k)))
        .filter(|p| !current.pairs.contains(p))
        .collect();
    loop {
        if current_res <= floor {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, pair) in pool.iter().enumerate() {
            let mut trial = current.clone();
            trial.pairs.push(*pair);
            if let Ok(f) = fit_b0(samples, &trial) {
                if best.is_none() || f.residual_rms < best.unwrap().1 {
                    best = Some((i, f.residual_rms));
                }
            }
        }
        match best {
            Some((i, res)) if res < 0.9 * current_res => {
                current.pairs.push(pool.remove(i));
                current_res = res;
            }
            _ => break,
        }
    }
    current
}
