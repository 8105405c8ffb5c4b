//! Model fiber integrals over products of projective lines and over Milnor
//! fibers.
//!
//! Three evaluation routes live here:
//!
//! * [`monomial_f`] — the integral of `log|z^ν - t|^2` against the product
//!   Fubini-Study form, evaluated by peeling the last nonzero exponent into
//!   the closed-form projective-line integral [`base_p1_integral`] and
//!   integrating the remaining factors with nested adaptive quadrature.
//! * [`monomial_f_direct`] — the same integral without peeling: the angular
//!   direction is removed by the exact circle average
//!   `∫ log|a e^{iφ} - b|^2 dφ/2π = 2 log max(|a|, |b|)` and all radial
//!   factors are integrated numerically. Used as an independent check.
//! * [`psi_integral`] — `∫ log|F(z) - t|^2 χ(z)` for a general polynomial
//!   by seeded Monte Carlo with a median-of-means error estimate.
//!
//! [`gauss_norm_integral`] evaluates the Milnor-fiber integral of
//! `log‖dπ‖^2 (dd^c log‖dπ‖^2)^n` for the radially reducible germ families
//! (`z0 z1` and `z0^2 + z1^2`), whose coefficient of `log|t|^2` is the
//! Milnor number.

use crate::germ::PolynomialGerm;
use crate::rational::to_f64;
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IntegralError {
    #[error("base projective-line integral undefined for A = B = 0")]
    BothZero,
    #[error("quadrature failed to reach tolerance {tolerance:e} (error estimate {estimate:e})")]
    QuadratureFailure { estimate: f64, tolerance: f64 },
    #[error("germ is outside the radially reducible families (z0*z1 or a sum of equal squares in two variables)")]
    UnsupportedGerm,
    #[error("cutoff radius too small for |t| = {t_abs:e}")]
    CutoffTooSmall { t_abs: f64 },
    #[error("bump support [inner, outer] is not 0 < inner < outer")]
    NonCompactSupport,
}

/// Exponent vector of the monomial `F(z) = z_1^{ν_1} ... z_n^{ν_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialExponents {
    pub nu: Vec<u32>,
}

/// Geometric radius grid with equally spaced angles per radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub radii: usize,
    pub angles: usize,
}

impl Default for SampleGrid {
    fn default() -> Self {
        SampleGrid {
            r_min: 1e-6,
            r_max: 1e-1,
            radii: 40,
            angles: 8,
        }
    }
}

impl SampleGrid {
    pub fn radii_values(&self) -> Vec<f64> {
        assert!(self.radii >= 1);
        assert!(self.r_min > 0.0 && self.r_min <= self.r_max && self.r_max < 1.0);
        if self.radii == 1 {
            return vec![self.r_min];
        }
        let log_min = self.r_min.ln();
        let step = (self.r_max.ln() - log_min) / (self.radii - 1) as f64;
        (0..self.radii)
            .map(|i| (log_min + step * i as f64).exp())
            .collect()
    }

    /// All grid points, radius-major, angles counterclockwise from 0.
    pub fn t_values(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.radii * self.angles);
        for r in self.radii_values() {
            for j in 0..self.angles.max(1) {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / self.angles.max(1) as f64;
                out.push(Complex64::from_polar(r, theta));
            }
        }
        out
    }
}

/// One evaluated sample of a fiber integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralSample {
    pub t_re: f64,
    pub t_im: f64,
    pub value: f64,
    pub est_error: f64,
}

impl IntegralSample {
    pub fn t(&self) -> Complex64 {
        Complex64::new(self.t_re, self.t_im)
    }

    pub fn radius(&self) -> f64 {
        self.t().norm()
    }
}

/// Deterministic parallel evaluation over a grid: each point is independent
/// and the output order is the grid order.
pub fn map_grid<F>(grid: &SampleGrid, eval: F) -> Result<Vec<IntegralSample>, IntegralError>
where
    F: Fn(usize, Complex64) -> Result<IntegralSample, IntegralError> + Sync,
{
    grid.t_values()
        .into_par_iter()
        .enumerate()
        .map(|(i, t)| eval(i, t))
        .collect()
}

// ---------------------------------------------------------------------------
// adaptive Gauss-Kronrod quadrature
// ---------------------------------------------------------------------------

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (fl, fr) = if x == 0.0 {
            let v = f(center);
            (v, 0.0)
        } else {
            (f(center - half * x), f(center + half * x))
        };
        let sum = if x == 0.0 { fl } else { fl + fr };
        kronrod += wk * sum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * sum;
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half)
}

/// Adaptive bisection quadrature of `f` on `[a, b]` to absolute tolerance.
pub fn adaptive_quadrature(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64), IntegralError> {
    const MAX_INTERVALS: usize = 40_000;
    let (v, e) = gk15(&mut f, a, b);
    // worklist ordered by error; simple vec with max extraction is enough
    let mut intervals = vec![(a, b, v, e)];
    let mut total_err: f64 = e;
    let mut total_val = v;
    while total_err > tol && intervals.len() < MAX_INTERVALS {
        // split the worst interval
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (ia, ib, iv, ie) = intervals.swap_remove(worst);
        let mid = 0.5 * (ia + ib);
        if mid <= ia || mid >= ib {
            // interval at floating-point resolution; keep its estimate
            intervals.push((ia, ib, iv, 0.0));
            total_err -= ie;
            continue;
        }
        let (v1, e1) = gk15(&mut f, ia, mid);
        let (v2, e2) = gk15(&mut f, mid, ib);
        total_val += v1 + v2 - iv;
        total_err += e1 + e2 - ie;
        intervals.push((ia, mid, v1, e1));
        intervals.push((mid, ib, v2, e2));
    }
    if total_err > tol {
        return Err(IntegralError::QuadratureFailure {
            estimate: total_err,
            tolerance: tol,
        });
    }
    Ok((total_val, total_err))
}

// ---------------------------------------------------------------------------
// monomial integrals on products of projective lines
// ---------------------------------------------------------------------------

/// Closed form `∫_{P^1} log|A z^ν + B|^2 ω = log(|A|^{2/ν} + |B|^{2/ν})`.
pub fn base_p1_integral(a: Complex64, b: Complex64, nu: u32) -> Result<f64, IntegralError> {
    assert!(nu >= 1);
    let an = a.norm();
    let bn = b.norm();
    if an == 0.0 && bn == 0.0 {
        return Err(IntegralError::BothZero);
    }
    Ok((an.powf(2.0 / nu as f64) + bn.powf(2.0 / nu as f64)).ln())
}

/// Map `u in (0, 1)` to the Fubini-Study radial coordinate: `u = ρ²/(1+ρ²)`
/// turns `∫_{P^1} h(|z|) ω` into `∫_0^1 h(ρ(u)) du`.
fn fs_radius(u: f64) -> f64 {
    (u / (1.0 - u)).sqrt()
}

/// Recursively integrate `g(ρ_1, .., ρ_d)` over `d` Fubini-Study radial
/// factors. Tolerances tighten toward the inner levels so the nested error
/// stays below the outer request.
fn nested_fs_integral(
    dims: usize,
    tol: f64,
    g: &(dyn Fn(&[f64]) -> f64 + Sync),
) -> Result<f64, IntegralError> {
    fn go(
        level: usize,
        dims: usize,
        tol: f64,
        point: &mut Vec<f64>,
        g: &(dyn Fn(&[f64]) -> f64 + Sync),
    ) -> Result<f64, IntegralError> {
        if level == dims {
            return Ok(g(point));
        }
        let inner_tol = tol * 0.1f64.powi((dims - level) as i32 - 1);
        let mut failure: Option<IntegralError> = None;
        let result = adaptive_quadrature(
            |u| {
                point.push(fs_radius(u));
                let v = go(level + 1, dims, inner_tol, point, g);
                point.pop();
                match v {
                    Ok(x) => x,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            0.0,
            1.0,
            tol,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        result.map(|(v, _)| v)
    }
    let mut point = Vec::with_capacity(dims);
    go(0, dims, tol, &mut point, g)
}

/// `f(t) = ∫_{(P^1)^n} log|z^ν - t|^2 ω_1 ∧ .. ∧ ω_n` by the peel
/// recursion: the last nonzero exponent is integrated in closed form,
/// the remaining factors by nested adaptive quadrature. Only `|t|`
/// enters, so the value is S¹-invariant by construction.
pub fn monomial_f(t: Complex64, nu: &MonomialExponents, tol: f64) -> Result<f64, IntegralError> {
    let nonzero: Vec<u32> = nu.nu.iter().copied().filter(|&v| v > 0).collect();
    if nonzero.is_empty() {
        // F identically 1
        return Ok(2.0 * (Complex64::new(1.0, 0.0) - t).norm().max(f64::MIN_POSITIVE).ln());
    }
    let (&peel, rest) = nonzero.split_last().unwrap();
    let t_abs = t.norm();
    let t_pow = t_abs.powf(2.0 / peel as f64);
    // ∫ log|A z^ν + B|^2 ω = ν log(|A|^{2/ν} + |B|^{2/ν}): the circle
    // average of the integrand is 2 log max(|A| ρ^ν, |B|), and the ν-fold
    // covering of the argument leaves the radial profile unchanged
    if rest.is_empty() {
        return Ok(peel as f64 * (1.0 + t_pow).ln());
    }
    let rest = rest.to_vec();
    let g = move |rho: &[f64]| -> f64 {
        let mut prod = 1.0f64;
        for (r, &v) in rho.iter().zip(&rest) {
            prod *= r.powi(v as i32);
        }
        peel as f64 * (prod.powf(2.0 / peel as f64) + t_pow).ln()
    };
    nested_fs_integral(nonzero.len() - 1, tol, &g)
}

/// `u log u + (1-u) log(1-u)`, the antiderivative of
/// `log u - log(1-u) = 2 log ρ(u)`; vanishes at both endpoints.
fn entropy(u: f64) -> f64 {
    let a = if u > 0.0 { u * u.ln() } else { 0.0 };
    let b = if u < 1.0 { (1.0 - u) * (1.0 - u).ln() } else { 0.0 };
    a + b
}

/// Innermost radial integral `∫_0^1 2 log max(c ρ(u)^ν, τ) du`, split at
/// the kink `c ρ^ν = τ`: constant `2 log τ` below it, and above it the
/// elementary `2(1-u*) log c + ν (entropy-difference)` since
/// `∫ log ρ(u) du` integrates in closed form.
fn inner_radial(c: f64, nu: u32, tau: f64) -> f64 {
    let u_star = if tau == 0.0 {
        0.0
    } else {
        let s_star = (tau / c).powf(2.0 / nu as f64);
        (s_star / (1.0 + s_star)).min(1.0)
    };
    let flat = if u_star > 0.0 {
        u_star * 2.0 * tau.ln()
    } else {
        0.0
    };
    flat + 2.0 * (1.0 - u_star) * c.ln() - nu as f64 * entropy(u_star)
}

/// Independent evaluation of the same integral with no peeling: the circle
/// average of `log|w - t|^2` over `arg w` is `2 log max(|w|, |t|)`, leaving
/// a full `n`-fold radial integral of `2 log max(Π ρ_i^{ν_i}, |t|)`.
///
/// For one variable the radial integral is done by kink-split adaptive
/// quadrature; with more variables the innermost level collapses to the
/// elementary [`inner_radial`] and the remaining `n-1` dimensions are
/// integrated by nested adaptive quadrature.
pub fn monomial_f_direct(
    t: Complex64,
    nu: &MonomialExponents,
    tol: f64,
) -> Result<f64, IntegralError> {
    let nonzero: Vec<u32> = nu.nu.iter().copied().filter(|&v| v > 0).collect();
    let t_abs = t.norm();
    if nonzero.is_empty() {
        return Ok(2.0 * (Complex64::new(1.0, 0.0) - t).norm().max(f64::MIN_POSITIVE).ln());
    }
    let (&last, outer) = nonzero.split_last().unwrap();
    if outer.is_empty() {
        // fully numerical path: split at the kink, adaptive above it
        let u_star = if t_abs == 0.0 {
            0.0
        } else {
            let s_star = t_abs.powf(2.0 / last as f64);
            (s_star / (1.0 + s_star)).min(1.0)
        };
        let flat = if u_star > 0.0 {
            u_star * 2.0 * t_abs.ln()
        } else {
            0.0
        };
        let (smooth, _) = adaptive_quadrature(
            |u| {
                let r = fs_radius(u);
                2.0 * r.powi(last as i32).max(t_abs).max(f64::MIN_POSITIVE).ln()
            },
            u_star,
            1.0,
            tol,
        )?;
        return Ok(flat + smooth);
    }
    let outer = outer.to_vec();
    let g = move |rho: &[f64]| -> f64 {
        let mut prod = 1.0f64;
        for (r, &v) in rho.iter().zip(&outer) {
            prod *= r.powi(v as i32);
        }
        inner_radial(prod, last, t_abs)
    };
    nested_fs_integral(nonzero.len() - 1, tol, &g)
}

// ---------------------------------------------------------------------------
// psi integrals for general polynomials
// ---------------------------------------------------------------------------

/// Test-form specification for [`psi_integral`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum BumpSpec {
    /// Product of radial bumps, 1 on `|z_i| <= inner`, 0 on `|z_i| >= outer`
    /// with a quintic spline transition, times the Euclidean volume form.
    RadialBump { inner: f64, outer: f64 },
    /// Product of Fubini-Study forms; total mass exactly 1, support the
    /// whole of `(P^1)^n`.
    FubiniStudy,
}

impl BumpSpec {
    fn validate(&self) -> Result<(), IntegralError> {
        match self {
            BumpSpec::RadialBump { inner, outer } => {
                if !(inner.is_finite() && outer.is_finite() && 0.0 < *inner && inner < outer) {
                    Err(IntegralError::NonCompactSupport)
                } else {
                    Ok(())
                }
            }
            BumpSpec::FubiniStudy => Ok(()),
        }
    }

    /// Total mass of the form for `nvars` factors.
    pub fn mass(&self, nvars: usize) -> f64 {
        match self {
            BumpSpec::RadialBump { inner, outer } => {
                // ∫_0^∞ bump(ρ) 2πρ dρ per factor, by quadrature
                let per_factor = adaptive_quadrature(
                    |rho| bump_profile(rho, *inner, *outer) * 2.0 * std::f64::consts::PI * rho,
                    0.0,
                    *outer,
                    1e-12,
                )
                .map(|(v, _)| v)
                .unwrap_or(f64::NAN);
                per_factor.powi(nvars as i32)
            }
            BumpSpec::FubiniStudy => 1.0,
        }
    }
}

/// Quintic smoothstep bump: 1 on `[0, inner]`, 0 beyond `outer`.
fn bump_profile(rho: f64, inner: f64, outer: f64) -> f64 {
    if rho <= inner {
        1.0
    } else if rho >= outer {
        0.0
    } else {
        let x = (rho - inner) / (outer - inner);
        1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
    }
}

/// Per-point seed derived from a base seed by counter hashing
/// (splitmix64 step), so parallel evaluation stays reproducible.
pub fn derive_seed(base: u64, counter: u64) -> u64 {
    let mut z = base ^ counter.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `ψ(t) = ∫ log|F(z) - t|^2 χ(z)` by seeded Monte Carlo.
///
/// The logarithmic singularity along `F = t` is integrable; the error
/// estimate is median-of-means over 16 chunks, which is robust against the
/// heavy tail the singularity induces.
pub fn psi_integral(
    f: &PolynomialGerm,
    chi: &BumpSpec,
    t: Complex64,
    samples: usize,
    seed: u64,
) -> Result<IntegralSample, IntegralError> {
    chi.validate()?;
    let nvars = f.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const CHUNKS: usize = 16;
    let chunk_size = (samples / CHUNKS).max(1);
    let mut chunk_means = Vec::with_capacity(CHUNKS);
    let mut z = vec![(0.0f64, 0.0f64); nvars];
    for _ in 0..CHUNKS {
        let mut acc = 0.0f64;
        for _ in 0..chunk_size {
            let weight = match chi {
                BumpSpec::RadialBump { inner, outer } => {
                    // uniform on the polydisc of radius `outer`, weighted by
                    // the bump; the disc area enters as the volume factor
                    let mut w = 1.0f64;
                    for zi in z.iter_mut() {
                        let rho = outer * rng.gen::<f64>().sqrt();
                        let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
                        *zi = (rho * theta.cos(), rho * theta.sin());
                        w *= bump_profile(rho, *inner, *outer)
                            * std::f64::consts::PI
                            * outer
                            * outer;
                    }
                    w
                }
                BumpSpec::FubiniStudy => {
                    for zi in z.iter_mut() {
                        let u: f64 = rng.gen();
                        let rho = fs_radius(u.clamp(1e-16, 1.0 - 1e-16));
                        let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
                        *zi = (rho * theta.cos(), rho * theta.sin());
                    }
                    1.0
                }
            };
            if weight == 0.0 {
                continue;
            }
            let fv = f.eval_complex(&z);
            let dist2 = (fv.0 - t.re) * (fv.0 - t.re) + (fv.1 - t.im) * (fv.1 - t.im);
            acc += weight * dist2.max(f64::MIN_POSITIVE).ln();
        }
        chunk_means.push(acc / chunk_size as f64);
    }
    let mut sorted = chunk_means.clone();
    sorted.sort_by(f64::total_cmp);
    let value = 0.5 * (sorted[CHUNKS / 2 - 1] + sorted[CHUNKS / 2]);
    let mean: f64 = chunk_means.iter().sum::<f64>() / CHUNKS as f64;
    let var: f64 =
        chunk_means.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / (CHUNKS - 1) as f64;
    let est_error = (var / CHUNKS as f64).sqrt();
    Ok(IntegralSample {
        t_re: t.re,
        t_im: t.im,
        value,
        est_error,
    })
}

// ---------------------------------------------------------------------------
// Gauss-norm integral over the Milnor fiber
// ---------------------------------------------------------------------------

/// Which radially reducible normal form a two-variable germ matches.
enum NodeForm {
    /// `c * z0 z1`
    Product { coef_abs: f64 },
    /// `a (z0^2 + z1^2)`
    SumOfSquares { coef_abs: f64 },
}

fn classify_node_germ(germ: &PolynomialGerm) -> Result<NodeForm, IntegralError> {
    if germ.nvars() != 2 {
        return Err(IntegralError::UnsupportedGerm);
    }
    let terms = germ.terms();
    match terms {
        [(e, c)] if e == &[1, 1] => Ok(NodeForm::Product {
            coef_abs: to_f64(c).abs(),
        }),
        [(e1, c1), (e2, c2)] if e1 == &[0, 2] && e2 == &[2, 0] && c1 == c2 => {
            Ok(NodeForm::SumOfSquares {
                coef_abs: to_f64(c1).abs(),
            })
        }
        _ => Err(IntegralError::UnsupportedGerm),
    }
}

/// `L(t) = ∫_{X_t ∩ B(cutoff)} log‖dπ‖^2 (dd^c log‖dπ‖^2)` for a node-type
/// germ in two variables.
///
/// On the fiber `z0 z1 = t/c` with `s = |z0|^2` and `τ = |t/c|`,
/// `‖dπ‖^2 = |c|^2 (s + τ^2/s) = 2 |c|^2 τ cosh v` in `v = log(s/τ)`, and
/// the fiberwise form collapses (after the circle integral) to
/// `sech^2 v dv`. The sum-of-squares germ reduces to the same shape through
/// `w = z0 ± i z1`. As `t -> 0` the integral behaves as
/// `log|t|^2 + O(1)`, with the Milnor number 1 as the log slope.
pub fn gauss_norm_integral(
    t: Complex64,
    germ: &PolynomialGerm,
    cutoff_radius: f64,
) -> Result<f64, IntegralError> {
    let t_abs = t.norm();
    if t_abs == 0.0 {
        return Err(IntegralError::CutoffTooSmall { t_abs });
    }
    let (tau, norm_const, cosh_vmax) = match classify_node_germ(germ)? {
        NodeForm::Product { coef_abs } => {
            let tau = t_abs / coef_abs;
            // |z0|^2 + |z1|^2 = s + τ^2/s <= cutoff^2
            (tau, 2.0 * coef_abs.ln(), cutoff_radius * cutoff_radius / (2.0 * tau))
        }
        NodeForm::SumOfSquares { coef_abs } => {
            let tau = t_abs / coef_abs;
            // ‖dπ‖^2 = 2 |a|^2 (s + τ^2/s); |z|^2 = (s + τ^2/s)/2 <= cutoff^2
            (
                tau,
                (2.0 * coef_abs * coef_abs).ln(),
                cutoff_radius * cutoff_radius / tau,
            )
        }
    };
    if cosh_vmax <= 1.0 {
        return Err(IntegralError::CutoffTooSmall { t_abs });
    }
    let vmax = cosh_vmax.acosh();
    let offset = norm_const + (2.0 * tau).ln();
    let (value, _err) = adaptive_quadrature(
        |v| {
            let sech = 1.0 / v.cosh();
            (offset + v.cosh().ln()) * sech * sech
        },
        -vmax,
        vmax,
        1e-10,
    )?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quadrature_polynomial_exact() {
        let (v, _) = adaptive_quadrature(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_log_singularity() {
        // ∫_0^1 ln x dx = -1
        let (v, _) = adaptive_quadrature(|x| x.ln(), 0.0, 1.0, 1e-10).unwrap();
        assert_abs_diff_eq!(v, -1.0, epsilon = 1e-9);
    }

    #[test]
    fn base_p1_cases() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_abs_diff_eq!(base_p1_integral(one, zero, 1).unwrap(), 0.0);
        let t = Complex64::from_polar(1.0, 0.7);
        assert_abs_diff_eq!(
            base_p1_integral(one, -t, 1).unwrap(),
            2.0f64.ln(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(base_p1_integral(zero, one, 2).unwrap(), 0.0);
        assert_eq!(
            base_p1_integral(zero, zero, 1),
            Err(IntegralError::BothZero)
        );
    }

    #[test]
    fn circle_average_identity() {
        // ∫ log|a e^{iφ} - b|^2 dφ/2π = 2 log max(a, b); numerical check of
        // the reduction used by monomial_f_direct.
        for (a, b) in [(0.3f64, 0.8f64), (1.4, 0.2), (0.9, 0.95)] {
            let (v, _) = adaptive_quadrature(
                |phi| {
                    let d2 = a * a + b * b - 2.0 * a * b * phi.cos();
                    d2.max(f64::MIN_POSITIVE).ln()
                },
                0.0,
                2.0 * std::f64::consts::PI,
                1e-10,
            )
            .unwrap();
            assert_abs_diff_eq!(
                v / (2.0 * std::f64::consts::PI),
                2.0 * a.max(b).ln(),
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn monomial_f_one_variable_closed_forms() {
        let nu1 = MonomialExponents { nu: vec![1] };
        let nu2 = MonomialExponents { nu: vec![2] };
        for t_abs in [1e-3, 0.05, 0.3, 0.9] {
            let t = Complex64::from_polar(t_abs, 1.1);
            assert_abs_diff_eq!(
                monomial_f(t, &nu1, 1e-10).unwrap(),
                (1.0 + t_abs * t_abs).ln(),
                epsilon = 1e-10
            );
            // the double covering z -> z^2 doubles the value
            assert_abs_diff_eq!(
                monomial_f(t, &nu2, 1e-10).unwrap(),
                2.0 * (1.0 + t_abs).ln(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn monomial_f_s1_invariant() {
        let nu = MonomialExponents { nu: vec![1, 2] };
        let r = 0.02;
        let base = monomial_f(Complex64::new(r, 0.0), &nu, 1e-10).unwrap();
        for j in 1..8 {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / 8.0;
            let v = monomial_f(Complex64::from_polar(r, theta), &nu, 1e-10).unwrap();
            assert!((v - base).abs() < 1e-10);
        }
    }

    #[test]
    fn peel_vs_direct_two_variables() {
        let nu = MonomialExponents { nu: vec![1, 1] };
        for t_abs in [1e-2, 0.2, 0.5] {
            let t = Complex64::new(t_abs, 0.0);
            let peel = monomial_f(t, &nu, 1e-10).unwrap();
            let direct = monomial_f_direct(t, &nu, 1e-9).unwrap();
            assert_abs_diff_eq!(peel, direct, epsilon = 1e-8);
        }
    }

    #[test]
    fn monomial_f_two_variable_closed_form() {
        // for ν = (1,1): f(r) = -r^2 log(r^2) / (1 - r^2), by direct
        // evaluation of ∫_0^1 log(u/(1-u) + r^2) du
        let nu = MonomialExponents { nu: vec![1, 1] };
        for r in [1e-3f64, 1e-2, 0.1, 0.5] {
            let expect = -r * r * (r * r).ln() / (1.0 - r * r);
            let got = monomial_f(Complex64::new(r, 0.0), &nu, 1e-11).unwrap();
            assert_abs_diff_eq!(got, expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn radial_ode_relation() {
        // (r d/dr)^2 f = g with g from differentiating the closed form:
        // ν=(1): g = 4 r^2/(1+r^2)^2 ; ν=(2): g = 2 r/(1+r)^2
        let h = 1e-3f64;
        let cases: Vec<(MonomialExponents, fn(f64) -> f64)> = vec![
            (MonomialExponents { nu: vec![1] }, |r| {
                4.0 * r * r / ((1.0 + r * r) * (1.0 + r * r))
            }),
            (MonomialExponents { nu: vec![2] }, |r| {
                2.0 * r / ((1.0 + r) * (1.0 + r))
            }),
        ];
        for (nu, g) in cases {
            for r in [1e-3, 1e-2, 1e-1] {
                let f = |rr: f64| monomial_f(Complex64::new(rr, 0.0), &nu, 1e-12).unwrap();
                let second = (f(r * h.exp()) - 2.0 * f(r) + f(r * (-h).exp())) / (h * h);
                assert_abs_diff_eq!(second, g(r), epsilon = 1e-4);
            }
        }
    }

    #[test]
    fn psi_continuity_in_one_variable() {
        let f = PolynomialGerm::parse("z0", 1).unwrap();
        let chi = BumpSpec::RadialBump {
            inner: 0.5,
            outer: 1.0,
        };
        let at = |t: Complex64| psi_integral(&f, &chi, t, 40_000, 7).unwrap().value;
        let v0 = at(Complex64::new(0.0, 0.0));
        let v1 = at(Complex64::new(1e-3, 0.0));
        let v2 = at(Complex64::new(1e-5, 0.0));
        assert!((v1 - v0).abs() < 0.05);
        assert!((v2 - v0).abs() < 0.05);
    }

    #[test]
    fn psi_deterministic_per_seed() {
        let f = PolynomialGerm::parse("z0*z1", 2).unwrap();
        let t = Complex64::new(0.01, 0.0);
        let a = psi_integral(&f, &BumpSpec::FubiniStudy, t, 10_000, 99).unwrap();
        let b = psi_integral(&f, &BumpSpec::FubiniStudy, t, 10_000, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn psi_rejects_bad_bump() {
        let f = PolynomialGerm::parse("z0", 1).unwrap();
        let bad = BumpSpec::RadialBump {
            inner: 1.0,
            outer: 0.5,
        };
        assert_eq!(
            psi_integral(&f, &bad, Complex64::new(0.0, 0.0), 10, 1),
            Err(IntegralError::NonCompactSupport)
        );
    }

    #[test]
    fn gauss_norm_log_slope_is_one() {
        let node = PolynomialGerm::parse("z0*z1", 2).unwrap();
        // slope of L against log|t|^2 over two decades
        let l = |r: f64| gauss_norm_integral(Complex64::new(r, 0.0), &node, 1.0).unwrap();
        let (r1, r2) = (1e-3, 1e-5);
        let slope = (l(r1) - l(r2)) / ((r1 * r1).ln() - (r2 * r2).ln());
        assert_abs_diff_eq!(slope, 1.0, epsilon = 1e-3);
        // and L/log|t|^2 -> 1 (the O(1) constant decays like 1/log|t|)
        assert_abs_diff_eq!(l(1e-80) / (1e-80f64 * 1e-80).ln(), 1.0, epsilon = 1e-2);
    }

    #[test]
    fn gauss_norm_sum_of_squares_matches_node() {
        let squares = PolynomialGerm::parse("z0^2 + z1^2", 2).unwrap();
        let l = |r: f64| gauss_norm_integral(Complex64::new(r, 0.0), &squares, 1.0).unwrap();
        let (r1, r2) = (1e-3, 1e-5);
        let slope = (l(r1) - l(r2)) / ((r1 * r1).ln() - (r2 * r2).ln());
        assert_abs_diff_eq!(slope, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn gauss_norm_cutoff_shift_is_bounded() {
        let node = PolynomialGerm::parse("z0*z1", 2).unwrap();
        let t1 = Complex64::new(1e-4, 0.0);
        let a = gauss_norm_integral(t1, &node, 1.0).unwrap();
        let b = gauss_norm_integral(t1, &node, 2.0).unwrap();
        assert!((a - b).abs() < 5.0); // O(1) in the cutoff
        // log slope unchanged within 2%
        let slope = |cutoff: f64| {
            let l = |r: f64| gauss_norm_integral(Complex64::new(r, 0.0), &node, cutoff).unwrap();
            (l(1e-3) - l(1e-5)) / ((1e-3f64 * 1e-3).ln() - (1e-5f64 * 1e-5).ln())
        };
        assert!((slope(1.0) - slope(2.0)).abs() < 0.02);
    }

    #[test]
    fn gauss_norm_rejects_general_germ() {
        let cusp = PolynomialGerm::parse("z0^3 + z1^2", 2).unwrap();
        assert_eq!(
            gauss_norm_integral(Complex64::new(0.01, 0.0), &cusp, 1.0),
            Err(IntegralError::UnsupportedGerm)
        );
    }

    #[test]
    fn grid_is_geometric_and_ordered() {
        let grid = SampleGrid {
            r_min: 1e-4,
            r_max: 1e-1,
            radii: 4,
            angles: 2,
        };
        let radii = grid.radii_values();
        assert_abs_diff_eq!(radii[0], 1e-4, epsilon = 1e-16);
        assert_abs_diff_eq!(radii[3], 1e-1, epsilon = 1e-12);
        assert_abs_diff_eq!(radii[1] / radii[0], radii[2] / radii[1], epsilon = 1e-9);
        assert_eq!(grid.t_values().len(), 8);
    }
}
