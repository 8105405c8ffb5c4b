//! On-disk formats: the family specification consumed by the CLI and the
//! report it emits. Both are plain JSON; exact rationals travel as "p/q"
//! strings so nothing is lost to floating point.

use crate::chern::CharNumbers;
use crate::germ::{GermError, MonomialRepr, PolynomialGerm};
use crate::integrals::{BumpSpec, SampleGrid};
use crate::rational::{parse_frac, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("germs[{index}] ({label}): {msg}")]
    Germ {
        index: usize,
        label: String,
        msg: String,
    },
    #[error("{field}: {msg}")]
    Invalid { field: String, msg: String },
}

/// One germ of the projection near a singular fiber point. Exactly one of
/// `poly` (surface syntax, `z0^3 + z1^3`) or `monomials` (explicit
/// exponent/coefficient pairs) must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GermSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomials: Option<Vec<MonomialRepr>>,
}

impl GermSpec {
    pub fn from_poly(label: &str, poly: &str) -> Self {
        GermSpec {
            label: label.to_string(),
            poly: Some(poly.to_string()),
            monomials: None,
        }
    }

    pub fn resolve(&self, nvars: usize) -> Result<PolynomialGerm, GermError> {
        match (&self.poly, &self.monomials) {
            (Some(p), None) => PolynomialGerm::parse(p, nvars),
            (None, Some(m)) => PolynomialGerm::from_monomial_reprs(nvars, m),
            _ => Err(GermError::Parse {
                pos: 0,
                msg: "germ needs exactly one of `poly` or `monomials`".to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyMode {
    /// Closed-form vs quadrature for a monomial family; fitted log
    /// coefficient should vanish.
    Monomial,
    /// Radial quadrature of the Gauss-norm density near a node; fitted log
    /// coefficient should match the Milnor sum.
    GaussNorm,
    /// Monte-Carlo test-form integral; fitted log coefficient should vanish
    /// for a smooth family.
    Psi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySpec {
    pub mode: VerifyMode,
    #[serde(default)]
    pub grid: SampleGrid,
    /// Test form for psi mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<BumpSpec>,
    /// Exponent vector for monomial mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomial_exponents: Option<Vec<u32>>,
    /// Ball radius for gauss-norm mode (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    /// Monte-Carlo sample count per grid point for psi mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

/// Wire form of the characteristic-number table: one entry per monomial
/// `Td_a(T) c2^b c1(xi)^c` with `a + 2b + c = dimension`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharNumbersSpec {
    pub dimension: usize,
    pub numbers: Vec<CharNumberEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharNumberEntry {
    pub degrees: [usize; 3],
    pub value: String,
}

impl CharNumbersSpec {
    pub fn resolve(&self) -> Result<CharNumbers, FamilyError> {
        let mut numbers = BTreeMap::new();
        for e in &self.numbers {
            let v: Rational = parse_frac(&e.value).ok_or_else(|| FamilyError::Invalid {
                field: "char_numbers.numbers".to_string(),
                msg: format!("bad rational {:?}", e.value),
            })?;
            numbers.insert((e.degrees[0], e.degrees[1], e.degrees[2]), v);
        }
        Ok(CharNumbers {
            dimension: self.dimension,
            numbers,
        })
    }

    pub fn from_char_numbers(c: &CharNumbers) -> Self {
        CharNumbersSpec {
            dimension: c.dimension,
            numbers: c
                .numbers
                .iter()
                .map(|(&(a, b, cc), v)| CharNumberEntry {
                    degrees: [a, b, cc],
                    value: v.to_string(),
                })
                .collect(),
        }
    }
}

fn default_seed() -> u64 {
    0
}

/// Input data of a degenerating family: critical germs of the projection,
/// fiber dimension, bundle rank, and optional verification instructions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub germs: Vec<GermSpec>,
    pub fiber_dimension: u32,
    pub bundle_rank: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char_numbers: Option<CharNumbersSpec>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySpec>,
}

impl FamilySpec {
    /// Validate and resolve the germs; variable count must be
    /// `fiber_dimension + 1` (germs live on the total space).
    pub fn resolve_germs(&self) -> Result<Vec<(String, PolynomialGerm)>, FamilyError> {
        if self.fiber_dimension < 1 {
            return Err(FamilyError::Invalid {
                field: "fiber_dimension".to_string(),
                msg: "must be >= 1".to_string(),
            });
        }
        if self.bundle_rank < 1 {
            return Err(FamilyError::Invalid {
                field: "bundle_rank".to_string(),
                msg: "must be >= 1".to_string(),
            });
        }
        let nvars = self.fiber_dimension as usize + 1;
        let mut out = Vec::with_capacity(self.germs.len());
        for (index, g) in self.germs.iter().enumerate() {
            let germ = g.resolve(nvars).map_err(|e| FamilyError::Germ {
                index,
                label: g.label.clone(),
                msg: e.to_string(),
            })?;
            out.push((g.label.clone(), germ));
        }
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MilnorEntry {
    pub label: String,
    pub mu: u64,
    pub degree_bound_used: u32,
}

/// Numerical diagnostics of a verification run. Runtimes are deliberately
/// absent: reports must be byte-identical across runs with the same seed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<VerifyMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<SampleGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_estimate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_rms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_sample_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

/// Comparison of the exact prediction with the fitted measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Exact predicted log coefficient, as "p/q".
    pub predicted_coeff: String,
    /// Intersection-theoretic value when characteristic numbers were given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char_number_coeff: Option<String>,
    /// Whether the two exact routes agree (only when both were computed).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<bool>,
    pub milnor_table: Vec<MilnorEntry>,
    pub milnor_sum: u64,
    /// Predicted value of the quantity the verification mode actually fits
    /// (for gauss-norm the log slope is the Milnor sum; for monomial and
    /// psi modes it is zero).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify_target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fitted_coeff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    pub diagnostics: Diagnostics,
}

pub const RELATIVE_ERROR_EPS: f64 = 1e-12;

pub fn relative_error(predicted: f64, fitted: f64) -> f64 {
    (fitted - predicted).abs() / predicted.abs().max(RELATIVE_ERROR_EPS)
}
