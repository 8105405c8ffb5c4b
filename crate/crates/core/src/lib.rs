//! Symbolic-numeric toolkit for the logarithmic singularity of determinant
//! line bundles along a degenerating family.
//!
//! The crate has two halves that check each other:
//!
//! * **Exact prediction** — truncated formal power series over the rationals
//!   ([`series`]), the rank-2 Chern-class calculus with its projective-bundle
//!   pushforward and E-genus ([`chern`]), and Milnor numbers of isolated
//!   hypersurface singularities ([`milnor`]). These produce the predicted
//!   coefficient of `log|t|^2` as an exact rational number.
//! * **Numerical verification** — model fiber integrals over products of
//!   projective lines and over Milnor fibers ([`integrals`]), and a fitter
//!   that expands sampled functions in the basis
//!   `|t|^{2r} (log|t|)^k` ([`fit`]) to recover the log coefficient.
//!
//! The [`family`] module ties both halves together behind a JSON family
//! specification; the `logsing` binary exposes them as subcommands. See the
//! `examples/` directory for one runnable program per capability.

pub mod chern;
pub mod commands;
pub mod family;
pub mod fit;
pub mod germ;
pub mod integrals;
pub mod milnor;
pub mod rational;
pub mod series;

pub use rational::Rational;
pub use series::TruncatedSeries;
