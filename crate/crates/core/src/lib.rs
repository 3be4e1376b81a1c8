//! Single-sphere capacity thresholds for the amplitude-constrained vector
//! Gaussian channel `Y = X + Z`, `Z ~ N(0, I_n)`, `||X|| <= R`.
//!
//! The uniform law on the sphere `||x|| = R` is capacity achieving exactly
//! when `R <= R̄_n`. This crate computes `R̄_n` by several independent
//! characterizations, the analytic channel quantities behind them (output
//! density, posterior mean, MMSE, mutual information, information density),
//! and the companion MMSE (least-favorable-prior) threshold.
//!
//! Module map:
//!
//! - [`specfun`]: Bessel ratio `h_v`, `ln I_v`, Gaussian tail `Q`.
//! - [`quadrature`]: Gauss–Laguerre rules and adaptive Gauss–Kronrod.
//! - [`expect`]: expectations over (non)central chi-square laws and the
//!   boxcar-smoothed Gaussian law, by quadrature or seeded Monte Carlo.
//! - [`channel`]: closed-form quantities for the sphere input.
//! - [`thresholds`]: root solvers for every threshold.
//! - [`verify`]: the invariant suites driven by `spherecap verify`.

// `!(x > 0.0)` is the NaN-rejecting form; the Kronrod tables are quoted at
// their published precision.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod channel;
pub mod error;
pub mod expect;
pub mod quadrature;
pub mod specfun;
pub mod thresholds;
pub mod verify;

pub use error::{Error, Result};
