//! Scalar special functions: the modified Bessel ratio `h_v(x) = I_v(x) / I_{v-1}(x)`,
//! `log I_v(x)` without overflow, and the standard Gaussian tail `Q`.
//!
//! The ratio is never formed as a quotient of raw `I_v` values. Below the
//! large-argument threshold it is evaluated as the continued fraction
//!
//! ```text
//! 1 / h_v(x) = 2v/x + 1 / (2(v+1)/x + 1 / (2(v+2)/x + ...))
//! ```
//!
//! and above it as a quotient of the two Hankel asymptotic series, where the
//! common `e^x / sqrt(2 pi x)` factor cancels exactly.

use crate::error::{domain, Error, Result};

/// Order `v` of a modified Bessel function of the first kind.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(v: f64) -> Result<Self> {
        if !v.is_finite() || v <= 0.0 {
            return Err(domain("BesselOrder::new", format!("order must be positive, got {v}")));
        }
        Ok(Self(v))
    }

    /// `n/2`, the order of the posterior-mean shrinkage factor in dimension `n`.
    pub fn half_dimension(n: usize) -> Self {
        Self(n as f64 / 2.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Lower and upper envelope of `h_v(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioBounds {
    pub lower: f64,
    pub upper: f64,
}

impl RatioBounds {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

const CF_MAX_ITER: usize = 1_000_000;

/// Above this argument the ratio comes from the Hankel series instead of the
/// continued fraction (whose cost grows like `x / 2`).
fn hankel_ratio_threshold(v: f64) -> f64 {
    f64::max(1000.0, 4.0 * v * v)
}

fn check_ratio_args(func: &'static str, v: f64, x: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(domain(func, format!("order must be positive, got {v}")));
    }
    if !(x >= 0.0) {
        return Err(domain(func, format!("argument must be non-negative, got {x}")));
    }
    Ok(())
}

/// `h_v(x) = I_v(x) / I_{v-1}(x)` for `v > 0`, `x >= 0`.
///
/// The result lies in `[0, 1)` (it may round to exactly `1.0` for `x` far
/// beyond `v^2`).
pub fn bessel_ratio(v: f64, x: f64) -> Result<f64> {
    check_ratio_args("bessel_ratio", v, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    // the true ratio is below one; clamp the last-ulp overshoot of rounding
    if x > hankel_ratio_threshold(v) {
        return Ok((hankel_sum(v, x) / hankel_sum(v - 1.0, x)).min(1.0));
    }
    Ok((1.0 / ratio_continued_fraction(v, x)?).min(1.0))
}

/// `h_v(x) / x`, finite at the origin where it equals `1 / (2v)`.
///
/// Uses `h_v(x) = x / (2v + x h_{v+1}(x))`, so no cancellation occurs for
/// small `x`.
pub fn bessel_ratio_over_arg(v: f64, x: f64) -> Result<f64> {
    check_ratio_args("bessel_ratio_over_arg", v, x)?;
    if x == 0.0 {
        return Ok(1.0 / (2.0 * v));
    }
    Ok(1.0 / (2.0 * v + x * bessel_ratio(v + 1.0, x)?))
}

/// Modified Lentz evaluation of `I_{v-1}(x) / I_v(x)`.
fn ratio_continued_fraction(v: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut f = 2.0 * v / x;
    if f == 0.0 {
        f = TINY;
    }
    let mut c = f;
    let mut d = 0.0;
    for k in 1..CF_MAX_ITER {
        let b = 2.0 * (v + k as f64) / x;
        d += b;
        if d == 0.0 {
            d = TINY;
        }
        d = 1.0 / d;
        c = b + 1.0 / c;
        if c == 0.0 {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(f);
        }
    }
    Err(Error::NonConvergence {
        what: "Bessel ratio continued fraction",
        estimate: f64::NAN,
        tolerance: 1e-16,
    })
}

/// `sum_k (-1)^k a_k(v) / x^k`, the bracketed factor of the Hankel expansion
/// `I_v(x) ~ e^x / sqrt(2 pi x) * sum`.
///
/// Summation stops at the smallest term (the expansion is asymptotic) or when
/// it terminates exactly, as it does for half-integer orders.
fn hankel_sum(v: f64, x: f64) -> f64 {
    let mu = 4.0 * v * v;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev_mag = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (8.0 * k as f64 * x);
        let mag = term.abs();
        if mag == 0.0 || mag > prev_mag {
            break;
        }
        sum += term;
        if mag < 1e-17 * sum.abs() {
            break;
        }
        prev_mag = mag;
    }
    sum
}

/// The Segura/Baricz envelope of `h_v(x)`:
///
/// ```text
/// x / (v + sqrt(v^2 + x^2))  <=  h_v(x)  <=  x / ((2v-1)/2 + sqrt((2v-1)^2/4 + x^2))
/// ```
///
/// The upper bound needs `v > 1/2`.
pub fn bessel_ratio_bounds(v: f64, x: f64) -> Result<RatioBounds> {
    check_ratio_args("bessel_ratio_bounds", v, x)?;
    if v <= 0.5 {
        return Err(domain(
            "bessel_ratio_bounds",
            format!("upper bound requires v > 1/2, got {v}"),
        ));
    }
    let half = (2.0 * v - 1.0) / 2.0;
    Ok(RatioBounds {
        lower: bessel_ratio_lower_bound(v, x)?,
        upper: x / (half + (half * half + x * x).sqrt()),
    })
}

/// Lower bound alone; valid for every `v > 0`.
pub fn bessel_ratio_lower_bound(v: f64, x: f64) -> Result<f64> {
    check_ratio_args("bessel_ratio_lower_bound", v, x)?;
    Ok(x / (v + (v * v + x * x).sqrt()))
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

fn log_bessel_seam(v: f64) -> f64 {
    f64::max(25.0, 10.0 * v)
}

/// `ln(I_v(x) / x^v)` for `v >= -1/2`, `x >= 0`.
///
/// This is the analytic part of `I_v`: it is finite at `x = 0`, where it
/// equals `-v ln 2 - ln Gamma(v + 1)`.
pub fn log_bessel_i_normalized(v: f64, x: f64) -> Result<f64> {
    check_log_args("log_bessel_i_normalized", v, x)?;
    if x < log_bessel_seam(v) {
        Ok(log_series_normalized(v, x))
    } else {
        Ok(log_hankel(v, x) - v * x.ln())
    }
}

/// `ln I_v(x)` for `v >= -1/2`, `x >= 0`; finite for `x` up to `1e8` and beyond.
///
/// At `x = 0` this is `0` for `v = 0`, `-inf` for `v > 0` and `+inf` for `v < 0`.
pub fn log_bessel_i_scaled(v: f64, x: f64) -> Result<f64> {
    check_log_args("log_bessel_i_scaled", v, x)?;
    if x == 0.0 {
        return Ok(if v == 0.0 {
            0.0
        } else if v > 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
    }
    if x < log_bessel_seam(v) {
        Ok(log_series_normalized(v, x) + v * x.ln())
    } else {
        Ok(log_hankel(v, x))
    }
}

fn check_log_args(func: &'static str, v: f64, x: f64) -> Result<()> {
    if !(v >= -0.5) || !v.is_finite() {
        return Err(domain(func, format!("order must be >= -1/2, got {v}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(
            func,
            format!("argument must be finite and non-negative, got {x}"),
        ));
    }
    Ok(())
}

/// `ln(I_v(x) / x^v)` from the power series
/// `I_v(x) = (x/2)^v sum_k (x^2/4)^k / (k! Gamma(v + k + 1))`.
fn log_series_normalized(v: f64, x: f64) -> f64 {
    const RESCALE: f64 = 1e250;
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut log_shift = 0.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * (v + k));
        sum += term;
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            log_shift += RESCALE.ln();
        }
        // terms grow until k ~ x/2, then decay geometrically
        if term < 1e-17 * sum && k > 0.5 * x {
            break;
        }
        k += 1.0;
    }
    -v * std::f64::consts::LN_2 - ln_gamma(v + 1.0) + sum.ln() + log_shift
}

fn log_hankel(v: f64, x: f64) -> f64 {
    x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + hankel_sum(v, x).ln()
}

/// Standard Gaussian tail `Q(x) = P(N(0,1) > x)`.
pub fn gaussian_tail_q(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn gaussian_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}
