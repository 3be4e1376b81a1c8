//! Analytic quantities for the uniform-on-sphere input `X_R` through
//! `Y_gamma = sqrt(gamma) X_R + Z`, `Z ~ N(0, I_n)`.
//!
//! Everything is in nats. Wherever a point `x` with `||x|| = r` is needed it
//! is taken as `r e_1`; all quantities depend on `x` only through `||x||`.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::expect::{ExpectationEngine, NoncentralChiSquare};
use crate::quadrature::integrate_adaptive;
use crate::specfun::{bessel_ratio, bessel_ratio_over_arg, ln_gamma, log_bessel_i_normalized};

/// Dimension `n` and sphere radius `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    n: usize,
    radius: f64,
}

impl ChannelSpec {
    pub fn new(n: usize, radius: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("ChannelSpec::new", "dimension must be at least 1"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(domain(
                "ChannelSpec::new",
                format!("radius must be positive, got {radius}"),
            ));
        }
        Ok(Self { n, radius })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Order `n/2` of the Bessel ratio in the posterior mean.
    pub fn ratio_order(&self) -> f64 {
        0.5 * self.n as f64
    }

    fn with_radius(&self, radius: f64) -> Self {
        Self { radius, ..*self }
    }
}

/// SNR scaling `gamma` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SnrFraction(f64);

impl SnrFraction {
    pub const ZERO: SnrFraction = SnrFraction(0.0);
    pub const ONE: SnrFraction = SnrFraction(1.0);

    pub fn new(gamma: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&gamma) {
            Ok(Self(gamma))
        } else {
            Err(domain(
                "SnrFraction::new",
                format!("gamma must lie in [0, 1], got {gamma}"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Information density sampled on a grid of input norms.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoDensityProfile {
    pub xnorm_grid: Vec<f64>,
    pub values: Vec<f64>,
}

fn check_norm(func: &'static str, r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(domain(func, format!("norm must be finite and non-negative, got {r}")))
    }
}

/// `ln f_Y(y)` at `||y|| = ynorm`, unit SNR.
pub fn log_output_pdf(spec: &ChannelSpec, ynorm: f64) -> Result<f64> {
    check_norm("log_output_pdf", ynorm)?;
    let n = spec.n as f64;
    let r = spec.radius;
    Ok(
        ln_gamma(0.5 * n) - 0.5 * (r * r + ynorm * ynorm) - 0.5 * n * PI.ln() - LN_2
            + log_bessel_i_normalized(0.5 * n - 1.0, ynorm * r)?,
    )
}

/// Output density `f_Y(y)` at `||y|| = ynorm`, unit SNR.
///
/// For SNR `gamma`, evaluate with radius `sqrt(gamma) R`.
pub fn output_pdf(spec: &ChannelSpec, ynorm: f64) -> Result<f64> {
    log_output_pdf(spec, ynorm).map(f64::exp)
}

/// Elementary forms of the output density for `n = 1` and `n = 3`;
/// `None` for other dimensions.
pub fn output_pdf_elementary(spec: &ChannelSpec, ynorm: f64) -> Option<f64> {
    let (r, y) = (spec.radius, ynorm);
    match spec.n {
        1 => {
            let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * PI).sqrt();
            Some(0.5 * (phi(y - r) + phi(y + r)))
        }
        3 if y > 0.0 => {
            let diff = (-0.5 * (r - y).powi(2)).exp() - (-0.5 * (r + y).powi(2)).exp();
            Some(2f64.sqrt() / (8.0 * PI.powf(1.5)) * diff / (y * r))
        }
        _ => None,
    }
}

/// `||E[X | Y = y]|| = R h_{n/2}(R ||y||)`, unit SNR.
pub fn conditional_mean_magnitude(spec: &ChannelSpec, ynorm: f64) -> Result<f64> {
    check_norm("conditional_mean_magnitude", ynorm)?;
    Ok(spec.radius * bessel_ratio(spec.ratio_order(), spec.radius * ynorm)?)
}

/// `E[h^2_{n/2}(a sqrt(V))]`.
pub(crate) fn mean_square_ratio(
    spec: &ChannelSpec,
    law: &NoncentralChiSquare,
    a: f64,
    engine: &ExpectationEngine,
) -> Result<f64> {
    let v = spec.ratio_order();
    engine.expect_ncx2(law, |s| bessel_ratio(v, a * s.sqrt()).map(|h| h * h))
}

/// `mmse(X_R | Y_gamma) = R^2 - R^2 E[h^2_{n/2}(sqrt(gamma) R sqrt(V))]`,
/// `V ~ ncx2(n, gamma R^2)`.
pub fn mmse_at_snr(spec: &ChannelSpec, gamma: SnrFraction, engine: &ExpectationEngine) -> Result<f64> {
    let r2 = spec.radius * spec.radius;
    let g = gamma.value();
    if g == 0.0 {
        return Ok(r2);
    }
    let law = NoncentralChiSquare::new(spec.n, g * r2)?;
    let energy = mean_square_ratio(spec, &law, g.sqrt() * spec.radius, engine)?;
    Ok(r2 * (1.0 - energy))
}

/// MMSE of the Gaussian input with the same power, `n (R^2/n) / (1 + R^2/n)`.
pub fn mmse_gaussian_reference(n: usize, radius: f64) -> f64 {
    let p = radius * radius / n as f64;
    n as f64 * p / (1.0 + p)
}

/// `R^2 E[h^2_{n/2}(sqrt(gamma) R sqrt(V))]`, `V ~ chi2_n`: the posterior-mean
/// energy when the channel is driven by `x = 0`.
pub fn posterior_energy_at_zero(spec: &ChannelSpec, gamma: SnrFraction, engine: &ExpectationEngine) -> Result<f64> {
    let g = gamma.value();
    if g == 0.0 {
        return Ok(0.0);
    }
    let law = NoncentralChiSquare::central(spec.n)?;
    let r2 = spec.radius * spec.radius;
    Ok(r2 * mean_square_ratio(spec, &law, g.sqrt() * spec.radius, engine)?)
}

/// Posterior-mean energy when driven by a point on the sphere,
/// `R^2 E[h^2_{n/2}(sqrt(gamma) R sqrt(V))]`, `V ~ ncx2(n, gamma R^2)`.
pub fn posterior_energy_on_sphere(spec: &ChannelSpec, gamma: SnrFraction, engine: &ExpectationEngine) -> Result<f64> {
    let r2 = spec.radius * spec.radius;
    Ok(r2 - mmse_at_snr(spec, gamma, engine)?)
}

/// `I(X_R; Y)` in nats via the Bessel closed form.
pub fn mutual_information(spec: &ChannelSpec, engine: &ExpectationEngine) -> Result<f64> {
    let n = spec.n as f64;
    let r = spec.radius;
    let nu = 0.5 * n - 1.0;
    let law = NoncentralChiSquare::new(spec.n, r * r)?;
    let tail = engine.expect_ncx2(&law, |s| log_bessel_i_normalized(nu, s.sqrt() * r))?;
    Ok(r * r + (1.0 - 0.5 * n) * LN_2 - ln_gamma(0.5 * n) - tail)
}

/// `I(X_R; Y) = (1/2) int_0^1 mmse(X_R | Y_gamma) dgamma` in nats.
pub fn mutual_info_via_immse(spec: &ChannelSpec, engine: &ExpectationEngine) -> Result<f64> {
    let adaptive = engine.outer_adaptive();
    let integral = integrate_adaptive(|g| mmse_at_snr(spec, SnrFraction(g), engine), 0.0, 1.0, &adaptive)?;
    Ok(0.5 * integral.value)
}

/// Information density `i(x, P_{X_R})` at `||x|| = xnorm`, in nats:
/// `-(n/2) ln(2 pi e) - E[ln f_Y(sqrt(V))]`, `V ~ ncx2(n, xnorm^2)`.
pub fn info_density(spec: &ChannelSpec, xnorm: f64, engine: &ExpectationEngine) -> Result<f64> {
    check_norm("info_density", xnorm)?;
    let n = spec.n as f64;
    let law = NoncentralChiSquare::new(spec.n, xnorm * xnorm)?;
    let cross_entropy = engine.expect_ncx2(&law, |s| log_output_pdf(spec, s.sqrt()))?;
    Ok(-0.5 * n * (2.0 * PI).ln() - 0.5 * n - cross_entropy)
}

/// Information density on `points` equally spaced norms in `[0, R]`.
pub fn info_density_profile(
    spec: &ChannelSpec,
    points: usize,
    engine: &ExpectationEngine,
) -> Result<InfoDensityProfile> {
    if points < 2 {
        return Err(domain("info_density_profile", "need at least two grid points"));
    }
    let step = spec.radius / (points - 1) as f64;
    let xnorm_grid: Vec<f64> = (0..points)
        .map(|i| if i + 1 == points { spec.radius } else { i as f64 * step })
        .collect();
    let values = xnorm_grid
        .par_iter()
        .map(|&x| info_density(spec, x, engine))
        .collect::<Result<Vec<_>>>()?;
    Ok(InfoDensityProfile { xnorm_grid, values })
}

/// Radial derivative of the information density,
/// `d/dx1 i(x1 e_1, P_{X_R}) = -x1 E[M(sqrt(V)) / sqrt(V)]`, `V ~ ncx2(n + 2, x1^2)`,
/// with `M(r) = -r + R h_{n/2}(r R)`.
pub fn g_prime(spec: &ChannelSpec, x1: f64, engine: &ExpectationEngine) -> Result<f64> {
    check_norm("g_prime", x1)?;
    let r = spec.radius;
    let v = spec.ratio_order();
    let law = NoncentralChiSquare::new(spec.n + 2, x1 * x1)?;
    // M(s)/s = -1 + R^2 h(sR)/(sR), finite as s -> 0
    let m_over_s = engine.expect_ncx2(&law, |s| Ok(-1.0 + r * r * bessel_ratio_over_arg(v, s.sqrt() * r)?))?;
    Ok(-x1 * m_over_s)
}

/// Number of sign changes of `g_prime` on an `points`-grid over `(0, R]`,
/// together with the grid values.
pub fn g_prime_sign_changes(
    spec: &ChannelSpec,
    points: usize,
    engine: &ExpectationEngine,
) -> Result<(usize, Vec<f64>)> {
    let values = (1..=points)
        .into_par_iter()
        .map(|i| g_prime(spec, spec.radius * i as f64 / points as f64, engine))
        .collect::<Result<Vec<_>>>()?;
    let changes = values
        .windows(2)
        .filter(|w| w[0] != 0.0 && w[1] != 0.0 && (w[0] < 0.0) != (w[1] < 0.0))
        .count();
    Ok((changes, values))
}

/// Same channel with radius scaled to `sqrt(gamma) R`.
pub fn at_snr(spec: &ChannelSpec, gamma: SnrFraction) -> Result<ChannelSpec> {
    if gamma.value() == 0.0 {
        return Err(domain("at_snr", "gamma must be positive to rescale the radius"));
    }
    Ok(spec.with_radius(gamma.value().sqrt() * spec.radius))
}
