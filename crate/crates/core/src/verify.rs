//! Invariant suites: analytic identities, threshold consistency, and
//! quadrature-vs-Monte-Carlo oracles. Each check records its tolerance and
//! the observed discrepancy so reports are self-describing.

use std::f64::consts::PI;
use std::fmt;

use crate::channel::{self, ChannelSpec};
use crate::error::Result;
use crate::expect::{BoxcarGaussianLaw, Estimate, ExpectationEngine, McSpec, NoncentralChiSquare};
use crate::quadrature::{integrate_adaptive, AdaptiveSpec};
use crate::specfun::{bessel_ratio, bessel_ratio_bounds, ln_gamma, log_bessel_i_normalized};
use crate::thresholds::{self, RootSpec};

/// One named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Largest acceptable `observed`.
    pub tolerance: f64,
    /// Discrepancy measure (absolute difference, relative difference, or
    /// count, depending on the check).
    pub observed: f64,
    pub passed: bool,
    /// Set when the check could not be evaluated.
    pub error: Option<String>,
}

impl Check {
    /// Pass iff `observed <= tolerance`.
    pub fn within(name: impl Into<String>, observed: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            observed,
            passed: observed <= tolerance,
            error: None,
        }
    }

    /// A boolean property; `observed` is 0 when it holds, 1 otherwise.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::within(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn failed(name: impl Into<String>, err: impl fmt::Display) -> Self {
        Self {
            name: name.into(),
            tolerance: 0.0,
            observed: f64::NAN,
            passed: false,
            error: Some(err.to_string()),
        }
    }

    fn from_result(name: impl Into<String>, r: Result<Check>) -> Self {
        let name = name.into();
        r.unwrap_or_else(|e| Self::failed(name, e))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        match &self.error {
            Some(e) => write!(f, "{status}  {}  error: {e}", self.name),
            None => write!(
                f,
                "{status}  {}  observed={:.3e}  tol={:.1e}",
                self.name, self.observed, self.tolerance
            ),
        }
    }
}

/// Collected checks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Suite depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Identities for `n` in `{1, 2, 3}` and the dimension-free constants.
    Fast,
    /// Adds threshold cross-checks up to `n = 10` and `10^7`-sample oracles.
    Full,
}

// ---------------------------------------------------------------------------
// identities

/// `int_0^inf f_Y(r) |S^{n-1}| r^{n-1} dr`, which must be one.
pub fn output_pdf_mass(spec: &ChannelSpec) -> Result<f64> {
    let n = spec.dimension() as f64;
    let log_area = std::f64::consts::LN_2 + 0.5 * n * PI.ln() - ln_gamma(0.5 * n);
    let hi = spec.radius() + n.sqrt() + 12.0;
    let tight = AdaptiveSpec {
        rel_tol: 1e-13,
        abs_tol: 1e-15,
        max_panels: 400,
    };
    let mass = integrate_adaptive(
        |r| {
            if r == 0.0 {
                return Ok(if spec.dimension() == 1 {
                    channel::output_pdf(spec, 0.0)? * 2.0
                } else {
                    0.0
                });
            }
            Ok((log_area + (n - 1.0) * r.ln() + channel::log_output_pdf(spec, r)?).exp())
        },
        0.0,
        hi,
        &tight,
    )?;
    Ok(mass.value)
}

pub fn check_pdf_normalization(spec: &ChannelSpec) -> Check {
    let name = format!("pdf mass n={} R={}", spec.dimension(), spec.radius());
    Check::from_result(
        &name,
        output_pdf_mass(spec).map(|m| Check::within(&name, (m - 1.0).abs(), 1e-8)),
    )
}

/// Largest relative gap between the general and elementary pdf over
/// `ynorm` in `(0, R + 8]`.
pub fn check_pdf_elementary(spec: &ChannelSpec) -> Check {
    let name = format!("pdf elementary form n={} R={}", spec.dimension(), spec.radius());
    let run = || -> Result<Check> {
        let mut worst: f64 = 0.0;
        for k in 1..=200 {
            let y = (spec.radius() + 8.0) * k as f64 / 200.0;
            let general = channel::output_pdf(spec, y)?;
            if let Some(closed) = channel::output_pdf_elementary(spec, y) {
                worst = worst.max(((general - closed) / closed).abs());
            }
        }
        Ok(Check::within(&name, worst, 1e-12))
    };
    Check::from_result(&name, run())
}

pub fn check_immse(spec: &ChannelSpec, engine: &ExpectationEngine) -> Check {
    let name = format!("I-MMSE n={} R={:.6}", spec.dimension(), spec.radius());
    let run = || -> Result<Check> {
        let a = channel::mutual_information(spec, engine)?;
        let b = channel::mutual_info_via_immse(spec, engine)?;
        Ok(Check::within(&name, (a - b).abs(), 1e-6))
    };
    Check::from_result(&name, run())
}

pub fn check_flatness(spec: &ChannelSpec, engine: &ExpectationEngine) -> Check {
    let name = format!("i(R) = I n={} R={:.6}", spec.dimension(), spec.radius());
    let run = || -> Result<Check> {
        let i = channel::mutual_information(spec, engine)?;
        let d = channel::info_density(spec, spec.radius(), engine)?;
        Ok(Check::within(&name, (i - d).abs(), 1e-8))
    };
    Check::from_result(&name, run())
}

/// `h_{1/2}(x) = tanh(x)` on a grid over `[0, 50]`.
pub fn check_half_order_tanh() -> Check {
    let name = "h_1/2 = tanh";
    let run = || -> Result<Check> {
        let mut worst: f64 = 0.0;
        for k in 0..=5000 {
            let x = 0.01 * k as f64;
            worst = worst.max((bessel_ratio(0.5, x)? - x.tanh()).abs());
        }
        Ok(Check::within(name, worst, 1e-12))
    };
    Check::from_result(name, run())
}

/// Number of violations of the ratio sandwich on a 100 x 100 grid
/// (`v = n/2`, `n = 2..101`; `x` log-spaced on `[1e-3, 1e3]`).
pub fn check_ratio_sandwich() -> Check {
    let name = "ratio sandwich (10^4 points)";
    let run = || -> Result<Check> {
        let mut bad = 0usize;
        for n in 2..=101 {
            let v = 0.5 * n as f64;
            for k in 0..100 {
                let x = 10f64.powf(-3.0 + 6.0 * k as f64 / 99.0);
                let h = bessel_ratio(v, x)?;
                if !bessel_ratio_bounds(v, x)?.contains(h) {
                    bad += 1;
                }
            }
        }
        Ok(Check::within(name, bad as f64, 0.0))
    };
    Check::from_result(name, run())
}

/// `||E[X|Y=y]|| < R`; strict wherever `1 - h` is representable in `f64`
/// (argument `R y <= 15`), `<= R` beyond.
pub fn check_posterior_mean_inside(spec: &ChannelSpec) -> Check {
    let name = format!("|E[X|Y]| < R n={} R={}", spec.dimension(), spec.radius());
    let run = || -> Result<Check> {
        let mut ok = true;
        for y in [0.0, 0.5, 1.0, 3.0, 10.0, 100.0, 1e4] {
            let m = channel::conditional_mean_magnitude(spec, y)?;
            ok &= if spec.radius() * y <= 15.0 {
                m < spec.radius()
            } else {
                m <= spec.radius()
            };
        }
        Ok(Check::holds(&name, ok))
    };
    Check::from_result(&name, run())
}

/// Analytic identities for dimensions `dims`.
pub fn identity_suite(dims: &[usize], engine: &ExpectationEngine) -> Report {
    let mut report = Report::default();
    report.push(check_half_order_tanh());
    report.push(check_ratio_sandwich());
    for &n in dims {
        let s = (n as f64).sqrt();
        for r in [0.5, 1.0, 3.0, 8.0] {
            if let Ok(spec) = ChannelSpec::new(n, r) {
                report.push(check_pdf_normalization(&spec));
                if n == 1 || n == 3 {
                    report.push(check_pdf_elementary(&spec));
                }
                report.push(check_posterior_mean_inside(&spec));
            }
        }
        for r in [0.5 * s, s, 1.8 * s] {
            if let Ok(spec) = ChannelSpec::new(n, r) {
                report.push(check_immse(&spec, engine));
                report.push(check_flatness(&spec, engine));
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// thresholds

/// `|i(0) - i(R)|` at `R`, and the sign of `i(0) - i(R)` slightly below and
/// above `R` (expected negative and positive).
pub fn threshold_phase(n: usize, rbar: f64, engine: &ExpectationEngine) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (slot, factor) in out.iter_mut().zip([0.99, 1.0, 1.01]) {
        let spec = ChannelSpec::new(n, rbar * factor)?;
        *slot = channel::info_density(&spec, 0.0, engine)? - channel::info_density(&spec, spec.radius(), engine)?;
    }
    Ok(out)
}

pub fn check_threshold_phase(n: usize, rbar: f64, engine: &ExpectationEngine) -> Check {
    let name = format!("i(0)-i(R) phase n={n}");
    let run = || -> Result<Check> {
        let [below, at, above] = threshold_phase(n, rbar, engine)?;
        if below < 0.0 && above > 0.0 {
            Ok(Check::within(&name, at.abs(), 1e-5))
        } else {
            Ok(Check::failed(
                &name,
                format!("signs below={below:.3e} above={above:.3e}"),
            ))
        }
    };
    Check::from_result(&name, run())
}

/// Largest relative gap between `g_prime` and a centered difference of the
/// information density (step `1e-4 R`) at `points` interior norms.
pub fn g_prime_fd_gap(spec: &ChannelSpec, points: usize, engine: &ExpectationEngine) -> Result<f64> {
    let r = spec.radius();
    let h = 1e-4 * r;
    let mut worst: f64 = 0.0;
    for k in 1..=points {
        let x = r * k as f64 / (points + 1) as f64;
        let fd =
            (channel::info_density(spec, x + h, engine)? - channel::info_density(spec, x - h, engine)?) / (2.0 * h);
        let g = channel::g_prime(spec, x, engine)?;
        worst = worst.max(((g - fd) / fd).abs());
    }
    Ok(worst)
}

pub fn check_g_prime(spec: &ChannelSpec, engine: &ExpectationEngine) -> Vec<Check> {
    let tag = format!("n={} R={}", spec.dimension(), spec.radius());
    let fd = Check::from_result(
        format!("g' vs finite difference {tag}"),
        g_prime_fd_gap(spec, 10, engine).map(|gap| Check::within(format!("g' vs finite difference {tag}"), gap, 1e-4)),
    );
    let name = format!("g' single sign change {tag}");
    let signs = Check::from_result(
        &name,
        channel::g_prime_sign_changes(spec, 200, engine).map(|(changes, values)| {
            let first_neg = values.first().is_some_and(|v| *v < 0.0);
            let ok = changes == 0 || (changes == 1 && first_neg);
            Check::holds(&name, ok && changes <= 1)
        }),
    );
    vec![fd, signs]
}

/// Cross-characterization, ordering and flatness checks for `dims`.
pub fn threshold_suite(dims: &[usize], engine: &ExpectationEngine) -> Report {
    let spec = RootSpec::default();
    let mut report = Report::default();
    let refined = engine.refined();
    for &n in dims {
        let main = match thresholds::solve_rbar(n, &spec, engine) {
            Ok(r) => r,
            Err(e) => {
                report.push(Check::failed(format!("solve R̄ n={n}"), e));
                continue;
            }
        };
        report.push(Check::from_result(
            format!("refined residual n={n}"),
            thresholds::condition_residual(main.method, n, main.value, &refined)
                .map(|r| Check::within(format!("refined residual n={n}"), r.abs(), spec.ftol)),
        ));
        report.push(Check::from_result(
            format!("main vs boxcar n={n}"),
            thresholds::solve_rbar_alt(n, &spec, engine)
                .map(|alt| Check::within(format!("main vs boxcar n={n}"), (alt.value - main.value).abs(), 1e-5)),
        ));
        report.push(Check::from_result(
            format!("R̄_mmse < R̄ n={n}"),
            thresholds::solve_rbar_mmse(n, &spec, engine)
                .map(|m| Check::holds(format!("R̄_mmse < R̄ n={n}"), m.value < main.value)),
        ));
        report.push(check_threshold_phase(n, main.value, engine));
    }
    report
}

/// Dimension-free constants.
pub fn constants_suite() -> Report {
    let spec = RootSpec::default();
    let mut report = Report::default();
    report.push(Check::from_result(
        "c",
        thresholds::solve_c(&spec).map(|c| Check::within("c", (c.value - 1.860935682).abs(), 1e-6)),
    ));
    report.push(Check::from_result(
        "asymptotic quadrature vs closed form at c=1",
        thresholds::jensen_bound_integral(0.5, 1.0).map(|q| {
            Check::within(
                "asymptotic quadrature vs closed form at c=1",
                (q - thresholds::asymptotic_lhs_closed_form(1.0)).abs(),
                1e-10,
            )
        }),
    ));
    report.push(Check::from_result(
        "sufficiency bound at n=2",
        thresholds::sufficiency_check(2).map(|v| Check::holds("sufficiency bound at n=2", v <= 1.0)),
    ));
    report.push(Check::within(
        "MMSE limit constant",
        (thresholds::mmse_limit_constant() - 1.15096).abs(),
        1e-5,
    ));
    report.push(Check::from_result(
        "R̄_1 scalar tanh",
        thresholds::solve_rbar_n1_tanh(&spec)
            .map(|r| Check::within("R̄_1 scalar tanh", (r.value - 1.665925641).abs(), 1e-6)),
    ));
    report
}

// ---------------------------------------------------------------------------
// quadrature vs Monte Carlo

/// An expectation used by the channel and threshold computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional {
    /// `E[h^2_{n/2}(a sqrt(V))]`, `V ~ ncx2(n, noncentrality)`.
    RatioSquared { n: usize, a: f64, noncentrality: f64 },
    /// `E[ln f_Y(sqrt(V))]`, `V ~ ncx2(n, xnorm^2)`, sphere radius `radius`.
    LogOutputPdf { n: usize, radius: f64, xnorm: f64 },
    /// `E[ln(I_v(R sqrt V) / (R sqrt V)^v)]`, `v = n/2 - 1`, `V ~ ncx2(n, R^2)`.
    LogBessel { n: usize, radius: f64 },
    /// `E[M(sqrt V)/sqrt V]`, `V ~ ncx2(n + 2, x1^2)`.
    RadialDrift { n: usize, radius: f64, x1: f64 },
    /// `E[(W_1/||W||) h_{n/2}(R ||W||)]` under the boxcar-smoothed law.
    Boxcar { n: usize, radius: f64 },
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::RatioSquared { n, a, noncentrality } => write!(f, "E[h^2] n={n} a={a:.4} lambda={noncentrality:.4}"),
            Self::LogOutputPdf { n, radius, xnorm } => write!(f, "E[ln f_Y] n={n} R={radius:.4} |x|={xnorm:.4}"),
            Self::LogBessel { n, radius } => write!(f, "E[ln I/z^v] n={n} R={radius:.4}"),
            Self::RadialDrift { n, radius, x1 } => write!(f, "E[M/r] n={n} R={radius:.4} x1={x1:.4}"),
            Self::Boxcar { n, radius } => write!(f, "E[W1/|W| h] n={n} R={radius:.4}"),
        }
    }
}

impl Functional {
    pub fn estimate(&self, engine: &ExpectationEngine) -> Result<Estimate> {
        match *self {
            Self::RatioSquared { n, a, noncentrality } => {
                let v = 0.5 * n as f64;
                let law = NoncentralChiSquare::new(n, noncentrality)?;
                engine.estimate_ncx2(&law, |s| bessel_ratio(v, a * s.sqrt()).map(|h| h * h))
            }
            Self::LogOutputPdf { n, radius, xnorm } => {
                let spec = ChannelSpec::new(n, radius)?;
                let law = NoncentralChiSquare::new(n, xnorm * xnorm)?;
                engine.estimate_ncx2(&law, |s| channel::log_output_pdf(&spec, s.sqrt()))
            }
            Self::LogBessel { n, radius } => {
                let nu = 0.5 * n as f64 - 1.0;
                let law = NoncentralChiSquare::new(n, radius * radius)?;
                engine.estimate_ncx2(&law, |s| log_bessel_i_normalized(nu, radius * s.sqrt()))
            }
            Self::RadialDrift { n, radius, x1 } => {
                let v = 0.5 * n as f64;
                let law = NoncentralChiSquare::new(n + 2, x1 * x1)?;
                engine.estimate_ncx2(&law, |s| {
                    Ok(-1.0 + radius * radius * crate::specfun::bessel_ratio_over_arg(v, radius * s.sqrt())?)
                })
            }
            Self::Boxcar { n, radius } => {
                let v = 0.5 * n as f64;
                let law = BoxcarGaussianLaw::new(n, radius)?;
                engine.estimate_boxcar(&law, |w1, norm| {
                    if norm == 0.0 {
                        return Ok(0.0);
                    }
                    Ok(w1 / norm * bessel_ratio(v, radius * norm)?)
                })
            }
        }
    }

    /// Every functional family at sphere radius `radius` in dimension `n`.
    pub fn family(n: usize, radius: f64) -> Vec<Functional> {
        let r2 = radius * radius;
        vec![
            Self::RatioSquared {
                n,
                a: radius,
                noncentrality: 0.0,
            },
            Self::RatioSquared {
                n,
                a: radius,
                noncentrality: r2,
            },
            Self::RatioSquared {
                n,
                a: 0.5f64.sqrt() * radius,
                noncentrality: 0.5 * r2,
            },
            Self::LogOutputPdf { n, radius, xnorm: 0.0 },
            Self::LogOutputPdf {
                n,
                radius,
                xnorm: radius,
            },
            Self::LogBessel { n, radius },
            Self::RadialDrift {
                n,
                radius,
                x1: 0.5 * radius,
            },
            Self::Boxcar { n, radius },
        ]
    }
}

/// Quadrature value, Monte Carlo estimate, and `|q - mc| / se`.
pub fn oracle_gap(
    functional: &Functional,
    quad: &ExpectationEngine,
    mc: &ExpectationEngine,
) -> Result<(Estimate, Estimate, f64)> {
    let q = functional.estimate(quad)?;
    let m = functional.estimate(mc)?;
    let z = if m.error > 0.0 {
        (q.value - m.value).abs() / m.error
    } else {
        (q.value - m.value).abs() / f64::EPSILON
    };
    Ok((q, m, z))
}

/// Quadrature-vs-Monte-Carlo agreement within 4 standard errors.
pub fn oracle_suite(cases: &[Functional], mc: McSpec, quad: &ExpectationEngine) -> Report {
    let mut report = Report::default();
    let mc_engine = match ExpectationEngine::monte_carlo(mc) {
        Ok(e) => e,
        Err(e) => {
            report.push(Check::failed("Monte Carlo engine", e));
            return report;
        }
    };
    for case in cases {
        let name = format!("quadrature vs MC: {case}");
        report.push(Check::from_result(
            &name,
            oracle_gap(case, quad, &mc_engine).map(|(_, _, z)| Check::within(&name, z, 4.0)),
        ));
    }
    report
}

/// Default oracle grid: `n` in `{1, 2, 3, 5, 10}` at `R = sqrt(n)` and
/// `R = 1.8 sqrt(n)` for the ratio functionals, plus the remaining families
/// at `R = 1.7 sqrt(n)`.
pub fn default_oracle_cases() -> Vec<Functional> {
    let mut cases = Vec::new();
    for n in [1usize, 2, 3, 5, 10] {
        let s = (n as f64).sqrt();
        let r = 1.7 * s;
        cases.push(Functional::RatioSquared {
            n,
            a: s,
            noncentrality: n as f64,
        });
        cases.extend(Functional::family(n, r));
    }
    cases
}

/// Run the suites for `level`.
pub fn run(level: Level, engine: &ExpectationEngine, mc_seed: u64) -> Report {
    let mut report = Report::default();
    match level {
        Level::Fast => {
            report.extend(identity_suite(&[1, 2, 3], engine).checks);
            report.extend(constants_suite().checks);
            report.extend(threshold_suite(&[1], engine).checks);
        }
        Level::Full => {
            report.extend(identity_suite(&[1, 2, 3, 5, 10], engine).checks);
            report.extend(constants_suite().checks);
            report.extend(threshold_suite(&(1..=10).collect::<Vec<_>>(), engine).checks);
            for (n, r) in [(1, 1.64), (2, 2.4), (5, 4.0)] {
                if let Ok(spec) = ChannelSpec::new(n, r) {
                    report.extend(check_g_prime(&spec, engine));
                }
            }
            let mc = McSpec {
                seed: mc_seed,
                samples: 10_000_000,
            };
            report.extend(oracle_suite(&default_oracle_cases(), mc, engine).checks);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_formatting() {
        let c = Check::within("x", 1e-9, 1e-8);
        assert!(c.passed);
        assert!(c.to_string().starts_with("PASS  x"));
        let f = Check::failed("y", "boom");
        assert!(!f.passed);
        assert!(f.to_string().contains("error: boom"));
        let mut r = Report::default();
        r.push(c);
        r.push(f);
        assert!(!r.all_passed());
        assert_eq!(r.failures().count(), 1);
        assert!(r.to_string().ends_with("2 checks, 1 failed"));
    }

    #[test]
    fn identities_hold_small_dims() {
        let e = ExpectationEngine::default();
        assert!(check_half_order_tanh().passed);
        assert!(check_ratio_sandwich().passed);
        for n in [1, 2, 3, 5, 10] {
            let spec = ChannelSpec::new(n, 3.0).unwrap();
            let c = check_pdf_normalization(&spec);
            assert!(c.passed, "{c}");
        }
        let c = check_flatness(&ChannelSpec::new(3, 2.0).unwrap(), &e);
        assert!(c.passed, "{c}");
    }

    #[test]
    fn oracle_small_sample() {
        let quad = ExpectationEngine::default();
        let cases = Functional::family(2, 2.0);
        let report = oracle_suite(&cases, McSpec::new(11, 200_000).unwrap(), &quad);
        assert!(report.all_passed(), "{report}");
    }
}
