//! Root solvers for the sphere-optimality thresholds.
//!
//! Every threshold is the root of a scalar residual on a fixed bracket. The
//! bracket is first scanned (with a cheaper engine) for sign changes; more
//! than one crossing is reported, never silently resolved. The single
//! crossing is then refined by bisection to `1e-3` and an Illinois-safeguarded
//! secant to `xtol`.

use std::fmt;

use rayon::prelude::*;

use crate::channel::{mean_square_ratio, ChannelSpec};
use crate::error::{domain, Error, Result};
use crate::expect::{BoxcarGaussianLaw, ExpectationEngine, NoncentralChiSquare};
use crate::quadrature::{integrate_adaptive, AdaptiveSpec};
use crate::specfun::bessel_ratio;

/// Which defining equation a threshold solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Characterization {
    /// SNR-integral condition: `int_0^1 E0 + E1 dgamma = 1`.
    SnrIntegral,
    /// Boxcar-law expectation `E[(W_1/||W||) h(R ||W||)] = 1/2`.
    BoxcarExpectation,
    /// Scalar `int (Q(w-R) - Q(w)) tanh(Rw) dw = R/2`.
    ScalarTanh,
    /// Large-dimension constant `c = lim R̄_n / sqrt(n)`.
    AsymptoticConstant,
    /// MMSE (least-favorable prior) condition.
    MmseCondition,
    /// Jensen-bound sufficiency constant `a = (n-1)/(2n)`.
    SufficiencyBound,
}

impl Characterization {
    pub fn name(self) -> &'static str {
        match self {
            Self::SnrIntegral => "snr-integral",
            Self::BoxcarExpectation => "boxcar-expectation",
            Self::ScalarTanh => "scalar-tanh",
            Self::AsymptoticConstant => "asymptotic-constant",
            Self::MmseCondition => "mmse-condition",
            Self::SufficiencyBound => "sufficiency-bound",
        }
    }
}

impl fmt::Display for Characterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Solver tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSpec {
    /// Absolute tolerance on the root.
    pub xtol: f64,
    /// Tolerance on the defining-equation residual.
    pub ftol: f64,
    pub max_iter: usize,
    /// Grid size of the sign-change scan.
    pub scan_points: usize,
}

impl Default for RootSpec {
    fn default() -> Self {
        Self {
            xtol: 1e-10,
            ftol: 1e-9,
            max_iter: 200,
            scan_points: 64,
        }
    }
}

impl RootSpec {
    pub fn validate(&self) -> Result<()> {
        if self.xtol > 0.0 && self.ftol > 0.0 && self.max_iter > 0 && self.scan_points >= 2 {
            Ok(())
        } else {
            Err(domain("RootSpec", format!("invalid settings {self:?}")))
        }
    }
}

/// A solved threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    /// Dimension, or `None` for dimension-free constants.
    pub n: Option<usize>,
    pub value: f64,
    /// Defining-equation residual at `value`.
    pub residual: f64,
    /// Final bracket around `value`.
    pub bracket: (f64, f64),
    /// Residual evaluations at full accuracy (the scan is not counted).
    pub iterations: usize,
    pub method: Characterization,
}

// ---------------------------------------------------------------------------
// generic bracketed solver

#[derive(Debug)]
struct Solved {
    root: f64,
    residual: f64,
    bracket: (f64, f64),
    iterations: usize,
}

fn opposite(a: f64, b: f64) -> bool {
    (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)
}

/// Locate the single sign change of `scan` on `[lo, hi]`.
fn scan_bracket<S>(scan: &S, lo: f64, hi: f64, points: usize) -> Result<(f64, f64)>
where
    S: Fn(f64) -> Result<f64> + Sync,
{
    let xs: Vec<f64> = (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (points - 1) as f64
            }
        })
        .collect();
    let fs = xs.par_iter().map(|&x| scan(x)).collect::<Result<Vec<f64>>>()?;
    let mut cells = Vec::new();
    for i in 0..points - 1 {
        if fs[i] == 0.0 || opposite(fs[i], fs[i + 1]) {
            cells.push(i);
        }
    }
    if fs[points - 1] == 0.0 {
        cells.push(points - 2);
    }
    cells.dedup();
    match cells.as_slice() {
        [] => Err(Error::NoBracket {
            lo,
            hi,
            f_lo: fs[0],
            f_hi: fs[points - 1],
        }),
        [i] => Ok((xs[*i], xs[*i + 1])),
        many => Err(Error::MultipleRoots {
            crossings: many.iter().map(|&i| 0.5 * (xs[i] + xs[i + 1])).collect(),
        }),
    }
}

fn solve_bracketed<F, S>(f: F, scan: S, lo: f64, hi: f64, spec: &RootSpec) -> Result<Solved>
where
    F: Fn(f64) -> Result<f64>,
    S: Fn(f64) -> Result<f64> + Sync,
{
    spec.validate()?;
    let (mut a, mut b) = scan_bracket(&scan, lo, hi, spec.scan_points)?;
    let mut iterations = 0;
    let eval = |x: f64, it: &mut usize| {
        *it += 1;
        f(x)
    };
    let mut fa = eval(a, &mut iterations)?;
    let mut fb = eval(b, &mut iterations)?;
    if !opposite(fa, fb) && fa != 0.0 && fb != 0.0 {
        // the coarse scan may misplace a crossing sitting on a grid point
        let step = (hi - lo) / (spec.scan_points - 1) as f64;
        a = (a - step).max(lo);
        b = (b + step).min(hi);
        fa = eval(a, &mut iterations)?;
        fb = eval(b, &mut iterations)?;
        if !opposite(fa, fb) && fa != 0.0 && fb != 0.0 {
            return Err(Error::NoBracket {
                lo: a,
                hi: b,
                f_lo: fa,
                f_hi: fb,
            });
        }
    }
    if fa == 0.0 {
        return Ok(Solved {
            root: a,
            residual: 0.0,
            bracket: (a, a),
            iterations,
        });
    }
    if fb == 0.0 {
        return Ok(Solved {
            root: b,
            residual: 0.0,
            bracket: (b, b),
            iterations,
        });
    }

    // bisection to a coarse width
    while b - a > 1e-3 {
        if iterations >= spec.max_iter {
            return Err(Error::MaxIterations {
                iterations,
                width: b - a,
            });
        }
        let m = 0.5 * (a + b);
        let fm = eval(m, &mut iterations)?;
        if fm == 0.0 {
            return Ok(Solved {
                root: m,
                residual: 0.0,
                bracket: (a, b),
                iterations,
            });
        }
        if opposite(fa, fm) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }

    // Illinois false position
    let mut side = 0i8;
    let (mut best, mut best_f) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    while b - a > 2.0 * spec.xtol {
        if iterations >= spec.max_iter {
            return Err(Error::MaxIterations {
                iterations,
                width: b - a,
            });
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = eval(x, &mut iterations)?;
        if fx.abs() < best_f.abs() {
            best = x;
            best_f = fx;
        }
        if fx == 0.0 {
            a = x;
            b = x;
            break;
        }
        if opposite(fa, fx) {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        // converged below the residual's own noise floor
        if fx.abs() <= 1e-3 * spec.ftol && b - a <= 1e3 * spec.xtol {
            break;
        }
    }
    if best_f.abs() > spec.ftol {
        return Err(Error::NonConvergence {
            what: "root residual",
            estimate: best_f.abs(),
            tolerance: spec.ftol,
        });
    }
    Ok(Solved {
        root: best,
        residual: best_f,
        bracket: (a.min(best), b.max(best)),
        iterations,
    })
}

fn finish(n: Option<usize>, method: Characterization, s: Solved) -> ThresholdResult {
    ThresholdResult {
        n,
        value: s.root,
        residual: s.residual,
        bracket: s.bracket,
        iterations: s.iterations,
        method,
    }
}

fn check_dimension(func: &'static str, n: usize) -> Result<()> {
    if n == 0 {
        Err(domain(func, "dimension must be at least 1"))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// capacity thresholds

/// Search bracket for `R̄_n`.
pub fn rbar_bracket(n: usize) -> (f64, f64) {
    let s = (n as f64).sqrt();
    (0.8 * s, 2.6 * s)
}

/// Search bracket for the MMSE threshold.
pub fn mmse_bracket(n: usize) -> (f64, f64) {
    let s = (n as f64).sqrt();
    (0.7 * s, 1.8 * s)
}

/// `int_0^1 E[h^2_{n/2}(sqrt(g) R sqrt(V0))] + E[h^2_{n/2}(sqrt(g) R sqrt(V1))] dg`
/// with `V0 ~ chi2_n` and `V1 ~ ncx2(n, g R^2)`.
///
/// The sphere law is capacity achieving exactly while this is at most one.
pub fn capacity_condition_lhs(n: usize, radius: f64, engine: &ExpectationEngine) -> Result<f64> {
    let spec = ChannelSpec::new(n, radius)?;
    let central = NoncentralChiSquare::central(n)?;
    let integrand = |g: f64| -> Result<f64> {
        if g == 0.0 {
            return Ok(0.0);
        }
        let a = g.sqrt() * radius;
        let shifted = NoncentralChiSquare::new(n, g * radius * radius)?;
        Ok(mean_square_ratio(&spec, &central, a, engine)? + mean_square_ratio(&spec, &shifted, a, engine)?)
    };
    let adaptive = engine.outer_adaptive();
    Ok(integrate_adaptive(integrand, 0.0, 1.0, &adaptive)?.value)
}

/// `E[(W_1/||W||) h_{n/2}(R ||W||)]` under the boxcar-smoothed Gaussian law.
pub fn boxcar_condition_lhs(n: usize, radius: f64, engine: &ExpectationEngine) -> Result<f64> {
    let law = BoxcarGaussianLaw::new(n, radius)?;
    let v = 0.5 * n as f64;
    engine.expect_boxcar(&law, |w1, norm| {
        if norm == 0.0 {
            return Ok(0.0);
        }
        Ok(w1 / norm * bessel_ratio(v, radius * norm)?)
    })
}

/// `int (Q(w-R) - Q(w)) tanh(R w) dw - R/2` for the scalar channel.
pub fn scalar_tanh_residual(radius: f64, sigmas: f64) -> Result<f64> {
    let law = BoxcarGaussianLaw::new(1, radius)?;
    let spec = AdaptiveSpec {
        rel_tol: 1e-13,
        abs_tol: 1e-15,
        max_panels: 400,
    };
    let integral = integrate_adaptive(
        |w| Ok(radius * law.first_coordinate_pdf(w) * (radius * w).tanh()),
        -sigmas,
        radius + sigmas,
        &spec,
    )?;
    Ok(integral.value - 0.5 * radius)
}

/// `E[h^2_{n/2}(R ||Z||)] + E[h^2_{n/2}(R ||x + Z||)]`, `||x|| = R`.
pub fn mmse_condition_lhs(n: usize, radius: f64, engine: &ExpectationEngine) -> Result<f64> {
    let spec = ChannelSpec::new(n, radius)?;
    let central = NoncentralChiSquare::central(n)?;
    let shifted = NoncentralChiSquare::new(n, radius * radius)?;
    Ok(mean_square_ratio(&spec, &central, radius, engine)? + mean_square_ratio(&spec, &shifted, radius, engine)?)
}

/// Residual of `method`'s defining equation at `value` (a radius, or the
/// constant itself for the dimension-free characterizations).
pub fn condition_residual(method: Characterization, n: usize, value: f64, engine: &ExpectationEngine) -> Result<f64> {
    match method {
        Characterization::SnrIntegral => Ok(capacity_condition_lhs(n, value, engine)? - 1.0),
        Characterization::BoxcarExpectation => Ok(boxcar_condition_lhs(n, value, engine)? - 0.5),
        Characterization::ScalarTanh => scalar_tanh_residual(value, engine.quadrature_spec().radial_trunc_sigmas),
        Characterization::AsymptoticConstant => Ok(asymptotic_lhs(value)? - 1.0),
        Characterization::MmseCondition => Ok(mmse_condition_lhs(n, value, engine)? - 1.0),
        Characterization::SufficiencyBound => Ok(jensen_bound_integral(value, 1.0)? - 1.0),
    }
}

fn solve_radius(
    method: Characterization,
    n: usize,
    bracket: (f64, f64),
    spec: &RootSpec,
    engine: &ExpectationEngine,
) -> Result<ThresholdResult> {
    check_dimension("solve", n)?;
    let coarse = engine.coarse();
    let solved = solve_bracketed(
        |r| condition_residual(method, n, r, engine),
        |r| condition_residual(method, n, r, &coarse),
        bracket.0,
        bracket.1,
        spec,
    )?;
    Ok(finish(Some(n), method, solved))
}

/// `R̄_n` from the SNR-integral condition.
pub fn solve_rbar(n: usize, spec: &RootSpec, engine: &ExpectationEngine) -> Result<ThresholdResult> {
    solve_radius(Characterization::SnrIntegral, n, rbar_bracket(n), spec, engine)
}

/// `R̄_n` from the boxcar-law expectation condition.
pub fn solve_rbar_alt(n: usize, spec: &RootSpec, engine: &ExpectationEngine) -> Result<ThresholdResult> {
    solve_radius(Characterization::BoxcarExpectation, n, rbar_bracket(n), spec, engine)
}

/// `R̄_1` from the scalar tanh equation on `[1, 2.2]`.
pub fn solve_rbar_n1_tanh(spec: &RootSpec) -> Result<ThresholdResult> {
    let engine = ExpectationEngine::default();
    solve_radius(Characterization::ScalarTanh, 1, (1.0, 2.2), spec, &engine)
}

/// MMSE threshold `R̄_n^MMSE`.
pub fn solve_rbar_mmse(n: usize, spec: &RootSpec, engine: &ExpectationEngine) -> Result<ThresholdResult> {
    solve_radius(Characterization::MmseCondition, n, mmse_bracket(n), spec, engine)
}

// ---------------------------------------------------------------------------
// dimension-free constants

const TIGHT: AdaptiveSpec = AdaptiveSpec {
    rel_tol: 1e-13,
    abs_tol: 1e-14,
    max_panels: 400,
};

/// Jensen upper bound on the SNR-integral condition with `R = c sqrt(n)`
/// and `a = (n-1)/(2n)`:
///
/// ```text
/// int_0^1 g c^2 / (a + sqrt(a^2 + g c^2))^2
///       + g c^2 (1 + g c^2) / (a + sqrt(a^2 + g c^2 (1 + g c^2)))^2 dg
/// ```
///
/// `a = 1/2` gives the large-dimension limit of the exact condition.
pub fn jensen_bound_integral(a: f64, c: f64) -> Result<f64> {
    if !(a >= 0.0) || !(c > 0.0) {
        return Err(domain(
            "jensen_bound_integral",
            format!("need a >= 0 and c > 0, got a={a}, c={c}"),
        ));
    }
    let term = |u: f64| {
        if u == 0.0 {
            0.0
        } else {
            let d = a + (a * a + u).sqrt();
            u / (d * d)
        }
    };
    let c2 = c * c;
    let integral = integrate_adaptive(|g| Ok(term(g * c2) + term(g * c2 * (1.0 + g * c2))), 0.0, 1.0, &TIGHT)?;
    Ok(integral.value)
}

/// Elementary form of `jensen_bound_integral(1/2, c)`:
/// `[ln(sqrt(4c^2+1)+1) - ln(c^2+1) - ln 2 - sqrt(4c^2+1) + 2c^2 + 1] / c^2`,
/// rearranged to avoid cancellation for small `c`.
pub fn asymptotic_lhs_closed_form(c: f64) -> f64 {
    let c2 = c * c;
    let s = (4.0 * c2 + 1.0).sqrt();
    let d = 4.0 * c2 / (s + 1.0); // s - 1
    ((0.5 * d).ln_1p() - c2.ln_1p() - d + 2.0 * c2) / c2
}

/// Large-dimension condition, evaluated by quadrature and by its closed
/// form; errors if the two disagree by more than `1e-8`.
pub fn asymptotic_lhs(c: f64) -> Result<f64> {
    let quad = jensen_bound_integral(0.5, c)?;
    let closed = asymptotic_lhs_closed_form(c);
    let diff = (quad - closed).abs();
    if diff > 1e-8 {
        return Err(Error::Disagreement {
            what: "asymptotic condition: quadrature vs closed form",
            diff,
            limit: 1e-8,
        });
    }
    Ok(closed)
}

/// `c = lim R̄_n / sqrt(n)` on the bracket `[1, 3]`.
pub fn solve_c(spec: &RootSpec) -> Result<ThresholdResult> {
    let r = |c: f64| Ok(asymptotic_lhs(c)? - 1.0);
    let solved = solve_bracketed(r, r, 1.0, 3.0, spec)?;
    Ok(finish(None, Characterization::AsymptoticConstant, solved))
}

/// Jensen bound at `R = sqrt(n)` (`c = 1`, `a = (n-1)/(2n)`); at most one
/// means `R <= sqrt(n)` is sufficient for optimality of the sphere.
pub fn sufficiency_check(n: usize) -> Result<f64> {
    check_dimension("sufficiency_check", n)?;
    jensen_bound_integral((n as f64 - 1.0) / (2.0 * n as f64), 1.0)
}

/// The `a` at which the `c = 1` Jensen bound equals one, on `[0.05, 0.49]`.
///
/// The bound decreases in `a`, so every `a` above the root (equivalently
/// `n >= 1/(1 - 2a)`) satisfies it.
pub fn solve_sufficiency_a(spec: &RootSpec) -> Result<ThresholdResult> {
    let r = |a: f64| Ok(jensen_bound_integral(a, 1.0)? - 1.0);
    let solved = solve_bracketed(r, r, 0.05, 0.49, spec)?;
    Ok(finish(None, Characterization::SufficiencyBound, solved))
}

/// Dimension implied by a sufficiency constant, `n = 1/(1 - 2a)`.
pub fn sufficiency_dimension(a: f64) -> f64 {
    1.0 / (1.0 - 2.0 * a)
}

/// A published elementary expression for the `c = 1` Jensen bound:
///
/// ```text
/// 2a ln(2a+1) - 2a ln(2 sqrt(a^2+2) + 3)
///   - 4a^2 atanh(8a^2 - 1) + 4a^2 atanh((4a sqrt(a^2+2) - 1)/3)
/// ```
///
/// It does not reproduce [`jensen_bound_integral`]`(a, 1)` (it is negative on
/// `(0, 1/2)`); kept only so the discrepancy stays checkable.
pub fn printed_sufficiency_expression(a: f64) -> f64 {
    let s = (a * a + 2.0).sqrt();
    2.0 * a * (2.0 * a + 1.0).ln() - 2.0 * a * (2.0 * s + 3.0).ln() - 4.0 * a * a * (8.0 * a * a - 1.0).atanh()
        + 4.0 * a * a * ((4.0 * a * s - 1.0) / 3.0).atanh()
}

/// `lim R̄_n^MMSE / sqrt(n) = sqrt(cbrt(9 - sqrt 69) + cbrt(9 + sqrt 69)) / (2^{1/6} 3^{1/3})`.
pub fn mmse_limit_constant() -> f64 {
    let r = 69f64.sqrt();
    ((9.0 - r).cbrt() + (9.0 + r).cbrt()).sqrt() / (2f64.powf(1.0 / 6.0) * 3f64.cbrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solver_finds_simple_roots() {
        let spec = RootSpec::default();
        let s = solve_bracketed(|x| Ok(x * x - 2.0), |x| Ok(x * x - 2.0), 0.0, 3.0, &spec).unwrap();
        assert!((s.root - 2f64.sqrt()).abs() < 1e-10);
        assert!(s.residual.abs() <= 1e-9);
        assert!(s.bracket.0 <= s.root && s.root <= s.bracket.1);
        let err = solve_bracketed(|x| Ok(x * x + 1.0), |x| Ok(x * x + 1.0), 0.0, 3.0, &spec);
        assert!(matches!(err, Err(Error::NoBracket { .. })));
        let wiggle = |x: f64| Ok((x - 1.0) * (x - 2.0) * (x - 2.5));
        let err = solve_bracketed(wiggle, wiggle, 0.0, 3.0, &spec);
        match err {
            Err(Error::MultipleRoots { crossings }) => assert_eq!(crossings.len(), 3),
            other => panic!("expected MultipleRoots, got {other:?}"),
        }
    }

    #[test]
    fn solver_reports_iteration_cap() {
        let spec = RootSpec {
            max_iter: 3,
            ..RootSpec::default()
        };
        let f = |x: f64| Ok(x.powi(3) - 0.3);
        assert!(matches!(
            solve_bracketed(f, f, 0.0, 1.0, &spec),
            Err(Error::MaxIterations { .. })
        ));
    }

    #[test]
    fn scalar_tanh_root() {
        let r = solve_rbar_n1_tanh(&RootSpec::default()).unwrap();
        assert!((r.value - 1.6659256412712826).abs() < 1e-9, "{}", r.value);
        assert_eq!(r.method, Characterization::ScalarTanh);
    }

    #[test]
    fn asymptotic_constant() {
        let r = solve_c(&RootSpec::default()).unwrap();
        assert!((r.value - 1.860935681957434).abs() < 1e-9, "{}", r.value);
        assert!((jensen_bound_integral(0.5, 1.0).unwrap() - asymptotic_lhs_closed_form(1.0)).abs() < 1e-10);
        assert!(asymptotic_lhs(1e-4).unwrap().abs() < 1e-6);
        assert!(asymptotic_lhs(-1.0).is_err());
    }

    #[test]
    fn sufficiency_constant() {
        let r = solve_sufficiency_a(&RootSpec::default()).unwrap();
        // root of the exact bound (independent mpmath quadrature)
        assert!((r.value - 0.2368103596).abs() < 1e-9, "{}", r.value);
        assert!((sufficiency_dimension(r.value) - 1.8997708).abs() < 1e-6);
        assert!(sufficiency_check(2).unwrap() <= 1.0);
        assert!(sufficiency_check(1).unwrap() > 1.0);
        // first bound term has the closed form
        // 4a^2 - 4a sqrt(a^2+1) + 4a^2 ln((a + sqrt(a^2+1)) / (2a)) + 1
        let a: f64 = 0.3;
        let first = integrate_adaptive(
            |g| {
                let d = a + (a * a + g).sqrt();
                Ok(g / (d * d))
            },
            0.0,
            1.0,
            &TIGHT,
        )
        .unwrap()
        .value;
        let s = (a * a + 1.0).sqrt();
        let closed = 4.0 * a * a - 4.0 * a * s + 4.0 * a * a * ((a + s) / (2.0 * a)).ln() + 1.0;
        assert!((first - closed).abs() < 1e-12);
    }

    #[test]
    fn printed_expression_stays_below_one() {
        for k in 1..50 {
            let a = 0.01 * k as f64;
            assert!(printed_sufficiency_expression(a) < 0.0, "a = {a}");
        }
    }

    #[test]
    fn mmse_limit() {
        assert!((mmse_limit_constant() - 1.15096392525775803568).abs() < 1e-14);
        assert!(9.0 - 69f64.sqrt() > 0.0);
    }

    #[test]
    fn capacity_lhs_limits() {
        let e = ExpectationEngine::default();
        assert!(capacity_condition_lhs(3, 1e-4, &e).unwrap() < 1e-7);
        assert!(capacity_condition_lhs(2, 2f64.sqrt(), &e).unwrap() <= 1.0);
        let at = capacity_condition_lhs(1, 1.665925641, &e).unwrap();
        assert!((at - 1.0).abs() < 1e-6, "{at}");
    }

    #[test]
    fn rbar_small_dimensions_agree() {
        let e = ExpectationEngine::default();
        let spec = RootSpec::default();
        let main = solve_rbar(1, &spec, &e).unwrap();
        let alt = solve_rbar_alt(1, &spec, &e).unwrap();
        assert!((main.value - 1.6659256412712826).abs() < 1e-8, "{}", main.value);
        assert!((alt.value - main.value).abs() < 1e-8, "{}", alt.value);
        let mmse = solve_rbar_mmse(2, &spec, &e).unwrap();
        assert!((mmse.value - 1.53557735878399).abs() < 5e-3);
    }
}
