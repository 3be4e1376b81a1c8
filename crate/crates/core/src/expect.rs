//! Expectations of functionals of chi-square, noncentral chi-square and the
//! boxcar-smoothed Gaussian law, by deterministic quadrature or by seeded
//! Monte Carlo behind one call contract ([`ExpectationEngine`]).
//!
//! Quadrature for `V ~ ncx2(k, lambda)` uses the Poisson mixture
//!
//! ```text
//! E[f(V)] = sum_j Pois(j; lambda/2) E[f(chi2_{k+2j})]
//! ```
//!
//! with a generalized Gauss–Laguerre rule per term. The engine never looks
//! inside `f`; the error estimate is the change under node doubling.
//!
//! Monte Carlo draws come from ChaCha20 (`rand_chacha::ChaCha20Rng`) keyed by
//! `seed`. Samples are produced in chunks of [`MC_CHUNK`]; chunk `c` uses
//! ChaCha stream `c`, so the parallel estimators and the sequential
//! [`sample_ncx2`] iterator see exactly the same draws.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_adaptive, AdaptiveSpec, GaussLaguerre};
use crate::specfun::{gaussian_tail_q, ln_gamma};

/// Name of the generator recorded in run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9), stream = chunk index";

/// Draws per Monte Carlo chunk (one ChaCha stream each).
pub const MC_CHUNK: usize = 1 << 16;

/// `V = ||x + Z||^2` with `Z ~ N(0, I_dof)` and `||x||^2 = noncentrality`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncentralChiSquare {
    dof: usize,
    noncentrality: f64,
}

impl NoncentralChiSquare {
    pub fn new(dof: usize, noncentrality: f64) -> Result<Self> {
        if dof == 0 {
            return Err(domain("NoncentralChiSquare::new", "dof must be at least 1"));
        }
        if !(noncentrality >= 0.0) || !noncentrality.is_finite() {
            return Err(domain(
                "NoncentralChiSquare::new",
                format!("noncentrality must be finite and non-negative, got {noncentrality}"),
            ));
        }
        Ok(Self { dof, noncentrality })
    }

    pub fn central(dof: usize) -> Result<Self> {
        Self::new(dof, 0.0)
    }

    pub fn dof(&self) -> usize {
        self.dof
    }

    pub fn noncentrality(&self) -> f64 {
        self.noncentrality
    }

    pub fn mean(&self) -> f64 {
        self.dof as f64 + self.noncentrality
    }

    pub fn variance(&self) -> f64 {
        2.0 * self.dof as f64 + 4.0 * self.noncentrality
    }
}

/// Law of `W = (W_1, ..., W_n)` with independent components,
/// `W_1 ~ (Q(w - R) - Q(w)) / R` and `W_2..W_n ~ N(0, 1)`.
///
/// `W_1` is distributed as `R U + G` with `U ~ Uniform(0, 1)`, `G ~ N(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxcarGaussianLaw {
    n: usize,
    radius: f64,
}

impl BoxcarGaussianLaw {
    pub fn new(n: usize, radius: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("BoxcarGaussianLaw::new", "dimension must be at least 1"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(domain(
                "BoxcarGaussianLaw::new",
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

    /// Density of `W_1`.
    pub fn first_coordinate_pdf(&self, w: f64) -> f64 {
        let r = self.radius;
        // Q(w - R) - Q(w) = Q(-w) - Q(R - w); pick the form without cancellation
        let diff = if w < 0.5 * r {
            gaussian_tail_q(-w) - gaussian_tail_q(r - w)
        } else {
            gaussian_tail_q(w - r) - gaussian_tail_q(w)
        };
        diff / r
    }

    /// CDF of `W_1`, `P(W_1 <= w) = (1/R) int_0^R Phi(w - R u) du`.
    pub fn first_coordinate_cdf(&self, w: f64) -> f64 {
        // int Phi(t) dt = t Phi(t) + phi(t)
        let big_phi = |t: f64| 1.0 - gaussian_tail_q(t);
        let prim = |t: f64| t * big_phi(t) + crate::specfun::gaussian_pdf(t);
        (prim(w) - prim(w - self.radius)) / self.radius
    }
}

/// Deterministic quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Starting Gauss–Laguerre size; doubled until the estimate settles.
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub poisson_trunc_mass: f64,
    pub radial_trunc_sigmas: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            min_nodes: 32,
            max_nodes: 512,
            poisson_trunc_mass: 1e-14,
            radial_trunc_sigmas: 12.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.poisson_trunc_mass > 0.0
            && self.radial_trunc_sigmas > 0.0
            && self.min_nodes >= 1
            && self.max_nodes >= 15
            && self.min_nodes <= self.max_nodes;
        if ok {
            Ok(())
        } else {
            Err(domain("QuadratureSpec", format!("invalid settings {self:?}")))
        }
    }

    /// Same tolerances, starting from twice the nodes.
    pub fn doubled(&self) -> Self {
        Self {
            min_nodes: 2 * self.min_nodes,
            max_nodes: self.max_nodes.max(4 * self.min_nodes),
            ..*self
        }
    }

    pub(crate) fn adaptive(&self) -> AdaptiveSpec {
        AdaptiveSpec {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_panels: 400,
        }
    }
}

/// Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSpec {
    pub seed: u64,
    pub samples: usize,
}

impl McSpec {
    pub fn new(seed: u64, samples: usize) -> Result<Self> {
        if samples < 1000 {
            return Err(domain(
                "McSpec::new",
                format!("need at least 1000 samples, got {samples}"),
            ));
        }
        Ok(Self { seed, samples })
    }
}

/// A value with its error: a quadrature error estimate, or the Monte Carlo
/// standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Quadrature(QuadratureSpec),
    MonteCarlo(McSpec),
}

type RuleCache = RwLock<HashMap<(usize, usize), Arc<GaussLaguerre>>>;

/// Configured evaluator of `E[f(V)]`.
///
/// Cloning is cheap; clones share the memoized Gauss–Laguerre rules.
#[derive(Debug, Clone)]
pub struct ExpectationEngine {
    method: Method,
    rules: Arc<RuleCache>,
}

impl Default for ExpectationEngine {
    fn default() -> Self {
        Self::quadrature(QuadratureSpec::default()).expect("default spec is valid")
    }
}

impl fmt::Display for ExpectationEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.method {
            Method::Quadrature(q) => write!(
                f,
                "quadrature(rel_tol={:e}, abs_tol={:e}, nodes={}..{}, poisson_trunc_mass={:e}, trunc_sigmas={})",
                q.rel_tol, q.abs_tol, q.min_nodes, q.max_nodes, q.poisson_trunc_mass, q.radial_trunc_sigmas
            ),
            Method::MonteCarlo(m) => write!(
                f,
                "monte-carlo(rng={}, seed={}, samples={}, chunk={})",
                RNG_ALGORITHM, m.seed, m.samples, MC_CHUNK
            ),
        }
    }
}

impl ExpectationEngine {
    pub fn quadrature(spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            method: Method::Quadrature(spec),
            rules: Arc::default(),
        })
    }

    pub fn monte_carlo(spec: McSpec) -> Result<Self> {
        McSpec::new(spec.seed, spec.samples)?;
        Ok(Self {
            method: Method::MonteCarlo(spec),
            rules: Arc::default(),
        })
    }

    pub fn method(&self) -> &Method {
        &self.method
    }

    pub fn is_monte_carlo(&self) -> bool {
        matches!(self.method, Method::MonteCarlo(_))
    }

    /// Quadrature settings (defaults for a Monte Carlo engine, which still
    /// integrates over the SNR path deterministically).
    pub fn quadrature_spec(&self) -> QuadratureSpec {
        match self.method {
            Method::Quadrature(q) => q,
            Method::MonteCarlo(_) => QuadratureSpec::default(),
        }
    }

    /// Settings for deterministic outer integrals (e.g. over the SNR path)
    /// whose integrand calls this engine. Under Monte Carlo the integrand
    /// carries sampling error far above the quadrature defaults, so the
    /// tolerance is relaxed to keep the panel count bounded.
    pub(crate) fn outer_adaptive(&self) -> AdaptiveSpec {
        match self.method {
            Method::Quadrature(q) => q.adaptive(),
            Method::MonteCarlo(_) => AdaptiveSpec {
                rel_tol: 1e-6,
                abs_tol: 1e-8,
                max_panels: 400,
            },
        }
    }

    /// An engine with doubled node counts (quadrature) or doubled samples
    /// (Monte Carlo), sharing this engine's rule cache.
    pub fn refined(&self) -> Self {
        let method = match self.method {
            Method::Quadrature(q) => Method::Quadrature(q.doubled()),
            Method::MonteCarlo(m) => Method::MonteCarlo(McSpec {
                samples: 2 * m.samples,
                ..m
            }),
        };
        Self {
            method,
            rules: Arc::clone(&self.rules),
        }
    }

    /// A looser, cheaper engine for scanning a bracket, sharing this
    /// engine's rule cache. Monte Carlo engines are returned unchanged.
    pub fn coarse(&self) -> Self {
        let method = match self.method {
            Method::Quadrature(q) => Method::Quadrature(QuadratureSpec {
                rel_tol: q.rel_tol.max(1e-7),
                abs_tol: q.abs_tol.max(1e-9),
                min_nodes: 16.min(q.min_nodes),
                ..q
            }),
            m @ Method::MonteCarlo(_) => m,
        };
        Self {
            method,
            rules: Arc::clone(&self.rules),
        }
    }

    /// `E[f(V)]`, `V ~ law`.
    pub fn expect_ncx2<F>(&self, law: &NoncentralChiSquare, f: F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        self.estimate_ncx2(law, f).map(|e| e.value)
    }

    pub fn estimate_ncx2<F>(&self, law: &NoncentralChiSquare, f: F) -> Result<Estimate>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        match &self.method {
            Method::Quadrature(q) => self.quad_ncx2(law, &f, q),
            Method::MonteCarlo(m) => mc_expect_ncx2(law, f, m),
        }
    }

    /// `E[g(W_1, ||W||)]`, `W ~ law`.
    pub fn expect_boxcar<G>(&self, law: &BoxcarGaussianLaw, g: G) -> Result<f64>
    where
        G: Fn(f64, f64) -> Result<f64> + Sync,
    {
        self.estimate_boxcar(law, g).map(|e| e.value)
    }

    pub fn estimate_boxcar<G>(&self, law: &BoxcarGaussianLaw, g: G) -> Result<Estimate>
    where
        G: Fn(f64, f64) -> Result<f64> + Sync,
    {
        match &self.method {
            Method::Quadrature(q) => self.quad_boxcar(law, &g, q),
            Method::MonteCarlo(m) => mc_expect_boxcar(law, g, m),
        }
    }

    fn rule(&self, dof: usize, points: usize) -> Result<Arc<GaussLaguerre>> {
        if let Some(rule) = self.rules.read().expect("rule cache poisoned").get(&(dof, points)) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(GaussLaguerre::new(points, 0.5 * dof as f64 - 1.0)?);
        self.rules
            .write()
            .expect("rule cache poisoned")
            .entry((dof, points))
            .or_insert_with(|| Arc::clone(&rule));
        Ok(rule)
    }

    /// `E[f(chi2_dof)]` by Gauss–Laguerre with node doubling; returns the
    /// finer value and the change under doubling.
    fn chi2_term<F>(&self, dof: usize, f: &F, q: &QuadratureSpec) -> Result<(f64, f64)>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let mut points = q.min_nodes;
        let mut coarse = self.rule(dof, points)?.expect(|t| f(2.0 * t))?;
        loop {
            let fine = self.rule(dof, 2 * points)?.expect(|t| f(2.0 * t))?;
            let error = (fine - coarse).abs();
            let tol = q.abs_tol.max(q.rel_tol * fine.abs());
            if error <= tol {
                return Ok((fine, error));
            }
            if 4 * points > q.max_nodes {
                return self.chi2_term_adaptive(dof, f, q, error, tol);
            }
            points *= 2;
            coarse = fine;
        }
    }

    /// Fallback for integrands with a sharp feature near the origin (e.g.
    /// `tanh^2(a sqrt(v))` with large `a`): adaptive Gauss–Kronrod in the chi
    /// variable `s = sqrt(v)`, where such integrands are smooth.
    fn chi2_term_adaptive<F>(
        &self,
        dof: usize,
        f: &F,
        q: &QuadratureSpec,
        gl_error: f64,
        gl_tol: f64,
    ) -> Result<(f64, f64)>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let k = dof as f64;
        let log_norm = -(0.5 * k - 1.0) * std::f64::consts::LN_2 - ln_gamma(0.5 * k);
        let chi_pdf = |s: f64| {
            if s == 0.0 {
                return if dof == 1 { log_norm.exp() } else { 0.0 };
            }
            (log_norm + (k - 1.0) * s.ln() - 0.5 * s * s).exp()
        };
        let s_hi = k.sqrt() + q.radial_trunc_sigmas;
        let r = integrate_adaptive(|s| Ok(chi_pdf(s) * f(s * s)?), 0.0, s_hi, &q.adaptive()).map_err(|_| {
            Error::NonConvergence {
                what: "chi-square Gauss-Laguerre quadrature",
                estimate: gl_error,
                tolerance: gl_tol,
            }
        })?;
        Ok((r.value, r.error))
    }

    fn quad_ncx2<F>(&self, law: &NoncentralChiSquare, f: &F, q: &QuadratureSpec) -> Result<Estimate>
    where
        F: Fn(f64) -> Result<f64>,
    {
        // each mixture term is refined on its own: low-dof terms need far
        // more nodes than the rest
        let mut value = 0.0;
        let mut error = 0.0;
        for (j, p) in poisson_terms(0.5 * law.noncentrality, q.poisson_trunc_mass) {
            let (v, e) = self.chi2_term(law.dof + 2 * j, f, q)?;
            value += p * v;
            error += p * e;
        }
        Ok(Estimate { value, error })
    }

    fn quad_boxcar<G>(&self, law: &BoxcarGaussianLaw, g: &G, q: &QuadratureSpec) -> Result<Estimate>
    where
        G: Fn(f64, f64) -> Result<f64>,
    {
        let lo = -q.radial_trunc_sigmas;
        let hi = law.radius + q.radial_trunc_sigmas;
        let outer = q.adaptive();
        if law.n == 1 {
            let r = integrate_adaptive(|w| Ok(law.first_coordinate_pdf(w) * g(w, w.abs())?), lo, hi, &outer)?;
            return Ok(Estimate {
                value: r.value,
                error: r.error,
            });
        }
        // ||W|| = sqrt(W_1^2 + s^2) with s ~ chi_{n-1}. The inner integral is
        // taken in s rather than s^2: functionals like W_1/||W|| are nearly
        // singular in s^2 at small |W_1|, which Gauss–Laguerre resolves badly.
        let k = (law.n - 1) as f64;
        let log_norm = -(0.5 * k - 1.0) * std::f64::consts::LN_2 - ln_gamma(0.5 * k);
        let chi_pdf = |s: f64| {
            if s == 0.0 {
                return if law.n == 2 { log_norm.exp() } else { 0.0 };
            }
            (log_norm + (k - 1.0) * s.ln() - 0.5 * s * s).exp()
        };
        let s_hi = k.sqrt() + q.radial_trunc_sigmas;
        let inner = AdaptiveSpec {
            rel_tol: 0.01 * q.rel_tol,
            abs_tol: 0.01 * q.abs_tol,
            max_panels: outer.max_panels,
        };
        let r = integrate_adaptive(
            |w| {
                let density = law.first_coordinate_pdf(w);
                if density == 0.0 {
                    return Ok(0.0);
                }
                let cond = integrate_adaptive(|s| Ok(chi_pdf(s) * g(w, (w * w + s * s).sqrt())?), 0.0, s_hi, &inner)?;
                Ok(density * cond.value)
            },
            lo,
            hi,
            &outer,
        )?;
        Ok(Estimate {
            value: r.value,
            error: r.error,
        })
    }
}

/// Poisson(`mean`) weights `(j, p_j)` covering all but `trunc_mass` of the
/// probability, built outward from the mode.
pub fn poisson_terms(mean: f64, trunc_mass: f64) -> Vec<(usize, f64)> {
    if mean == 0.0 {
        return vec![(0, 1.0)];
    }
    let mode = mean.floor() as usize;
    let log_p = |j: usize| -mean + j as f64 * mean.ln() - ln_gamma(j as f64 + 1.0);
    let p_mode = log_p(mode).exp();
    let half = 0.5 * trunc_mass;

    let mut upper = Vec::new();
    let mut p = p_mode;
    let mut j = mode;
    loop {
        let next = p * mean / (j + 1) as f64;
        // geometric tail bound, valid once terms decrease
        let ratio = mean / (j + 2) as f64;
        if ratio < 1.0 && next / (1.0 - ratio) <= half {
            break;
        }
        j += 1;
        p = next;
        upper.push((j, p));
    }

    let mut lower = Vec::new();
    let mut p = p_mode;
    let mut j = mode;
    while j > 0 {
        let prev = p * j as f64 / mean;
        let ratio = (j - 1) as f64 / mean;
        if ratio < 1.0 && prev / (1.0 - ratio) <= half {
            break;
        }
        j -= 1;
        p = prev;
        lower.push((j, p));
    }

    lower.reverse();
    lower.push((mode, p_mode));
    lower.extend(upper);
    // exp(lgamma) at the mode carries a few ulps of relative error per unit
    // of mean; renormalising costs at most `trunc_mass` of bias
    let total: f64 = lower.iter().map(|t| t.1).sum();
    for t in &mut lower {
        t.1 /= total;
    }
    lower
}

/// Sequential stream of `V ~ law` draws.
///
/// Bit-reproducible for a fixed seed; it yields the same draws, in the same
/// order, as the chunked parallel estimators.
pub fn sample_ncx2(law: NoncentralChiSquare, mc: McSpec) -> NcxSamples {
    NcxSamples {
        law,
        seed: mc.seed,
        remaining: mc.samples,
        chunk: 0,
        in_chunk: 0,
        rng: chunk_rng(mc.seed, 0),
    }
}

#[derive(Debug, Clone)]
pub struct NcxSamples {
    law: NoncentralChiSquare,
    seed: u64,
    remaining: usize,
    chunk: u64,
    in_chunk: usize,
    rng: ChaCha20Rng,
}

impl Iterator for NcxSamples {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.remaining == 0 {
            return None;
        }
        if self.in_chunk == MC_CHUNK {
            self.chunk += 1;
            self.in_chunk = 0;
            self.rng = chunk_rng(self.seed, self.chunk);
        }
        self.remaining -= 1;
        self.in_chunk += 1;
        Some(draw_ncx2(&mut self.rng, &self.law))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for NcxSamples {}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn draw_ncx2<R: Rng>(rng: &mut R, law: &NoncentralChiSquare) -> f64 {
    let shift = law.noncentrality.sqrt();
    let z: f64 = rng.sample(StandardNormal);
    let mut v = (z + shift) * (z + shift);
    for _ in 1..law.dof {
        let z: f64 = rng.sample(StandardNormal);
        v += z * z;
    }
    v
}

/// Draw `(W_1, ||W||)` from the boxcar-smoothed Gaussian law.
fn draw_boxcar<R: Rng>(rng: &mut R, law: &BoxcarGaussianLaw) -> (f64, f64) {
    let u: f64 = rng.random();
    let g: f64 = rng.sample(StandardNormal);
    let w1 = law.radius * u + g;
    let mut sq = w1 * w1;
    for _ in 1..law.n {
        let z: f64 = rng.sample(StandardNormal);
        sq += z * z;
    }
    (w1, sq.sqrt())
}

/// Running sums merged in chunk order so the result is independent of thread
/// scheduling.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Moments { count, mean, m2 }
    }

    fn estimate(&self) -> Estimate {
        let var = if self.count > 1 {
            self.m2 / (self.count - 1) as f64
        } else {
            0.0
        };
        Estimate {
            value: self.mean,
            error: (var / self.count as f64).sqrt(),
        }
    }
}

fn mc_chunked<D>(mc: &McSpec, draw_and_eval: D) -> Result<Estimate>
where
    D: Fn(&mut ChaCha20Rng) -> Result<f64> + Sync,
{
    let chunks = mc.samples.div_ceil(MC_CHUNK);
    let parts: Vec<Result<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(mc.seed, c as u64);
            let len = MC_CHUNK.min(mc.samples - c * MC_CHUNK);
            let mut m = Moments::default();
            for _ in 0..len {
                m.push(draw_and_eval(&mut rng)?);
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::default();
    for part in parts {
        total = total.merge(part?);
    }
    Ok(total.estimate())
}

/// Monte Carlo `E[f(V)]` with its standard error.
pub fn mc_expect_ncx2<F>(law: &NoncentralChiSquare, f: F, mc: &McSpec) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    mc_chunked(mc, |rng| f(draw_ncx2(rng, law)))
}

/// Monte Carlo `E[g(W_1, ||W||)]` with its standard error.
pub fn mc_expect_boxcar<G>(law: &BoxcarGaussianLaw, g: G, mc: &McSpec) -> Result<Estimate>
where
    G: Fn(f64, f64) -> Result<f64> + Sync,
{
    mc_chunked(mc, |rng| {
        let (w1, norm) = draw_boxcar(rng, law);
        g(w1, norm)
    })
}

/// Sequential stream of `W_1` draws (`R U + G`), chunked like the other samplers.
pub fn sample_boxcar_first(law: BoxcarGaussianLaw, mc: McSpec) -> impl Iterator<Item = f64> {
    let one_dim = BoxcarGaussianLaw { n: 1, ..law };
    (0..mc.samples.div_ceil(MC_CHUNK)).flat_map(move |c| {
        let mut rng = chunk_rng(mc.seed, c as u64);
        let len = MC_CHUNK.min(mc.samples - c * MC_CHUNK);
        (0..len).map(move |_| draw_boxcar(&mut rng, &one_dim).0)
    })
}
