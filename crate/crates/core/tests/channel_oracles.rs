//! Channel quantities against direct simulation of `Y = sqrt(gamma) X + Z`.
//! Nothing here goes through the noncentral chi-square engine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use spherecap::channel::{self, ChannelSpec, SnrFraction};
use spherecap::expect::ExpectationEngine;
use spherecap::specfun::bessel_ratio;

const N: usize = 400_000;

fn gauss(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Posterior mean `E[X | Y = y]` for the sphere of radius `R` at SNR `gamma`.
fn posterior_mean(n: usize, r: f64, gamma: f64, y: &[f64]) -> Vec<f64> {
    let s = gamma.sqrt();
    let t = norm(y);
    if t == 0.0 {
        return vec![0.0; n];
    }
    let scale = r * bessel_ratio(0.5 * n as f64, s * r * t).unwrap() / t;
    y.iter().map(|v| scale * v).collect()
}

struct Sim {
    mse: (f64, f64),
    energy: (f64, f64),
}

/// Simulate with `X` uniform on the sphere, or pinned to `x` when given.
fn simulate(n: usize, r: f64, gamma: f64, x: Option<&[f64]>, seed: u64) -> Sim {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut m1, mut m2, mut e1, mut e2) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..N {
        let x: Vec<f64> = match x {
            Some(x) => x.to_vec(),
            None => {
                let g = gauss(&mut rng, n);
                let k = r / norm(&g);
                g.iter().map(|v| k * v).collect()
            }
        };
        let z = gauss(&mut rng, n);
        let y: Vec<f64> = x.iter().zip(&z).map(|(a, b)| gamma.sqrt() * a + b).collect();
        let xhat = posterior_mean(n, r, gamma, &y);
        let err: f64 = x.iter().zip(&xhat).map(|(a, b)| (a - b).powi(2)).sum();
        let en = norm(&xhat).powi(2);
        m1 += err;
        m2 += err * err;
        e1 += en;
        e2 += en * en;
    }
    let n = N as f64;
    let se = |s: f64, s2: f64| ((s2 / n - (s / n).powi(2)) / n).sqrt();
    Sim {
        mse: (m1 / n, se(m1, m2)),
        energy: (e1 / n, se(e1, e2)),
    }
}

#[test]
fn mmse_matches_simulation() {
    let engine = ExpectationEngine::default();
    for (n, r, g, seed) in [(1usize, 1.0, 1.0, 1u64), (3, 2.0, 0.5, 2), (5, 2.5, 1.0, 3)] {
        let spec = ChannelSpec::new(n, r).unwrap();
        let m = channel::mmse_at_snr(&spec, SnrFraction::new(g).unwrap(), &engine).unwrap();
        let sim = simulate(n, r, g, None, seed);
        let (mc, se) = sim.mse;
        assert!(
            (m - mc).abs() < 4.0 * se,
            "n {n} R {r}: mmse {m} vs simulated {mc} ± {se}"
        );
        // orthogonality: E||E[X|Y]||^2 + mmse = R^2
        let split = sim.energy.0 + sim.mse.0;
        assert!(
            (split - r * r).abs() < 4.0 * (sim.energy.1 + sim.mse.1),
            "energy split {split}"
        );
    }
}

#[test]
fn posterior_energy_at_zero_matches_simulation() {
    let engine = ExpectationEngine::default();
    for (n, r, g, seed) in [(1usize, 1.0, 1.0, 11u64), (3, 2.0, 0.5, 12)] {
        let spec = ChannelSpec::new(n, r).unwrap();
        let e = channel::posterior_energy_at_zero(&spec, SnrFraction::new(g).unwrap(), &engine).unwrap();
        let zero = vec![0.0; n];
        let (mc, se) = simulate(n, r, g, Some(&zero), seed).energy;
        assert!(
            (e - mc).abs() < 4.0 * se,
            "n {n} R {r}: energy {e} vs simulated {mc} ± {se}"
        );
    }
}

#[test]
fn info_density_matches_simulation_in_any_direction() {
    let engine = ExpectationEngine::default();
    let (n, r) = (3usize, 2.0);
    let spec = ChannelSpec::new(n, r).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for xnorm in [0.0, 1.0, 2.0] {
        let want = channel::info_density(&spec, xnorm, &engine).unwrap();
        for _ in 0..2 {
            let d = gauss(&mut rng, n);
            let k = xnorm / norm(&d);
            let x: Vec<f64> = d.iter().map(|v| k * v).collect();
            // i(x) = E[log f_{Y|X}(Y|x) - log f_Y(Y)], Y = x + Z
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..N / 4 {
                let z = gauss(&mut rng, n);
                let y: Vec<f64> = x.iter().zip(&z).map(|(a, b)| a + b).collect();
                let cond = -0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln() - 0.5 * norm(&z).powi(2);
                let v = cond - channel::log_output_pdf(&spec, norm(&y)).unwrap();
                s += v;
                s2 += v * v;
            }
            let m = (N / 4) as f64;
            let mc = s / m;
            let se = ((s2 / m - mc * mc) / m).sqrt();
            assert!(
                (want - mc).abs() < 4.0 * se,
                "|x| {xnorm}: {want} vs simulated {mc} ± {se}"
            );
        }
    }
}
