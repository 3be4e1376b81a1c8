//! Property-based invariants across the special functions, the expectation
//! engine and the channel quantities.

use proptest::prelude::*;

use spherecap::channel::{self, ChannelSpec, SnrFraction};
use spherecap::expect::{poisson_terms, sample_ncx2, ExpectationEngine, McSpec, NoncentralChiSquare};
use spherecap::specfun::{
    bessel_ratio, bessel_ratio_bounds, bessel_ratio_over_arg, log_bessel_i_normalized, log_bessel_i_scaled,
};

fn order() -> impl Strategy<Value = f64> {
    (1usize..=64).prop_map(|n| 0.5 * n as f64)
}

fn argument() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn ratio_in_unit_interval(v in order(), x in argument()) {
        let h = bessel_ratio(v, x).unwrap();
        prop_assert!((0.0..=1.0).contains(&h));
    }

    #[test]
    fn ratio_increasing_in_argument(v in order(), x in argument(), bump in 1.001f64..2.0) {
        let a = bessel_ratio(v, x).unwrap();
        let b = bessel_ratio(v, x * bump).unwrap();
        // monotone up to a few ulps where the ratio saturates at one
        prop_assert!(b >= a - 4.0 * f64::EPSILON, "h_{v}({x}) = {a} > h_{v}({}) = {b}", x * bump);
    }

    #[test]
    fn ratio_decreasing_in_order(v in order(), x in argument()) {
        let a = bessel_ratio(v, x).unwrap();
        let b = bessel_ratio(v + 0.5, x).unwrap();
        prop_assert!(b <= a + 4.0 * f64::EPSILON);
    }

    #[test]
    fn ratio_within_sandwich(n in 2usize..=128, x in argument()) {
        let v = 0.5 * n as f64;
        let h = bessel_ratio(v, x).unwrap();
        prop_assert!(bessel_ratio_bounds(v, x).unwrap().contains(h));
    }

    #[test]
    fn ratio_recurrence(v in order(), x in argument()) {
        // I_{v-1}/I_v = 2v/x + I_{v+1}/I_v
        let lhs = 1.0 / bessel_ratio(v, x).unwrap();
        let rhs = 2.0 * v / x + bessel_ratio(v + 1.0, x).unwrap();
        prop_assert!(((lhs - rhs) / lhs).abs() < 1e-12);
        let over = bessel_ratio_over_arg(v, x).unwrap();
        prop_assert!((over * x - bessel_ratio(v, x).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn log_bessel_matches_ratio(v in order(), x in (-2.0f64..2.5).prop_map(|e| 10f64.powf(e))) {
        let h = bessel_ratio(v, x).unwrap();
        let d = log_bessel_i_scaled(v, x).unwrap() - log_bessel_i_scaled(v - 1.0, x).unwrap();
        prop_assert!((d - h.ln()).abs() < 1e-10 * (1.0 + d.abs()), "v {v} x {x}: {d} vs {}", h.ln());
        let norm = log_bessel_i_normalized(v, x).unwrap();
        prop_assert!((norm + v * x.ln() - log_bessel_i_scaled(v, x).unwrap()).abs() < 1e-10 * (1.0 + norm.abs()));
    }

    #[test]
    fn poisson_terms_cover_mass(mean in 0.0f64..200.0) {
        let terms = poisson_terms(mean, 1e-14);
        let mass: f64 = terms.iter().map(|t| t.1).sum();
        prop_assert!((1.0 - mass).abs() < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ncx2_first_two_moments(dof in 1usize..=30, lambda in 0.0f64..60.0) {
        let e = ExpectationEngine::default();
        let law = NoncentralChiSquare::new(dof, lambda).unwrap();
        let m = e.expect_ncx2(&law, Ok).unwrap();
        prop_assert!((m - law.mean()).abs() < 1e-9 * law.mean());
        let mu = law.mean();
        let var = e.expect_ncx2(&law, |v| Ok((v - mu) * (v - mu))).unwrap();
        prop_assert!((var - law.variance()).abs() < 1e-8 * law.variance());
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>(), dof in 1usize..=8, lambda in 0.0f64..10.0) {
        let law = NoncentralChiSquare::new(dof, lambda).unwrap();
        let mc = McSpec::new(seed, 2000).unwrap();
        let a: Vec<u64> = sample_ncx2(law, mc).map(f64::to_bits).collect();
        let b: Vec<u64> = sample_ncx2(law, mc).map(f64::to_bits).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn posterior_mean_stays_inside(n in 1usize..=20, r in 0.05f64..10.0, y in 0.0f64..50.0) {
        let spec = ChannelSpec::new(n, r).unwrap();
        let m = channel::conditional_mean_magnitude(&spec, y).unwrap();
        prop_assert!(m >= 0.0 && m <= r);
        prop_assert!(channel::output_pdf(&spec, y).unwrap() >= 0.0);
    }

    #[test]
    fn mmse_between_zero_and_gaussian(n in 1usize..=10, r in 0.1f64..6.0, g in 0.0f64..=1.0) {
        let e = ExpectationEngine::default();
        let spec = ChannelSpec::new(n, r).unwrap();
        let gamma = SnrFraction::new(g).unwrap();
        let m = channel::mmse_at_snr(&spec, gamma, &e).unwrap();
        prop_assert!(m >= 0.0 && m <= r * r * (1.0 + 1e-12));
        // the Gaussian input with the same power has the larger MMSE
        let snr_r = g.sqrt() * r;
        prop_assert!(g * m <= channel::mmse_gaussian_reference(n, snr_r) + 1e-10);
    }
}
