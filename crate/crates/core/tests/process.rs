mod common;

use cavity_emission::stats::ks_statistic;
use cavity_emission::{
    ig_cdf, ig_pdf, sample_first_passage_exact, simulate_path_to_crossing, CavityParams, IgParams,
    RngStream,
};
use common::{integrate, mean_var};
use proptest::prelude::*;

#[test]
fn density_normalises() {
    for (mu, lambda) in [(1.0, 1.0), (0.68, 3.3), (1.0, 3.3), (2.0, 0.5), (0.3, 40.0)] {
        let law = IgParams::new(mu, lambda).unwrap();
        let pdf = |t: f64| law.pdf(t);
        // density decays like exp(-λt/2μ²); 200 mean lengths is far past it
        let split = [0.0, 0.25 * mu, mu, 4.0 * mu, 20.0 * mu, 200.0 * mu * (1.0 + mu / lambda)];
        let total: f64 = split.windows(2).map(|w| integrate(&pdf, w[0], w[1], 1e-14)).sum();
        assert!((total - 1.0).abs() < 1e-9, "μ={mu} λ={lambda}: ∫ = {total}");
    }
}

#[test]
fn cdf_matches_quadrature_of_density() {
    for (mu, lambda) in [(1.0, 1.0), (0.68, 3.3), (2.0, 0.5)] {
        let law = IgParams::new(mu, lambda).unwrap();
        let pdf = |t: f64| law.pdf(t);
        for t in [0.05, 0.3, 0.68, 1.0, 2.5, 7.0] {
            let oracle = integrate(&pdf, 0.0, t, 1e-15);
            let got = ig_cdf(t, &law).unwrap();
            assert!((got - oracle).abs() < 1e-11, "μ={mu} λ={lambda} t={t}: {got} vs {oracle}");
        }
    }
    // frozen from the same quadrature at 40 digits
    let unit = IgParams::new(1.0, 1.0).unwrap();
    assert!((ig_cdf(1.0, &unit).unwrap() - 0.668_102_001_223_170_6).abs() < 1e-14);
}

#[test]
fn cdf_derivative_is_density() {
    let law = IgParams::new(0.68, 3.3).unwrap();
    let mut t = 0.1;
    while t < 3.0 {
        let h = 1e-5 * t;
        let numeric = (law.cdf(t + h) - law.cdf(t - h)) / (2.0 * h);
        let exact = ig_pdf(t, &law).unwrap();
        assert!(((numeric - exact) / exact).abs() < 1e-6, "t={t}: {numeric} vs {exact}");
        t += 0.05;
    }
}

proptest! {
    #[test]
    fn cdf_is_monotone(mu in 0.01f64..10.0, lambda in 0.01f64..1e4, t1 in 1e-4f64..50.0, dt in 0.0f64..50.0) {
        let law = IgParams::new(mu, lambda).unwrap();
        let (a, b) = (law.cdf(t1), law.cdf(t1 + dt));
        prop_assert!(a <= b, "F({}) = {} > F({}) = {}", t1, a, t1 + dt, b);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn pdf_is_nonnegative_and_finite(mu in 0.01f64..10.0, lambda in 0.01f64..1e6, t in 1e-6f64..1e3) {
        let v = ig_pdf(t, &IgParams::new(mu, lambda).unwrap()).unwrap();
        prop_assert!(v >= 0.0 && v.is_finite());
    }
}

#[test]
fn exact_sampler_moments_within_three_standard_errors() {
    let law = IgParams::new(0.68, 3.3).unwrap();
    let mut rng = RngStream::new(101, 0).rng();
    let n = 1_000_000;
    let xs: Vec<f64> = (0..n).map(|_| sample_first_passage_exact(&law, &mut rng)).collect();
    let (mean, var) = mean_var(&xs);
    let se_mean = (law.variance() / n as f64).sqrt();
    assert!((mean - 0.68).abs() < 3.0 * se_mean, "mean {mean}");
    assert!((mean - 0.68).abs() < 0.01);
    // Var of the sample variance: (μ4 − σ⁴)/n with μ4 = σ⁴(3 + 15μ/λ)
    let sigma4 = law.variance().powi(2);
    let se_var = (sigma4 * (2.0 + 15.0 * law.mean / law.shape) / n as f64).sqrt();
    assert!((var - law.variance()).abs() < 3.0 * se_var, "var {var} vs {}", law.variance());
    assert!(((var - 0.0953) / 0.0953).abs() < 0.05);
    let d = ks_statistic(&xs, |t| law.cdf(t)).unwrap();
    assert!(d < 0.002, "KS {d}");
}

fn discretised_ks(dt: f64, n: usize, seed: u64) -> f64 {
    let c = CavityParams::new(1.47, 0.55, 1.0).unwrap();
    let law = c.first_passage_law();
    let mut rng = RngStream::new(seed, 0).rng();
    let ts: Vec<f64> = (0..n)
        .map(|_| simulate_path_to_crossing(&c, dt, &mut rng).unwrap())
        .collect();
    ks_statistic(&ts, |t| law.cdf(t)).unwrap()
}

#[test]
fn discretised_path_matches_exact_law() {
    let d = discretised_ks(1e-3, 100_000, 7);
    assert!(d < 0.02, "KS {d}");
}

#[test]
fn discretisation_error_shrinks_with_step() {
    // large samples so that the bias, not sampling noise, dominates
    let ks: Vec<f64> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|&dt| discretised_ks(dt, 100_000, 7))
        .collect();
    // sampling noise of the KS distance at n = 1e5 is about 0.003
    let noise = 0.003;
    assert!(ks[1] <= ks[0] + noise && ks[2] <= ks[1] + noise, "{ks:?}");
    assert!(ks[2] < ks[0], "{ks:?}");
}

#[test]
fn naive_threshold_detection_is_worse_than_bridge() {
    // a coarse step without the bridge check would be biased late; with it
    // the law stays close even at dt = 1e-2
    let d = discretised_ks(1e-2, 50_000, 9);
    assert!(d < 0.03, "KS {d}");
}

#[test]
fn identical_streams_are_bit_identical() {
    let c = CavityParams::new(1.47, 0.55, 1.0).unwrap();
    let run = |seed, stream| {
        let mut rng = RngStream::new(seed, stream).rng();
        (0..200)
            .map(|_| simulate_path_to_crossing(&c, 1e-3, &mut rng).unwrap().to_bits())
            .collect::<Vec<_>>()
    };
    assert_eq!(run(3, 1), run(3, 1));
    assert_ne!(run(3, 1), run(3, 2));
}
