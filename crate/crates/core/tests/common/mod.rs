#![allow(dead_code)]

use cavity_emission::config::RunConfig;
use cavity_emission::coupled::CouplingLaw;
use cavity_emission::CavityParams;

/// Adaptive Simpson quadrature with Richardson correction.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// The calibrated single-cavity parameters shipped as config defaults.
pub fn calibrated_cavity() -> CavityParams {
    RunConfig::default().cavity_a().unwrap()
}

pub fn calibrated_law() -> CouplingLaw {
    RunConfig::default().coupling_law().unwrap()
}

/// Antinode of the default coupling law nearest 9.24 mm.
pub fn antinode() -> f64 {
    calibrated_law().nearest_antinode(9.24)
}

/// Node next to the antinode.
pub fn node() -> f64 {
    antinode() + std::f64::consts::PI / (4.0 * calibrated_law().wavenumber)
}
