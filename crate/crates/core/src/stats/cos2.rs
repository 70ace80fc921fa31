//! Least-squares fit of `Γ_N(d) = A cos²(2kd)`.
//!
//! For a fixed `k` the optimal amplitude is the linear least-squares
//! solution, clamped at zero, so the fit is one-dimensional in `k`: a dense
//! grid over the bracket picks the basin, golden-section search polishes it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GRID_POINTS: usize = 4001;
const GOLDEN_ITERATIONS: usize = 200;

/// Search interval for the wavenumber, 1/mm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KBracket {
    pub k_min: f64,
    pub k_max: f64,
}

impl Default for KBracket {
    fn default() -> Self {
        Self {
            k_min: 0.5,
            k_max: 1.2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cos2Fit {
    pub a_hat: f64,
    pub k_hat: f64,
    pub residual_sse: f64,
    /// `A = 0`, so the data say nothing about `k`.
    pub unidentifiable: bool,
    /// The best grid candidate sat on the bracket boundary.
    pub bracket_edge: bool,
}

/// Optimal clamped amplitude and the resulting squared error at `k`.
fn profile(points: &[(f64, f64)], k: f64) -> (f64, f64) {
    let (mut fy, mut ff) = (0.0, 0.0);
    for &(d, y) in points {
        let f = (2.0 * k * d).cos().powi(2);
        fy += f * y;
        ff += f * f;
    }
    let a = if ff > 0.0 { (fy / ff).max(0.0) } else { 0.0 };
    let sse = points
        .iter()
        .map(|&(d, y)| (y - a * (2.0 * k * d).cos().powi(2)).powi(2))
        .sum();
    (a, sse)
}

pub fn fit_cos2(points: &[(f64, f64)], bracket: KBracket) -> Result<Cos2Fit> {
    if points.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "cos² fit needs at least 4 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|(d, y)| !(d.is_finite() && y.is_finite())) {
        return Err(Error::Domain("non-finite sweep point".into()));
    }
    let KBracket { k_min, k_max } = bracket;
    if !(k_min.is_finite() && k_max.is_finite() && 0.0 < k_min && k_min < k_max) {
        return Err(Error::Domain(format!("invalid k bracket [{k_min}, {k_max}]")));
    }

    if points.iter().all(|&(_, y)| y == 0.0) {
        return Ok(Cos2Fit {
            a_hat: 0.0,
            k_hat: 0.5 * (k_min + k_max),
            residual_sse: 0.0,
            unidentifiable: true,
            bracket_edge: false,
        });
    }

    let step = (k_max - k_min) / (GRID_POINTS - 1) as f64;
    let grid_k = |i: usize| k_min + i as f64 * step;
    let (best_i, best_sse) = (0..GRID_POINTS)
        .map(|i| (i, profile(points, grid_k(i)).1))
        .fold((0, f64::INFINITY), |acc, (i, s)| if s < acc.1 { (i, s) } else { acc });

    let mut lo = (grid_k(best_i) - step).max(k_min);
    let mut hi = (grid_k(best_i) + step).min(k_max);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = profile(points, x1).1;
    let mut f2 = profile(points, x2).1;
    for _ in 0..GOLDEN_ITERATIONS {
        if hi - lo <= 1e-14 * hi {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = profile(points, x1).1;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = profile(points, x2).1;
        }
    }
    let refined = 0.5 * (lo + hi);
    let (refined_a, refined_sse) = profile(points, refined);
    let (k_hat, a_hat, residual_sse) = if refined_sse <= best_sse {
        (refined, refined_a, refined_sse)
    } else {
        let k = grid_k(best_i);
        (k, profile(points, k).0, best_sse)
    };

    Ok(Cos2Fit {
        a_hat,
        k_hat,
        residual_sse,
        unidentifiable: a_hat == 0.0,
        bracket_edge: best_i == 0 || best_i == GRID_POINTS - 1,
    })
}
