//! Single-cavity amplitude process and its first-passage law.
//!
//! Between emissions the amplitude evolves as `X_t = ν t + σ W_t` from
//! `X_0 = 0`. The first time it reaches the threshold `α` is inverse Gaussian
//! with mean `α/ν` and shape `α²/σ²`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// Drift, noise amplitude and emission threshold of one cavity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    /// Drift ν, amplitude units per second.
    pub drift: f64,
    /// Noise amplitude σ, amplitude units per √second.
    pub noise: f64,
    /// Emission threshold α, amplitude units.
    pub threshold: f64,
}

impl CavityParams {
    pub fn new(drift: f64, noise: f64, threshold: f64) -> Result<Self> {
        let p = Self {
            drift,
            noise,
            threshold,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters whose first-passage law has the given mean interval and
    /// shape, for a chosen threshold.
    pub fn from_first_passage(mean: f64, shape: f64, threshold: f64) -> Result<Self> {
        require_positive("mean", mean)?;
        require_positive("shape", shape)?;
        Self::new(threshold / mean, threshold / shape.sqrt(), threshold)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("drift", self.drift)?;
        require_positive("noise", self.noise)?;
        require_positive("threshold", self.threshold)
    }

    /// The inverse Gaussian law of the first passage from 0 to the threshold:
    /// mean `α/ν`, shape `α²/σ²`.
    pub fn first_passage_law(&self) -> IgParams {
        IgParams {
            mean: self.threshold / self.drift,
            shape: (self.threshold / self.noise).powi(2),
        }
    }
}

/// Mean `μ` and shape `λ` of an inverse Gaussian distribution, both in
/// seconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IgParams {
    pub mean: f64,
    pub shape: f64,
}

impl IgParams {
    pub fn new(mean: f64, shape: f64) -> Result<Self> {
        require_positive("mean", mean)?;
        require_positive("shape", shape)?;
        Ok(Self { mean, shape })
    }

    pub fn variance(&self) -> f64 {
        self.mean.powi(3) / self.shape
    }

    /// Density, zero for `t <= 0`.
    pub fn pdf(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        if t.is_infinite() {
            return 0.0;
        }
        let (mu, lambda) = (self.mean, self.shape);
        let exponent = -lambda * (t - mu).powi(2) / (2.0 * mu * mu * t);
        (lambda / (2.0 * std::f64::consts::PI * t.powi(3))).sqrt() * exponent.exp()
    }

    /// Distribution function, zero for `t <= 0`.
    ///
    /// Uses `Φ(√(λ/t)(t/μ−1)) + e^{2λ/μ} Φ(−√(λ/t)(t/μ+1))`. The second
    /// term is evaluated through the scaled complementary error function so
    /// that the `e^{2λ/μ}` factor never materialises.
    pub fn cdf(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        if t.is_infinite() {
            return 1.0;
        }
        let (mu, lambda) = (self.mean, self.shape);
        let root = (lambda / t).sqrt();
        let lower = normal_cdf(root * (t / mu - 1.0));
        let b = root * (t / mu + 1.0);
        // e^{2λ/μ} Φ(−b) = ½ erfcx(b/√2) e^{2λ/μ − b²/2}
        //               = ½ erfcx(b/√2) e^{−λ(t−μ)²/(2μ²t)}
        let upper = 0.5
            * erfcx(b / std::f64::consts::SQRT_2)
            * (-lambda * (t - mu).powi(2) / (2.0 * mu * mu * t)).exp();
        (lower + upper).clamp(0.0, 1.0)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && !t.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time must be > 0, got {t}")))
    }
}

/// Inverse Gaussian density at `t > 0`.
pub fn ig_pdf(t: f64, p: &IgParams) -> Result<f64> {
    check_time(t)?;
    Ok(p.pdf(t))
}

/// Inverse Gaussian distribution function at `t > 0`.
pub fn ig_cdf(t: f64, p: &IgParams) -> Result<f64> {
    check_time(t)?;
    Ok(p.cdf(t))
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// `erfc(x)·e^{x²}` for `x >= 0`.
fn erfcx(x: f64) -> f64 {
    if x < 25.0 {
        libm::erfc(x) * (x * x).exp()
    } else {
        // Asymptotic series; the first omitted term is below 1e-10 relative.
        let inv2 = 1.0 / (x * x);
        (1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2 - 1.875 * inv2.powi(3))
            / (x * std::f64::consts::PI.sqrt())
    }
}

/// Draws one first-passage time from the inverse Gaussian law.
///
/// Normal-transform method with a single uniform choosing between the two
/// roots: `x = μ(S − μy)/(S + μy)` with `y = z²` and
/// `S = √(μ²y² + 4μλy)`, written as `4μ²λy/(S + μy)²` to avoid cancellation
/// when `λ ≫ μy`. Accept `x` with probability `μ/(μ + x)`, otherwise return
/// `μ²/x`.
pub fn sample_first_passage_exact<R: Rng + ?Sized>(p: &IgParams, rng: &mut R) -> f64 {
    let (mu, lambda) = (p.mean, p.shape);
    let z: f64 = rng.sample(StandardNormal);
    let y = z * z;
    let x = if y == 0.0 {
        mu
    } else {
        let my = mu * y;
        let s = (my * my + 4.0 * mu * lambda * y).sqrt();
        4.0 * mu * mu * lambda * y / (s + my).powi(2)
    };
    let u: f64 = rng.random();
    if u <= mu / (mu + x) {
        x
    } else {
        mu * mu / x
    }
}

/// Simulates the amplitude from 0 on a grid of step `dt` and returns the
/// first crossing time of the threshold.
///
/// Each Euler step `X += ν dt + σ √dt ξ` that lands at or above `α` is a
/// crossing, located by linear interpolation inside the step. A step that
/// stays below `α` still crosses with the Brownian-bridge probability
/// `exp(−2(α−X_t)(α−X_{t+dt})/(σ² dt))`; such crossings are reported at the
/// step midpoint.
pub fn simulate_path_to_crossing<R: Rng + ?Sized>(
    c: &CavityParams,
    dt: f64,
    rng: &mut R,
) -> Result<f64> {
    c.validate()?;
    check_dt(dt)?;
    Ok(first_passage_within(c, dt, f64::INFINITY, rng).expect("unbounded horizon"))
}

pub(crate) fn check_dt(dt: f64) -> Result<()> {
    if dt.is_finite() && dt > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("time step must be finite and > 0, got {dt}")))
    }
}

/// First crossing time if it happens no later than `horizon`; the path is
/// abandoned once the grid passes the horizon.
pub(crate) fn first_passage_within<R: Rng + ?Sized>(
    c: &CavityParams,
    dt: f64,
    horizon: f64,
    rng: &mut R,
) -> Option<f64> {
    let stepper = Stepper::new(c, dt);
    let mut x = 0.0;
    let mut step: u64 = 0;
    loop {
        let t0 = step as f64 * dt;
        if t0 >= horizon {
            return None;
        }
        let xi: f64 = rng.sample(StandardNormal);
        let u: f64 = rng.random();
        match stepper.advance(x, c.drift, xi, u) {
            Step::Crossed { frac } => {
                let t = t0 + frac * dt;
                return (t <= horizon).then_some(t);
            }
            Step::Continue(next) => x = next,
        }
        step += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Step {
    /// Crossed at `t0 + frac·dt`, `frac ∈ (0, 1]`.
    Crossed { frac: f64 },
    Continue(f64),
}

/// Euler step with the Brownian-bridge crossing check, for one cavity at a
/// fixed step size.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Stepper {
    dt: f64,
    noise_step: f64,
    bridge_scale: f64,
    threshold: f64,
}

impl Stepper {
    pub(crate) fn new(c: &CavityParams, dt: f64) -> Self {
        Self {
            dt,
            noise_step: c.noise * dt.sqrt(),
            bridge_scale: -2.0 / (c.noise * c.noise * dt),
            threshold: c.threshold,
        }
    }

    /// Advances `x` under `drift` using the normal draw `xi` and the uniform
    /// `u` reserved for the bridge check.
    #[inline]
    pub(crate) fn advance(&self, x: f64, drift: f64, xi: f64, u: f64) -> Step {
        let next = x + drift * self.dt + self.noise_step * xi;
        let alpha = self.threshold;
        if next >= alpha {
            let frac = (alpha - x) / (next - x);
            return Step::Crossed {
                frac: frac.clamp(f64::MIN_POSITIVE, 1.0),
            };
        }
        let log_p = self.bridge_scale * (alpha - x) * (alpha - next);
        // e^-60 is below the resolution of a 53-bit uniform
        if log_p > -60.0 && u < log_p.exp() {
            Step::Crossed { frac: 0.5 }
        } else {
            Step::Continue(next)
        }
    }
}
