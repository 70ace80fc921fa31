use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::IgParams;

/// Closed-form inverse Gaussian maximum-likelihood fit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IgFit {
    pub mu_hat: f64,
    pub lambda_hat: f64,
    pub n: usize,
    pub log_likelihood: f64,
}

impl IgFit {
    pub fn params(&self) -> IgParams {
        IgParams {
            mean: self.mu_hat,
            shape: self.lambda_hat,
        }
    }
}

/// `μ̂ = x̄`, `1/λ̂ = (1/n) Σ (1/xᵢ − 1/x̄)`.
pub fn fit_ig_mle(intervals: &[f64]) -> Result<IgFit> {
    let n = intervals.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 intervals, got {n}"
        )));
    }
    if let Some(bad) = intervals.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::Domain(format!("intervals must be > 0, got {bad}")));
    }
    if intervals.iter().all(|&x| x == intervals[0]) {
        return Err(Error::Degenerate(
            "all intervals are equal; the shape estimate diverges".into(),
        ));
    }
    let nf = n as f64;
    let mean = intervals.iter().sum::<f64>() / nf;
    let inv_mean = 1.0 / mean;
    let dispersion: f64 = intervals.iter().map(|&x| 1.0 / x - inv_mean).sum();
    if !(dispersion > 0.0) {
        return Err(Error::Degenerate(format!(
            "dispersion Σ(1/x − 1/x̄) = {dispersion} is not positive"
        )));
    }
    let lambda = nf / dispersion;
    let log_likelihood = intervals
        .iter()
        .map(|&x| {
            0.5 * (lambda / (2.0 * std::f64::consts::PI * x.powi(3))).ln()
                - lambda * (x - mean).powi(2) / (2.0 * mean * mean * x)
        })
        .sum();
    Ok(IgFit {
        mu_hat: mean,
        lambda_hat: lambda,
        n,
        log_likelihood,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::IgParams;
    use approx::assert_relative_eq;

    #[test]
    fn two_point_closed_form() {
        let fit = fit_ig_mle(&[1.0, 3.0]).unwrap();
        assert_eq!(fit.mu_hat, 2.0);
        assert_eq!(fit.lambda_hat, 6.0);
        assert_eq!(fit.n, 2);
    }

    #[test]
    fn log_likelihood_matches_density() {
        let xs = [0.4, 0.7, 1.3, 0.55];
        let fit = fit_ig_mle(&xs).unwrap();
        let law = IgParams::new(fit.mu_hat, fit.lambda_hat).unwrap();
        let direct: f64 = xs.iter().map(|&x| law.pdf(x).ln()).sum();
        assert_relative_eq!(fit.log_likelihood, direct, max_relative = 1e-12);
    }

    #[test]
    fn likelihood_is_maximal_at_estimate() {
        let xs = [0.4, 0.7, 1.3, 0.55, 0.9, 0.61];
        let fit = fit_ig_mle(&xs).unwrap();
        let ll = |mu: f64, lam: f64| {
            let law = IgParams::new(mu, lam).unwrap();
            xs.iter().map(|&x| law.pdf(x).ln()).sum::<f64>()
        };
        for (dm, dl) in [(1.01, 1.0), (0.99, 1.0), (1.0, 1.02), (1.0, 0.98)] {
            assert!(ll(fit.mu_hat * dm, fit.lambda_hat * dl) < fit.log_likelihood);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(fit_ig_mle(&[0.5, 0.5, 0.5]), Err(Error::Degenerate(_))));
        assert!(matches!(fit_ig_mle(&[0.5, 0.0]), Err(Error::Domain(_))));
        assert!(matches!(fit_ig_mle(&[0.5, -1.0]), Err(Error::Domain(_))));
        assert!(matches!(fit_ig_mle(&[0.5]), Err(Error::InsufficientData(_))));
    }
}
