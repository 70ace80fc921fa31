use crate::coupled::EventTrain;
use crate::error::{Error, Result};

/// Events per second over the train's window.
pub fn emission_rate(train: &EventTrain) -> f64 {
    train.len() as f64 / train.duration()
}

/// `(Γ − 2Γ0) / (2Γ0)`: relative excess of a pair's rate over two isolated
/// cavities.
pub fn anomalous_rate(gamma: f64, gamma0: f64) -> Result<f64> {
    if !(gamma0.is_finite() && gamma0 > 0.0) {
        return Err(Error::Domain(format!("Γ0 must be > 0, got {gamma0}")));
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::Domain(format!("Γ must be >= 0, got {gamma}")));
    }
    Ok((gamma - 2.0 * gamma0) / (2.0 * gamma0))
}

pub fn inter_emission_intervals(train: &EventTrain) -> Result<Vec<f64>> {
    if train.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 events for intervals, got {}",
            train.len()
        )));
    }
    Ok(train.timestamps().windows(2).map(|w| w[1] - w[0]).collect())
}
