use serde::{Deserialize, Serialize};

use crate::coupled::EventTrain;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimate {
    /// Pearson correlation of the two binned count series.
    pub c: f64,
    pub bin_width: f64,
    pub n_bins: usize,
}

/// Number of whole bins of `width` that fit in `duration`.
pub(crate) fn whole_bins(duration: f64, width: f64) -> Result<usize> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::Domain(format!("bin width must be > 0, got {width}")));
    }
    // guards 3000 / 0.5 style ratios against landing a hair below an integer
    Ok((duration / width * (1.0 + 1e-12)).floor() as usize)
}

/// Event counts in the bins `((i−1)w, iw]`, `i = 1..=n_bins`. Events past
/// the last whole bin are dropped.
pub fn binned_counts(train: &EventTrain, bin_width: f64, n_bins: usize) -> Vec<f64> {
    let mut counts = vec![0.0; n_bins];
    for &t in train.timestamps() {
        let idx = ((t / bin_width).ceil() as usize).saturating_sub(1);
        if idx < n_bins {
            counts[idx] += 1.0;
        }
    }
    counts
}

/// Pearson correlation between the counts of two trains on a common grid.
pub fn binned_pearson(a: &EventTrain, b: &EventTrain, bin_width: f64) -> Result<CorrelationEstimate> {
    let duration = a.duration();
    if (duration - b.duration()).abs() > 1e-9 * duration {
        return Err(Error::Domain(format!(
            "trains cover different windows: {} s vs {} s",
            duration,
            b.duration()
        )));
    }
    let n_bins = whole_bins(duration, bin_width)?;
    if n_bins < 10 {
        return Err(Error::InsufficientData(format!(
            "T/bin = {n_bins} bins, need at least 10"
        )));
    }
    let xa = binned_counts(a, bin_width, n_bins);
    let xb = binned_counts(b, bin_width, n_bins);
    let c = pearson(&xa, &xb).ok_or_else(|| {
        Error::Undefined("a binned count series has zero variance".into())
    })?;
    Ok(CorrelationEstimate {
        c,
        bin_width,
        n_bins,
    })
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}
