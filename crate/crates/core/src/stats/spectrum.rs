//! Spectral flatness of a binned event train.
//!
//! The power spectrum is a Welch estimate: Hann-windowed segments of
//! [`FLATNESS_SEGMENT`] bins with 50% overlap, averaged. Averaging matters:
//! a single periodogram of white noise has exponentially distributed
//! ordinates and a flatness near `e^{−γ} ≈ 0.56`, whereas the averaged
//! estimate of the same noise sits close to 1.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::correlation::{binned_counts, whole_bins};
use crate::coupled::EventTrain;
use crate::error::{Error, Result};

/// Bins per Welch segment; also the minimum number of bins accepted.
pub const FLATNESS_SEGMENT: usize = 64;

/// Geometric over arithmetic mean of the nonzero-frequency power spectrum of
/// the mean-removed bin counts. Close to 1 when no frequency dominates.
pub fn spectrum_flatness(train: &EventTrain, bin_width: f64) -> Result<f64> {
    let n_bins = whole_bins(train.duration(), bin_width)?;
    if n_bins < FLATNESS_SEGMENT {
        return Err(Error::InsufficientData(format!(
            "spectral flatness needs at least {FLATNESS_SEGMENT} bins, got {n_bins}"
        )));
    }
    let mut counts = binned_counts(train, bin_width, n_bins);
    if counts.iter().all(|&c| c == 0.0) {
        return Err(Error::Undefined("no events in any bin".into()));
    }
    let mean = counts.iter().sum::<f64>() / n_bins as f64;
    counts.iter_mut().for_each(|c| *c -= mean);

    let power = welch(&counts);
    let arith = power.iter().sum::<f64>() / power.len() as f64;
    if !(arith > 0.0) {
        return Err(Error::Undefined("bin counts are constant".into()));
    }
    if power.iter().any(|&p| p <= 0.0) {
        return Ok(0.0);
    }
    let geo = (power.iter().map(|p| p.ln()).sum::<f64>() / power.len() as f64).exp();
    Ok((geo / arith).clamp(0.0, 1.0))
}

/// Averaged power at frequency indices `1..=SEGMENT/2`.
fn welch(x: &[f64]) -> Vec<f64> {
    let seg = FLATNESS_SEGMENT;
    let hop = seg / 2;
    let window: Vec<f64> = (0..seg)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / seg as f64).cos())
        .collect();
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(seg);
    let mut power = vec![0.0; seg / 2];
    let mut buf = vec![Complex::new(0.0, 0.0); seg];
    let mut segments = 0usize;
    let mut start = 0;
    while start + seg <= x.len() {
        for (b, (v, w)) in buf.iter_mut().zip(x[start..start + seg].iter().zip(&window)) {
            *b = Complex::new(v * w, 0.0);
        }
        fft.process(&mut buf);
        for (p, c) in power.iter_mut().zip(&buf[1..=seg / 2]) {
            *p += c.norm_sqr();
        }
        segments += 1;
        start += hop;
    }
    power.iter_mut().for_each(|p| *p /= segments as f64);
    power
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_train_is_flagged() {
        let duration = 3000.0;
        let ts: Vec<f64> = (1..).map(|i| i as f64 * 0.68).take_while(|&t| t <= duration).collect();
        let f = spectrum_flatness(&EventTrain::new(ts, duration).unwrap(), 0.5).unwrap();
        assert!(f < 0.3, "flatness = {f}");
    }

    #[test]
    fn too_few_bins() {
        let t = EventTrain::new(vec![1.0, 2.0], 20.0).unwrap();
        assert!(matches!(spectrum_flatness(&t, 0.5), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn no_events_is_undefined() {
        let t = EventTrain::empty(100.0).unwrap();
        assert!(matches!(spectrum_flatness(&t, 0.5), Err(Error::Undefined(_))));
    }

    #[test]
    fn constant_counts_are_undefined() {
        let ts: Vec<f64> = (1..=200).map(|i| i as f64 * 0.5 - 0.25).collect();
        let t = EventTrain::new(ts, 100.0).unwrap();
        assert!(matches!(spectrum_flatness(&t, 0.5), Err(Error::Undefined(_))));
    }
}
