//! Estimators and fitters for event trains.

mod correlation;
mod cos2;
mod histogram;
mod ig_fit;
mod ks;
mod rate;
mod spectrum;

pub use correlation::{binned_counts, binned_pearson, CorrelationEstimate};
pub use cos2::{fit_cos2, Cos2Fit, KBracket};
pub use histogram::{histogram, Histogram};
pub use ig_fit::{fit_ig_mle, IgFit};
pub use ks::ks_statistic;
pub use rate::{anomalous_rate, emission_rate, inter_emission_intervals};
pub use spectrum::{spectrum_flatness, FLATNESS_SEGMENT};
