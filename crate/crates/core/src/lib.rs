//! Monte Carlo simulation and statistics for coupled threshold-crossing
//! emitters.
//!
//! Each emitter ("cavity") carries an amplitude that follows a drifted Wiener
//! process starting from rest. When the amplitude first reaches a threshold
//! the cavity emits an event and the amplitude relaxes back to zero, so the
//! inter-event intervals follow the inverse Gaussian first-passage law. Two
//! cavities can be coupled with a separation-dependent strength
//! `c0 · cos²(2kd) · exp(-d/ℓ)`, which amplifies the combined emission rate
//! and anticorrelates the two event trains.
//!
//! The crate is organised by capability:
//!
//! - [`process`]: inverse Gaussian density/CDF, exact first-passage sampling
//!   and discretised amplitude paths with a Brownian-bridge crossing check.
//! - [`coupled`]: single-cavity and coupled-pair event trains, plus
//!   separation sweeps.
//! - [`stats`]: rates, inverse Gaussian MLE, histograms, binned correlation,
//!   `cos²` rate-law fitting, spectral flatness and KS distances.
//! - [`calibrate`]: solving for model parameters that reproduce target
//!   single-cavity rate, interval shape and peak amplification.
//! - [`config`], [`io`] and [`cli`]: run configuration, CSV/JSON formats and
//!   the command-line front end.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with non-positive
// values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibrate;
pub mod cli;
pub mod config;
pub mod coupled;
pub mod error;
pub mod io;
pub mod process;
pub mod rng;
pub mod stats;

pub use calibrate::{calibrate, Calibration, CalibrationSettings, CalibrationTargets};
pub use config::RunConfig;
pub use coupled::{
    effective_coupling, simulate_pair, simulate_single, sweep_separation, CouplingParams,
    EventTrain, PairRun, SweepResult, SweepRow,
};
pub use error::{Error, Result};
pub use process::{
    ig_cdf, ig_pdf, sample_first_passage_exact, simulate_path_to_crossing, CavityParams,
    IgParams,
};
pub use rng::RngStream;
