//! Flat JSON run configuration.
//!
//! Keys are snake_case and unknown keys are rejected. Missing keys take the
//! calibrated defaults below, which reproduce an isolated rate of
//! 1.47 s⁻¹, an interval shape of 3.3 s and a peak anomalous rate of 0.46
//! at the antinode nearest 9.24 mm.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coupled::{CouplingLaw, SweepSettings};
use crate::error::{Error, Result};
use crate::process::CavityParams;

/// Output of `calibrate` with its default targets and settings.
pub const CALIBRATED_DRIFT: f64 = 1.469_484_138_807_216_8;
pub const CALIBRATED_NOISE: f64 = 0.550_481_882_563_180_3;
pub const CALIBRATED_STRENGTH: f64 = 1.6875;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Single,
    Pair,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub mode: Mode,
    pub drift_a: f64,
    pub noise_a: f64,
    pub threshold_a: f64,
    pub drift_b: f64,
    pub noise_b: f64,
    pub threshold_b: f64,
    /// Base coupling strength `c0`.
    pub c0: f64,
    pub k_per_mm: f64,
    /// `null` means no decay.
    pub decay_length_mm: Option<f64>,
    pub drain_ratio: f64,
    /// Isolated single-cavity rate used for anomalous rates.
    pub gamma0_hz: f64,
    pub duration_s: f64,
    pub dt_s: f64,
    pub seed: u64,
    pub stream_id: u64,
    pub d_mm: f64,
    pub d_min_mm: f64,
    pub d_max_mm: f64,
    pub d_step_mm: f64,
    pub corr_bin_s: f64,
    pub flatness_bin_s: f64,
    pub hist_bins: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Pair,
            drift_a: CALIBRATED_DRIFT,
            noise_a: CALIBRATED_NOISE,
            threshold_a: 1.0,
            drift_b: CALIBRATED_DRIFT,
            noise_b: CALIBRATED_NOISE,
            threshold_b: 1.0,
            c0: CALIBRATED_STRENGTH,
            k_per_mm: 0.85,
            decay_length_mm: None,
            drain_ratio: 0.2,
            gamma0_hz: 1.47,
            duration_s: 300.0,
            dt_s: 1e-3,
            seed: 1,
            stream_id: 0,
            d_mm: 5.0 * std::f64::consts::PI / (2.0 * 0.85),
            d_min_mm: 8.0,
            d_max_mm: 12.0,
            d_step_mm: 0.5,
            corr_bin_s: 0.5,
            flatness_bin_s: 0.5,
            hist_bins: 40,
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    crate::error::require_positive(name, v)
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| {
            Error::param("config", format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serialises");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> std::io::Result<Result<Self>> {
        Ok(Self::from_json(&std::fs::read_to_string(path)?))
    }

    /// Checks every field against the invariants of the type it feeds.
    pub fn validate(&self) -> Result<()> {
        self.cavity_a()?;
        self.cavity_b()?;
        self.coupling_law()?.validate()?;
        positive("gamma0_hz", self.gamma0_hz)?;
        positive("duration_s", self.duration_s)?;
        positive("dt_s", self.dt_s)?;
        positive("d_mm", self.d_mm)?;
        positive("d_min_mm", self.d_min_mm)?;
        positive("d_step_mm", self.d_step_mm)?;
        if !(self.d_max_mm.is_finite() && self.d_max_mm >= self.d_min_mm) {
            return Err(Error::param("d_max_mm", "must be >= d_min_mm"));
        }
        positive("corr_bin_s", self.corr_bin_s)?;
        positive("flatness_bin_s", self.flatness_bin_s)?;
        if self.hist_bins == 0 {
            return Err(Error::param("hist_bins", "must be >= 1"));
        }
        Ok(())
    }

    pub fn cavity_a(&self) -> Result<CavityParams> {
        CavityParams::new(self.drift_a, self.noise_a, self.threshold_a).map_err(|e| suffix(e, "_a"))
    }

    pub fn cavity_b(&self) -> Result<CavityParams> {
        CavityParams::new(self.drift_b, self.noise_b, self.threshold_b).map_err(|e| suffix(e, "_b"))
    }

    pub fn coupling_law(&self) -> Result<CouplingLaw> {
        if let Some(l) = self.decay_length_mm {
            positive("decay_length_mm", l)?;
        }
        let law = CouplingLaw {
            base_strength: self.c0,
            wavenumber: self.k_per_mm,
            decay_length: self.decay_length_mm.unwrap_or(f64::INFINITY),
            drain_ratio: self.drain_ratio,
        };
        law.validate().map_err(|e| match e {
            Error::InvalidParameter { name, reason } => Error::InvalidParameter {
                name: match name {
                    "base_strength" => "c0",
                    "wavenumber" => "k_per_mm",
                    other => other,
                },
                reason,
            },
            other => other,
        })?;
        Ok(law)
    }

    /// `d_min, d_min + step, …` up to and including `d_max` (to within a
    /// millionth of a step).
    pub fn d_grid(&self) -> Vec<f64> {
        let n = ((self.d_max_mm - self.d_min_mm) / self.d_step_mm + 1e-6).floor() as usize;
        (0..=n).map(|i| self.d_min_mm + i as f64 * self.d_step_mm).collect()
    }

    pub fn sweep_settings(&self) -> SweepSettings {
        SweepSettings {
            duration: self.duration_s,
            dt: self.dt_s,
            seed: self.seed,
            gamma0: self.gamma0_hz,
            corr_bin: self.corr_bin_s,
        }
    }
}

/// Maps a cavity field name onto its config key.
fn suffix(e: Error, tag: &'static str) -> Error {
    match e {
        Error::InvalidParameter { name, reason } => {
            let key = match (name, tag) {
                ("drift", "_a") => "drift_a",
                ("noise", "_a") => "noise_a",
                ("threshold", "_a") => "threshold_a",
                ("drift", _) => "drift_b",
                ("noise", _) => "noise_b",
                ("threshold", _) => "threshold_b",
                (other, _) => other,
            };
            Error::InvalidParameter { name: key, reason }
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_and_round_trips() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn default_grid_has_nine_points() {
        let grid = RunConfig::default().d_grid();
        assert_eq!(grid.len(), 9);
        assert_eq!(grid[0], 8.0);
        assert_eq!(grid[8], 12.0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_json("{\n  \"seed\": 3,\n  \"sead\": 4\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("sead"), "{msg}");
    }

    #[test]
    fn partial_config_takes_defaults() {
        let cfg = RunConfig::from_json(r#"{"seed": 9, "mode": "single"}"#).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.mode, Mode::Single);
        assert_eq!(cfg.c0, CALIBRATED_STRENGTH);
    }

    #[test]
    fn field_named_in_validation_error() {
        let err = RunConfig::from_json(r#"{"noise_b": -1.0}"#).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "noise_b", .. }), "{err}");
        let err = RunConfig::from_json(r#"{"k_per_mm": 0}"#).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "k_per_mm", .. }), "{err}");
        let err = RunConfig::from_json(r#"{"decay_length_mm": -3}"#).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "decay_length_mm", .. }), "{err}");
    }

    #[test]
    fn finite_decay_length() {
        let cfg = RunConfig::from_json(r#"{"decay_length_mm": 25.0}"#).unwrap();
        assert_eq!(cfg.coupling_law().unwrap().decay_length, 25.0);
    }
}
