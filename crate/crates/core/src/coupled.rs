//! Event trains from one isolated cavity or a coupled pair, and separation
//! sweeps over the pair.
//!
//! Coupling acts in two ways, both scaled by the effective strength
//! `c(d) = c0 · cos²(2kd) · exp(−d/ℓ)`:
//!
//! - drive: cavity `i` drifts at `ν_i (1 + c · clip(X_j/α_j, 0, 1))`, so an
//!   excited neighbour speeds it towards threshold;
//! - drain: when cavity `j` emits, the amplitude of cavity `i` shrinks to
//!   `(1 − β) X_i` with `β = min(1, κ c)`.
//!
//! The drive raises the combined rate above twice the isolated rate, the
//! drain suppresses the partner right after each emission and makes the two
//! trains anticorrelated. At a node of `cos²` both vanish and the cavities
//! are independent.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::process::{check_dt, first_passage_within, CavityParams, Step, Stepper};
use crate::rng::RngStream;
use crate::stats;

/// Ordered emission times of one cavity over an observation window `(0, T]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventTrain {
    timestamps: Vec<f64>,
    duration: f64,
}

impl EventTrain {
    pub fn new(timestamps: Vec<f64>, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::Domain(format!(
                "train duration must be finite and > 0, got {duration}"
            )));
        }
        let mut prev = 0.0;
        for (i, &t) in timestamps.iter().enumerate() {
            if !(t > prev) || t > duration {
                return Err(Error::Domain(format!(
                    "timestamp #{i} = {t} breaks 0 < t_1 < t_2 < ... <= T = {duration}"
                )));
            }
            prev = t;
        }
        Ok(Self {
            timestamps,
            duration,
        })
    }

    pub fn empty(duration: f64) -> Result<Self> {
        Self::new(Vec::new(), duration)
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    /// Shifts every event by `offset` inside a window widened by the same
    /// amount.
    pub fn shifted(&self, offset: f64) -> Result<Self> {
        Self::new(
            self.timestamps.iter().map(|t| t + offset).collect(),
            self.duration + offset,
        )
    }
}

/// Separation-independent part of the coupling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingLaw {
    /// Strength `c0` at a `cos²` antinode with no decay.
    pub base_strength: f64,
    /// Wavenumber `k`, 1/mm.
    pub wavenumber: f64,
    /// Envelope decay length `ℓ` in mm; `f64::INFINITY` disables decay.
    pub decay_length: f64,
    /// Drain ratio `κ`: fraction of the partner amplitude removed per emission,
    /// per unit of effective coupling.
    pub drain_ratio: f64,
}

impl CouplingLaw {
    pub fn validate(&self) -> Result<()> {
        if !(self.base_strength.is_finite() && self.base_strength >= 0.0) {
            return Err(Error::param("base_strength", "must be finite and >= 0"));
        }
        require_positive("wavenumber", self.wavenumber)?;
        if !(self.decay_length > 0.0) {
            return Err(Error::param("decay_length", "must be > 0 or infinite"));
        }
        if !(self.drain_ratio.is_finite() && self.drain_ratio >= 0.0) {
            return Err(Error::param("drain_ratio", "must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn decoupled() -> Self {
        Self {
            base_strength: 0.0,
            wavenumber: 1.0,
            decay_length: f64::INFINITY,
            drain_ratio: 0.0,
        }
    }

    pub fn at(&self, separation: f64) -> Result<CouplingParams> {
        CouplingParams::new(*self, separation)
    }

    /// Separation of the `cos²` antinode closest to `d` (excluding `d = 0`).
    pub fn nearest_antinode(&self, d: f64) -> f64 {
        let half_period = std::f64::consts::PI / (2.0 * self.wavenumber);
        (d / half_period).round().max(1.0) * half_period
    }
}

/// A coupling law evaluated at a particular separation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub law: CouplingLaw,
    /// Centre-to-centre separation `d`, mm.
    pub separation: f64,
}

impl CouplingParams {
    pub fn new(law: CouplingLaw, separation: f64) -> Result<Self> {
        let cp = Self { law, separation };
        cp.validate()?;
        Ok(cp)
    }

    pub fn validate(&self) -> Result<()> {
        self.law.validate()?;
        require_positive("separation", self.separation)
    }

    /// Fraction of the partner amplitude removed when a cavity emits.
    pub fn drain_fraction(&self) -> f64 {
        (self.law.drain_ratio * effective_coupling(self)).min(1.0)
    }
}

/// `c0 · cos²(2kd) · exp(−d/ℓ)`.
pub fn effective_coupling(cp: &CouplingParams) -> f64 {
    let CouplingLaw {
        base_strength,
        wavenumber,
        decay_length,
        ..
    } = cp.law;
    let d = cp.separation;
    let envelope = if decay_length.is_infinite() {
        1.0
    } else {
        (-d / decay_length).exp()
    };
    base_strength * (2.0 * wavenumber * d).cos().powi(2) * envelope
}

fn check_duration(duration: f64) -> Result<()> {
    if duration.is_finite() && duration > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "duration must be finite and > 0, got {duration}"
        )))
    }
}

/// Emission train of an isolated cavity over `(0, T]`: repeated first
/// passages from rest, each one starting where the previous emission left
/// off.
pub fn simulate_single<R: Rng + ?Sized>(
    c: &CavityParams,
    duration: f64,
    dt: f64,
    rng: &mut R,
) -> Result<EventTrain> {
    c.validate()?;
    check_duration(duration)?;
    check_dt(dt)?;
    let mut timestamps = Vec::with_capacity((duration * c.drift / c.threshold) as usize + 1);
    let mut now = 0.0;
    while let Some(wait) = first_passage_within(c, dt, duration - now, rng) {
        now += wait;
        timestamps.push(now);
    }
    EventTrain::new(timestamps, duration)
}

/// Two cavities simulated together, with everything needed to replay them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRun {
    pub train_a: EventTrain,
    pub train_b: EventTrain,
    pub cavity_a: CavityParams,
    pub cavity_b: CavityParams,
    pub coupling: CouplingParams,
    pub dt: f64,
    pub stream: RngStream,
}

impl PairRun {
    pub fn total_events(&self) -> usize {
        self.train_a.len() + self.train_b.len()
    }

    pub fn duration(&self) -> f64 {
        self.train_a.duration()
    }
}

/// Lockstep simulation of a coupled pair on a shared clock.
///
/// Every tick draws, in order, the normal increments of cavity A and B and
/// then their bridge uniforms, so the noise path of each cavity is fixed by
/// the stream regardless of the coupling strength. A cavity that crosses is
/// reset to 0 at the end of the tick and drains its partner, unless both
/// crossed in the same tick.
pub fn simulate_pair(
    ca: &CavityParams,
    cb: &CavityParams,
    cp: &CouplingParams,
    duration: f64,
    dt: f64,
    stream: RngStream,
) -> Result<PairRun> {
    ca.validate()?;
    cb.validate()?;
    cp.validate()?;
    check_duration(duration)?;
    check_dt(dt)?;

    let strength = effective_coupling(cp);
    let keep = 1.0 - cp.drain_fraction();
    let step_a = Stepper::new(ca, dt);
    let step_b = Stepper::new(cb, dt);
    let mut rng = stream.rng();

    let expected = |c: &CavityParams| (duration * c.drift / c.threshold * 2.0) as usize + 1;
    let mut events_a = Vec::with_capacity(expected(ca));
    let mut events_b = Vec::with_capacity(expected(cb));
    let (mut xa, mut xb) = (0.0f64, 0.0f64);

    let ticks = (duration / dt).ceil() as u64;
    for tick in 0..ticks {
        let t0 = tick as f64 * dt;
        let drift_a = ca.drift * (1.0 + strength * (xb / cb.threshold).clamp(0.0, 1.0));
        let drift_b = cb.drift * (1.0 + strength * (xa / ca.threshold).clamp(0.0, 1.0));
        let xi_a: f64 = rng.sample(StandardNormal);
        let xi_b: f64 = rng.sample(StandardNormal);
        let u_a: f64 = rng.random();
        let u_b: f64 = rng.random();

        let (fired_a, next_a) = resolve(step_a.advance(xa, drift_a, xi_a, u_a), t0, dt, duration, &mut events_a);
        let (fired_b, next_b) = resolve(step_b.advance(xb, drift_b, xi_b, u_b), t0, dt, duration, &mut events_b);
        xa = next_a;
        xb = next_b;
        if fired_a && !fired_b {
            xb *= keep;
        } else if fired_b && !fired_a {
            xa *= keep;
        }
    }

    Ok(PairRun {
        train_a: EventTrain::new(events_a, duration)?,
        train_b: EventTrain::new(events_b, duration)?,
        cavity_a: *ca,
        cavity_b: *cb,
        coupling: *cp,
        dt,
        stream,
    })
}

/// Applies one step outcome: records the event if it lies inside the window
/// and returns `(fired, amplitude after the tick)`.
#[inline]
fn resolve(step: Step, t0: f64, dt: f64, duration: f64, events: &mut Vec<f64>) -> (bool, f64) {
    match step {
        Step::Crossed { frac } => {
            let t = t0 + frac * dt;
            if t <= duration {
                events.push(t);
            }
            (true, 0.0)
        }
        Step::Continue(x) => (false, x),
    }
}

/// Run settings shared by every point of a separation sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub duration: f64,
    pub dt: f64,
    pub seed: u64,
    /// Isolated single-cavity rate `Γ0` used for the anomalous rate.
    pub gamma0: f64,
    /// Bin width for the pair correlation, seconds.
    pub corr_bin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d_mm: f64,
    /// Combined pair rate `Γ`, events per second.
    pub gamma_hz: f64,
    /// Anomalous rate `(Γ − 2Γ0)/(2Γ0)`.
    pub gamma_n: f64,
    /// Binned Pearson correlation of the two trains.
    pub corr_c: f64,
    pub n_events: usize,
    pub stream: RngStream,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// `(d, Γ_N)` pairs, ready for a `cos²` fit.
    pub fn anomalous_points(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.d_mm, r.gamma_n)).collect()
    }
}

/// One independent pair run per separation. Point `i` uses stream
/// `(seed, i)`; rows come back in the order of `d_list` whatever order the
/// workers finish in.
pub fn sweep_separation(
    ca: &CavityParams,
    cb: &CavityParams,
    law: &CouplingLaw,
    d_list: &[f64],
    settings: &SweepSettings,
) -> Result<SweepResult> {
    if d_list.is_empty() {
        return Err(Error::InsufficientData("separation list is empty".into()));
    }
    law.validate()?;
    require_positive("gamma0", settings.gamma0)?;
    let rows = d_list
        .par_iter()
        .enumerate()
        .map(|(i, &d)| {
            sweep_point(ca, cb, law, d, i as u64, settings).map_err(|e| Error::SweepPoint {
                d,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

fn sweep_point(
    ca: &CavityParams,
    cb: &CavityParams,
    law: &CouplingLaw,
    d: f64,
    index: u64,
    settings: &SweepSettings,
) -> Result<SweepRow> {
    let cp = law.at(d)?;
    let stream = RngStream::new(settings.seed, index);
    let run = simulate_pair(ca, cb, &cp, settings.duration, settings.dt, stream)?;
    let n_events = run.total_events();
    let gamma_hz = n_events as f64 / settings.duration;
    let gamma_n = stats::anomalous_rate(gamma_hz, settings.gamma0)?;
    let corr = stats::binned_pearson(&run.train_a, &run.train_b, settings.corr_bin)?;
    Ok(SweepRow {
        d_mm: d,
        gamma_hz,
        gamma_n,
        corr_c: corr.c,
        n_events,
        stream,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn law(c0: f64, k: f64) -> CouplingLaw {
        CouplingLaw {
            base_strength: c0,
            wavenumber: k,
            decay_length: f64::INFINITY,
            drain_ratio: 0.2,
        }
    }

    fn cavity() -> CavityParams {
        CavityParams::from_first_passage(1.0 / 1.47, 3.3, 1.0).unwrap()
    }

    #[test]
    fn coupling_node_and_antinodes() {
        let k = 0.85;
        let node = std::f64::consts::FRAC_PI_2 / (2.0 * k);
        assert!(effective_coupling(&law(1.0, k).at(node).unwrap()) < 1e-30);
        assert_relative_eq!(effective_coupling(&law(1.0, k).at(1e-9).unwrap()), 1.0, epsilon = 1e-12);
        let d = 5.0 * std::f64::consts::PI / (2.0 * 0.85);
        assert_relative_eq!(d, 9.2399, epsilon = 1e-4);
        assert_relative_eq!(effective_coupling(&law(1.0, k).at(d).unwrap()), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn decay_envelope() {
        let mut l = law(2.0, 0.85);
        l.decay_length = 10.0;
        let d = l.nearest_antinode(9.24);
        let c = effective_coupling(&l.at(d).unwrap());
        assert_relative_eq!(c, 2.0 * (-d / 10.0).exp(), max_relative = 1e-12);
        assert!(c <= 2.0);
    }

    #[test]
    fn nearest_antinode_to_grid_centre() {
        assert_relative_eq!(law(1.0, 0.85).nearest_antinode(9.24), 9.239_978_392_911_157, epsilon = 1e-12);
    }

    #[test]
    fn coupling_validation() {
        assert!(law(-0.1, 0.85).at(9.0).is_err());
        assert!(law(1.0, 0.0).at(9.0).is_err());
        assert!(law(1.0, 0.85).at(0.0).is_err());
        let mut l = law(1.0, 0.85);
        l.decay_length = 0.0;
        assert!(l.at(9.0).is_err());
    }

    #[test]
    fn drain_fraction_is_capped() {
        assert_eq!(law(100.0, 0.85).at(1e-9).unwrap().drain_fraction(), 1.0);
        assert_relative_eq!(law(1.5, 0.85).at(1e-9).unwrap().drain_fraction(), 0.3, epsilon = 1e-9);
    }

    #[test]
    fn event_train_invariants() {
        assert!(EventTrain::new(vec![1.0, 2.0], 2.0).is_ok());
        assert!(EventTrain::new(vec![1.0, 1.0], 2.0).is_err());
        assert!(EventTrain::new(vec![0.0], 2.0).is_err());
        assert!(EventTrain::new(vec![2.5], 2.0).is_err());
        assert!(EventTrain::new(vec![], 0.0).is_err());
        assert!(EventTrain::empty(1.0).unwrap().is_empty());
    }

    #[test]
    fn tiny_window_is_empty() {
        let mut rng = RngStream::new(3, 0).rng();
        let train = simulate_single(&cavity(), 1e-6, 1e-3, &mut rng).unwrap();
        assert!(train.is_empty());
        let run = simulate_pair(&cavity(), &cavity(), &law(1.0, 0.85).at(9.0).unwrap(), 1e-6, 1e-3, RngStream::new(3, 0)).unwrap();
        assert_eq!(run.total_events(), 0);
    }

    #[test]
    fn single_rejects_bad_inputs() {
        let mut rng = RngStream::new(3, 0).rng();
        assert!(simulate_single(&cavity(), 0.0, 1e-3, &mut rng).is_err());
        assert!(simulate_single(&cavity(), 10.0, 0.0, &mut rng).is_err());
    }

    #[test]
    fn pair_is_bit_reproducible() {
        let cp = law(1.7, 0.85).at(9.24).unwrap();
        let a = simulate_pair(&cavity(), &cavity(), &cp, 50.0, 1e-3, RngStream::new(9, 4)).unwrap();
        let b = simulate_pair(&cavity(), &cavity(), &cp, 50.0, 1e-3, RngStream::new(9, 4)).unwrap();
        assert_eq!(a, b);
        let c = simulate_pair(&cavity(), &cavity(), &cp, 50.0, 1e-3, RngStream::new(9, 5)).unwrap();
        assert_ne!(a.train_a, c.train_a);
    }

    #[test]
    fn sweep_rejects_empty_grid_and_names_bad_point() {
        let s = SweepSettings {
            duration: 20.0,
            dt: 1e-3,
            seed: 1,
            gamma0: 1.47,
            corr_bin: 0.5,
        };
        assert!(sweep_separation(&cavity(), &cavity(), &law(1.0, 0.85), &[], &s).is_err());
        match sweep_separation(&cavity(), &cavity(), &law(1.0, 0.85), &[9.0, -1.0], &s) {
            Err(Error::SweepPoint { d, .. }) => assert_eq!(d, -1.0),
            other => panic!("{other:?}"),
        }
    }
}
