use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::{AnalyzeArgs, CalibrateArgs, CliError, Command, FitArgs, SimulateArgs, SweepArgs};
use crate::calibrate::{calibrate, CalibrationSettings, CalibrationTargets};
use crate::config::{Mode, RunConfig};
use crate::coupled::{simulate_pair, simulate_single, sweep_separation};
use crate::io;
use crate::rng::RngStream;
use crate::stats::{self, fit_cos2, KBracket};

/// Runs one subcommand and returns what it prints on standard output.
pub fn run(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::Analyze(a) => analyze(a),
        Command::Fit(a) => fit(a),
        Command::Calibrate(a) => calibrate_cmd(a),
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => RunConfig::load(p)
            .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?
            .map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(io_err(path))
}

fn line(value: &Value) -> String {
    format!("{value}\n")
}

fn simulate(a: &SimulateArgs) -> Result<String, CliError> {
    let mut cfg = load_config(a.config.as_deref())?;
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.stream {
        cfg.stream_id = v;
    }
    if let Some(v) = a.duration {
        cfg.duration_s = v;
    }
    if let Some(v) = a.dt {
        cfg.dt_s = v;
    }
    if let Some(v) = a.d {
        cfg.d_mm = v;
    }
    if a.pair {
        cfg.mode = Mode::Pair;
    } else if a.single {
        cfg.mode = Mode::Single;
    }
    cfg.validate()?;

    let stream = RngStream::new(cfg.seed, cfg.stream_id);
    let summary = match cfg.mode {
        Mode::Single => {
            let mut rng = stream.rng();
            let train = simulate_single(&cfg.cavity_a()?, cfg.duration_s, cfg.dt_s, &mut rng)?;
            let mut w = create(&a.out)?;
            io::write_events(&mut w, &[&train])
                .and_then(|_| w.flush())
                .map_err(io_err(&a.out))?;
            json!({
                "mode": "single",
                "duration_s": cfg.duration_s,
                "seed": cfg.seed,
                "stream_id": cfg.stream_id,
                "n_events": train.len(),
                "rate_hz": stats::emission_rate(&train),
            })
        }
        Mode::Pair => {
            let cp = cfg.coupling_law()?.at(cfg.d_mm)?;
            let run = simulate_pair(&cfg.cavity_a()?, &cfg.cavity_b()?, &cp, cfg.duration_s, cfg.dt_s, stream)?;
            let mut w = create(&a.out)?;
            io::write_events(&mut w, &[&run.train_a, &run.train_b])
                .and_then(|_| w.flush())
                .map_err(io_err(&a.out))?;
            let rate = run.total_events() as f64 / cfg.duration_s;
            json!({
                "mode": "pair",
                "duration_s": cfg.duration_s,
                "seed": cfg.seed,
                "stream_id": cfg.stream_id,
                "d_mm": cfg.d_mm,
                "effective_coupling": crate::coupled::effective_coupling(&cp),
                "n_events": [run.train_a.len(), run.train_b.len()],
                "rate_hz": rate,
                "gamma_n": stats::anomalous_rate(rate, cfg.gamma0_hz)?,
            })
        }
    };
    Ok(line(&summary))
}

fn sweep(a: &SweepArgs) -> Result<String, CliError> {
    let mut cfg = load_config(a.config.as_deref())?;
    if let Some(v) = a.d_min {
        cfg.d_min_mm = v;
    }
    if let Some(v) = a.d_max {
        cfg.d_max_mm = v;
    }
    if let Some(v) = a.d_step {
        cfg.d_step_mm = v;
    }
    if let Some(v) = a.duration {
        cfg.duration_s = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.dt {
        cfg.dt_s = v;
    }
    if let Some(v) = a.bin {
        cfg.corr_bin_s = v;
    }
    cfg.validate()?;

    let grid = cfg.d_grid();
    let result = sweep_separation(
        &cfg.cavity_a()?,
        &cfg.cavity_b()?,
        &cfg.coupling_law()?,
        &grid,
        &cfg.sweep_settings(),
    )?;
    let mut w = create(&a.out)?;
    io::write_sweep(&mut w, &result)
        .and_then(|_| w.flush())
        .map_err(io_err(&a.out))?;
    Ok(line(&json!({
        "points": result.rows.len(),
        "duration_s": cfg.duration_s,
        "seed": cfg.seed,
        "max_gamma_n": result.rows.iter().map(|r| r.gamma_n).fold(f64::NEG_INFINITY, f64::max),
    })))
}

#[derive(Serialize)]
struct HistogramJson {
    edges: Vec<f64>,
    counts: Vec<u64>,
    density: Vec<f64>,
}

#[derive(Serialize)]
struct CavityStats {
    cavity_id: usize,
    n_events: usize,
    rate_hz: f64,
    ig_fit: Option<stats::IgFit>,
    ks_distance: Option<f64>,
    histogram: Option<HistogramJson>,
    spectrum_flatness: Option<f64>,
}

#[derive(Serialize)]
struct CorrelationJson {
    corr_c: f64,
    bin_width_s: f64,
    n_bins: usize,
}

#[derive(Serialize)]
struct AnalysisJson {
    duration_s: f64,
    bin_width_s: f64,
    pair: bool,
    total_rate_hz: f64,
    gamma_n: Option<f64>,
    cavities: Vec<CavityStats>,
    correlation: Option<CorrelationJson>,
    warnings: Vec<String>,
}

fn analyze(a: &AnalyzeArgs) -> Result<String, CliError> {
    if a.hist_bins == 0 {
        return Err(CliError::Config("--hist-bins must be >= 1".into()));
    }
    let table = io::read_events(open(&a.events)?).map_err(|e| match e {
        io::FormatError::Malformed { .. } => CliError::Config(format!("{}: {e}", a.events.display())),
        other => other.into(),
    })?;
    let duration = match (a.duration, table.last_time()) {
        (Some(d), _) => d,
        (None, Some(t)) => t,
        (None, None) => {
            return Err(CliError::Config(
                "no events in file; pass --duration to analyse an empty window".into(),
            ))
        }
    };
    let pair = table.is_pair();
    let ids: &[usize] = if pair { &[0, 1] } else { &[0] };
    let trains = ids
        .iter()
        .map(|&id| table.train(id, duration))
        .collect::<crate::Result<Vec<_>>>()?;

    let mut warnings = Vec::new();
    let mut cavities = Vec::new();
    for (&id, train) in ids.iter().zip(&trains) {
        let mut entry = CavityStats {
            cavity_id: id,
            n_events: train.len(),
            rate_hz: stats::emission_rate(train),
            ig_fit: None,
            ks_distance: None,
            histogram: None,
            spectrum_flatness: None,
        };
        match stats::inter_emission_intervals(train).and_then(|iv| stats::fit_ig_mle(&iv).map(|f| (iv, f))) {
            Ok((intervals, fit)) => {
                let law = fit.params();
                entry.ks_distance = Some(stats::ks_statistic(&intervals, |t| law.cdf(t))?);
                let hi = intervals.iter().copied().fold(0.0, f64::max);
                let h = stats::histogram(&intervals, a.hist_bins, (0.0, hi))?;
                entry.histogram = Some(HistogramJson {
                    density: h.density(),
                    edges: h.edges,
                    counts: h.counts,
                });
                entry.ig_fit = Some(fit);
            }
            Err(e) => warnings.push(format!("cavity {id}: interval statistics unavailable: {e}")),
        }
        match stats::spectrum_flatness(train, a.bin) {
            Ok(f) => entry.spectrum_flatness = Some(f),
            Err(e) => warnings.push(format!("cavity {id}: spectral flatness unavailable: {e}")),
        }
        cavities.push(entry);
    }

    let correlation = if pair {
        match stats::binned_pearson(&trains[0], &trains[1], a.bin) {
            Ok(c) => Some(CorrelationJson {
                corr_c: c.c,
                bin_width_s: c.bin_width,
                n_bins: c.n_bins,
            }),
            Err(e) => {
                warnings.push(format!("correlation unavailable: {e}"));
                None
            }
        }
    } else {
        None
    };

    let total = trains.iter().map(|t| t.len()).sum::<usize>() as f64 / duration;
    let gamma_n = match (pair, a.gamma0) {
        (true, Some(g0)) => Some(stats::anomalous_rate(total, g0)?),
        _ => None,
    };
    let report = AnalysisJson {
        duration_s: duration,
        bin_width_s: a.bin,
        pair,
        total_rate_hz: total,
        gamma_n,
        cavities,
        correlation,
        warnings,
    };
    write_json(&a.out, &report)?;
    Ok(line(&json!({
        "pair": pair,
        "total_rate_hz": total,
        "warnings": report.warnings.len(),
    })))
}

fn fit(a: &FitArgs) -> Result<String, CliError> {
    let points = io::read_sweep_points(open(&a.sweep)?).map_err(|e| match e {
        io::FormatError::Malformed { .. } => CliError::Config(format!("{}: {e}", a.sweep.display())),
        other => other.into(),
    })?;
    if points.len() < 4 {
        return Err(CliError::Config(format!(
            "{}: cos² fit needs at least 4 sweep rows, found {}",
            a.sweep.display(),
            points.len()
        )));
    }
    let bracket = KBracket {
        k_min: a.k_min,
        k_max: a.k_max,
    };
    let f = fit_cos2(&points, bracket)?;
    let report = json!({
        "model": "cos2",
        "a_hat": f.a_hat,
        "k_hat": f.k_hat,
        "residual_sse": f.residual_sse,
        "n_points": points.len(),
        "k_min": a.k_min,
        "k_max": a.k_max,
        "flags": {
            "unidentifiable": f.unidentifiable,
            "bracket_edge": f.bracket_edge,
        },
    });
    write_json(&a.out, &report)?;
    Ok(line(&report))
}

/// Relative tolerances on the reproduced rate, shape and peak amplification.
const CALIBRATION_TOLERANCES: (f64, f64, f64) = (0.02, 0.10, 0.15);

fn calibrate_cmd(a: &CalibrateArgs) -> Result<String, CliError> {
    let targets = CalibrationTargets {
        gamma0: a.gamma0,
        shape: a.shape,
        peak_gn: a.peak_gn,
    };
    let settings = CalibrationSettings {
        threshold: a.threshold,
        dt: a.dt,
        intervals: a.intervals,
        pair_duration: a.pair_duration,
        seed: a.seed,
        wavenumber: a.k,
        decay_length: a.decay_length.unwrap_or(f64::INFINITY),
        drain_ratio: a.drain_ratio,
        ..CalibrationSettings::default()
    };
    let cal = calibrate(&targets, &settings)?;
    let got = cal.achieved;
    let (t_rate, t_shape, t_peak) = CALIBRATION_TOLERANCES;
    let misses: Vec<String> = [
        ("gamma0", got.gamma0, targets.gamma0, t_rate),
        ("lambda", got.shape, targets.shape, t_shape),
        ("peak_gn", got.peak_gn, targets.peak_gn, t_peak),
    ]
    .iter()
    .filter(|(_, g, t, tol)| ((g - t) / t).abs() > *tol)
    .map(|(n, g, t, tol)| format!("{n}: achieved {g} vs target {t} (tolerance {tol})"))
    .collect();
    if !misses.is_empty() {
        return Err(CliError::Numerical(format!("calibration missed targets: {}", misses.join("; "))));
    }

    let cfg = RunConfig {
        drift_a: cal.cavity.drift,
        noise_a: cal.cavity.noise,
        threshold_a: cal.cavity.threshold,
        drift_b: cal.cavity.drift,
        noise_b: cal.cavity.noise,
        threshold_b: cal.cavity.threshold,
        c0: cal.law.base_strength,
        k_per_mm: cal.law.wavenumber,
        decay_length_mm: a.decay_length,
        drain_ratio: cal.law.drain_ratio,
        gamma0_hz: a.gamma0,
        dt_s: a.dt,
        d_mm: cal.antinode_d,
        ..RunConfig::default()
    };
    let mut w = create(&a.out)?;
    w.write_all(cfg.to_json().as_bytes())
        .and_then(|_| w.flush())
        .map_err(io_err(&a.out))?;
    Ok(line(&json!({
        "drift": cal.cavity.drift,
        "noise": cal.cavity.noise,
        "threshold": cal.cavity.threshold,
        "c0": cal.law.base_strength,
        "antinode_d_mm": cal.antinode_d,
        "achieved": {
            "gamma0": got.gamma0,
            "lambda": got.shape,
            "peak_gn": got.peak_gn,
        },
    })))
}
