//! File formats: events CSV and sweep CSV.
//!
//! Events: header `cavity_id,t_seconds`, one row per emission, cavity id 0 or
//! 1, times relative to run start with six fractional digits, rows sorted by
//! time and then by cavity id.
//!
//! Sweep: header `d_mm,gamma_hz,gamma_n,corr_c,n_events,seed_used`, one row
//! per separation in sweep order. Point `i` of a sweep ran on stream
//! `(seed_used, i)`.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::coupled::{EventTrain, SweepResult};

pub const EVENTS_HEADER: &str = "cavity_id,t_seconds";
pub const SWEEP_HEADER: &str = "d_mm,gamma_hz,gamma_n,corr_c,n_events,seed_used";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

fn malformed(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        reason: reason.into(),
    }
}

/// Writes the trains, indexed by cavity id, as one merged events table.
pub fn write_events<W: Write>(out: &mut W, trains: &[&EventTrain]) -> std::io::Result<()> {
    let mut rows: Vec<(f64, usize)> = trains
        .iter()
        .enumerate()
        .flat_map(|(id, train)| train.timestamps().iter().map(move |&t| (t, id)))
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    writeln!(out, "{EVENTS_HEADER}")?;
    for (t, id) in rows {
        writeln!(out, "{id},{t:.6}")?;
    }
    Ok(())
}

/// Timestamps per cavity id as read back from an events table.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EventsTable {
    pub cavities: [Vec<f64>; 2],
}

impl EventsTable {
    pub fn is_pair(&self) -> bool {
        !self.cavities[1].is_empty()
    }

    pub fn last_time(&self) -> Option<f64> {
        self.cavities.iter().filter_map(|c| c.last().copied()).reduce(f64::max)
    }

    pub fn train(&self, id: usize, duration: f64) -> crate::Result<EventTrain> {
        EventTrain::new(self.cavities[id].clone(), duration)
    }
}

pub fn read_events<R: BufRead>(input: R) -> Result<EventsTable, FormatError> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim_end() != EVENTS_HEADER {
        return Err(malformed(1, format!("expected header `{EVENTS_HEADER}`")));
    }
    let mut table = EventsTable::default();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let (id, t) = line
            .split_once(',')
            .ok_or_else(|| malformed(line_no, "expected two comma-separated fields"))?;
        let id: usize = match id {
            "0" => 0,
            "1" => 1,
            other => return Err(malformed(line_no, format!("cavity_id must be 0 or 1, got `{other}`"))),
        };
        let t: f64 = t
            .parse()
            .map_err(|_| malformed(line_no, format!("t_seconds `{t}` is not a number")))?;
        if !(t.is_finite() && t > 0.0) {
            return Err(malformed(line_no, format!("t_seconds must be > 0, got {t}")));
        }
        let train = &mut table.cavities[id];
        if train.last().is_some_and(|&prev| t <= prev) {
            return Err(malformed(line_no, "timestamps of a cavity must strictly increase"));
        }
        train.push(t);
    }
    Ok(table)
}

pub fn write_sweep<W: Write>(out: &mut W, sweep: &SweepResult) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in &sweep.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.d_mm, r.gamma_hz, r.gamma_n, r.corr_c, r.n_events, r.stream.seed
        )?;
    }
    Ok(())
}

/// `(d_mm, gamma_n)` pairs from a sweep table. Columns are located by name.
pub fn read_sweep_points<R: BufRead>(input: R) -> Result<Vec<(f64, f64)>, FormatError> {
    let mut lines = input.lines();
    let header = match lines.next() {
        Some(h) => h?,
        None => return Err(malformed(1, "empty sweep file")),
    };
    let cols: Vec<&str> = header.trim_end().split(',').collect();
    let find = |name: &str| {
        cols.iter()
            .position(|c| *c == name)
            .ok_or_else(|| malformed(1, format!("missing column `{name}`")))
    };
    let (d_col, g_col) = (find("d_mm")?, find("gamma_n")?);
    let mut points = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != cols.len() {
            return Err(malformed(
                line_no,
                format!("expected {} fields, got {}", cols.len(), fields.len()),
            ));
        }
        let parse = |col: usize| {
            fields[col]
                .parse::<f64>()
                .map_err(|_| malformed(line_no, format!("`{}` is not a number", fields[col])))
        };
        points.push((parse(d_col)?, parse(g_col)?));
    }
    Ok(points)
}
