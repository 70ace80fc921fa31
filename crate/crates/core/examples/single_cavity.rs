//! Simulate one isolated cavity with the calibrated defaults, report its
//! emission rate, and compare time-stepped first passages with exact draws.
//!
//! ```bash
//! cargo run --release -p cavity-emission --example single_cavity [-- <events.csv>]
//! ```

use std::fs::File;
use std::io::BufWriter;

use cavity_emission::config::RunConfig;
use cavity_emission::io::write_events;
use cavity_emission::stats::{emission_rate, ks_statistic};
use cavity_emission::{simulate_path_to_crossing, simulate_single, RngStream};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::default();
    let cavity = cfg.cavity_a()?;
    let duration = 3000.0;
    let train = simulate_single(&cavity, duration, cfg.dt_s, &mut RngStream::new(cfg.seed, 0).rng())?;
    println!("{} emissions in {duration} s → Γ0 = {:.4} s⁻¹", train.len(), emission_rate(&train));

    let law = cavity.first_passage_law();
    for dt in [1e-2, 4e-3, 1e-3] {
        let mut rng = RngStream::new(cfg.seed, 1).rng();
        let xs = (0..50_000)
            .map(|_| simulate_path_to_crossing(&cavity, dt, &mut rng))
            .collect::<cavity_emission::Result<Vec<_>>>()?;
        println!("dt = {dt:.0e}: KS to exact law {:.4}", ks_statistic(&xs, |t| law.cdf(t))?);
    }

    if let Some(path) = std::env::args().nth(1) {
        write_events(&mut BufWriter::new(File::create(&path)?), &[&train])?;
        println!("events written to {path}");
    }
    Ok(())
}
