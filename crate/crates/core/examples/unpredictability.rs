//! Spectral flatness of binned event counts: a calibrated cavity and a
//! Poisson train look like white noise, a clock does not.
//!
//! ```bash
//! cargo run --release -p cavity-emission --example unpredictability
//! ```

use cavity_emission::config::RunConfig;
use cavity_emission::stats::spectrum_flatness;
use cavity_emission::{simulate_single, EventTrain, RngStream};
use rand::Rng;
use rand_distr::Exp;

fn main() -> cavity_emission::Result<()> {
    let cfg = RunConfig::default();
    let duration = 3000.0;
    let bin = cfg.flatness_bin_s;

    let cavity = simulate_single(&cfg.cavity_a()?, duration, cfg.dt_s, &mut RngStream::new(cfg.seed, 0).rng())?;

    let mut rng = RngStream::new(cfg.seed, 1).rng();
    let exp = Exp::new(cfg.gamma0_hz).expect("positive rate");
    let mut poisson = Vec::new();
    let mut t = rng.sample(exp);
    while t <= duration {
        poisson.push(t);
        t += rng.sample(exp);
    }
    let poisson = EventTrain::new(poisson, duration)?;

    let period = 1.0 / cfg.gamma0_hz;
    let clock = (1..).map(|i| i as f64 * period).take_while(|&t| t <= duration).collect();
    let clock = EventTrain::new(clock, duration)?;

    for (name, train) in [("calibrated cavity", &cavity), ("Poisson", &poisson), ("periodic", &clock)] {
        println!("{name:>18}: flatness {:.3}", spectrum_flatness(train, bin)?);
    }
    Ok(())
}
