//! Binned Pearson correlation of a calibrated pair at the antinode, as a
//! function of the bin width, next to two independent isolated cavities.
//!
//! ```bash
//! cargo run --release -p cavity-emission --example correlation
//! ```

use cavity_emission::config::RunConfig;
use cavity_emission::stats::binned_pearson;
use cavity_emission::{simulate_pair, simulate_single, RngStream};

fn main() -> cavity_emission::Result<()> {
    let cfg = RunConfig::default();
    let cavity = cfg.cavity_a()?;
    let law = cfg.coupling_law()?;
    let duration = 3000.0;

    let cp = law.at(law.nearest_antinode(9.24))?;
    let pair = simulate_pair(&cavity, &cavity, &cp, duration, cfg.dt_s, RngStream::new(cfg.seed, 0))?;
    let a = simulate_single(&cavity, duration, cfg.dt_s, &mut RngStream::new(cfg.seed, 1).rng())?;
    let b = simulate_single(&cavity, duration, cfg.dt_s, &mut RngStream::new(cfg.seed, 2).rng())?;

    println!("{:>8} {:>10} {:>12}", "bin [s]", "coupled C", "isolated C");
    for bin in [0.1, 0.25, 0.5, 1.0, 2.0, 5.0] {
        let coupled = binned_pearson(&pair.train_a, &pair.train_b, bin)?;
        let isolated = binned_pearson(&a, &b, bin)?;
        println!("{bin:>8.2} {:>+10.4} {:>+12.4}", coupled.c, isolated.c);
    }
    Ok(())
}
