//! Tabulate the first-passage law of a drifted Wiener amplitude: density and
//! distribution function of the inverse Gaussian with mean `α/ν` and shape
//! `α²/σ²`.
//!
//! ```bash
//! cargo run -p cavity-emission --example ig_density
//! ```

use cavity_emission::config::RunConfig;
use cavity_emission::{ig_cdf, ig_pdf};

fn main() -> cavity_emission::Result<()> {
    let cavity = RunConfig::default().cavity_a()?;
    let law = cavity.first_passage_law();
    println!(
        "ν = {:.4}, σ = {:.4}, α = {} → mean {:.4} s, shape {:.4} s, variance {:.4} s²",
        cavity.drift,
        cavity.noise,
        cavity.threshold,
        law.mean,
        law.shape,
        law.variance()
    );
    println!("{:>6}  {:>10}  {:>10}", "t [s]", "pdf", "cdf");
    for i in 1..=16 {
        let t = 0.1 * i as f64;
        println!("{t:>6.2}  {:>10.6}  {:>10.6}", ig_pdf(t, &law)?, ig_cdf(t, &law)?);
    }
    // Right tail: the density decays roughly like exp(−λt/(2μ²)).
    for t in [5.0, 10.0, 20.0] {
        println!("pdf({t}) = {:.3e}", ig_pdf(t, &law)?);
    }
    Ok(())
}
