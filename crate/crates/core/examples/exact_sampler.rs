//! Draw first-passage times exactly (no time stepping) and compare their
//! moments and empirical distribution with the analytic law.
//!
//! ```bash
//! cargo run --release -p cavity-emission --example exact_sampler
//! ```

use cavity_emission::stats::ks_statistic;
use cavity_emission::{sample_first_passage_exact, IgParams, RngStream};

fn main() -> cavity_emission::Result<()> {
    let law = IgParams::new(1.0 / 1.47, 3.3)?;
    let mut rng = RngStream::new(7, 0).rng();
    let n = 1_000_000;
    let xs: Vec<f64> = (0..n).map(|_| sample_first_passage_exact(&law, &mut rng)).collect();

    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    println!("draws     {n}");
    println!("mean      {mean:.5} (law {:.5})", law.mean);
    println!("variance  {var:.5} (law {:.5})", law.variance());
    println!("KS        {:.5}", ks_statistic(&xs, |t| law.cdf(t))?);
    Ok(())
}
