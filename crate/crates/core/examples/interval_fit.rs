//! Fit an inverse Gaussian to the inter-emission intervals of a long
//! single-cavity run and compare the density histogram with the fitted law.
//!
//! ```bash
//! cargo run --release -p cavity-emission --example interval_fit
//! ```

use cavity_emission::config::RunConfig;
use cavity_emission::stats::{fit_ig_mle, histogram, inter_emission_intervals, ks_statistic};
use cavity_emission::{simulate_single, RngStream};

fn main() -> cavity_emission::Result<()> {
    let cfg = RunConfig::default();
    let train = simulate_single(&cfg.cavity_a()?, 20_000.0, cfg.dt_s, &mut RngStream::new(cfg.seed, 0).rng())?;
    let intervals = inter_emission_intervals(&train)?;
    let fit = fit_ig_mle(&intervals)?;
    let law = fit.params();
    println!(
        "n = {}, mu_hat = {:.4} s, lambda_hat = {:.4} s, log-likelihood = {:.1}",
        fit.n, fit.mu_hat, fit.lambda_hat, fit.log_likelihood
    );
    println!("KS to fitted law: {:.4}", ks_statistic(&intervals, |t| law.cdf(t))?);

    let h = histogram(&intervals, 20, (0.0, 2.0))?;
    println!("{:>6} {:>9} {:>9}", "t [s]", "density", "fit pdf");
    for (t, d) in h.centers().iter().zip(h.density()) {
        println!("{t:>6.2} {d:>9.4} {:>9.4}", law.pdf(*t));
    }
    Ok(())
}
