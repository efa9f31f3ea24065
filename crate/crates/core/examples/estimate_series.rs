//! Estimate θ and α from a path: either a `t,value` CSV given on the command
//! line, or a freshly simulated ARFIMA path.
//!
//!     cargo run --example estimate_series -- path.csv

use std::fs::File;

use longmem::noise::CovarianceModel;
use longmem::{estimate, simulate_ar1, MomentMap, SeedSpec, Series};

fn main() -> longmem::Result<()> {
    let model = CovarianceModel::arfima(0.08, 1.0)?;
    let series = match std::env::args().nth(1) {
        Some(path) => Series::read_csv(File::open(path)?)?,
        None => simulate_ar1(&model, 0.6, 0.4, 20_000, SeedSpec::new(42, 0))?,
    };
    let map = MomentMap::new(model)?;
    let est = estimate(&map, &series)?;
    for (k, v) in est.to_kv() {
        println!("{k}={v}");
    }

    // asymptotic 95% interval for θ
    let consts = map.constants(est.theta_hat)?;
    if let Some(tv) = consts.theta_variance() {
        let half = 1.96 * (tv / est.n as f64).sqrt();
        println!("theta 95% CI: [{:.4}, {:.4}]", est.theta_hat - half, est.theta_hat + half);
    }
    Ok(())
}
