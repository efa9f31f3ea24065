//! Draw one AR(1) path driven by fractional Gaussian noise and write it as CSV.
//!
//!     cargo run --example simulate_path -- 0.58 0.6 0.4 3000 > path.csv

use longmem::{simulate_ar1, CovarianceModel, SeedSpec};

fn main() -> longmem::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let get = |i: usize, default: f64| args.get(i).copied().unwrap_or(default);
    let (hurst, theta, alpha, n) = (get(0, 0.58), get(1, 0.6), get(2, 0.4), get(3, 3000.0) as usize);

    let model = CovarianceModel::fgn(hurst)?;
    let path = simulate_ar1(&model, theta, alpha, n, SeedSpec::new(1, 0))?;
    path.write_csv(std::io::stdout().lock())?;

    let mean = path.values().iter().sum::<f64>() / n as f64;
    eprintln!("n={n} sample mean={mean:.4} (stationary mean {:.4})", alpha / (1.0 - theta));
    Ok(())
}
