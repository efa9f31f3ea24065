//! Circulant-embedding sampler: compare the empirical autocovariance of many
//! simulated fGn paths with the exact model.

use longmem::noise::{cov_sequence, CovarianceModel};
use longmem::sim::{derive_seed, CirculantSampler};

fn main() -> longmem::Result<()> {
    let model = CovarianceModel::fgn(0.7)?;
    let (n, reps) = (2048, 500);
    let cov = cov_sequence(&model, n - 1)?;
    let sampler = CirculantSampler::new(&cov, n)?;
    println!("clamped eigenvalues: {}", sampler.clamped_eigenvalues());

    let lags = [0usize, 1, 2, 5, 10, 50, 100];
    let mut acc = vec![0.0; lags.len()];
    for i in 0..reps {
        let x = sampler.sample(derive_seed(7, i));
        for (a, &k) in acc.iter_mut().zip(&lags) {
            *a += x[..n - k].iter().zip(&x[k..]).map(|(p, q)| p * q).sum::<f64>() / (n - k) as f64;
        }
    }
    println!("{:>5} {:>10} {:>10}", "lag", "exact", "empirical");
    for (a, &k) in acc.iter().zip(&lags) {
        println!("{k:>5} {:>10.5} {:>10.5}", cov[k], a / reps as f64);
    }
    Ok(())
}
