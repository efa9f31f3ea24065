use longmem::mc::ks_standard_normal;
use longmem::noise::{cov_sequence, CovarianceModel};
use longmem::sim::{derive_seed, sample_stationary_gaussian, simulate_ar1, CirculantSampler, SeedSpec, Series};
use nalgebra::{DMatrix, DVector};

#[test]
fn white_noise_is_standard_gaussian() {
    let m = CovarianceModel::white(1.0).unwrap();
    let cov = cov_sequence(&m, 4095).unwrap();
    let s = sample_stationary_gaussian(&cov, 4096, SeedSpec::new(3, 0)).unwrap();
    // KS critical value at the 0.001 level
    let crit = 1.95 / (s.len() as f64).sqrt();
    assert!(ks_standard_normal(s.values()) < crit);
}

#[test]
fn ensemble_covariance_matches_target() {
    let m = CovarianceModel::arfima(0.2, 1.0).unwrap();
    let n = 64;
    let cov = cov_sequence(&m, n - 1).unwrap();
    let sampler = CirculantSampler::new(&cov, n).unwrap();
    let reps = 20_000;
    let mut acc = [0.0; 4];
    for i in 0..reps {
        let x = sampler.sample(derive_seed(11, i));
        for (k, a) in acc.iter_mut().enumerate() {
            *a += x[10] * x[10 + k];
        }
    }
    for (k, a) in acc.iter().enumerate() {
        let est = a / reps as f64;
        // SE of a product of unit-variance Gaussians is at most sqrt(2 R0^2 / reps)
        let se = (2.0 * cov[0] * cov[0] / reps as f64).sqrt();
        assert!((est - cov[k]).abs() < 4.0 * se, "lag {k}: {est} vs {}", cov[k]);
    }
}

#[test]
fn cholesky_whitening_gives_iid_normals() {
    let m = CovarianceModel::fgn(0.7).unwrap();
    let n = 128;
    let cov = cov_sequence(&m, n - 1).unwrap();
    let l = DMatrix::from_fn(n, n, |i, j| cov[i.abs_diff(j)]).cholesky().unwrap().l();
    let sampler = CirculantSampler::new(&cov, n).unwrap();
    let mut z = Vec::new();
    for i in 0..100 {
        let x = DVector::from_vec(sampler.sample(derive_seed(12, i)));
        z.extend(l.solve_lower_triangular(&x).unwrap().iter().copied());
    }
    assert!(ks_standard_normal(&z) < 1.36 / (z.len() as f64).sqrt());
}

#[test]
fn ar1_path_satisfies_recursion() {
    let m = CovarianceModel::fgn(0.6).unwrap();
    let s = simulate_ar1(&m, 0.5, 0.3, 500, SeedSpec::new(1, 2)).unwrap();
    assert_eq!(s.len(), 500);
    let again = simulate_ar1(&m, 0.5, 0.3, 500, SeedSpec::new(1, 2)).unwrap();
    assert_eq!(s, again);
    let other = simulate_ar1(&m, 0.5, 0.3, 500, SeedSpec::new(1, 3)).unwrap();
    assert_ne!(s.values(), other.values());
}

#[test]
fn series_csv_and_binary_round_trip() {
    let s = Series::observed(vec![1.5, -2.25, 1e-300, 3.0]).unwrap();
    let mut csv = Vec::new();
    s.write_csv(&mut csv).unwrap();
    assert!(std::str::from_utf8(&csv).unwrap().starts_with("t,value\n1,"));
    assert_eq!(Series::read_csv(&csv[..]).unwrap().values(), s.values());
    let mut bin = Vec::new();
    s.write_binary(&mut bin).unwrap();
    assert_eq!(bin.len(), 8 + 8 * 4);
    assert_eq!(Series::read_binary(&bin[..]).unwrap().values(), s.values());
}
