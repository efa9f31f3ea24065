//! Moment estimators `θ̂ = f⁻¹(n⁻¹ Σ (X_t - X̄)²)` and `α̂ = (1 - θ̂) X̄`.

use crate::error::{Error, Result};
use crate::moment::{MomentMap, VarianceConstants, THETA_EPS};
use crate::sim::Series;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationResult {
    pub theta_hat: f64,
    pub alpha_hat: f64,
    pub x_bar: f64,
    /// Centered second moment with denominator `n`.
    pub s2: f64,
    pub clamped: bool,
    pub n: usize,
}

impl EstimationResult {
    pub fn to_kv(&self) -> Vec<(&'static str, String)> {
        vec![
            ("n", self.n.to_string()),
            ("theta_hat", self.theta_hat.to_string()),
            ("alpha_hat", self.alpha_hat.to_string()),
            ("x_bar", self.x_bar.to_string()),
            ("s2", self.s2.to_string()),
            ("clamped", self.clamped.to_string()),
        ]
    }
}

pub fn sample_mean(x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    Ok(x.iter().sum::<f64>() / x.len() as f64)
}

/// `n⁻¹ Σ (X_t - X̄)²`.
pub fn centered_second_moment(x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    let mean = sample_mean(x)?;
    Ok(x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / x.len() as f64)
}

/// Estimates from the first two sample moments; `map` must describe the
/// true noise law.
pub fn estimate(map: &MomentMap, x: &Series) -> Result<EstimationResult> {
    estimate_values(map, x.values())
}

pub fn estimate_values(map: &MomentMap, x: &[f64]) -> Result<EstimationResult> {
    let s2 = centered_second_moment(x)?;
    let x_bar = sample_mean(x)?;
    let inv = if s2 > 0.0 {
        map.f_inverse(s2)?
    } else {
        crate::moment::Inverse {
            theta: THETA_EPS,
            clamped: true,
        }
    };
    Ok(EstimationResult {
        theta_hat: inv.theta,
        alpha_hat: (1.0 - inv.theta) * x_bar,
        x_bar,
        s2,
        clamped: inv.clamped,
        n: x.len(),
    })
}

/// Errors scaled to be asymptotically standard normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Standardized {
    /// `√n (θ̂ - θ) f'(θ) / σ_H`.
    pub g1: f64,
    /// `n^{1-H} (α̂ - α)` over its limiting standard deviation.
    pub g2: f64,
    /// `√n (s2 - f(θ)) / σ_H`, the statistic before inversion.
    pub v: f64,
}

/// `g1` is `NaN` when `σ_H²` is unavailable (`H ≥ 3/4`).
pub fn standardized_stats(
    consts: &VarianceConstants,
    est: &EstimationResult,
    theta_true: f64,
    alpha_true: f64,
) -> Standardized {
    let n = est.n as f64;
    let sigma_h = consts.sigma_h_sq.map_or(f64::NAN, f64::sqrt);
    let root_n = n.sqrt();
    Standardized {
        g1: root_n * (est.theta_hat - theta_true) * consts.f_prime / sigma_h,
        g2: n.powf(1.0 - consts.hurst) * (est.alpha_hat - alpha_true) / consts.alpha_variance_at(alpha_true).sqrt(),
        v: root_n * (est.s2 - consts.f_value) / sigma_h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::CovarianceModel;
    use crate::sim::{simulate_ar1, SeedSpec};

    fn white_map() -> MomentMap {
        MomentMap::new(CovarianceModel::white(1.0).unwrap()).unwrap()
    }

    #[test]
    fn moments_basic() {
        assert_eq!(sample_mean(&[1.0, 2.0, 3.0]).unwrap(), 2.0);
        assert_eq!(sample_mean(&[4.5; 7]).unwrap(), 4.5);
        assert!(sample_mean(&[]).is_err());
        assert_eq!(centered_second_moment(&[1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(centered_second_moment(&[0.0, 2.0]).unwrap(), 1.0);
        assert!(centered_second_moment(&[1.0]).is_err());
    }

    #[test]
    fn constant_path_clamps() {
        let r = estimate_values(&white_map(), &[2.5; 10]).unwrap();
        assert!(r.clamped);
        assert_eq!(r.theta_hat, THETA_EPS);
        assert_eq!(r.alpha_hat, (1.0 - THETA_EPS) * 2.5);
    }

    #[test]
    fn exact_moment_inverts() {
        let map = white_map();
        // [-a, a] has s2 = a²
        let a = map.f_value(0.6).unwrap().sqrt();
        let r = estimate_values(&map, &[-a, a]).unwrap();
        assert!((r.theta_hat - 0.6).abs() < 1e-8);
        assert!(!r.clamped);
    }

    #[test]
    fn white_large_sample_consistency() {
        let model = CovarianceModel::white(1.0).unwrap();
        let map = MomentMap::new(model.clone()).unwrap();
        let x = simulate_ar1(&model, 0.6, 0.4, 1_000_000, SeedSpec::new(2024, 0)).unwrap();
        let r = estimate(&map, &x).unwrap();
        assert!((r.theta_hat - 0.6).abs() < 0.01, "{r:?}");
        assert!((r.alpha_hat - 0.4).abs() < 0.02, "{r:?}");
        assert!((r.x_bar - 1.0).abs() < 0.05);
    }

    #[test]
    fn standardized_zero_at_truth() {
        let map = white_map();
        let k = map.constants(0.6).unwrap();
        let est = EstimationResult {
            theta_hat: 0.6,
            alpha_hat: 0.4,
            x_bar: 1.0,
            s2: k.f_value,
            clamped: false,
            n: 3000,
        };
        let s = standardized_stats(&k, &est, 0.6, 0.4);
        assert_eq!((s.g1, s.g2, s.v), (0.0, 0.0, 0.0));
        let shifted = EstimationResult { theta_hat: 0.61, ..est };
        let g = standardized_stats(&k, &shifted, 0.6, 0.4).g1;
        let slope = 3000f64.sqrt() * k.f_prime / k.sigma_h_sq.unwrap().sqrt();
        assert!((g - 0.01 * slope).abs() < 1e-9);
    }
}
