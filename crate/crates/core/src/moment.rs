//! The stationary second-moment map `f(θ) = E(Y_t²)` of `Y_t = Σ_j θ^j ξ_{t-j}`,
//! its derivative and inverse, the covariance `R_Y`, and the constants of the
//! limiting laws of the moment estimators.
//!
//! The double sums `Σ_{i,j≥0} θ^{i+j} R(i-j+k)` are evaluated through their
//! single-series resummation over diagonals:
//!
//! ```text
//! R_Y(k) = (1 - θ²)^{-1} Σ_{m∈Z} R(m) θ^{|k-m|}
//! f(θ)   = (1 - θ²)^{-1} (R(0) + 2 Σ_{k≥1} R(k) θ^k)
//! ```
//!
//! Truncation depths come from the geometric tail bound `|R(k)| ≤ R(0)`, so
//! the absolute error of `f` and `R_Y` is below the map's tolerance for every
//! model.

use std::borrow::Cow;
use std::f64::consts::PI;
use std::io::Write;

use statrs::function::beta::beta;

use crate::error::{domain, Error, Result};
use crate::noise::{check_hurst, spectral_constant, CovarianceModel};
use crate::quad::adaptive_simpson;

/// Distance from the ends of `(0, 1)` at which `f⁻¹` clamps.
pub const THETA_EPS: f64 = 1e-6;
pub const DEFAULT_TOL: f64 = 1e-10;
/// Relative change under doubling at which the `σ_H²` sum is accepted.
pub const SIGMA_H_REL_TOL: f64 = 1e-6;

const PREFIX_LAGS: usize = 1 << 16;
const SIGMA_H_START: usize = 1 << 12;
const SIGMA_H_MAX: usize = 1 << 22;

/// Result of inverting `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inverse {
    pub theta: f64,
    pub clamped: bool,
}

#[derive(Debug, Clone)]
pub struct MomentMap {
    model: CovarianceModel,
    tol: f64,
    prefix: Vec<f64>,
}

impl MomentMap {
    pub fn new(model: CovarianceModel) -> Result<Self> {
        Self::with_tolerance(model, DEFAULT_TOL)
    }

    pub fn with_tolerance(model: CovarianceModel, tol: f64) -> Result<Self> {
        model.validate()?;
        if !(tol.is_finite() && tol > 0.0) {
            return domain(format!("tol={tol} must be positive"));
        }
        let len = model.max_lag().map_or(PREFIX_LAGS, |m| (m + 1).min(PREFIX_LAGS));
        let prefix: Vec<f64> = model.iter_from(0)?.take(len).collect();
        Ok(MomentMap { model, tol, prefix })
    }

    pub fn model(&self) -> &CovarianceModel {
        &self.model
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn r0(&self) -> f64 {
        self.prefix[0]
    }

    /// `R(lo..=hi)`, borrowed from the cached prefix when possible.
    fn lags(&self, lo: usize, hi: usize) -> Result<Cow<'_, [f64]>> {
        if hi < self.prefix.len() {
            return Ok(Cow::Borrowed(&self.prefix[lo..=hi]));
        }
        if let Some(avail) = self.model.max_lag() {
            return Err(Error::InsufficientData {
                needed: hi,
                available: avail,
            });
        }
        let mut out = Vec::with_capacity(hi - lo + 1);
        if lo < self.prefix.len() {
            out.extend_from_slice(&self.prefix[lo..]);
        }
        let start = lo.max(self.prefix.len());
        out.extend(self.model.iter_from(start)?.take(hi + 1 - start));
        Ok(Cow::Owned(out))
    }

    fn check(&self, theta: f64) -> Result<()> {
        if !(theta.is_finite() && theta > 0.0 && theta < 1.0) {
            return domain(format!("theta={theta} outside (0, 1)"));
        }
        if theta > 1.0 - THETA_EPS {
            return Err(Error::NearBoundary(format!(
                "theta={theta} exceeds 1 - {THETA_EPS:e}"
            )));
        }
        Ok(())
    }

    /// Smallest `K` with `2 R(0) θ^{K+1} / ((1-θ)(1-θ²)) < tol`.
    pub fn truncation_depth(&self, theta: f64) -> usize {
        let bound = self.tol * (1.0 - theta) * (1.0 - theta * theta) / (2.0 * self.r0());
        let k = (bound.ln() / theta.ln()).ceil() - 1.0;
        if k.is_finite() && k > 1.0 {
            k as usize
        } else {
            1
        }
    }

    pub fn f_value(&self, theta: f64) -> Result<f64> {
        self.check(theta)?;
        let depth = self.truncation_depth(theta);
        let r = self.lags(0, depth)?;
        let mut acc = 0.0;
        let mut pw = 1.0;
        for &rk in &r[1..] {
            pw *= theta;
            acc += rk * pw;
        }
        Ok((r[0] + 2.0 * acc) / (1.0 - theta * theta))
    }

    /// `Σ_{i,j=0}^{K} θ^{i+j} R(i-j)` summed term by term.
    pub fn f_value_bruteforce(&self, theta: f64, k: usize) -> Result<f64> {
        self.r_y_bruteforce(theta, 0, k)
    }

    pub fn f_derivative(&self, theta: f64) -> Result<f64> {
        self.check(theta)?;
        let f = self.f_value(theta)?;
        // Tail of Σ k R(k) θ^{k-1} past K is at most R(0) θ^K ((K+1) - Kθ) / (1-θ)².
        let scale = 2.0 * self.r0() / ((1.0 - theta * theta) * (1.0 - theta).powi(2));
        let mut depth = self.truncation_depth(theta);
        let mut pw = theta.powi(depth as i32);
        while scale * pw * ((depth + 1) as f64 - depth as f64 * theta) >= self.tol {
            depth += 1;
            pw *= theta;
        }
        let r = self.lags(0, depth)?;
        let mut acc = 0.0;
        let mut pw = 1.0;
        for (k, &rk) in r.iter().enumerate().skip(1) {
            acc += k as f64 * rk * pw;
            pw *= theta;
        }
        let w = 1.0 - theta * theta;
        Ok(2.0 * theta / w * f + 2.0 / w * acc)
    }

    /// Solves `f(θ) = y` by bracketed Newton iteration with bisection fallback.
    /// Values outside `(f(ε), f(1-ε))` return the nearer end with `clamped`.
    pub fn f_inverse(&self, y: f64) -> Result<Inverse> {
        if !(y.is_finite() && y > 0.0) {
            return domain(format!("f_inverse needs y > 0, got {y}"));
        }
        let (mut lo, mut hi) = (THETA_EPS, 1.0 - THETA_EPS);
        if y <= self.f_value(lo)? {
            return Ok(Inverse { theta: lo, clamped: true });
        }
        // f(1-ε) needs a very deep series; only go there when y demands it.
        let mut upper = None;
        for cand in [0.5, 0.9, 0.99, 0.999, 0.9999, 0.99999, hi] {
            if self.f_value(cand)? >= y {
                upper = Some(cand);
                break;
            }
            lo = cand;
        }
        match upper {
            Some(u) => hi = u,
            None => return Ok(Inverse { theta: hi, clamped: true }),
        }

        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let g = self.f_value(x)? - y;
            if g.abs() < self.tol {
                break;
            }
            if g < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            if hi - lo <= 4.0 * f64::EPSILON * hi {
                break;
            }
            let step = x - g / self.f_derivative(x)?;
            x = if step > lo && step < hi {
                step
            } else {
                0.5 * (lo + hi)
            };
        }
        Ok(Inverse {
            theta: x,
            clamped: false,
        })
    }

    /// `R_Y(k) = E(Y_t Y_{t+k})`.
    pub fn r_y(&self, theta: f64, k: i64) -> Result<f64> {
        self.check(theta)?;
        let k = k.unsigned_abs() as usize;
        let depth = self.truncation_depth(theta);
        let lo = k.saturating_sub(depth);
        let r = self.lags(lo, k + depth)?;
        let mut acc = 0.0;
        let mut pw = 1.0;
        for j in 0..=depth {
            let above = r[k + j - lo];
            let below = if j == 0 {
                0.0
            } else if j <= k {
                r[k - j - lo]
            } else {
                r[j - k - lo]
            };
            acc += pw * (above + below);
            pw *= theta;
        }
        Ok(acc / (1.0 - theta * theta))
    }

    /// `Σ_{i,j=0}^{K} θ^{i+j} R(k + i - j)` summed term by term.
    pub fn r_y_bruteforce(&self, theta: f64, k: i64, depth: usize) -> Result<f64> {
        self.check(theta)?;
        let k = k.unsigned_abs() as usize;
        let r = self.lags(0, k + depth)?;
        let powers: Vec<f64> = (0..=depth).map(|i| theta.powi(i as i32)).collect();
        let mut acc = 0.0;
        for i in 0..=depth {
            for j in 0..=depth {
                let lag = (k + i).abs_diff(j);
                acc += powers[i] * powers[j] * r[lag];
            }
        }
        Ok(acc)
    }

    /// `[R_Y(0), ..., R_Y(k_max)]` in `O(k_max)` by a forward and a backward
    /// first-order recursion.
    pub fn r_y_table(&self, theta: f64, k_max: usize) -> Result<Vec<f64>> {
        self.check(theta)?;
        let depth = self.truncation_depth(theta);
        let r = self.lags(0, k_max + depth)?;
        // forward: A(k) = Σ_{j≥0} θ^j R(k-j);  backward: B(k) = Σ_{j≥1} θ^j R(k+j)
        let mut a = 0.0;
        let mut pw = 1.0;
        for &rj in r.iter().take(depth + 1) {
            a += pw * rj;
            pw *= theta;
        }
        let mut fwd = Vec::with_capacity(k_max + 1);
        fwd.push(a);
        for &rk in &r[1..=k_max] {
            a = rk + theta * a;
            fwd.push(a);
        }
        let mut b = 0.0;
        let mut pw = theta;
        for &rj in &r[k_max + 1..=k_max + depth] {
            b += pw * rj;
            pw *= theta;
        }
        let w = 1.0 - theta * theta;
        let mut out = vec![0.0; k_max + 1];
        for k in (0..=k_max).rev() {
            out[k] = (fwd[k] + b) / w;
            b = theta * (r[k] + b);
        }
        Ok(out)
    }

    /// `2 Σ_{k∈Z} R_Y(k)²` summed over `|k| ≤ k_star`, plus a power-law tail
    /// `R_Y(k) ≈ R_Y(k_star) (k / k_star)^{2H-2}` matched at the cut.
    pub fn sigma_h_sq_truncated(&self, theta: f64, hurst: f64, k_star: usize) -> Result<f64> {
        check_theta_clt_hurst(hurst)?;
        self.sigma_sum(theta, Some(4.0 - 4.0 * hurst), k_star)
    }

    fn sigma_sum(&self, theta: f64, decay: Option<f64>, k_star: usize) -> Result<f64> {
        let k_star = k_star.max(1);
        let ry = self.r_y_table(theta, k_star)?;
        let head = ry[0] * ry[0] + 2.0 * ry[1..].iter().map(|v| v * v).sum::<f64>();
        let tail = match decay {
            Some(s) => {
                let kf = k_star as f64;
                let last = ry[k_star];
                // Σ_{k>K} k^{-s} by Euler-Maclaurin, scaled to the matched term
                let zeta_tail = kf.powf(1.0 - s) / (s - 1.0) - 0.5 * kf.powf(-s)
                    + s / 12.0 * kf.powf(-s - 1.0);
                last * last * kf.powf(s) * zeta_tail
            }
            None => 0.0,
        };
        Ok(2.0 * (head + 2.0 * tail))
    }

    /// `σ_H² = 2 Σ_{k∈Z} R_Y(k)²` for `H ∈ (1/2, 3/4)`; the cut is doubled until
    /// the value moves by less than [`SIGMA_H_REL_TOL`].
    pub fn sigma_h_sq(&self, theta: f64, hurst: f64) -> Result<f64> {
        check_theta_clt_hurst(hurst)?;
        self.sigma_converged(theta, Some(4.0 - 4.0 * hurst))
    }

    fn sigma_converged(&self, theta: f64, decay: Option<f64>) -> Result<f64> {
        let mut k = SIGMA_H_START;
        let mut prev = self.sigma_sum(theta, decay, k)?;
        while k < SIGMA_H_MAX {
            k *= 2;
            let next = self.sigma_sum(theta, decay, k)?;
            if (next - prev).abs() <= SIGMA_H_REL_TOL * next.abs() {
                return Ok(next);
            }
            prev = next;
        }
        log::warn!("sigma_H^2 did not settle by lag {k}; returning last value");
        Ok(prev)
    }

    pub fn tabulate_f(&self, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return domain("grid must be strictly increasing");
        }
        grid.iter()
            .map(|&t| {
                if t <= THETA_EPS || t >= 1.0 - THETA_EPS {
                    return domain(format!("grid point {t} outside ({THETA_EPS:e}, 1 - {THETA_EPS:e})"));
                }
                Ok((t, self.f_value(t)?))
            })
            .collect()
    }

    /// All constants of the limiting laws at `theta`.
    ///
    /// Short-memory models (white, custom) get `H = 1/2`: the mean then has
    /// rate `√n` and limiting variance `Σ_k R(k)`.
    pub fn constants(&self, theta: f64) -> Result<VarianceConstants> {
        self.check(theta)?;
        let f_value = self.f_value(theta)?;
        let f_prime = self.f_derivative(theta)?;
        let long = match (self.model.memory_exponent(), self.model.tail_constant()) {
            (Some(h), Some(c)) => Some((h, c)),
            _ => None,
        };
        let out = match long {
            Some((h, c)) => {
                let sigma_h_sq = if h < 0.75 {
                    Some(self.sigma_h_sq(theta, h)?)
                } else {
                    None
                };
                let s1 = sigma_1_sq(h)?;
                VarianceConstants {
                    theta,
                    hurst: h,
                    f_value,
                    f_prime,
                    sigma_h_sq,
                    sigma_1_sq: Some(s1),
                    tail_constant: Some(c),
                    alpha_variance: c * s1,
                    c_cov: Some(c_theta_h_cov(theta, h)?),
                    c_spec: Some(c_theta_h_spec(theta, h)?),
                    l_inf: Some(l_infty(h)?),
                }
            }
            None => {
                let long_run = self.prefix[0] + 2.0 * self.prefix[1..].iter().sum::<f64>();
                VarianceConstants {
                    theta,
                    hurst: 0.5,
                    f_value,
                    f_prime,
                    sigma_h_sq: Some(self.sigma_converged(theta, None)?),
                    sigma_1_sq: None,
                    tail_constant: None,
                    alpha_variance: long_run,
                    c_cov: None,
                    c_spec: None,
                    l_inf: None,
                }
            }
        };
        Ok(out)
    }
}

fn check_theta_clt_hurst(hurst: f64) -> Result<()> {
    if hurst.is_finite() && hurst > 0.5 && hurst < 0.75 {
        Ok(())
    } else {
        domain(format!("sigma_H^2 needs H in (1/2, 3/4), got {hurst}"))
    }
}

fn check_constant_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && (0.0..1.0).contains(&theta) {
        Ok(())
    } else {
        domain(format!("theta={theta} outside [0, 1)"))
    }
}

/// `[H(2H-1)]^{-1} π^{-1} B(2H-1, 2-2H) sin(2πH - π)`.
pub fn sigma_1_sq(hurst: f64) -> Result<f64> {
    check_hurst(hurst)?;
    let a = 2.0 * hurst - 1.0;
    Ok(beta(a, 2.0 - 2.0 * hurst) * (2.0 * PI * hurst - PI).sin() / (PI * hurst * a))
}

/// Constant of `R_Y(k) ~ C k^{2H-2}` for a noise normalised to `R(k) ~ k^{2H-2}`.
pub fn c_theta_h_cov(theta: f64, hurst: f64) -> Result<f64> {
    check_constant_theta(theta)?;
    check_hurst(hurst)?;
    let a = 2.0 * hurst - 1.0;
    Ok(beta(a, 2.0 - 2.0 * hurst) * (2.0 * PI * hurst - PI).sin() / ((1.0 - theta).powi(2) * PI))
}

/// Constant of the spectral asymptote `h_Y(λ) ~ C |λ|^{1-2H}`.
pub fn c_theta_h_spec(theta: f64, hurst: f64) -> Result<f64> {
    check_constant_theta(theta)?;
    Ok(spectral_constant(hurst)? / (1.0 - theta).powi(2))
}

/// `2 ∫_0^1 (1-x) x^{2H-2} dx = 1 / (H(2H-1))`.
pub fn l_infty(hurst: f64) -> Result<f64> {
    check_hurst(hurst)?;
    Ok(1.0 / (hurst * (2.0 * hurst - 1.0)))
}

/// The same integral by adaptive quadrature after `x = u^{1/(2H-1)}`, which
/// removes the endpoint singularity.
pub fn l_infty_quadrature(hurst: f64) -> Result<f64> {
    check_hurst(hurst)?;
    let p = 1.0 / (2.0 * hurst - 1.0);
    Ok(2.0 * adaptive_simpson(|u| p * (1.0 - u.powf(p)), 0.0, 1.0, 1e-13))
}

/// Writes `theta,f` rows.
pub fn write_f_table<W: Write>(table: &[(f64, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta", "f"])?;
    for (t, f) in table {
        w.write_record([t.to_string(), f.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Constants of the limiting laws at one `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceConstants {
    pub theta: f64,
    /// Memory exponent; `1/2` for short-memory models.
    pub hurst: f64,
    pub f_value: f64,
    pub f_prime: f64,
    /// `2 Σ R_Y(k)²`; `None` when `H ≥ 3/4`.
    pub sigma_h_sq: Option<f64>,
    /// The closed form for a noise with tail constant 1.
    pub sigma_1_sq: Option<f64>,
    /// `C` in `R(k) ~ C k^{2H-2}`.
    pub tail_constant: Option<f64>,
    /// Limiting variance of `n^{1-H}(α̂ - α)`: `C σ₁²`, or the long-run
    /// variance `Σ R(k)` for short memory (see [`Self::alpha_variance_at`]).
    pub alpha_variance: f64,
    pub c_cov: Option<f64>,
    pub c_spec: Option<f64>,
    pub l_inf: Option<f64>,
}

impl VarianceConstants {
    /// `σ_H² / f'(θ)²`, the limiting variance of `√n(θ̂ - θ)`.
    pub fn theta_variance(&self) -> Option<f64> {
        self.sigma_h_sq.map(|s| s / (self.f_prime * self.f_prime))
    }

    /// Limiting variance of `n^{1-H}(α̂ - α)` at intercept `alpha`.
    ///
    /// Under short memory the `(θ̂ - θ) X̄` term is of the same order as
    /// `X̄ - μ` and adds `μ² σ_H² / f'²` (the two are asymptotically
    /// uncorrelated for Gaussian data). Under long memory it is negligible.
    pub fn alpha_variance_at(&self, alpha: f64) -> f64 {
        match (self.sigma_1_sq, self.theta_variance()) {
            (None, Some(tv)) => {
                let mu = alpha / (1.0 - self.theta);
                self.alpha_variance + mu * mu * tv
            }
            _ => self.alpha_variance,
        }
    }

    pub fn to_kv(&self) -> Vec<(&'static str, String)> {
        let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
        vec![
            ("theta", self.theta.to_string()),
            ("H", self.hurst.to_string()),
            ("f", self.f_value.to_string()),
            ("f_prime", self.f_prime.to_string()),
            ("sigma_H_sq", opt(self.sigma_h_sq)),
            ("theta_clt_var", opt(self.theta_variance())),
            ("sigma_1_sq", opt(self.sigma_1_sq)),
            ("tail_constant", opt(self.tail_constant)),
            ("alpha_clt_var", self.alpha_variance.to_string()),
            ("c_cov", opt(self.c_cov)),
            ("c_spec", opt(self.c_spec)),
            ("l_inf", opt(self.l_inf)),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn white() -> MomentMap {
        MomentMap::new(CovarianceModel::white(1.0).unwrap()).unwrap()
    }

    fn fgn(h: f64) -> MomentMap {
        MomentMap::new(CovarianceModel::fgn(h).unwrap()).unwrap()
    }

    #[test]
    fn white_closed_forms() {
        let m = white();
        assert!((m.f_value(0.6).unwrap() - 1.5625).abs() < 1e-12);
        assert!((m.f_value_bruteforce(0.6, 200).unwrap() - 1.5625).abs() < 1e-10);
        assert!((m.f_derivative(0.6).unwrap() - 1.2 / 0.4096).abs() < 1e-9);
        assert!((m.r_y(0.6, 2).unwrap() - 0.5625).abs() < 1e-12);
        assert!((m.r_y(0.6, -2).unwrap() - 0.5625).abs() < 1e-12);
        let inv = m.f_inverse(1.5625).unwrap();
        assert!(!inv.clamped);
        assert!((inv.theta - 0.6).abs() < 1e-9);
        let s = m.sigma_h_sq(0.6, 0.58).unwrap();
        assert!((s - 2.0 * 1.36 / 0.64f64.powi(3)).abs() < 1e-8, "{s}");
    }

    #[test]
    fn near_zero_and_single_term() {
        let m = fgn(0.58);
        assert!((m.f_value(1e-9).unwrap() - 1.0).abs() < 1e-8);
        assert_eq!(m.f_value_bruteforce(0.5, 0).unwrap(), 1.0);
    }

    #[test]
    fn bruteforce_tail_control() {
        let m = fgn(0.7);
        let theta = 0.8;
        for k in 1..40 {
            let a = m.f_value_bruteforce(theta, k).unwrap();
            let b = m.f_value_bruteforce(theta, k + 1).unwrap();
            assert!(b >= a - 2.0 * theta.powi(k as i32));
        }
    }

    #[test]
    fn domain_errors() {
        let m = fgn(0.58);
        assert!(matches!(m.f_value(0.0), Err(Error::Domain(_))));
        assert!(matches!(m.f_value(1.0), Err(Error::Domain(_))));
        assert!(matches!(m.f_value(1.0 - 1e-7), Err(Error::NearBoundary(_))));
        assert!(m.f_inverse(0.0).is_err());
        assert!(m.f_inverse(-1.0).is_err());
        assert!(m.sigma_h_sq(0.6, 0.74).is_ok());
        assert!(m.sigma_h_sq(0.6, 0.76).is_err());
    }

    #[test]
    fn inverse_clamps() {
        let m = fgn(0.58);
        let low = m.f_inverse(0.5).unwrap();
        assert_eq!(low, Inverse { theta: THETA_EPS, clamped: true });
        let hi = MomentMap::new(CovarianceModel::white(1.0).unwrap())
            .unwrap()
            .f_inverse(1e12)
            .unwrap();
        assert_eq!(hi, Inverse { theta: 1.0 - THETA_EPS, clamped: true });
    }

    #[test]
    fn r_y_table_matches_window() {
        let m = fgn(0.58);
        let t = m.r_y_table(0.6, 600).unwrap();
        for k in [0usize, 1, 2, 17, 100, 599, 600] {
            let w = m.r_y(0.6, k as i64).unwrap();
            assert!((t[k] - w).abs() < 1e-11, "k={k}: {} vs {w}", t[k]);
        }
        assert!((t[0] - m.f_value(0.6).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn r_y_power_law_tail() {
        let m = fgn(0.58);
        let c = 0.58 * (2.0 * 0.58 - 1.0) / 0.16; // H(2H-1)/(1-θ)²
        for k in [500i64, 1000, 5000] {
            let ratio = m.r_y(0.6, k).unwrap() / (c * (k as f64).powf(-0.84));
            assert!((ratio - 1.0).abs() < 0.05, "k={k} ratio={ratio}");
        }
    }

    #[test]
    fn closed_form_constants() {
        assert!((sigma_1_sq(0.75).unwrap() - 8.0 / 3.0).abs() < 1e-12);
        assert!(sigma_1_sq(0.58).unwrap() > 0.0);
        assert!((c_theta_h_cov(0.6, 0.75).unwrap() - 6.25).abs() < 1e-12);
        assert!((c_theta_h_spec(0.6, 0.75).unwrap() - 0.39894 / 0.16).abs() < 1e-4);
        assert!((c_theta_h_spec(0.0, 0.62).unwrap() - spectral_constant(0.62).unwrap()).abs() < 1e-15);
        assert!((l_infty(0.75).unwrap() - 8.0 / 3.0).abs() < 1e-14);
        assert!((l_infty(1.0 - 1e-12).unwrap() - 1.0).abs() < 1e-9);
        for h in [0.55, 0.65, 0.75, 0.85, 0.95] {
            let q = l_infty_quadrature(h).unwrap();
            assert!((q - l_infty(h).unwrap()).abs() < 1e-9, "H={h}");
        }
        assert!(l_infty(0.5).is_err());
    }

    #[test]
    fn constants_white_short_memory() {
        let k = white().constants(0.6).unwrap();
        assert_eq!(k.hurst, 0.5);
        assert_eq!(k.alpha_variance, 1.0);
        assert!((k.sigma_h_sq.unwrap() - 10.3759765625).abs() < 1e-8);
        assert!(k.c_cov.is_none());
    }

    #[test]
    fn tabulate_white() {
        let t = white().tabulate_f(&[0.2, 0.5, 0.8]).unwrap();
        let want = [1.0 / 0.96, 4.0 / 3.0, 1.0 / 0.36];
        for ((_, f), w) in t.iter().zip(want) {
            assert!((f - w).abs() < 1e-12);
        }
        assert!(white().tabulate_f(&[0.5, 0.2]).is_err());
        assert!(white().tabulate_f(&[0.0, 0.2]).is_err());
    }
}
