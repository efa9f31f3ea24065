//! Covariance models for stationary Gaussian noise.
//!
//! Every model produces an even autocovariance sequence `R(k)`. The fGn and
//! ARFIMA(0, d, 0) laws are long-memory: `R(k) ~ C k^{2H-2}` with `H` in
//! `(1/2, 1)`. White noise and user-supplied finite sequences are included
//! for short-memory checks and experimentation.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::sync::Arc;

use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{domain, Error, Result};

/// Lags below this use the closed fGn form; above it the binomial expansion,
/// which avoids cancellation between the three `k^{2H}` terms.
const FGN_SERIES_FROM: u64 = 64;

/// ARFIMA lags up to this are reached by the forward recurrence from lag 0.
const ARFIMA_RECURRENCE_MAX: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum CovarianceModel {
    /// Fractional Gaussian noise with unit variance.
    Fgn { hurst: f64 },
    /// ARFIMA(0, d, 0) driven by Gaussian white noise of variance `sigma`.
    Arfima { d: f64, sigma: f64 },
    /// I.i.d. Gaussian noise.
    White { variance: f64 },
    /// Explicit finite sequence `R(0..=K)`; lags beyond `K` are unavailable.
    Custom { values: Arc<[f64]> },
}

fn open_unit(name: &str, x: f64, lo: f64, hi: f64) -> Result<()> {
    if x.is_finite() && x > lo && x < hi {
        Ok(())
    } else {
        domain(format!("{name}={x} outside ({lo}, {hi})"))
    }
}

pub(crate) fn check_hurst(h: f64) -> Result<()> {
    open_unit("H", h, 0.5, 1.0)
}

impl CovarianceModel {
    pub fn fgn(hurst: f64) -> Result<Self> {
        let m = CovarianceModel::Fgn { hurst };
        m.validate()?;
        Ok(m)
    }

    pub fn arfima(d: f64, sigma: f64) -> Result<Self> {
        let m = CovarianceModel::Arfima { d, sigma };
        m.validate()?;
        Ok(m)
    }

    pub fn white(variance: f64) -> Result<Self> {
        let m = CovarianceModel::White { variance };
        m.validate()?;
        Ok(m)
    }

    pub fn custom(values: Vec<f64>) -> Result<Self> {
        let m = CovarianceModel::Custom {
            values: values.into(),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CovarianceModel::Fgn { hurst } => check_hurst(hurst),
            CovarianceModel::Arfima { d, sigma } => {
                open_unit("d", d, 0.0, 0.5)?;
                positive("sigma", sigma)
            }
            CovarianceModel::White { variance } => positive("sigma", variance),
            CovarianceModel::Custom { ref values } => {
                let r0 = match values.first() {
                    Some(&r0) if r0.is_finite() && r0 > 0.0 => r0,
                    _ => return domain("custom covariance needs R(0) > 0"),
                };
                if let Some(k) = values
                    .iter()
                    .position(|v| !v.is_finite() || v.abs() > r0 * (1.0 + 1e-12))
                {
                    return domain(format!("custom covariance violates |R({k})| <= R(0)"));
                }
                Ok(())
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            CovarianceModel::Fgn { .. } => "fgn",
            CovarianceModel::Arfima { .. } => "arfima",
            CovarianceModel::White { .. } => "white",
            CovarianceModel::Custom { .. } => "custom",
        }
    }

    /// Long-memory exponent `H` (`d + 1/2` for ARFIMA); `None` for short memory.
    pub fn memory_exponent(&self) -> Option<f64> {
        match *self {
            CovarianceModel::Fgn { hurst } => Some(hurst),
            CovarianceModel::Arfima { d, .. } => Some(d + 0.5),
            _ => None,
        }
    }

    /// The constant `C` in `R(k) ~ C k^{2H-2}`. Zero for white noise.
    pub fn tail_constant(&self) -> Option<f64> {
        match *self {
            CovarianceModel::Fgn { hurst } => Some(hurst * (2.0 * hurst - 1.0)),
            CovarianceModel::Arfima { d, sigma } => {
                Some(sigma * gamma(1.0 - 2.0 * d) / (gamma(1.0 - d) * gamma(d)))
            }
            CovarianceModel::White { .. } => Some(0.0),
            CovarianceModel::Custom { .. } => None,
        }
    }

    /// Largest lag available, if the model is finite.
    pub fn max_lag(&self) -> Option<usize> {
        match self {
            CovarianceModel::Custom { values } => Some(values.len() - 1),
            _ => None,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            CovarianceModel::Fgn { .. } => 1.0,
            CovarianceModel::Arfima { d, sigma } => arfima_lag0(d, sigma),
            CovarianceModel::White { variance } => variance,
            CovarianceModel::Custom { ref values } => values[0],
        }
    }

    /// `R(k)` for any integer lag; even in `k`.
    pub fn cov(&self, k: i64) -> Result<f64> {
        self.validate()?;
        let lag = k.unsigned_abs() as usize;
        self.iter_from(lag)?
            .next()
            .ok_or(Error::InsufficientData {
                needed: lag,
                available: self.max_lag().unwrap_or(0),
            })
    }

    /// Iterator over `R(start), R(start + 1), ...`. Finite for custom models.
    pub fn iter_from(&self, start: usize) -> Result<CovIter<'_>> {
        let state = match *self {
            CovarianceModel::Fgn { hurst } => IterState::Fgn { hurst },
            CovarianceModel::Arfima { d, sigma } => {
                let value = arfima_seed(d, sigma, start);
                IterState::Arfima { d, value }
            }
            CovarianceModel::White { variance } => IterState::White { variance },
            CovarianceModel::Custom { ref values } => {
                if start >= values.len() {
                    return Err(Error::InsufficientData {
                        needed: start,
                        available: values.len() - 1,
                    });
                }
                IterState::Custom { values }
            }
        };
        Ok(CovIter { lag: start, state })
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        domain(format!("{name}={x} must be positive"))
    }
}

enum IterState<'a> {
    Fgn { hurst: f64 },
    Arfima { d: f64, value: f64 },
    White { variance: f64 },
    Custom { values: &'a [f64] },
}

/// Sequential covariance lags; ARFIMA advances by its Gamma-ratio recurrence.
pub struct CovIter<'a> {
    lag: usize,
    state: IterState<'a>,
}

impl Iterator for CovIter<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let k = self.lag;
        let out = match &mut self.state {
            IterState::Fgn { hurst } => fgn_cov_unchecked(*hurst, k as u64),
            IterState::Arfima { d, value } => {
                let v = *value;
                let kk = (k + 1) as f64;
                *value = v * (kk - 1.0 + *d) / (kk - *d);
                v
            }
            IterState::White { variance } => {
                if k == 0 {
                    *variance
                } else {
                    0.0
                }
            }
            IterState::Custom { values } => *values.get(k)?,
        };
        self.lag += 1;
        Some(out)
    }
}

fn fgn_cov_unchecked(h: f64, k: u64) -> f64 {
    let a = 2.0 * h;
    if k < FGN_SERIES_FROM {
        let kf = k as f64;
        return 0.5 * ((kf + 1.0).powf(a) + (kf - 1.0).abs().powf(a) - 2.0 * kf.powf(a));
    }
    // (1+x)^a + (1-x)^a - 2 = 2 sum_{j>=1} binom(a, 2j) x^{2j}, x = 1/k
    let x2 = 1.0 / ((k as f64) * (k as f64));
    let mut binom = 1.0;
    let mut xp = 1.0;
    let mut sum = 0.0;
    for m in 1..40u32 {
        let mf = m as f64;
        binom *= (a - mf + 1.0) / mf;
        if m % 2 == 0 {
            xp *= x2;
            let term = binom * xp;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
    }
    (k as f64).powf(a) * sum
}

/// fGn autocovariance `(|k+1|^{2H} + |k-1|^{2H} - 2|k|^{2H}) / 2`.
pub fn cov_fgn(hurst: f64, k: i64) -> Result<f64> {
    check_hurst(hurst)?;
    Ok(fgn_cov_unchecked(hurst, k.unsigned_abs()))
}

fn arfima_lag0(d: f64, sigma: f64) -> f64 {
    sigma * gamma(1.0 - 2.0 * d) / (gamma(1.0 - d) * gamma(1.0 - d))
}

fn arfima_seed(d: f64, sigma: f64, start: usize) -> f64 {
    let r0 = arfima_lag0(d, sigma);
    if start <= ARFIMA_RECURRENCE_MAX {
        let mut v = r0;
        for k in 1..=start {
            let kf = k as f64;
            v *= (kf - 1.0 + d) / (kf - d);
        }
        v
    } else {
        let k = start as f64;
        r0 * (ln_gamma(k + d) - ln_gamma(d) - ln_gamma(k + 1.0 - d) + ln_gamma(1.0 - d)).exp()
    }
}

/// ARFIMA(0, d, 0) autocovariance `σ Γ(k+d)Γ(1-2d) / (Γ(k+1-d)Γ(1-d)Γ(d))`.
pub fn cov_arfima(d: f64, sigma: f64, k: u64) -> Result<f64> {
    CovarianceModel::arfima(d, sigma)?;
    Ok(arfima_seed(d, sigma, k as usize))
}

/// `[R(0), ..., R(max_lag)]`.
pub fn cov_sequence(model: &CovarianceModel, max_lag: usize) -> Result<Vec<f64>> {
    model.validate()?;
    if let Some(avail) = model.max_lag() {
        if max_lag > avail {
            return Err(Error::InsufficientData {
                needed: max_lag,
                available: avail,
            });
        }
    }
    Ok(model.iter_from(0)?.take(max_lag + 1).collect())
}

/// Spectral constant `C_H = Γ(2H-1) sin(π - πH) / π` of a noise with
/// `R(k) = |k|^{2H-2}`.
pub fn spectral_constant(hurst: f64) -> Result<f64> {
    check_hurst(hurst)?;
    if hurst < 0.501 {
        log::warn!("spectral constant near the H = 1/2 pole (H = {hurst})");
    }
    Ok(gamma(2.0 * hurst - 1.0) * (PI - PI * hurst).sin() / PI)
}

/// Numerical check that `R(k) k^{2-2H}` settles to a positive constant.
#[derive(Debug, Clone)]
pub struct HypothesisReport {
    pub lags: Vec<usize>,
    pub ratios: Vec<f64>,
    /// Mean ratio over the top decile of lags.
    pub estimated_c: f64,
    /// Largest relative deviation of a top-decile ratio from `estimated_c`;
    /// infinite when `estimated_c <= 0`.
    pub relative_drift: f64,
}

impl HypothesisReport {
    pub fn holds(&self, drift_tol: f64) -> bool {
        self.estimated_c > 0.0 && self.relative_drift < drift_tol
    }
}

pub fn check_hypothesis(
    model: &CovarianceModel,
    hurst: f64,
    k_min: usize,
    k_max: usize,
) -> Result<HypothesisReport> {
    check_hurst(hurst)?;
    if k_min < 1 || k_min >= k_max {
        return domain(format!("need 1 <= K_min < K_max, got {k_min}, {k_max}"));
    }
    let lags: Vec<usize> = (k_min..=k_max).collect();
    let ratios: Vec<f64> = model
        .iter_from(k_min)?
        .zip(&lags)
        .map(|(r, &k)| r / (k as f64).powf(2.0 * hurst - 2.0))
        .collect();
    if ratios.len() < lags.len() {
        return Err(Error::InsufficientData {
            needed: k_max,
            available: model.max_lag().unwrap_or(0),
        });
    }
    let tail_len = (lags.len() / 10).max(1);
    let tail = &ratios[ratios.len() - tail_len..];
    let estimated_c = tail.iter().sum::<f64>() / tail_len as f64;
    let relative_drift = if estimated_c > 0.0 {
        tail.iter()
            .map(|r| (r - estimated_c).abs() / estimated_c)
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(HypothesisReport {
        lags,
        ratios,
        estimated_c,
        relative_drift,
    })
}

/// Writes `lag,value` rows.
pub fn write_cov_csv<W: Write>(values: &[f64], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lag", "value"])?;
    for (k, v) in values.iter().enumerate() {
        w.write_record([k.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a `lag,value` file; lags must run 0, 1, 2, ... without gaps.
pub fn read_cov_csv<R: Read>(input: R) -> Result<Vec<f64>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<(usize, f64)>().enumerate() {
        let (lag, value) = rec?;
        if lag != i {
            return Err(Error::Config(format!("covariance file: expected lag {i}, found {lag}")));
        }
        out.push(value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fgn_examples() {
        assert_eq!(cov_fgn(0.58, 0).unwrap(), 1.0);
        let r1 = cov_fgn(0.58, 1).unwrap();
        assert!((r1 - (2f64.powf(0.16) - 1.0)).abs() < 1e-15);
        assert!((r1 - 0.117287).abs() < 1e-5);
        assert!(cov_fgn(0.5, 1).is_err());
        assert!(cov_fgn(1.0, 1).is_err());
    }

    #[test]
    fn fgn_series_branch_matches_closed_form() {
        for &h in &[0.55, 0.58, 0.7, 0.9] {
            let a = 2.0 * h;
            let k = FGN_SERIES_FROM as f64;
            let closed = 0.5 * ((k + 1.0).powf(a) + (k - 1.0).powf(a) - 2.0 * k.powf(a));
            let series = fgn_cov_unchecked(h, FGN_SERIES_FROM);
            assert!((closed / series - 1.0).abs() < 1e-10, "H={h}");
        }
    }

    #[test]
    fn arfima_ratio_and_lag0() {
        let r0 = cov_arfima(0.08, 1.0, 0).unwrap();
        let r1 = cov_arfima(0.08, 1.0, 1).unwrap();
        assert!((r1 / r0 - 0.08 / 0.92).abs() < 1e-15);
        let expect = gamma(0.84) / (gamma(0.92) * gamma(0.92));
        assert!((r0 - expect).abs() < 1e-14);
        assert!(cov_arfima(1e-9, 1.0, 1).unwrap() < 1e-8);
        assert!(cov_arfima(0.5, 1.0, 1).is_err());
        assert!(cov_arfima(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn arfima_log_gamma_seed_continues_recurrence() {
        let m = CovarianceModel::arfima(0.2, 1.3).unwrap();
        let via_rec: Vec<f64> = m.iter_from(0).unwrap().skip(ARFIMA_RECURRENCE_MAX + 1).take(3).collect();
        let via_seed: Vec<f64> = m.iter_from(ARFIMA_RECURRENCE_MAX + 1).unwrap().take(3).collect();
        for (a, b) in via_rec.iter().zip(&via_seed) {
            assert!((a / b - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn sequences() {
        let w = CovarianceModel::white(1.0).unwrap();
        assert_eq!(cov_sequence(&w, 3).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        let f = CovarianceModel::fgn(0.58).unwrap();
        let s = cov_sequence(&f, 1).unwrap();
        assert_eq!(s[0], 1.0);
        assert!((s[1] - 0.11729).abs() < 1e-5);
        assert_eq!(cov_sequence(&f, 0).unwrap(), vec![1.0]);
        let c = CovarianceModel::custom(vec![2.0, 0.5]).unwrap();
        assert!(matches!(
            cov_sequence(&c, 2),
            Err(Error::InsufficientData { needed: 2, available: 1 })
        ));
        assert_eq!(c.cov(-1).unwrap(), 0.5);
    }

    #[test]
    fn custom_rejects_bad_sequences() {
        assert!(CovarianceModel::custom(vec![]).is_err());
        assert!(CovarianceModel::custom(vec![0.0, 0.0]).is_err());
        assert!(CovarianceModel::custom(vec![1.0, 1.5]).is_err());
    }

    #[test]
    fn hypothesis_fgn() {
        let m = CovarianceModel::fgn(0.58).unwrap();
        let rep = check_hypothesis(&m, 0.58, 100, 1000).unwrap();
        assert!((rep.estimated_c - 0.0928).abs() < 1e-4);
        assert!(rep.relative_drift < 1e-4);
        assert!(rep.holds(0.01));
        assert!(rep.lags.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn hypothesis_white_fails() {
        let m = CovarianceModel::white(1.0).unwrap();
        let rep = check_hypothesis(&m, 0.58, 10, 100).unwrap();
        assert!(rep.ratios.iter().all(|&r| r == 0.0));
        assert_eq!(rep.estimated_c, 0.0);
        assert!(!rep.holds(0.05));
    }

    #[test]
    fn hypothesis_arfima() {
        let m = CovarianceModel::arfima(0.08, 1.0).unwrap();
        let rep = check_hypothesis(&m, 0.58, 100, 2000).unwrap();
        assert!(rep.relative_drift < 0.05);
        let c = m.tail_constant().unwrap();
        assert!((rep.estimated_c / c - 1.0).abs() < 1e-3);
        assert!(check_hypothesis(&m, 0.58, 0, 10).is_err());
        assert!(check_hypothesis(&m, 0.58, 10, 10).is_err());
    }

    #[test]
    fn spectral_constant_values() {
        let c = spectral_constant(0.75).unwrap();
        assert!((c - std::f64::consts::FRAC_1_SQRT_2 / PI.sqrt()).abs() < 1e-14);
        assert!((c - 0.39894).abs() < 1e-5);
        let c58 = spectral_constant(0.58).unwrap();
        assert!((c58 - gamma(0.16) * (0.42 * PI).sin() / PI).abs() < 1e-14);
        assert!(spectral_constant(0.5005).unwrap() > spectral_constant(0.51).unwrap());
        assert!(spectral_constant(0.5).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let vals = vec![1.0, 0.25, -0.125];
        let mut buf = Vec::new();
        write_cov_csv(&vals, &mut buf).unwrap();
        assert!(buf.starts_with(b"lag,value\n"));
        assert_eq!(read_cov_csv(&buf[..]).unwrap(), vals);
    }
}
