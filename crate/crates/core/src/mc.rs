//! Replicated simulation and estimation with normality diagnostics.
//!
//! Replication `i` draws its path from `derive_seed(master_seed, i)`, and
//! results are collected in replication order, so every output except the
//! wall-clock runtime is independent of the worker count.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use statrs::function::erf::erfc;

use crate::error::{domain, Error, Result};
use crate::estimate::{estimate_values, standardized_stats};
use crate::moment::{MomentMap, VarianceConstants};
use crate::noise::CovarianceModel;
use crate::sim::{check_theta, derive_seed, Ar1Simulator};

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub model: CovarianceModel,
    pub theta: f64,
    pub alpha: f64,
    pub n: usize,
    pub reps: usize,
    pub master_seed: u64,
    /// Worker threads; 0 uses all available cores.
    pub workers: usize,
    pub burn_in: usize,
    pub tol: f64,
}

impl McConfig {
    /// `θ = 0.6`, `α = 0.4`, `n = 3000`, `M = 2000`.
    pub fn study_defaults(model: CovarianceModel) -> Self {
        McConfig {
            model,
            theta: 0.6,
            alpha: 0.4,
            n: 3000,
            reps: 2000,
            master_seed: 1,
            workers: 0,
            burn_in: 0,
            tol: crate::moment::DEFAULT_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        check_theta(self.theta)?;
        if !self.alpha.is_finite() {
            return domain("alpha must be finite");
        }
        if self.n < 2 {
            return domain(format!("n={} must be >= 2", self.n));
        }
        if self.reps < 1 {
            return domain("reps must be >= 1");
        }
        if let CovarianceModel::Custom { .. } = self.model {
            return domain("Monte Carlo runs need a built-in noise model");
        }
        Ok(())
    }

    /// Effective memory exponent: `H` for fGn, `d + 1/2` for ARFIMA, `1/2` otherwise.
    pub fn hurst_effective(&self) -> f64 {
        self.model.memory_exponent().unwrap_or(0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Replication {
    pub rep: usize,
    pub theta_hat: f64,
    pub alpha_hat: f64,
    pub s2: f64,
    pub g1: f64,
    pub g2: f64,
    /// Standardized statistic before inversion, `√n (s2 - f(θ)) / σ_H`.
    pub v: f64,
    pub clamped: bool,
}

/// Runs every replication and returns the constants used for standardization.
pub fn simulate_replications(cfg: &McConfig) -> Result<(VarianceConstants, Vec<Replication>)> {
    cfg.validate()?;
    let map = MomentMap::with_tolerance(cfg.model.clone(), cfg.tol)?;
    let consts = map.constants(cfg.theta)?;
    let sim = Ar1Simulator::with_burn_in(&cfg.model, cfg.theta, cfg.alpha, cfg.n, cfg.burn_in)?;

    let one = |i: usize| -> Result<Replication> {
        let draw = sim.draw(derive_seed(cfg.master_seed, i as u64));
        let est = estimate_values(&map, &draw.path)?;
        let st = standardized_stats(&consts, &est, cfg.theta, cfg.alpha);
        Ok(Replication {
            rep: i,
            theta_hat: est.theta_hat,
            alpha_hat: est.alpha_hat,
            s2: est.s2,
            g1: st.g1,
            g2: st.g2,
            v: st.v,
            clamped: est.clamped,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let records = pool.install(|| (0..cfg.reps).into_par_iter().map(one).collect::<Result<Vec<_>>>())?;
    Ok((consts, records))
}

/// Sample moments and the one-sample KS distance to `N(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub len: usize,
    pub mean: f64,
    /// Unbiased (`M - 1`) variance.
    pub var: f64,
    pub skew: f64,
    pub excess_kurtosis: f64,
    pub ks: f64,
}

pub const MIN_DIAGNOSTIC_LEN: usize = 30;

pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// `sup_x |F_M(x) - Φ(x)|`.
pub fn ks_standard_normal(samples: &[f64]) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let m = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let p = std_normal_cdf(x);
            ((i + 1) as f64 / m - p).max(p - i as f64 / m)
        })
        .fold(0.0, f64::max)
}

pub fn normality_diagnostics(samples: &[f64]) -> Result<Diagnostics> {
    if samples.len() < MIN_DIAGNOSTIC_LEN {
        return Err(Error::TooShort {
            needed: MIN_DIAGNOSTIC_LEN,
            got: samples.len(),
        });
    }
    let m = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / m;
    let (mut c2, mut c3, mut c4) = (0.0, 0.0, 0.0);
    for &x in samples {
        let d = x - mean;
        let d2 = d * d;
        c2 += d2;
        c3 += d2 * d;
        c4 += d2 * d2;
    }
    let (m2, m3, m4) = (c2 / m, c3 / m, c4 / m);
    let (skew, excess_kurtosis) = if m2 > 0.0 {
        (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
    } else {
        (0.0, 0.0)
    };
    Ok(Diagnostics {
        len: samples.len(),
        mean,
        var: c2 / (m - 1.0),
        skew,
        excess_kurtosis,
        ks: ks_standard_normal(samples),
    })
}

/// Correlation and a square 2-D histogram on `[-range, range]²`; points
/// outside the square are counted in the edge bins.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDiagnostics {
    pub cross_corr: f64,
    pub range: f64,
    /// `counts[i][j]`: bin `i` of the first statistic, bin `j` of the second.
    pub counts: Vec<Vec<u64>>,
}

pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let m = a.len() as f64;
    let ma = a.iter().sum::<f64>() / m;
    let mb = b.iter().sum::<f64>() / m;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

pub fn joint_diagnostics(g1: &[f64], g2: &[f64], bins: usize, range: f64) -> Result<JointDiagnostics> {
    if g1.len() != g2.len() {
        return Err(Error::LengthMismatch(g1.len(), g2.len()));
    }
    if g1.len() < MIN_DIAGNOSTIC_LEN {
        return Err(Error::TooShort {
            needed: MIN_DIAGNOSTIC_LEN,
            got: g1.len(),
        });
    }
    if bins == 0 || range.is_nan() || range <= 0.0 {
        return domain("histogram needs bins >= 1 and range > 0");
    }
    let bin = |x: f64| -> usize {
        let pos = ((x + range) / (2.0 * range) * bins as f64).floor();
        pos.clamp(0.0, (bins - 1) as f64) as usize
    };
    let mut counts = vec![vec![0u64; bins]; bins];
    for (&a, &b) in g1.iter().zip(g2) {
        counts[bin(a)][bin(b)] += 1;
    }
    Ok(JointDiagnostics {
        cross_corr: pearson(g1, g2)?,
        range,
        counts,
    })
}

#[derive(Debug, Clone)]
pub struct McSummary {
    pub config: McConfig,
    pub constants: VarianceConstants,
    pub records: Vec<Replication>,
    pub clamp_count: usize,
    /// `None` when `σ_H²` is undefined (`H ≥ 3/4`).
    pub g1: Option<Diagnostics>,
    pub g2: Diagnostics,
    pub v: Option<Diagnostics>,
    pub cross_corr: Option<f64>,
    pub runtime_secs: f64,
}

impl McSummary {
    fn interior(&self) -> impl Iterator<Item = &Replication> {
        self.records.iter().filter(|r| !r.clamped)
    }

    pub fn g1_samples(&self) -> Vec<f64> {
        self.interior().map(|r| r.g1).collect()
    }

    pub fn g2_samples(&self) -> Vec<f64> {
        self.interior().map(|r| r.g2).collect()
    }

    pub fn v_samples(&self) -> Vec<f64> {
        self.interior().map(|r| r.v).collect()
    }

    pub fn clamp_rate(&self) -> f64 {
        self.clamp_count as f64 / self.records.len() as f64
    }

    pub fn joint(&self, bins: usize, range: f64) -> Result<JointDiagnostics> {
        joint_diagnostics(&self.g1_samples(), &self.g2_samples(), bins, range)
    }

    pub fn to_kv(&self) -> Vec<(String, String)> {
        let c = &self.config;
        let mut out: Vec<(String, String)> = vec![
            ("model".into(), c.model.kind_name().into()),
            ("theta".into(), c.theta.to_string()),
            ("alpha".into(), c.alpha.to_string()),
            ("n".into(), c.n.to_string()),
            ("reps".into(), c.reps.to_string()),
            ("seed".into(), c.master_seed.to_string()),
            ("burn_in".into(), c.burn_in.to_string()),
            ("H_effective".into(), c.hurst_effective().to_string()),
        ];
        for (k, v) in self.constants.to_kv() {
            if k != "theta" && k != "H" {
                out.push((format!("const_{k}"), v));
            }
        }
        out.push(("clamp_count".into(), self.clamp_count.to_string()));
        let mut stat = |name: &str, d: &Option<Diagnostics>| {
            if let Some(d) = d {
                out.push((format!("{name}_mean"), d.mean.to_string()));
                out.push((format!("{name}_var"), d.var.to_string()));
                out.push((format!("{name}_skew"), d.skew.to_string()));
                out.push((format!("{name}_excess_kurtosis"), d.excess_kurtosis.to_string()));
                out.push((format!("{name}_ks"), d.ks.to_string()));
            }
        };
        stat("g1", &self.g1);
        stat("g2", &Some(self.g2));
        stat("v", &self.v);
        if let Some(r) = self.cross_corr {
            out.push(("cross_corr".into(), r.to_string()));
        }
        out.push(("runtime_secs".into(), format!("{:.3}", self.runtime_secs)));
        out
    }
}

pub fn run_mc(cfg: &McConfig) -> Result<McSummary> {
    let start = Instant::now();
    let (constants, records) = simulate_replications(cfg)?;
    let clamp_count = records.iter().filter(|r| r.clamped).count();
    let interior: Vec<&Replication> = records.iter().filter(|r| !r.clamped).collect();
    let g1s: Vec<f64> = interior.iter().map(|r| r.g1).collect();
    let g2s: Vec<f64> = interior.iter().map(|r| r.g2).collect();
    let vs: Vec<f64> = interior.iter().map(|r| r.v).collect();
    let has_g1 = constants.sigma_h_sq.is_some();
    let g1 = if has_g1 { Some(normality_diagnostics(&g1s)?) } else { None };
    let v = if has_g1 { Some(normality_diagnostics(&vs)?) } else { None };
    let g2 = normality_diagnostics(&g2s)?;
    let cross_corr = if has_g1 { Some(pearson(&g1s, &g2s)?) } else { None };
    Ok(McSummary {
        config: cfg.clone(),
        constants,
        records,
        clamp_count,
        g1,
        g2,
        v,
        cross_corr,
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub theta_mae: f64,
    pub alpha_mae: f64,
    pub clamp_count: usize,
}

/// Mean absolute errors of `θ̂` and `α̂` over `cfg.reps` replications at each
/// `n`; clamped replications are included at their boundary value.
pub fn consistency_sweep(cfg: &McConfig, n_grid: &[usize]) -> Result<Vec<SweepRow>> {
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return domain("n_grid must be non-empty and strictly increasing");
    }
    n_grid
        .iter()
        .map(|&n| {
            let cfg_n = McConfig { n, ..cfg.clone() };
            let (_, recs) = simulate_replications(&cfg_n)?;
            let m = recs.len() as f64;
            Ok(SweepRow {
                n,
                theta_mae: recs.iter().map(|r| (r.theta_hat - cfg.theta).abs()).sum::<f64>() / m,
                alpha_mae: recs.iter().map(|r| (r.alpha_hat - cfg.alpha).abs()).sum::<f64>() / m,
                clamp_count: recs.iter().filter(|r| r.clamped).count(),
            })
        })
        .collect()
}

pub fn write_replications_csv<W: Write>(records: &[Replication], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rep", "theta_hat", "alpha_hat", "s2", "g1", "g2", "clamped"])?;
    for r in records {
        w.write_record([
            r.rep.to_string(),
            r.theta_hat.to_string(),
            r.alpha_hat.to_string(),
            r.s2.to_string(),
            r.g1.to_string(),
            r.g2.to_string(),
            u8::from(r.clamped).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "theta_mae", "alpha_mae", "clamped"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.theta_mae.to_string(),
            r.alpha_mae.to_string(),
            r.clamp_count.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Long-format histogram: `g1_lo,g1_hi,g2_lo,g2_hi,count`.
pub fn write_grid_csv<W: Write>(joint: &JointDiagnostics, out: W) -> Result<()> {
    let bins = joint.counts.len();
    let width = 2.0 * joint.range / bins as f64;
    let edge = |i: usize| -joint.range + i as f64 * width;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["g1_lo", "g1_hi", "g2_lo", "g2_hi", "count"])?;
    for (i, row) in joint.counts.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            w.write_record([
                edge(i).to_string(),
                edge(i + 1).to_string(),
                edge(j).to_string(),
                edge(j + 1).to_string(),
                c.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
