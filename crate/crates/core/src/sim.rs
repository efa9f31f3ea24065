//! Exact stationary Gaussian sampling by circulant embedding, and AR(1)
//! paths `X_t = α + θ X_{t-1} + ξ_t` started from `X_0 = 0`.

use std::io::{Read, Write};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{domain, Error, Result};
use crate::noise::{cov_sequence, CovarianceModel};

/// Relative threshold below which negative embedding eigenvalues are fatal.
pub const DEFAULT_EIG_TOL: f64 = 1e-8;

/// Maps `(master, index)` to a per-replication seed.
///
/// The index is spread by an odd Weyl increment and then passed through the
/// SplitMix64 finaliser. Both steps are bijections on `u64`, so distinct
/// indices under one master never collide. This mapping is part of the
/// reproducibility contract and must not change.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSpec {
    pub master: u64,
    pub replication: u64,
}

impl SeedSpec {
    pub fn new(master: u64, replication: u64) -> Self {
        SeedSpec { master, replication }
    }

    pub fn derive(&self) -> u64 {
        derive_seed(self.master, self.replication)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Noise,
    Ar1Path,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeriesMeta {
    pub model: Option<CovarianceModel>,
    pub theta: Option<f64>,
    pub alpha: Option<f64>,
    pub seed: Option<SeedSpec>,
    pub n: usize,
}

/// A finite sample path.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    values: Vec<f64>,
    kind: SeriesKind,
    meta: SeriesMeta,
}

impl Series {
    pub fn new(values: Vec<f64>, kind: SeriesKind, mut meta: SeriesMeta) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        meta.n = values.len();
        Ok(Series { values, kind, meta })
    }

    /// A bare observed path with no generation metadata.
    pub fn observed(values: Vec<f64>) -> Result<Self> {
        Series::new(values, SeriesKind::Ar1Path, SeriesMeta::default())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn meta(&self) -> &SeriesMeta {
        &self.meta
    }

    /// Writes `t,value` rows with `t = 1..=n`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "value"])?;
        for (t, v) in self.values.iter().enumerate() {
            w.write_record([(t + 1).to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the `value` column of a `t,value` file.
    pub fn read_csv<R: Read>(input: R) -> Result<Series> {
        let mut rdr = csv::Reader::from_reader(input);
        let values = rdr
            .deserialize::<(u64, f64)>()
            .map(|r| r.map(|(_, v)| v))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Series::observed(values)
    }

    /// Little-endian `u64` length followed by that many `f64` values.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(&(self.values.len() as u64).to_le_bytes())?;
        for v in &self.values {
            out.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Series> {
        let mut word = [0u8; 8];
        input.read_exact(&mut word)?;
        let n = u64::from_le_bytes(word) as usize;
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            input.read_exact(&mut word)?;
            values.push(f64::from_le_bytes(word));
        }
        Series::observed(values)
    }
}

/// Precomputed circulant embedding of a Toeplitz covariance of order `n`.
///
/// The first row `R(0), ..., R(n-1), R(n-2), ..., R(1)` of length `m = 2(n-1)`
/// has DFT eigenvalues `λ_j`. With complex standard normals `ε_j`, the real
/// part of `DFT(sqrt(λ/m) ε)` is an exact draw; its first `n` entries have
/// covariance `R`.
pub struct CirculantSampler {
    n: usize,
    scale: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    clamped: usize,
}

impl std::fmt::Debug for CirculantSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantSampler")
            .field("n", &self.n)
            .field("embedding", &self.scale.len())
            .field("clamped", &self.clamped)
            .finish()
    }
}

impl CirculantSampler {
    pub fn new(cov: &[f64], n: usize) -> Result<Self> {
        Self::with_tolerance(cov, n, DEFAULT_EIG_TOL)
    }

    pub fn with_tolerance(cov: &[f64], n: usize, tol_eig: f64) -> Result<Self> {
        if n < 2 {
            return domain(format!("sampler needs n >= 2, got {n}"));
        }
        if cov.len() < n {
            return Err(Error::InsufficientData {
                needed: n - 1,
                available: cov.len().saturating_sub(1),
            });
        }
        let m = 2 * (n - 1);
        let mut row: Vec<Complex64> = Vec::with_capacity(m);
        row.extend(cov[..n].iter().map(|&r| Complex64::new(r, 0.0)));
        row.extend(cov[1..n - 1].iter().rev().map(|&r| Complex64::new(r, 0.0)));
        let fft = FftPlanner::new().plan_fft_forward(m);
        fft.process(&mut row);

        let max = row.iter().map(|c| c.re).fold(f64::MIN, f64::max);
        let mut clamped = 0;
        let mut scale = Vec::with_capacity(m);
        for c in &row {
            let mut lam = c.re;
            if lam < 0.0 {
                if lam < -tol_eig * max {
                    return Err(Error::NotEmbeddable {
                        value: lam,
                        max,
                        tol: tol_eig,
                    });
                }
                clamped += 1;
                lam = 0.0;
            }
            scale.push((lam / m as f64).sqrt());
        }
        if clamped > 0 {
            log::warn!("circulant embedding: clamped {clamped} small negative eigenvalues to 0");
        }
        Ok(CirculantSampler {
            n,
            scale,
            fft,
            clamped,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of small negative eigenvalues clamped to zero.
    pub fn clamped_eigenvalues(&self) -> usize {
        self.clamped
    }

    pub fn sample(&self, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut buf: Vec<Complex64> = self
            .scale
            .iter()
            .map(|&s| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(s * re, s * im)
            })
            .collect();
        self.fft.process(&mut buf);
        buf.truncate(self.n);
        buf.into_iter().map(|c| c.re).collect()
    }
}

/// Zero-mean Gaussian path of length `n` with covariance `cov[0..n]`.
pub fn sample_stationary_gaussian(cov: &[f64], n: usize, seed: SeedSpec) -> Result<Series> {
    let sampler = CirculantSampler::new(cov, n)?;
    let values = sampler.sample(seed.derive());
    Series::new(
        values,
        SeriesKind::Noise,
        SeriesMeta {
            seed: Some(seed),
            ..SeriesMeta::default()
        },
    )
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        domain(format!("theta={theta} outside (0, 1)"))
    }
}

/// An AR(1) path together with the noise that drove it.
#[derive(Debug, Clone)]
pub struct Ar1Draw {
    pub path: Vec<f64>,
    pub noise: Vec<f64>,
}

/// Reusable AR(1) generator: the embedding is built once per `(model, n)`.
#[derive(Debug)]
pub struct Ar1Simulator {
    model: CovarianceModel,
    theta: f64,
    alpha: f64,
    n: usize,
    burn_in: usize,
    sampler: CirculantSampler,
}

impl Ar1Simulator {
    pub fn new(model: &CovarianceModel, theta: f64, alpha: f64, n: usize) -> Result<Self> {
        Self::with_burn_in(model, theta, alpha, n, 0)
    }

    /// `burn_in` extra steps are simulated from `X_0 = 0` and discarded.
    pub fn with_burn_in(
        model: &CovarianceModel,
        theta: f64,
        alpha: f64,
        n: usize,
        burn_in: usize,
    ) -> Result<Self> {
        check_theta(theta)?;
        if !alpha.is_finite() {
            return domain(format!("alpha={alpha} must be finite"));
        }
        if n < 2 {
            return domain(format!("n={n} must be >= 2"));
        }
        let total = n + burn_in;
        let cov = cov_sequence(model, total - 1)?;
        let sampler = CirculantSampler::new(&cov, total)?;
        Ok(Ar1Simulator {
            model: model.clone(),
            theta,
            alpha,
            n,
            burn_in,
            sampler,
        })
    }

    pub fn draw(&self, seed: u64) -> Ar1Draw {
        let mut noise = self.sampler.sample(seed);
        let mut path = Vec::with_capacity(noise.len());
        let mut x = 0.0;
        for &xi in &noise {
            x = self.alpha + self.theta * x + xi;
            path.push(x);
        }
        path.drain(..self.burn_in);
        noise.drain(..self.burn_in);
        Ar1Draw { path, noise }
    }

    pub fn simulate(&self, seed: SeedSpec) -> Series {
        let draw = self.draw(seed.derive());
        Series {
            meta: SeriesMeta {
                model: Some(self.model.clone()),
                theta: Some(self.theta),
                alpha: Some(self.alpha),
                seed: Some(seed),
                n: self.n,
            },
            values: draw.path,
            kind: SeriesKind::Ar1Path,
        }
    }
}

/// `X_1, ..., X_n` of `X_t = α + θ X_{t-1} + ξ_t` with `X_0 = 0`.
pub fn simulate_ar1(
    model: &CovarianceModel,
    theta: f64,
    alpha: f64,
    n: usize,
    seed: SeedSpec,
) -> Result<Series> {
    Ok(Ar1Simulator::new(model, theta, alpha, n)?.simulate(seed))
}

/// Recovers `ξ_t = X_t - α - θ X_{t-1}` with `X_0 = 0`.
pub fn ar1_residuals(path: &[f64], theta: f64, alpha: f64) -> Vec<f64> {
    let mut prev = 0.0;
    path.iter()
        .map(|&x| {
            let xi = x - alpha - theta * prev;
            prev = x;
            xi
        })
        .collect()
}
