//! Moment estimation for the AR(1) model `X_t = α + θ X_{t-1} + ξ_t` with
//! `X_0 = 0`, `0 < θ < 1`, driven by a stationary long-memory Gaussian noise.
//!
//! - [`noise`]: covariance laws (fGn, ARFIMA(0, d, 0), white, custom).
//! - [`sim`]: exact circulant-embedding sampler and AR(1) paths.
//! - [`moment`]: `f(θ) = E(Y_t²)`, its derivative and inverse, `R_Y`, and the
//!   constants of the limiting normal laws.
//! - [`estimate`]: `θ̂ = f⁻¹(s²)`, `α̂ = (1 - θ̂) X̄` and standardized errors.
//! - [`mc`]: replicated experiments, normality diagnostics, consistency sweeps.
//! - [`cli`]: configuration and subcommand dispatch for the `longmem` binary.

pub mod check;
pub mod cli;
pub mod error;
pub mod estimate;
pub mod mc;
pub mod moment;
pub mod noise;
mod quad;
pub mod sim;

pub use error::{Error, Result};
pub use estimate::{estimate, EstimationResult};
pub use mc::{run_mc, McConfig, McSummary};
pub use moment::{MomentMap, VarianceConstants};
pub use noise::CovarianceModel;
pub use sim::{simulate_ar1, Series, SeedSpec};
