//! Deterministic oracle and identity checks run by `longmem check`.

use crate::moment::{c_theta_h_cov, l_infty, l_infty_quadrature, sigma_1_sq, MomentMap};
use crate::noise::{check_hypothesis, spectral_constant, CovarianceModel};
use crate::Result;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub const THETA_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const IDENTITY_HURSTS: [f64; 5] = [0.55, 0.58, 0.65, 0.7, 0.74];

/// White noise, fGn at `H ∈ {0.55, 0.58, 0.7}`, ARFIMA at `d ∈ {0.08, 0.2}`.
pub fn reference_models() -> Vec<CovarianceModel> {
    let mut out = vec![CovarianceModel::white(1.0).expect("valid")];
    for h in [0.55, 0.58, 0.7] {
        out.push(CovarianceModel::fgn(h).expect("valid"));
    }
    for d in [0.08, 0.2] {
        out.push(CovarianceModel::arfima(d, 1.0).expect("valid"));
    }
    out
}

fn outcome(name: &'static str, worst: Result<f64>, limit: f64) -> CheckOutcome {
    match worst {
        Ok(w) => CheckOutcome {
            name,
            passed: w < limit,
            detail: format!("worst {w:.3e} (limit {limit:.0e})"),
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn max_over_grid(mut f: impl FnMut(&MomentMap, f64) -> Result<f64>) -> Result<f64> {
    let mut worst = 0.0f64;
    for model in reference_models() {
        let map = MomentMap::new(model)?;
        for &t in &THETA_GRID {
            worst = worst.max(f(&map, t)?);
        }
    }
    Ok(worst)
}

pub fn run_battery() -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    out.push(outcome(
        "f_matches_double_sum",
        max_over_grid(|m, t| Ok((m.f_value(t)? - m.f_value_bruteforce(t, 2000)?).abs())),
        1e-8,
    ));
    out.push(outcome(
        "r_y_matches_double_sum",
        max_over_grid(|m, t| {
            let mut w = 0.0f64;
            for k in [1, 5] {
                w = w.max((m.r_y(t, k)? - m.r_y_bruteforce(t, k, 2000)?).abs());
            }
            Ok(w)
        }),
        1e-8,
    ));
    out.push(outcome(
        "f_derivative_vs_central_difference",
        max_over_grid(|m, t| {
            let h = 1e-5;
            let fd = (m.f_value(t + h)? - m.f_value(t - h)?) / (2.0 * h);
            let an = m.f_derivative(t)?;
            Ok((an - fd).abs() / an.abs())
        }),
        1e-5,
    ));
    out.push(outcome(
        "f_inverse_round_trip",
        max_over_grid(|m, t| Ok((m.f_inverse(m.f_value(t)?)?.theta - t).abs())),
        1e-8,
    ));
    out.push(outcome(
        "l_infty_closed_form",
        IDENTITY_HURSTS
            .iter()
            .map(|&h| Ok((l_infty(h)? * h * (2.0 * h - 1.0) - 1.0).abs()))
            .try_fold(0.0f64, |a, r: Result<f64>| r.map(|v| a.max(v))),
        1e-10,
    ));
    out.push(outcome(
        "l_infty_quadrature",
        IDENTITY_HURSTS
            .iter()
            .map(|&h| Ok((l_infty_quadrature(h)? - l_infty(h)?).abs()))
            .try_fold(0.0f64, |a, r: Result<f64>| r.map(|v| a.max(v))),
        1e-9,
    ));
    out.push(outcome(
        "c_cov_sigma1_identity",
        IDENTITY_HURSTS
            .iter()
            .map(|&h| {
                let lhs = c_theta_h_cov(0.6, h)? * 0.16;
                let rhs = h * (2.0 * h - 1.0) * sigma_1_sq(h)?;
                Ok((lhs / rhs - 1.0).abs())
            })
            .try_fold(0.0f64, |a, r: Result<f64>| r.map(|v| a.max(v))),
        1e-10,
    ));
    out.push(outcome(
        "sigma_1_sq_at_three_quarters",
        sigma_1_sq(0.75).map(|v| (v - 8.0 / 3.0).abs()),
        1e-10,
    ));
    out.push(outcome(
        "spectral_constant_at_three_quarters",
        spectral_constant(0.75).map(|v| (v - 0.398_942_280_401_432_7).abs()),
        1e-10,
    ));
    out.push(outcome(
        "fgn_tail_constant",
        CovarianceModel::fgn(0.58)
            .and_then(|m| check_hypothesis(&m, 0.58, 100, 1000))
            .map(|r| (r.estimated_c / 0.0928 - 1.0).abs()),
        1e-3,
    ));
    out.push(outcome(
        "arfima_tail_drift",
        CovarianceModel::arfima(0.08, 1.0)
            .and_then(|m| check_hypothesis(&m, 0.58, 100, 2000))
            .map(|r| r.relative_drift),
        0.05,
    ));
    out
}
