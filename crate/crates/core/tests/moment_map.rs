use longmem::moment::{c_theta_h_spec, l_infty, l_infty_quadrature, MomentMap, THETA_EPS};
use longmem::noise::CovarianceModel;
use longmem::Error;
use proptest::prelude::*;

fn fgn(h: f64) -> MomentMap {
    MomentMap::new(CovarianceModel::fgn(h).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_is_increasing_and_above_variance(h in 0.51f64..0.74, a in 0.0f64..0.95, b in 0.0f64..0.95) {
        let m = fgn(h);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-6);
        let (flo, fhi) = (m.f_value(lo).unwrap(), m.f_value(hi).unwrap());
        prop_assert!(fhi > flo);
        prop_assert!(flo >= 1.0 - 1e-12);
        prop_assert!(m.f_derivative(lo).unwrap() > 0.0);
    }

    #[test]
    fn inverse_round_trips(d in 0.01f64..0.24, t in 0.0f64..0.98) {
        let m = MomentMap::new(CovarianceModel::arfima(d, 1.0).unwrap()).unwrap();
        let inv = m.f_inverse(m.f_value(t).unwrap()).unwrap();
        prop_assert!(!inv.clamped);
        prop_assert!((inv.theta - t).abs() < 1e-8);
    }
}

#[test]
fn inverse_clamps_outside_range() {
    let m = fgn(0.6);
    let low = m.f_inverse(0.5).unwrap();
    assert!(low.clamped && low.theta == THETA_EPS);
    let high = m.f_inverse(1e12).unwrap();
    assert!(high.clamped && high.theta >= 1.0 - THETA_EPS - 1e-12);
    assert!(m.f_inverse(-1.0).is_err());
}

#[test]
fn f_rejects_near_unit_root() {
    let m = fgn(0.6);
    assert!(matches!(m.f_value(1.0 - 1e-7), Err(Error::NearBoundary(_))));
}

#[test]
fn white_noise_f_is_closed_form() {
    let m = MomentMap::new(CovarianceModel::white(2.0).unwrap()).unwrap();
    for t in [0.1, 0.3, 0.9] {
        assert!((m.f_value(t).unwrap() - 2.0 / (1.0 - t * t)).abs() < 1e-12);
        assert!((m.r_y(t, 3).unwrap() - 2.0 * t.powi(3) / (1.0 - t * t)).abs() < 1e-12);
    }
}

#[test]
fn r_y_table_matches_pointwise() {
    let m = fgn(0.65);
    let table = m.r_y_table(0.6, 200).unwrap();
    for k in [0usize, 1, 7, 50, 200] {
        assert!((table[k] - m.r_y(0.6, k as i64).unwrap()).abs() < 1e-10);
    }
    assert!((table[0] - m.f_value(0.6).unwrap()).abs() < 1e-10);
}

#[test]
fn r_y_follows_filtered_power_law() {
    let h = 0.6;
    let m = fgn(h);
    let theta = 0.6;
    let c = h * (2.0 * h - 1.0) / ((1.0 - theta) * (1.0 - theta));
    for k in [2_000i64, 20_000] {
        let want = c * (k as f64).powf(2.0 * h - 2.0);
        assert!((m.r_y(theta, k).unwrap() / want - 1.0).abs() < 0.01);
    }
}

#[test]
fn sigma_h_sq_is_stable_under_doubling() {
    for h in [0.55, 0.58, 0.65, 0.7] {
        let m = fgn(h);
        let a = m.sigma_h_sq_truncated(0.6, h, 8192).unwrap();
        let b = m.sigma_h_sq_truncated(0.6, h, 16384).unwrap();
        assert!((a / b - 1.0).abs() < 1e-4, "H={h}: {a} vs {b}");
        let full = m.sigma_h_sq(0.6, h).unwrap();
        assert!((full / b - 1.0).abs() < 1e-4);
    }
}

#[test]
fn sigma_h_sq_needs_long_memory_range() {
    let m = fgn(0.6);
    assert!(m.sigma_h_sq(0.6, 0.75).is_err());
    assert!(m.sigma_h_sq(0.6, 0.5).is_err());
}

#[test]
fn l_infty_quadrature_agrees() {
    for h in [0.55, 0.6, 0.7] {
        assert!((l_infty_quadrature(h).unwrap() / l_infty(h).unwrap() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn spectral_constant_scales_with_filter_gain() {
    let base = c_theta_h_spec(0.0, 0.6).unwrap();
    assert!((c_theta_h_spec(0.5, 0.6).unwrap() / base - 4.0).abs() < 1e-12);
}

#[test]
fn constants_normalise_alpha_by_tail_constant() {
    let m = fgn(0.58);
    let k = m.constants(0.6).unwrap();
    assert!((k.alpha_variance - 1.0).abs() < 1e-10);
    let a = MomentMap::new(CovarianceModel::arfima(0.08, 1.0).unwrap()).unwrap();
    let ka = a.constants(0.6).unwrap();
    let want = ka.tail_constant.unwrap() * ka.sigma_1_sq.unwrap();
    assert!((ka.alpha_variance - want).abs() < 1e-12);
}

#[test]
fn short_memory_alpha_variance_includes_theta_term() {
    let m = MomentMap::new(CovarianceModel::white(1.0).unwrap()).unwrap();
    let k = m.constants(0.6).unwrap();
    assert!((k.alpha_variance - 1.0).abs() < 1e-12);
    let tv = k.theta_variance().unwrap();
    assert!((k.alpha_variance_at(0.4) - (1.0 + tv)).abs() < 1e-12);
    assert_eq!(k.alpha_variance_at(0.0), 1.0);
}
