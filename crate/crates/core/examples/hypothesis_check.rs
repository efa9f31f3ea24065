//! Check the power-law covariance tail `R(k) ~ C k^{2H-2}` and print the
//! closed-form limiting constants.

use longmem::moment::{l_infty, l_infty_quadrature, sigma_1_sq};
use longmem::noise::{check_hypothesis, spectral_constant, CovarianceModel};

fn main() -> longmem::Result<()> {
    let cases = [
        ("fgn H=0.58", CovarianceModel::fgn(0.58)?, 0.58),
        ("arfima d=0.08", CovarianceModel::arfima(0.08, 1.0)?, 0.58),
        ("arfima d=0.2", CovarianceModel::arfima(0.2, 1.0)?, 0.7),
    ];
    for (name, model, h) in cases {
        let r = check_hypothesis(&model, h, 100, 5000)?;
        println!(
            "{name:<14} C={:.6} (exact {:.6}) drift={:.2e} holds(5%)={}",
            r.estimated_c,
            model.tail_constant().unwrap_or(f64::NAN),
            r.relative_drift,
            r.holds(0.05)
        );
    }

    println!("\n{:>5} {:>14} {:>14} {:>14} {:>10}", "H", "sigma_1^2", "l_inf", "quadrature", "C_H");
    for h in [0.55, 0.6, 0.65, 0.7, 0.75, 0.9] {
        println!(
            "{h:>5.2} {:>14.8} {:>14.8} {:>14.8} {:>10.6}",
            sigma_1_sq(h)?,
            l_infty(h)?,
            l_infty_quadrature(h)?,
            spectral_constant(h)?
        );
    }
    Ok(())
}
