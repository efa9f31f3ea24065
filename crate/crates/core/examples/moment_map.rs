//! Tabulate the moment map `f(θ) = E Y²` for fGn and ARFIMA noise and invert it.

use longmem::noise::CovarianceModel;
use longmem::MomentMap;

fn main() -> longmem::Result<()> {
    let fgn = MomentMap::new(CovarianceModel::fgn(0.58)?)?;
    let arfima = MomentMap::new(CovarianceModel::arfima(0.08, 1.0)?)?;

    println!("{:>6} {:>12} {:>12} {:>12}", "theta", "f_fgn", "f_arfima", "f'_fgn");
    for i in 1..20 {
        let t = i as f64 * 0.05;
        println!(
            "{t:>6.2} {:>12.6} {:>12.6} {:>12.6}",
            fgn.f_value(t)?,
            arfima.f_value(t)?,
            fgn.f_derivative(t)?
        );
    }

    let y = 2.5;
    let inv = fgn.f_inverse(y)?;
    println!("\nf^-1({y}) = {:.10} (clamped: {})", inv.theta, inv.clamped);
    println!("f(f^-1({y})) = {:.12}", fgn.f_value(inv.theta)?);
    Ok(())
}
