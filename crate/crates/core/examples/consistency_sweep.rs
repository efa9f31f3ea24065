//! Mean absolute error of θ̂ and α̂ as the sample size grows. Under long memory
//! the α̂ error shrinks like n^{H-1}, slower than the n^{-1/2} rate of θ̂.

use longmem::mc::{consistency_sweep, write_sweep_csv, McConfig};
use longmem::noise::CovarianceModel;

fn main() -> longmem::Result<()> {
    let h = 0.58;
    let mut cfg = McConfig::study_defaults(CovarianceModel::fgn(h)?);
    cfg.reps = 300;
    let grid = [500, 1000, 2000, 4000, 8000, 16000];
    let rows = consistency_sweep(&cfg, &grid)?;
    write_sweep_csv(&rows, std::io::stdout().lock())?;

    let (first, last) = (rows[0], rows[rows.len() - 1]);
    let span = (last.n as f64 / first.n as f64).ln();
    println!(
        "# fitted slopes: theta {:.3} (expect -0.5), alpha {:.3} (expect {:.2})",
        (last.theta_mae / first.theta_mae).ln() / span,
        (last.alpha_mae / first.alpha_mae).ln() / span,
        h - 1.0
    );
    Ok(())
}
