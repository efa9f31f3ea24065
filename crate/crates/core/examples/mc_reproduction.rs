//! Monte Carlo study of the standardized estimation errors at θ = 0.6,
//! α = 0.4, n = 3000. Pass a replication count to change the default of 2000.

use longmem::mc::{run_mc, McConfig};
use longmem::noise::CovarianceModel;

fn main() -> longmem::Result<()> {
    let reps = std::env::args().nth(1).map_or(2000, |r| r.parse().expect("integer reps"));
    for model in [CovarianceModel::fgn(0.58)?, CovarianceModel::arfima(0.08, 1.0)?] {
        let mut cfg = McConfig::study_defaults(model);
        cfg.reps = reps;
        let s = run_mc(&cfg)?;
        println!("== {} ({reps} replications, {:.1}s)", cfg.model.kind_name(), s.runtime_secs);
        for (name, d) in [("g1", s.g1), ("g2", Some(s.g2)), ("v", s.v)] {
            if let Some(d) = d {
                println!(
                    "  {name:<3} mean={:+.4} var={:.4} skew={:+.3} exkurt={:+.3} ks={:.4}",
                    d.mean, d.var, d.skew, d.excess_kurtosis, d.ks
                );
            }
        }
        println!("  corr(g1, g2)={:+.4} clamped={}", s.cross_corr.unwrap_or(f64::NAN), s.clamp_count);

        let joint = s.joint(8, 4.0)?;
        println!("  joint histogram of (g1, g2) on [-4, 4]^2:");
        for row in joint.counts.iter().rev() {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>4}")).collect();
            println!("   {}", line.join(""));
        }
    }
    Ok(())
}
