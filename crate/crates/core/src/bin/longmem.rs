use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use longmem::cli::{dispatch, parse_kv_text, RunConfig, EXIT_CONFIG};

/// Simulate, estimate and Monte-Carlo-check moment estimators for AR(1)
/// models driven by long-memory Gaussian noise.
#[derive(Parser, Debug)]
#[command(name = "longmem", version)]
struct Args {
    /// simulate | estimate | fmap | constants | mc | sweep | check
    subcommand: Option<String>,
    /// key=value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the resolved configuration and exit
    #[arg(long)]
    print_config: bool,

    /// fgn | arfima | white | custom
    #[arg(long)]
    model: Option<String>,
    #[arg(long = "H")]
    hurst: Option<String>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    /// lag,value CSV for model=custom
    #[arg(long, alias = "custom_file")]
    custom_file: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Monte Carlo replications
    #[arg(long)]
    reps: Option<String>,
    /// Master seed; falls back to LONGMEM_SEED
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long, alias = "burn_in")]
    burn_in: Option<String>,
    /// lo:hi:step or comma list of theta values for fmap
    #[arg(long)]
    grid: Option<String>,
    /// comma list of sample sizes for sweep
    #[arg(long, alias = "n_grid")]
    n_grid: Option<String>,
    #[arg(long)]
    bins: Option<String>,
    #[arg(long)]
    range: Option<String>,
    /// Binary series I/O (little-endian u64 length, then f64 values)
    #[arg(long)]
    binary: Option<String>,
    #[arg(long = "in")]
    input: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long, alias = "grid_out")]
    grid_out: Option<String>,
}

impl Args {
    fn flag_pairs(self) -> Vec<(String, String)> {
        let fields = [
            ("subcommand", self.subcommand),
            ("model", self.model),
            ("H", self.hurst),
            ("d", self.d),
            ("sigma", self.sigma),
            ("custom_file", self.custom_file),
            ("theta", self.theta),
            ("alpha", self.alpha),
            ("n", self.n),
            ("reps", self.reps),
            ("seed", self.seed),
            ("workers", self.workers),
            ("tol", self.tol),
            ("burn_in", self.burn_in),
            ("grid", self.grid),
            ("n_grid", self.n_grid),
            ("bins", self.bins),
            ("range", self.range),
            ("binary", self.binary),
            ("in", self.input),
            ("out", self.out),
            ("grid_out", self.grid_out),
        ];
        fields
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect()
    }
}

fn resolve(args: Args) -> Result<(RunConfig, bool), String> {
    let print = args.print_config;
    let mut pairs = Vec::new();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        pairs = parse_kv_text(&text).map_err(|e| e.to_string())?;
    }
    pairs.extend(args.flag_pairs());
    let cfg = RunConfig::from_pairs(pairs).map_err(|e| e.to_string())?;
    Ok((cfg, print))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let (cfg, print) = match resolve(Args::parse()) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("longmem: {msg}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    if print {
        print!("{}", cfg.to_kv_text());
        return ExitCode::SUCCESS;
    }
    let mut stdout = std::io::stdout().lock();
    ExitCode::from(dispatch(&cfg, &mut stdout) as u8)
}
