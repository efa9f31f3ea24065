//! Configuration resolution and subcommand dispatch for the `longmem` binary.
//!
//! Settings come from an optional `key=value` file (`--config`), overridden
//! by command-line flags. `--print-config` echoes the resolved settings in
//! the same `key=value` form, which parses back to an identical [`RunConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use crate::check::run_battery;
use crate::error::{Error, Result};
use crate::estimate::estimate;
use crate::mc::{
    consistency_sweep, run_mc, write_grid_csv, write_replications_csv, write_sweep_csv, McConfig,
};
use crate::moment::{write_f_table, MomentMap};
use crate::noise::{read_cov_csv, spectral_constant, CovarianceModel};
use crate::sim::{simulate_ar1, SeedSpec, Series};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_MODEL: i32 = 3;
pub const EXIT_CLAMPED: i32 = 4;

/// Environment variable consulted when no seed is configured.
pub const SEED_ENV: &str = "LONGMEM_SEED";
const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Simulate,
    Estimate,
    Fmap,
    Constants,
    Mc,
    Sweep,
    Check,
}

impl Subcommand {
    pub const ALL: [Subcommand; 7] = [
        Subcommand::Simulate,
        Subcommand::Estimate,
        Subcommand::Fmap,
        Subcommand::Constants,
        Subcommand::Mc,
        Subcommand::Sweep,
        Subcommand::Check,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Simulate => "simulate",
            Subcommand::Estimate => "estimate",
            Subcommand::Fmap => "fmap",
            Subcommand::Constants => "constants",
            Subcommand::Mc => "mc",
            Subcommand::Sweep => "sweep",
            Subcommand::Check => "check",
        }
    }

    fn needs_model(self) -> bool {
        self != Subcommand::Check
    }

    fn needs_theta(self) -> bool {
        matches!(
            self,
            Subcommand::Simulate | Subcommand::Constants | Subcommand::Mc | Subcommand::Sweep
        )
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown subcommand '{s}'")))
    }
}

/// Every recognised configuration key, in echo order.
pub const KEYS: &[&str] = &[
    "subcommand",
    "model",
    "H",
    "d",
    "sigma",
    "custom_file",
    "theta",
    "alpha",
    "n",
    "reps",
    "seed",
    "workers",
    "tol",
    "burn_in",
    "grid",
    "n_grid",
    "bins",
    "range",
    "binary",
    "in",
    "out",
    "grid_out",
];

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Fgn { hurst: f64 },
    Arfima { d: f64, sigma: f64 },
    White { sigma: f64 },
    Custom { file: PathBuf },
}

impl ModelSpec {
    pub fn build(&self) -> Result<CovarianceModel> {
        match self {
            ModelSpec::Fgn { hurst } => CovarianceModel::fgn(*hurst),
            ModelSpec::Arfima { d, sigma } => CovarianceModel::arfima(*d, *sigma),
            ModelSpec::White { sigma } => CovarianceModel::white(*sigma),
            ModelSpec::Custom { file } => {
                let f = File::open(file)
                    .map_err(|e| Error::Config(format!("custom_file {}: {e}", file.display())))?;
                CovarianceModel::custom(read_cov_csv(f)?)
            }
        }
    }
}

/// A fully resolved and validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub model: Option<ModelSpec>,
    pub theta: Option<f64>,
    pub alpha: f64,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub workers: usize,
    pub tol: f64,
    pub burn_in: usize,
    pub grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub bins: usize,
    pub range: f64,
    pub binary: bool,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub grid_out: Option<PathBuf>,
}

/// Parses `key=value` lines; `#` starts a comment. Unknown keys are errors.
pub fn parse_kv_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
}

/// `lo:hi:step` or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 {
        let lo: f64 = parse_num("grid", parts[0])?;
        let hi: f64 = parse_num("grid", parts[1])?;
        let step: f64 = parse_num("grid", parts[2])?;
        if step.is_nan() || step <= 0.0 || hi < lo {
            return Err(Error::Config(format!("grid '{spec}': need lo <= hi and step > 0")));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| lo + i as f64 * step).collect());
    }
    spec.split(',').map(|s| parse_num("grid", s.trim())).collect()
}

fn format_list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Resolves settings from `pairs`, later pairs overriding earlier ones.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (k, v) in pairs {
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!("unknown key '{k}'")));
            }
            map.insert(k, v);
        }
        let get = |k: &str| map.get(k).map(String::as_str);
        let num = |k: &str| -> Result<Option<f64>> { get(k).map(|v| parse_num(k, v)).transpose() };
        let int = |k: &str| -> Result<Option<usize>> { get(k).map(|v| parse_num(k, v)).transpose() };

        let subcommand: Subcommand = get("subcommand")
            .ok_or_else(|| Error::Config("no subcommand given".into()))?
            .parse()?;

        let model = match get("model") {
            None => None,
            Some(kind) => {
                let forbid = |keys: &[&str]| -> Result<()> {
                    match keys.iter().find(|k| map.contains_key(**k)) {
                        Some(k) => Err(Error::Config(format!("key '{k}' does not apply to model={kind}"))),
                        None => Ok(()),
                    }
                };
                let need = |k: &str| -> Result<f64> {
                    num(k)?.ok_or_else(|| Error::Config(format!("model={kind} requires {k}")))
                };
                Some(match kind {
                    "fgn" => {
                        forbid(&["d", "sigma", "custom_file"])?;
                        ModelSpec::Fgn { hurst: need("H")? }
                    }
                    "arfima" => {
                        forbid(&["H", "custom_file"])?;
                        ModelSpec::Arfima {
                            d: need("d")?,
                            sigma: num("sigma")?.unwrap_or(1.0),
                        }
                    }
                    "white" => {
                        forbid(&["H", "d", "custom_file"])?;
                        ModelSpec::White {
                            sigma: num("sigma")?.unwrap_or(1.0),
                        }
                    }
                    "custom" => {
                        forbid(&["H", "d", "sigma"])?;
                        let file = get("custom_file")
                            .ok_or_else(|| Error::Config("model=custom requires custom_file".into()))?;
                        ModelSpec::Custom { file: file.into() }
                    }
                    other => return Err(Error::Config(format!("unknown model '{other}'"))),
                })
            }
        };

        let seed = match get("seed") {
            Some(v) => parse_num("seed", v)?,
            None => match std::env::var(SEED_ENV) {
                Ok(v) => parse_num(SEED_ENV, v.trim())?,
                Err(_) => DEFAULT_SEED,
            },
        };
        let binary = match get("binary") {
            None | Some("false") => false,
            Some("true") => true,
            Some(v) => return Err(Error::Config(format!("binary: expected true/false, got '{v}'"))),
        };

        let cfg = RunConfig {
            subcommand,
            model,
            theta: num("theta")?,
            alpha: num("alpha")?.unwrap_or(0.4),
            n: int("n")?.unwrap_or(3000),
            reps: int("reps")?.unwrap_or(2000),
            seed,
            workers: int("workers")?.unwrap_or(0),
            tol: num("tol")?.unwrap_or(crate::moment::DEFAULT_TOL),
            burn_in: int("burn_in")?.unwrap_or(0),
            grid: parse_grid(get("grid").unwrap_or("0.01:0.99:0.01"))?,
            n_grid: get("n_grid")
                .unwrap_or("500,2000,8000")
                .split(',')
                .map(|s| parse_num("n_grid", s.trim()))
                .collect::<Result<_>>()?,
            bins: int("bins")?.unwrap_or(20),
            range: num("range")?.unwrap_or(4.0),
            binary,
            input: get("in").map(PathBuf::from),
            out: get("out").map(PathBuf::from),
            grid_out: get("grid_out").map(PathBuf::from),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_kv_text(text: &str) -> Result<Self> {
        Self::from_pairs(parse_kv_text(text)?)
    }

    fn validate(&self) -> Result<()> {
        let sc = self.subcommand;
        if sc.needs_model() && self.model.is_none() {
            return Err(Error::Config(format!("{sc} requires model")));
        }
        if let Some(m) = &self.model {
            // custom files are read at dispatch
            if !matches!(m, ModelSpec::Custom { .. }) {
                m.build()?;
            }
        }
        if sc.needs_theta() {
            match self.theta {
                Some(t) if t > 0.0 && t < 1.0 => {}
                Some(t) => return Err(Error::Config(format!("theta={t} outside (0, 1)"))),
                None => return Err(Error::Config(format!("{sc} requires theta"))),
            }
        }
        if !self.alpha.is_finite() {
            return Err(Error::Config("alpha must be finite".into()));
        }
        if self.n < 2 {
            return Err(Error::Config(format!("n={} must be >= 2", self.n)));
        }
        if self.reps < 1 {
            return Err(Error::Config("reps must be >= 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Config("tol must be positive".into()));
        }
        if sc == Subcommand::Estimate && self.input.is_none() {
            return Err(Error::Config("estimate requires in=<csv path>".into()));
        }
        if self.n_grid.is_empty() || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n_grid must be strictly increasing".into()));
        }
        if self.bins == 0 || self.range.is_nan() || self.range <= 0.0 {
            return Err(Error::Config("bins and range must be positive".into()));
        }
        Ok(())
    }

    /// Resolved settings as `key=value` lines.
    pub fn to_kv_text(&self) -> String {
        let mut lines: Vec<(&str, String)> = vec![("subcommand", self.subcommand.to_string())];
        match &self.model {
            Some(ModelSpec::Fgn { hurst }) => {
                lines.push(("model", "fgn".into()));
                lines.push(("H", hurst.to_string()));
            }
            Some(ModelSpec::Arfima { d, sigma }) => {
                lines.push(("model", "arfima".into()));
                lines.push(("d", d.to_string()));
                lines.push(("sigma", sigma.to_string()));
            }
            Some(ModelSpec::White { sigma }) => {
                lines.push(("model", "white".into()));
                lines.push(("sigma", sigma.to_string()));
            }
            Some(ModelSpec::Custom { file }) => {
                lines.push(("model", "custom".into()));
                lines.push(("custom_file", file.display().to_string()));
            }
            None => {}
        }
        if let Some(t) = self.theta {
            lines.push(("theta", t.to_string()));
        }
        lines.extend([
            ("alpha", self.alpha.to_string()),
            ("n", self.n.to_string()),
            ("reps", self.reps.to_string()),
            ("seed", self.seed.to_string()),
            ("workers", self.workers.to_string()),
            ("tol", self.tol.to_string()),
            ("burn_in", self.burn_in.to_string()),
            ("grid", format_list(&self.grid)),
            ("n_grid", format_list(&self.n_grid)),
            ("bins", self.bins.to_string()),
            ("range", self.range.to_string()),
            ("binary", self.binary.to_string()),
        ]);
        for (k, p) in [("in", &self.input), ("out", &self.out), ("grid_out", &self.grid_out)] {
            if let Some(p) = p {
                lines.push((k, p.display().to_string()));
            }
        }
        lines.into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    fn mc_config(&self, model: CovarianceModel) -> McConfig {
        McConfig {
            model,
            theta: self.theta.unwrap_or(0.6),
            alpha: self.alpha,
            n: self.n,
            reps: self.reps,
            master_seed: self.seed,
            workers: self.workers,
            burn_in: self.burn_in,
            tol: self.tol,
        }
    }
}

fn write_kv<W: Write + ?Sized, K: fmt::Display, V: fmt::Display>(
    out: &mut W,
    pairs: impl IntoIterator<Item = (K, V)>,
) -> Result<()> {
    for (k, v) in pairs {
        writeln!(out, "{k}={v}")?;
    }
    Ok(())
}

fn open_out<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

/// Maps an error to the documented exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotEmbeddable { .. } => EXIT_MODEL,
        _ => EXIT_CONFIG,
    }
}

/// Runs the configured subcommand, writing primary output to `cfg.out` or
/// `stdout`. Returns the process exit code.
pub fn dispatch(cfg: &RunConfig, stdout: &mut dyn Write) -> i32 {
    match run(cfg, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("longmem: {e}");
            exit_code(&e)
        }
    }
}

fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let model = cfg.model.as_ref().map(ModelSpec::build).transpose()?;
    let model = || model.clone().expect("validated: model present");
    match cfg.subcommand {
        Subcommand::Simulate => {
            let theta = cfg.theta.expect("validated");
            let s = if cfg.burn_in > 0 {
                let sim = crate::sim::Ar1Simulator::with_burn_in(&model(), theta, cfg.alpha, cfg.n, cfg.burn_in)?;
                sim.simulate(SeedSpec::new(cfg.seed, 0))
            } else {
                simulate_ar1(&model(), theta, cfg.alpha, cfg.n, SeedSpec::new(cfg.seed, 0))?
            };
            let mut out = open_out(&cfg.out, stdout)?;
            if cfg.binary {
                s.write_binary(&mut out)?;
            } else {
                s.write_csv(&mut out)?;
            }
            out.flush()?;
            Ok(EXIT_OK)
        }
        Subcommand::Estimate => {
            let path = cfg.input.as_ref().expect("validated");
            let file = File::open(path)?;
            let series = if cfg.binary {
                Series::read_binary(std::io::BufReader::new(file))?
            } else {
                Series::read_csv(file)?
            };
            let map = MomentMap::with_tolerance(model(), cfg.tol)?;
            let est = estimate(&map, &series)?;
            let mut out = open_out(&cfg.out, stdout)?;
            write_kv(&mut out, est.to_kv())?;
            out.flush()?;
            Ok(if est.clamped { EXIT_CLAMPED } else { EXIT_OK })
        }
        Subcommand::Fmap => {
            let map = MomentMap::with_tolerance(model(), cfg.tol)?;
            let table = map.tabulate_f(&cfg.grid)?;
            let mut out = open_out(&cfg.out, stdout)?;
            write_f_table(&table, &mut out)?;
            out.flush()?;
            Ok(EXIT_OK)
        }
        Subcommand::Constants => {
            let m = model();
            let map = MomentMap::with_tolerance(m.clone(), cfg.tol)?;
            let k = map.constants(cfg.theta.expect("validated"))?;
            let mut out = open_out(&cfg.out, stdout)?;
            writeln!(out, "model={}", m.kind_name())?;
            write_kv(&mut out, k.to_kv())?;
            if let Some(h) = m.memory_exponent() {
                writeln!(out, "C_H={}", spectral_constant(h)?)?;
            }
            out.flush()?;
            Ok(EXIT_OK)
        }
        Subcommand::Mc => {
            let summary = run_mc(&cfg.mc_config(model()))?;
            if let Some(p) = &cfg.out {
                write_replications_csv(&summary.records, BufWriter::new(File::create(p)?))?;
            }
            if let Some(p) = &cfg.grid_out {
                let joint = summary.joint(cfg.bins, cfg.range)?;
                write_grid_csv(&joint, BufWriter::new(File::create(p)?))?;
            }
            write_kv(stdout, summary.to_kv())?;
            Ok(EXIT_OK)
        }
        Subcommand::Sweep => {
            let rows = consistency_sweep(&cfg.mc_config(model()), &cfg.n_grid)?;
            let mut out = open_out(&cfg.out, stdout)?;
            write_sweep_csv(&rows, &mut out)?;
            out.flush()?;
            Ok(EXIT_OK)
        }
        Subcommand::Check => {
            let outcomes = run_battery();
            let mut all = true;
            for o in &outcomes {
                all &= o.passed;
                writeln!(stdout, "{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail)?;
            }
            Ok(if all { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}
