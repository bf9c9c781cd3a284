use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use snse::harness::{exit_code, run, ExperimentConfig};

/// Spectral Galerkin experiments for the stochastic Navier-Stokes equations
/// on the 2D torus.
///
/// Exit status: 0 when every gate passes, 2 on a gate failure, 1 on an input
/// error. Flags override values read from --config.
#[derive(Debug, Parser)]
#[command(name = "snse", version)]
struct Cli {
    /// sample, simulate, check-coefficients, check-conservation, moment-test,
    /// bnorm-test, series-bound, invariance-test, contraction-test,
    /// uniqueness-divergence or report
    command: String,
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the effective configuration to this file before running.
    #[arg(long)]
    save_config: Option<PathBuf>,
    #[arg(long)]
    nu: Option<String>,
    /// Truncation radius N.
    #[arg(long)]
    n: Option<String>,
    /// Time horizon T.
    #[arg(long)]
    horizon: Option<String>,
    /// Time step, or `auto`.
    #[arg(long)]
    dt: Option<String>,
    /// Ensemble or sample count M.
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    moment_order: Option<String>,
    /// `k1,k2:re:im` entries separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// `full` or `linear-only`.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    stride: Option<String>,
    #[arg(long)]
    kmax: Option<String>,
    #[arg(long)]
    cutoff: Option<String>,
    #[arg(long)]
    n1: Option<String>,
    #[arg(long)]
    n2: Option<String>,
    #[arg(long)]
    probes: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    shape_truncations: Option<String>,
    /// Output directory (default: $SNSE_OUT_DIR, then the current directory).
    #[arg(long)]
    out_dir: Option<String>,
}

impl Cli {
    fn overrides(&self) -> Vec<(&'static str, &String)> {
        let pairs: [(&'static str, &Option<String>); 25] = [
            ("nu", &self.nu),
            ("n", &self.n),
            ("horizon", &self.horizon),
            ("dt", &self.dt),
            ("ensemble", &self.ensemble),
            ("seed", &self.seed),
            ("s", &self.s),
            ("a", &self.a),
            ("p", &self.p),
            ("q", &self.q),
            ("alpha", &self.alpha),
            ("r", &self.r),
            ("rho", &self.rho),
            ("moment_order", &self.moment_order),
            ("gamma", &self.gamma),
            ("mode", &self.mode),
            ("stride", &self.stride),
            ("kmax", &self.kmax),
            ("cutoff", &self.cutoff),
            ("n1", &self.n1),
            ("n2", &self.n2),
            ("probes", &self.probes),
            ("steps", &self.steps),
            ("shape_truncations", &self.shape_truncations),
            ("out_dir", &self.out_dir),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k, v))).collect()
    }
}

fn configure(cli: &Cli) -> snse::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.command = cli.command.clone();
    for (key, value) in cli.overrides() {
        cfg.set(key, value).map_err(|msg| snse::Error::InvalidParameter(format!("--{key}: {msg}")))?;
    }
    if let Some(path) = &cli.save_config {
        cfg.save(path)?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = configure(&cli).and_then(|cfg| run(&cfg));
    match &result {
        Ok(outcome) => {
            for r in &outcome.reports {
                print!("{r}");
            }
            for a in &outcome.artifacts {
                println!("wrote {}", a.display());
            }
        }
        Err(snse::Error::InvalidConfig(list)) => {
            eprintln!("error: invalid configuration");
            for v in list {
                eprintln!("  - {v}");
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
