//! Flat `key = value` experiment configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_rational::Ratio;
use sha2::{Digest, Sha256};

use crate::dynamics::{default_dt, Mode};
use crate::error::{Error, Result};
use crate::spectral::WaveIndex;
use crate::uniqueness::{validate_params, BesovParams};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SNSE_OUT_DIR";

pub const COMMANDS: [&str; 11] = [
    "sample",
    "simulate",
    "check-coefficients",
    "check-conservation",
    "moment-test",
    "bnorm-test",
    "series-bound",
    "invariance-test",
    "contraction-test",
    "uniqueness-divergence",
    "report",
];

/// Every recognised key, in file order.
pub const KEYS: [&str; 26] = [
    "command",
    "nu",
    "n",
    "horizon",
    "dt",
    "ensemble",
    "seed",
    "s",
    "a",
    "p",
    "q",
    "alpha",
    "r",
    "rho",
    "moment_order",
    "gamma",
    "mode",
    "stride",
    "kmax",
    "cutoff",
    "n1",
    "n2",
    "probes",
    "steps",
    "shape_truncations",
    "out_dir",
];

/// One weighted mode of a linear functional, `k1,k2:re:im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaEntry {
    pub k1: i32,
    pub k2: i32,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: String,
    pub nu: f64,
    pub n: usize,
    pub horizon: f64,
    /// `None` selects the default step for `n`.
    pub dt: Option<f64>,
    pub ensemble: usize,
    pub seed: u64,
    pub s: Ratio<i64>,
    pub a: Ratio<i64>,
    pub p: Ratio<i64>,
    pub q: Ratio<i64>,
    pub alpha: Ratio<i64>,
    pub r: f64,
    pub rho: f64,
    pub moment_order: u32,
    pub gamma: Vec<GammaEntry>,
    pub mode: Mode,
    pub stride: u64,
    pub kmax: usize,
    pub cutoff: usize,
    pub n1: usize,
    pub n2: usize,
    pub probes: usize,
    pub steps: usize,
    pub shape_truncations: Vec<usize>,
    /// `None` falls back to `$SNSE_OUT_DIR`, then to `.`.
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: "report".into(),
            nu: 1.0,
            n: 8,
            horizon: 1.0,
            dt: None,
            ensemble: 1000,
            seed: 7,
            s: Ratio::new(1, 6),
            a: Ratio::new(1, 2),
            p: Ratio::from_integer(3),
            q: Ratio::from_integer(3),
            alpha: Ratio::from_integer(3),
            r: 0.5,
            rho: 2.0,
            moment_order: 2,
            gamma: vec![GammaEntry { k1: 1, k2: 0, re: 1.0, im: 0.0 }],
            mode: Mode::Full,
            stride: 10,
            kmax: 64,
            cutoff: 256,
            n1: 4,
            n2: 8,
            probes: 10,
            steps: 32,
            shape_truncations: vec![4, 8, 16, 24],
            out_dir: None,
        }
    }
}

fn to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parses `"1/6"`, `"3"`, `"-2"` or a plain decimal such as `"0.25"` into an
/// exact rational.
pub fn parse_rational(text: &str) -> std::result::Result<Ratio<i64>, String> {
    let t = text.trim();
    if let Ok(r) = Ratio::<i64>::from_str(t) {
        if *r.denom() == 0 {
            return Err("zero denominator".into());
        }
        return Ok(r);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t),
    };
    let (int, frac) = body.split_once('.').ok_or_else(|| format!("'{t}' is not a rational number"))?;
    if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) || !int.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("'{t}' is not a rational number"));
    }
    let digits = format!("{int}{frac}");
    let num: i64 = digits.parse().map_err(|_| format!("'{t}' is out of range"))?;
    let den = 10i64.checked_pow(frac.len() as u32).ok_or_else(|| format!("'{t}' has too many decimals"))?;
    Ok(Ratio::new(if neg { -num } else { num }, den))
}

fn parse_gamma(text: &str) -> std::result::Result<Vec<GammaEntry>, String> {
    text.split(';')
        .map(str::trim)
        .filter(|e| !e.is_empty())
        .map(|e| {
            let mut parts = e.split(':');
            let k = parts.next().unwrap_or("");
            let (k1, k2) = k.split_once(',').ok_or_else(|| format!("gamma entry '{e}' needs 'k1,k2'"))?;
            let num = |x: &str| x.trim().parse::<f64>().map_err(|err| format!("gamma entry '{e}': {err}"));
            let re = parts.next().map(num).transpose()?.unwrap_or(1.0);
            let im = parts.next().map(num).transpose()?.unwrap_or(0.0);
            if parts.next().is_some() {
                return Err(format!("gamma entry '{e}' has too many fields"));
            }
            Ok(GammaEntry {
                k1: k1.trim().parse().map_err(|err| format!("gamma entry '{e}': {err}"))?,
                k2: k2.trim().parse().map_err(|err| format!("gamma entry '{e}': {err}"))?,
                re,
                im,
            })
        })
        .collect()
}

impl ExperimentConfig {
    pub fn besov(&self) -> BesovParams {
        BesovParams { s: to_f64(self.s), a: to_f64(self.a), p: to_f64(self.p), q: to_f64(self.q), alpha: to_f64(self.alpha) }
    }

    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or_else(|| default_dt(self.n))
    }

    pub fn gamma_modes(&self) -> Result<Vec<(WaveIndex, num_complex::Complex64)>> {
        self.gamma
            .iter()
            .map(|g| Ok((WaveIndex::new(g.k1, g.k2)?, num_complex::Complex64::new(g.re, g.im))))
            .collect()
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }

    /// Sets `key` from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let v = value.trim();
        fn num<T: FromStr>(v: &str) -> std::result::Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            v.parse::<T>().map_err(|e| format!("'{v}': {e}"))
        }
        match key {
            "command" => self.command = v.to_string(),
            "nu" => self.nu = num(v)?,
            "n" => self.n = num(v)?,
            "horizon" => self.horizon = num(v)?,
            "dt" => self.dt = if v == "auto" { None } else { Some(num(v)?) },
            "ensemble" => self.ensemble = num(v)?,
            "seed" => self.seed = num(v)?,
            "s" => self.s = parse_rational(v)?,
            "a" => self.a = parse_rational(v)?,
            "p" => self.p = parse_rational(v)?,
            "q" => self.q = parse_rational(v)?,
            "alpha" => self.alpha = parse_rational(v)?,
            "r" => self.r = num(v)?,
            "rho" => self.rho = num(v)?,
            "moment_order" => self.moment_order = num(v)?,
            "gamma" => self.gamma = parse_gamma(v)?,
            "mode" => self.mode = v.parse().map_err(|e: Error| e.to_string())?,
            "stride" => self.stride = num(v)?,
            "kmax" => self.kmax = num(v)?,
            "cutoff" => self.cutoff = num(v)?,
            "n1" => self.n1 = num(v)?,
            "n2" => self.n2 = num(v)?,
            "probes" => self.probes = num(v)?,
            "steps" => self.steps = num(v)?,
            "shape_truncations" => {
                self.shape_truncations = v.split(',').map(|x| num(x.trim())).collect::<std::result::Result<_, _>>()?
            }
            "out_dir" => self.out_dir = if v.is_empty() { None } else { Some(PathBuf::from(v)) },
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Text form of `key` as written by [`ExperimentConfig::save`].
    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "command" => self.command.clone(),
            "nu" => self.nu.to_string(),
            "n" => self.n.to_string(),
            "horizon" => self.horizon.to_string(),
            "dt" => self.dt.map_or_else(|| "auto".to_string(), |d| d.to_string()),
            "ensemble" => self.ensemble.to_string(),
            "seed" => self.seed.to_string(),
            "s" => self.s.to_string(),
            "a" => self.a.to_string(),
            "p" => self.p.to_string(),
            "q" => self.q.to_string(),
            "alpha" => self.alpha.to_string(),
            "r" => self.r.to_string(),
            "rho" => self.rho.to_string(),
            "moment_order" => self.moment_order.to_string(),
            "gamma" => self
                .gamma
                .iter()
                .map(|g| format!("{},{}:{}:{}", g.k1, g.k2, g.re, g.im))
                .collect::<Vec<_>>()
                .join(";"),
            "mode" => self.mode.to_string(),
            "stride" => self.stride.to_string(),
            "kmax" => self.kmax.to_string(),
            "cutoff" => self.cutoff.to_string(),
            "n1" => self.n1.to_string(),
            "n2" => self.n2.to_string(),
            "probes" => self.probes.to_string(),
            "steps" => self.steps.to_string(),
            "shape_truncations" => self.shape_truncations.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
            "out_dir" => self.out_dir.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
            _ => return None,
        })
    }

    /// Parses the file format: `key = value` lines, `#` comments, blank lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: i + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| perr(format!("expected 'key = value', got '{line}'")))?;
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(perr(format!("duplicate key '{key}'")));
            }
            cfg.set(key, value).map_err(perr)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Every key in fixed order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let _ = writeln!(out, "{key} = {}", self.get(key).unwrap_or_default());
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// SHA-256 of [`ExperimentConfig::to_text`], hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.to_text().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Every violated precondition for the configured command (empty means
    /// the configuration may run).
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let cmd = self.command.as_str();
        if !COMMANDS.contains(&cmd) {
            v.push(format!("unknown command '{cmd}' (expected one of {})", COMMANDS.join(", ")));
        }
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            v.push(format!("nu must be > 0 (got {})", self.nu));
        }
        if self.n < 1 {
            v.push("n must be >= 1".into());
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            v.push(format!("horizon must be >= 0 (got {})", self.horizon));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                v.push(format!("dt must be > 0 (got {dt})"));
            }
        }
        let dt = self.dt();
        let timed = ["simulate", "invariance-test", "uniqueness-divergence"].contains(&cmd);
        if timed && dt > self.horizon && self.horizon > 0.0 {
            v.push(format!("dt <= horizon required (dt={dt}, horizon={})", self.horizon));
        }
        if ["simulate", "uniqueness-divergence", "contraction-test"].contains(&cmd) && !(self.horizon > 0.0) {
            v.push("horizon must be > 0".into());
        }
        if timed && self.horizon > 0.0 {
            let ratio = self.horizon / dt;
            if (ratio - ratio.round()).abs() > 1e-6 * ratio.max(1.0) {
                v.push(format!("dt={dt} must divide horizon={}", self.horizon));
            }
        }
        let min_ensemble = match cmd {
            "moment-test" | "invariance-test" => 100,
            "bnorm-test" => 2,
            _ => 1,
        };
        if self.ensemble < min_ensemble {
            v.push(format!("ensemble must be >= {min_ensemble} for {cmd} (got {})", self.ensemble));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            v.push(format!("r must be > 0 (got {})", self.r));
        }
        if !(self.rho >= 1.0 && self.rho.is_finite()) {
            v.push(format!("rho must be >= 1 (got {})", self.rho));
        }
        if self.moment_order < 1 {
            v.push("moment_order must be >= 1".into());
        }
        if self.stride < 1 {
            v.push("stride must be >= 1".into());
        }
        if self.kmax < 4 {
            v.push(format!("kmax must be >= 4 (got {})", self.kmax));
        }
        if (self.cutoff as f64) < 4.0 * self.kmax as f64 {
            v.push(format!("cutoff must be >= 4 kmax (cutoff={}, kmax={})", self.cutoff, self.kmax));
        }
        if self.n1 < 1 || self.n1 > self.n2 {
            v.push(format!("need 1 <= n1 <= n2 (n1={}, n2={})", self.n1, self.n2));
        }
        if self.probes < 10 {
            v.push(format!("probes must be >= 10 (got {})", self.probes));
        }
        if self.steps < 2 {
            v.push(format!("steps must be >= 2 (got {})", self.steps));
        }
        if self.shape_truncations.is_empty() || self.shape_truncations.iter().any(|&n| n < 2) {
            v.push("shape_truncations must be a non-empty list of values >= 2".into());
        }
        if self.gamma.is_empty() {
            v.push("gamma must name at least one mode".into());
        }
        for g in &self.gamma {
            match WaveIndex::new(g.k1, g.k2) {
                Ok(k) if !k.is_upper() => v.push(format!("gamma mode {k} is not in the upper half-lattice")),
                Ok(k) if !k.within(self.n) => v.push(format!("gamma mode {k} lies outside |k| <= {}", self.n)),
                Ok(_) => {}
                Err(_) => v.push("gamma mode (0, 0) is not allowed".into()),
            }
        }
        let bp = self.besov();
        match validate_params(&bp) {
            Ok(bad) => {
                if ["contraction-test", "uniqueness-divergence"].contains(&cmd) {
                    v.extend(bad.iter().map(|c| format!("Besov parameters violate {c}")));
                }
            }
            Err(e) => v.push(e.to_string()),
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(v))
        }
    }
}
