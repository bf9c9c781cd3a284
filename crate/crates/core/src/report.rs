//! Self-auditing experiment reports.
//!
//! Every row stores the estimate, the target, the standard error and the gate
//! that decided it, so the pass flag can be recomputed from the row alone.

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::spectral::fmt_f64;
use crate::stats::MeanEstimate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// `|estimate - target| <= sigmas * std_error + allowance`
    Sigma { sigmas: f64, allowance: f64 },
    /// `|estimate - target| <= tol`
    AbsTol(f64),
    /// `|estimate - target| <= tol * |target|`
    RelTol(f64),
    /// `estimate <= target`
    AtMost,
    /// `estimate < target`
    Below,
    /// `estimate >= target`
    AtLeast,
    /// Recorded only.
    Info,
}

impl Gate {
    pub fn sigma3() -> Self {
        Gate::Sigma { sigmas: 3.0, allowance: 0.0 }
    }

    pub fn check(&self, estimate: f64, target: f64, std_error: f64) -> bool {
        let diff = (estimate - target).abs();
        match *self {
            Gate::Sigma { sigmas, allowance } => diff <= sigmas * std_error + allowance,
            Gate::AbsTol(tol) => diff <= tol,
            Gate::RelTol(tol) => diff <= tol * target.abs(),
            Gate::AtMost => estimate <= target,
            Gate::Below => estimate < target,
            Gate::AtLeast => estimate >= target,
            Gate::Info => true,
        }
    }

    /// Inverse of the `gate,gate_param,allowance` CSV columns.
    pub fn from_parts(kind: &str, a: f64, b: f64) -> Option<Self> {
        Some(match kind {
            "sigma" => Gate::Sigma { sigmas: a, allowance: b },
            "abs_tol" => Gate::AbsTol(a),
            "rel_tol" => Gate::RelTol(a),
            "at_most" => Gate::AtMost,
            "below" => Gate::Below,
            "at_least" => Gate::AtLeast,
            "info" => Gate::Info,
            _ => return None,
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Gate::Sigma { .. } => "sigma",
            Gate::AbsTol(_) => "abs_tol",
            Gate::RelTol(_) => "rel_tol",
            Gate::AtMost => "at_most",
            Gate::Below => "below",
            Gate::AtLeast => "at_least",
            Gate::Info => "info",
        }
    }

    pub fn params(&self) -> (f64, f64) {
        match *self {
            Gate::Sigma { sigmas, allowance } => (sigmas, allowance),
            Gate::AbsTol(t) | Gate::RelTol(t) => (t, 0.0),
            _ => (0.0, 0.0),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Sigma { sigmas, allowance } if allowance == 0.0 => write!(f, "{sigmas} SE"),
            Gate::Sigma { sigmas, allowance } => write!(f, "{sigmas} SE + {allowance:.3e}"),
            Gate::AbsTol(t) => write!(f, "abs {t:e}"),
            Gate::RelTol(t) => write!(f, "rel {t:e}"),
            Gate::AtMost => write!(f, "<= target"),
            Gate::Below => write!(f, "< target"),
            Gate::AtLeast => write!(f, ">= target"),
            Gate::Info => write!(f, "info"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub name: String,
    pub estimate: f64,
    pub target: f64,
    pub std_error: f64,
    pub gate: Gate,
    pub pass: bool,
}

impl ReportRow {
    pub fn new(name: impl Into<String>, estimate: f64, target: f64, std_error: f64, gate: Gate) -> Self {
        let pass = gate.check(estimate, target, std_error);
        Self { name: name.into(), estimate, target, std_error, gate, pass }
    }

    pub fn from_mean(name: impl Into<String>, m: &MeanEstimate, target: f64, gate: Gate) -> Self {
        Self::new(name, m.mean, target, m.std_error, gate)
    }

    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Self::new(name, value, 0.0, 0.0, Gate::Info)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub id: String,
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
    pub provenance: Provenance,
}

impl ExperimentReport {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            rows: Vec::new(),
            notes: Vec::new(),
            provenance: Provenance { version: env!("CARGO_PKG_VERSION").to_string(), ..Default::default() },
        }
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn extend(&mut self, other: ExperimentReport) {
        self.rows.extend(other.rows);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn row(&self, name: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// Recomputes every pass flag from the stored fields.
    pub fn audit(&self) -> bool {
        self.rows.iter().all(|r| r.gate.check(r.estimate, r.target, r.std_error) == r.pass)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# experiment={}", self.id)?;
        writeln!(
            w,
            "# config_hash={} seed={} version={}",
            self.provenance.config_hash, self.provenance.seed, self.provenance.version
        )?;
        for n in &self.notes {
            writeln!(w, "# note: {n}")?;
        }
        writeln!(w, "{CSV_HEADER}")?;
        for r in &self.rows {
            let (a, b) = r.gate.params();
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                csv_field(&r.name),
                fmt_f64(r.estimate),
                fmt_f64(r.target),
                fmt_f64(r.std_error),
                r.gate.kind(),
                fmt_f64(a),
                fmt_f64(b),
                r.pass
            )?;
        }
        Ok(())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

// splits one CSV line, honouring double quotes
fn split_csv(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted && chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            '"' => quoted = !quoted,
            ',' if !quoted => out.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    out.push(cur);
    out
}

impl ExperimentReport {
    /// Parses the output of [`ExperimentReport::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut report = ExperimentReport::new("");
        let mut header_seen = false;
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let perr = |msg: String| Error::Parse { line: i + 1, msg };
            if let Some(rest) = line.strip_prefix("# ") {
                if let Some(id) = rest.strip_prefix("experiment=") {
                    report.id = id.to_string();
                } else if let Some(n) = rest.strip_prefix("note: ") {
                    report.notes.push(n.to_string());
                } else if rest.starts_with("config_hash=") {
                    for tok in rest.split_whitespace() {
                        if let Some(v) = tok.strip_prefix("config_hash=") {
                            report.provenance.config_hash = v.to_string();
                        } else if let Some(v) = tok.strip_prefix("seed=") {
                            report.provenance.seed = v.parse().map_err(|e| perr(format!("seed: {e}")))?;
                        } else if let Some(v) = tok.strip_prefix("version=") {
                            report.provenance.version = v.to_string();
                        }
                    }
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            if !header_seen {
                if line != CSV_HEADER {
                    return Err(perr(format!("expected header '{CSV_HEADER}'")));
                }
                header_seen = true;
                continue;
            }
            let f = split_csv(&line);
            if f.len() != 8 {
                return Err(perr(format!("expected 8 fields, found {}", f.len())));
            }
            let num = |j: usize| f[j].parse::<f64>().map_err(|e| perr(format!("field {}: {e}", j + 1)));
            let gate = Gate::from_parts(&f[4], num(5)?, num(6)?).ok_or_else(|| perr(format!("unknown gate '{}'", f[4])))?;
            let pass = match f[7].as_str() {
                "true" => true,
                "false" => false,
                other => return Err(perr(format!("pass flag must be true/false, got '{other}'"))),
            };
            report.rows.push(ReportRow { name: f[0].clone(), estimate: num(1)?, target: num(2)?, std_error: num(3)?, gate, pass });
        }
        if !header_seen {
            return Err(Error::Parse { line: 0, msg: "no report header found".into() });
        }
        Ok(report)
    }
}

pub const CSV_HEADER: &str = "metric,estimate,target,std_error,gate,gate_param,allowance,pass";

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}] {}", self.id, if self.passed() { "PASS" } else { "FAIL" })?;
        for r in &self.rows {
            writeln!(
                f,
                "  {:<5} {:<40} est={:<14.6e} target={:<14.6e} se={:<12.4e} gate={}",
                if r.pass { "ok" } else { "FAIL" },
                r.name,
                r.estimate,
                r.target,
                r.std_error,
                r.gate
            )?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gates() {
        assert!(Gate::sigma3().check(1.0, 1.29, 0.1));
        assert!(!Gate::sigma3().check(1.0, 1.31, 0.1));
        assert!(Gate::Sigma { sigmas: 3.0, allowance: 0.05 }.check(1.0, 1.34, 0.1));
        assert!(Gate::Below.check(0.99, 1.0, 0.0));
        assert!(!Gate::Below.check(1.0, 1.0, 0.0));
        assert!(Gate::RelTol(1e-3).check(1.0005, 1.0, 0.0));
    }

    #[test]
    fn csv_is_auditable() {
        let mut r = ExperimentReport::new("demo");
        r.push(ReportRow::new("a", 1.0, 1.0, 0.1, Gate::sigma3()));
        r.push(ReportRow::new("b", 2.0, 1.0, 0.1, Gate::sigma3()));
        assert!(r.audit());
        assert!(!r.passed());
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = ExperimentReport::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, r);
        assert!(text.contains("\nb,2.0000000000000000e0,1.0000000000000000e0,1.0000000000000001e-1,sigma,3.0000000000000000e0,0.0000000000000000e0,false\n"));
    }
}
