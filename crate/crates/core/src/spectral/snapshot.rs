//! Snapshot CSV: a `# nu=<v> N=<n>` header, optional further `#` lines, then
//! `k1,k2,re,im` rows for the upper half-lattice in lexicographic order.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::field::SpectralField;
use super::lattice::{Lattice, WaveIndex};
use crate::error::{Error, Result};

/// Formats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_snapshot<W: Write>(
    mut w: W,
    field: &SpectralField,
    nu: f64,
    extra_header: &[String],
) -> Result<()> {
    writeln!(w, "# nu={} N={}", fmt_f64(nu), field.truncation())?;
    for line in extra_header {
        writeln!(w, "# {line}")?;
    }
    for (k, c) in field.iter() {
        writeln!(w, "{},{},{},{}", k.k1, k.k2, fmt_f64(c.re), fmt_f64(c.im))?;
    }
    Ok(())
}

pub fn read_snapshot<R: BufRead>(r: R) -> Result<(f64, SpectralField)> {
    let mut lines = r.lines().enumerate();
    let (_, first) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty snapshot".into() })?;
    let first = first?;
    let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let header = first.strip_prefix("# ").ok_or_else(|| perr(1, "missing '# nu=.. N=..' header"))?;
    let mut nu = None;
    let mut n = None;
    for tok in header.split_whitespace() {
        if let Some(v) = tok.strip_prefix("nu=") {
            nu = Some(v.parse::<f64>().map_err(|e| perr(1, &e.to_string()))?);
        } else if let Some(v) = tok.strip_prefix("N=") {
            n = Some(v.parse::<usize>().map_err(|e| perr(1, &e.to_string()))?);
        }
    }
    let (nu, n) = match (nu, n) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(perr(1, "header must carry nu= and N=")),
    };
    let mut field = SpectralField::on(Lattice::new(n));
    let mut seen = 0usize;
    let mut prev: Option<WaveIndex> = None;
    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 4 {
            return Err(perr(lineno, "expected k1,k2,re,im"));
        }
        let k1: i32 = parts[0].trim().parse().map_err(|_| perr(lineno, "bad k1"))?;
        let k2: i32 = parts[1].trim().parse().map_err(|_| perr(lineno, "bad k2"))?;
        let re: f64 = parts[2].trim().parse().map_err(|_| perr(lineno, "bad re"))?;
        let im: f64 = parts[3].trim().parse().map_err(|_| perr(lineno, "bad im"))?;
        let k = WaveIndex::new(k1, k2).map_err(|e| perr(lineno, &e.to_string()))?;
        if prev.is_some_and(|p| p >= k) {
            return Err(perr(lineno, "rows must be sorted lexicographically by (k1, k2)"));
        }
        prev = Some(k);
        field.set(k, Complex64::new(re, im)).map_err(|e| perr(lineno, &e.to_string()))?;
        seen += 1;
    }
    if seen != field.lattice().len() {
        return Err(perr(0, &format!("expected {} rows, found {seen}", field.lattice().len())));
    }
    Ok((nu, field))
}
