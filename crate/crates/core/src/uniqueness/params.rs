//! Admissible Besov parameter sets for the contraction argument.

use std::fmt;

use crate::error::{Error, Result};

/// Exponents `(s, a, p, q, α)` of the spaces `C([0,T]; B^{-s}_{p,q})` and
/// `L^α(0,T; B^a_{p,q})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovParams {
    pub s: f64,
    pub a: f64,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
}

impl BesovParams {
    /// `p = q = α = 3`, `s = 1/6`, `a = 1/2`.
    pub fn reference() -> Self {
        Self { s: 1.0 / 6.0, a: 0.5, p: 3.0, q: 3.0, alpha: 3.0 }
    }

    /// Time exponent of the `L^α(B^a)` bound, `(-s - 2/p + 1)/2`.
    pub fn exponent_lalpha(&self) -> f64 {
        (-self.s - 2.0 / self.p + 1.0) / 2.0
    }

    /// Time exponent of the `C(B^{-s})` bound,
    /// `((a - 2/p - 1)/2)(α/(α-1)) + 1`.
    pub fn exponent_sup(&self) -> f64 {
        ((self.a - 2.0 / self.p - 1.0) / 2.0) * (self.alpha / (self.alpha - 1.0)) + 1.0
    }

    /// Regularity index `-s + a - 2/p - 1` of `B(u, v)`.
    pub fn product_regularity(&self) -> f64 {
        -self.s + self.a - 2.0 / self.p - 1.0
    }
}

/// One inequality of the admissibility conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    SPositive,
    SBelowA,
    ABelowTwoOverP,
    LalphaKernel,
    SupKernel,
    PAboveTwo,
}

impl Clause {
    pub fn text(&self) -> &'static str {
        match self {
            Clause::SPositive => "0 < s",
            Clause::SBelowA => "s < a",
            Clause::ABelowTwoOverP => "a < 2/p",
            Clause::LalphaKernel => "(s + 2/p + 1)/2 < 1",
            Clause::SupKernel => "((-a + 2/p + 1)/2)(alpha/(alpha-1)) < 1",
            Clause::PAboveTwo => "p > 2",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

/// Lists the violated clauses (empty means admissible). `p > 2` follows from
/// the others and is checked independently.
pub fn validate_params(bp: &BesovParams) -> Result<Vec<Clause>> {
    let BesovParams { s, a, p, q, alpha } = *bp;
    if ![s, a, p, q, alpha].iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidParameter("Besov parameters must be finite".into()));
    }
    if alpha <= 1.0 {
        return Err(Error::InvalidParameter(format!("alpha must be > 1, got {alpha}")));
    }
    if p < 1.0 || q < 1.0 {
        return Err(Error::InvalidParameter(format!("need p, q >= 1 (p={p}, q={q})")));
    }
    let checks = [
        (Clause::SPositive, 0.0 < s),
        (Clause::SBelowA, s < a),
        (Clause::ABelowTwoOverP, a < 2.0 / p),
        (Clause::LalphaKernel, (s + 2.0 / p + 1.0) / 2.0 < 1.0),
        (Clause::SupKernel, ((-a + 2.0 / p + 1.0) / 2.0) * (alpha / (alpha - 1.0)) < 1.0),
        (Clause::PAboveTwo, p > 2.0),
    ];
    Ok(checks.iter().filter(|(_, ok)| !ok).map(|(c, _)| *c).collect())
}

/// `Ok(())` for admissible parameters, otherwise an error naming every
/// violated clause.
pub fn require_valid(bp: &BesovParams) -> Result<()> {
    let bad = validate_params(bp)?;
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(bad.iter().map(|c| format!("violated: {c}")).collect()))
    }
}

/// `min{(1/(2 C₁ N_T))^{1/e₁}, (1/(2 C₂ N_T))^{1/e₂}}` with `e₁`, `e₂` the
/// time exponents of the `L^α(B^a)` and `C(B^{-s})` bounds.
pub fn t_star(c1: f64, c2: f64, n_t: f64, bp: &BesovParams) -> Result<f64> {
    require_valid(bp)?;
    for (name, v) in [("C1", c1), ("C2", c2), ("N_T", n_t)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
        }
    }
    let a = (1.0 / (2.0 * c1 * n_t)).powf(1.0 / bp.exponent_lalpha());
    let b = (1.0 / (2.0 * c2 * n_t)).powf(1.0 / bp.exponent_sup());
    Ok(a.min(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_set_is_admissible() {
        let bp = BesovParams::reference();
        assert!(validate_params(&bp).unwrap().is_empty());
        assert!((bp.exponent_lalpha() - 1.0 / 12.0).abs() < 1e-15);
        assert!((bp.exponent_sup() - 1.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn violated_clauses() {
        let bp = BesovParams { s: 0.0, ..BesovParams::reference() };
        assert!(validate_params(&bp).unwrap().contains(&Clause::SPositive));
        let bp = BesovParams { a: 2.0 / 3.0, ..BesovParams::reference() };
        assert!(validate_params(&bp).unwrap().contains(&Clause::ABelowTwoOverP));
        let bp = BesovParams { p: 2.0, ..BesovParams::reference() };
        assert!(validate_params(&bp).unwrap().contains(&Clause::PAboveTwo));
        let bp = BesovParams { alpha: 1.0, ..BesovParams::reference() };
        assert!(validate_params(&bp).is_err());
    }

    #[test]
    fn t_star_unit_constants() {
        let t = t_star(1.0, 1.0, 1.0, &BesovParams::reference()).unwrap();
        assert!((t - 2f64.powi(-12)).abs() < 1e-15);
        let t2 = t_star(1.0, 1.0, 2.0, &BesovParams::reference()).unwrap();
        assert!(t2 < t);
    }
}
