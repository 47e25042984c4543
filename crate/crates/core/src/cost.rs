//! Model flop counts per iteration for the three solvers.
//!
//! MU and HALS share the closed form `2m(nr + r^2) + 2nr^2`. ANLS is modeled
//! as `mnr + (m + n) s r^3`, the leading terms of its asymptotic cost taken
//! with unit constants, where `s` is the number of active-set exchanges per
//! NNLS solve. All values are "model flops", not measurements.

use std::fmt;

use crate::error::{Error, Result};
use crate::solvers::{RunTrace, SolverKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    /// Active-set exchanges per NNLS solve.
    pub s_r: f64,
}

impl CostParams {
    pub fn new(m: usize, n: usize, r: usize, s_r: f64) -> Result<Self> {
        if r == 0 || m < r || n < r {
            return Err(Error::invalid(format!("cost model needs m, n >= r >= 1, got m={m} n={n} r={r}")));
        }
        if !(s_r >= 1.0) || !s_r.is_finite() {
            return Err(Error::invalid(format!("s(r) must be at least 1, got {s_r}")));
        }
        Ok(Self { m, n, r, s_r })
    }

    /// Uses the static `s(r) = 2r` default.
    pub fn with_default_s(m: usize, n: usize, r: usize) -> Result<Self> {
        Self::new(m, n, r, default_s_r(r))
    }

    pub fn with_rows(self, m: usize) -> Self {
        Self { m, ..self }
    }
}

pub fn default_s_r(r: usize) -> f64 {
    (2 * r) as f64
}

/// Mean exchanges per NNLS solve recorded in `trace`, if it ran ANLS.
pub fn measured_s_r(trace: &RunTrace) -> Option<f64> {
    if trace.nnls_solves == 0 {
        return None;
    }
    let total: u64 = trace.nnls_iteration_counts.iter().sum();
    Some((total as f64 / trace.nnls_solves as f64).max(1.0))
}

/// `2m(nr + r^2) + 2nr^2`.
pub fn mu_iteration_cost(p: &CostParams) -> f64 {
    let (m, n, r) = (p.m as f64, p.n as f64, p.r as f64);
    2.0 * m * (n * r + r * r) + 2.0 * n * r * r
}

/// `mnr + (m + n) s(r) r^3`.
pub fn anls_iteration_cost(p: &CostParams) -> f64 {
    let (m, n, r) = (p.m as f64, p.n as f64, p.r as f64);
    m * n * r + (m + n) * p.s_r * r * r * r
}

pub fn iteration_cost(p: &CostParams, kind: SolverKind) -> f64 {
    match kind {
        SolverKind::Mu | SolverKind::Hals => mu_iteration_cost(p),
        SolverKind::Anls => anls_iteration_cost(p),
    }
}

/// `sum_{i=1}^r C(r, i) i^3`, the cost of enumerating every passive set.
pub fn g_of_r(r: usize) -> Result<u64> {
    if !(1..=30).contains(&r) {
        return Err(Error::invalid(format!("g(r) is defined here for 1 <= r <= 30, got {r}")));
    }
    let mut binom: u64 = 1;
    let mut total: u64 = 0;
    for i in 1..=r as u64 {
        binom = binom * (r as u64 - i + 1) / i;
        total += binom * i * i * i;
    }
    Ok(total)
}

/// Fine-to-coarse ratio of per-iteration cost when the row count drops
/// from `p.m` to `m_prime`.
pub fn reduction_factor(p: &CostParams, m_prime: usize, kind: SolverKind) -> Result<f64> {
    if m_prime > p.m {
        return Err(Error::invalid(format!("coarse rows {m_prime} exceed fine rows {}", p.m)));
    }
    Ok(iteration_cost(p, kind) / iteration_cost(&p.with_rows(m_prime), kind))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Reducing m cuts the per-iteration cost of every solver by a constant factor.
    BeneficialAll,
    /// Only MU and HALS are guaranteed a constant-factor reduction.
    BeneficialMuHalsOnly,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::BeneficialAll => "beneficial_all",
            Regime::BeneficialMuHalsOnly => "beneficial_mu_hals_only",
        })
    }
}

pub fn classify_regime(p: &CostParams) -> Regime {
    let threshold = (p.n as f64).min(p.s_r * (p.r * p.r) as f64);
    if p.m as f64 >= threshold {
        Regime::BeneficialAll
    } else {
        Regime::BeneficialMuHalsOnly
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: usize, n: usize, r: usize, s: f64) -> CostParams {
        CostParams::new(m, n, r, s).unwrap()
    }

    #[test]
    fn mu_cost_values() {
        assert_eq!(mu_iteration_cost(&params(1, 1, 1, 1.0)), 6.0);
        assert_eq!(mu_iteration_cost(&params(1000, 100, 10, 1.0)), 2_220_000.0);
    }

    #[test]
    fn mu_cost_is_affine_in_m() {
        let p = params(40, 30, 5, 1.0);
        let c = |m| mu_iteration_cost(&p.with_rows(m));
        assert_eq!(c(80) - c(40), c(40) - c(0));
    }

    #[test]
    fn anls_cost_values() {
        assert_eq!(anls_iteration_cost(&params(100, 50, 4, 3.0)), 48_800.0);
        assert_eq!(anls_iteration_cost(&params(7, 5, 1, 1.0)), 35.0 + 12.0);
        let base = params(20, 20, 3, 2.0);
        let c0 = anls_iteration_cost(&base);
        assert!(anls_iteration_cost(&base.with_rows(21)) >= c0);
        assert!(anls_iteration_cost(&params(20, 21, 3, 2.0)) >= c0);
        assert!(anls_iteration_cost(&params(20, 20, 4, 2.0)) >= c0);
        assert!(anls_iteration_cost(&params(20, 20, 3, 2.5)) >= c0);
    }

    #[test]
    fn g_values() {
        assert_eq!(g_of_r(1).unwrap(), 1);
        assert_eq!(g_of_r(2).unwrap(), 10);
        // 5*1 + 10*8 + 10*27 + 5*64 + 1*125
        assert_eq!(g_of_r(5).unwrap(), 800);
        assert!(g_of_r(5).unwrap() <= 4000);
        assert!(g_of_r(0).is_err());
        assert!(g_of_r(31).is_err());
    }

    #[test]
    fn reduction_factor_values() {
        let p = params(1000, 100, 10, 1.0);
        assert_eq!(reduction_factor(&p, 1000, SolverKind::Mu).unwrap(), 1.0);
        let f = reduction_factor(&p, 250, SolverKind::Mu).unwrap();
        assert!((f - 1_110_000.0 / 285_000.0).abs() < 1e-12);
        assert!((f - 3.8947).abs() < 1e-4);
        assert!(reduction_factor(&p, 1001, SolverKind::Mu).is_err());
    }

    #[test]
    fn regimes() {
        assert_eq!(classify_regime(&params(500, 100, 10, 20.0)), Regime::BeneficialAll);
        assert_eq!(classify_regime(&params(100, 1000, 2, 4.0)), Regime::BeneficialAll);
        assert_eq!(classify_regime(&params(100, 1000, 10, 20.0)), Regime::BeneficialMuHalsOnly);
    }

    #[test]
    fn params_validation() {
        assert!(CostParams::new(2, 5, 3, 1.0).is_err());
        assert!(CostParams::new(5, 5, 3, 0.5).is_err());
        assert_eq!(CostParams::with_default_s(10, 10, 3).unwrap().s_r, 6.0);
    }
}
