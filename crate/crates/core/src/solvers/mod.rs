//! Baseline NMF iterations and the budget-driven run loop.

mod anls;
mod hals;
mod mu;
pub mod nnls;
mod run;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;

pub use anls::{anls_step, anls_update_v, anls_update_w, NnlsTally};
pub use hals::hals_step;
pub use mu::{mu_step, MU_DENOMINATOR_FLOOR};
pub use run::{run_solver, Budget, BudgetMode, PhaseRecord, RunTrace, TraceSample};
pub(crate) use run::Runner;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverKind {
    Anls,
    Mu,
    Hals,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [SolverKind::Anls, SolverKind::Mu, SolverKind::Hals];

    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Anls => "anls",
            SolverKind::Mu => "mu",
            SolverKind::Hals => "hals",
        }
    }

    /// One full sweep: update V, then W.
    pub fn step(&self, m: &NonnegMatrix, v: &mut NonnegMatrix, w: &mut NonnegMatrix) -> Result<NnlsTally> {
        match self {
            SolverKind::Anls => anls_step(m, v, w),
            SolverKind::Mu => {
                mu_step(m, v, w);
                Ok(NnlsTally::default())
            }
            SolverKind::Hals => {
                hals_step(m, v, w);
                Ok(NnlsTally::default())
            }
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "anls" => Ok(SolverKind::Anls),
            "mu" => Ok(SolverKind::Mu),
            "hals" => Ok(SolverKind::Hals),
            other => Err(Error::invalid(format!("unknown algorithm '{other}'"))),
        }
    }
}

pub(crate) fn assert_conformable(m: &NonnegMatrix, v: &NonnegMatrix, w: &NonnegMatrix) {
    if let Err(e) = crate::matrix::check_factor_dims(m, v, w) {
        panic!("{e}");
    }
}
