//! Nonnegative matrix factorization with multilevel acceleration.
//!
//! The crate provides three classic NMF iterations (alternating nonnegative
//! least squares, multiplicative updates and hierarchical alternating least
//! squares) and a multigrid-style driver that runs them on a pyramid of
//! restricted image data. Coarse levels are cheaper per iteration, and the
//! prolongated coarse solution is a good starting point for the fine level.
//!
//! Data matrices hold one vectorized image per column. Vectorization is
//! column concatenation: pixel `(i, j)` of an `h x w` image sits at index
//! `j * h + i`.

pub mod bench;
pub mod cli;
pub mod cost;
pub mod error;
pub mod io;
pub mod matrix;
pub mod multilevel;
pub mod rng;
pub mod solvers;
pub mod synth;
pub mod transfer;

pub use error::{Error, Result};
pub use matrix::{frobenius_error, NonnegMatrix};
pub use multilevel::{run_configuration, CycleKind};
pub use rng::{random_init, Rng};
pub use solvers::{run_solver, Budget, BudgetMode, RunTrace, SolverKind};
pub use transfer::{GridHierarchy, ImageGrid, TransferOperator};
