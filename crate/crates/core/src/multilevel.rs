//! Multigrid cycles over a [`GridHierarchy`].
//!
//! A cycle is first expanded into a flat [`Phase`] schedule (solve on a
//! level with a share of the budget, restrict V one level down, prolong V
//! one level up) and then executed. Budget fractions per recursion node:
//!
//! | cycle | schedule                                                  |
//! |-------|-----------------------------------------------------------|
//! | NI    | recurse `T/4`, solve `3T/4`                               |
//! | VC    | solve `T/4`, recurse `T/4`, solve `T/2`                   |
//! | FMG   | recurse FMG `T/4`, V-cycle on this level `3T/4`           |
//!
//! W is shared by all levels since only the row dimension is coarsened.
//! Whatever a phase cannot spend (less than one step) is carried to the last
//! phase, which always runs on the finest level, so the total never exceeds
//! the budget.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{check_factor_dims, NonnegMatrix};
use crate::rng::random_init;
use crate::solvers::{run_solver, Budget, RunTrace, Runner, SolverKind};
use crate::transfer::{GridHierarchy, ImageGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CycleKind {
    SingleLevel,
    NestedIteration,
    VCycle,
    FullMultigrid,
}

impl CycleKind {
    pub const ALL: [CycleKind; 4] = [
        CycleKind::SingleLevel,
        CycleKind::NestedIteration,
        CycleKind::VCycle,
        CycleKind::FullMultigrid,
    ];

    /// CLI spelling.
    pub fn name(&self) -> &'static str {
        match self {
            CycleKind::SingleLevel => "none",
            CycleKind::NestedIteration => "ni",
            CycleKind::VCycle => "vc",
            CycleKind::FullMultigrid => "fmg",
        }
    }
}

impl fmt::Display for CycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CycleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(CycleKind::SingleLevel),
            "ni" => Ok(CycleKind::NestedIteration),
            "vc" => Ok(CycleKind::VCycle),
            "fmg" => Ok(CycleKind::FullMultigrid),
            other => Err(Error::invalid(format!("unknown cycle '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    Solve { level: usize, amount: f64 },
    /// `V <- R V` from `from` to `from + 1`.
    Restrict { from: usize },
    /// `V <- P V` from `to + 1` to `to`.
    Prolong { to: usize },
}

/// Expands `cycle` over `levels` levels (0 = finest) with total `budget`.
pub fn schedule(cycle: CycleKind, levels: usize, budget: f64) -> Result<Vec<Phase>> {
    if levels == 0 {
        return Err(Error::invalid("level count must be at least 1"));
    }
    let coarsest = levels - 1;
    let mut out = Vec::new();
    match cycle {
        CycleKind::SingleLevel => out.push(Phase::Solve { level: 0, amount: budget }),
        CycleKind::NestedIteration => nested(0, coarsest, budget, &mut out),
        CycleKind::VCycle => v_shape(0, coarsest, budget, &mut out),
        CycleKind::FullMultigrid => full(0, coarsest, budget, &mut out),
    }
    Ok(out)
}

fn nested(level: usize, coarsest: usize, t: f64, out: &mut Vec<Phase>) {
    if level == coarsest {
        out.push(Phase::Solve { level, amount: t });
        return;
    }
    out.push(Phase::Restrict { from: level });
    nested(level + 1, coarsest, t / 4.0, out);
    out.push(Phase::Prolong { to: level });
    out.push(Phase::Solve { level, amount: 3.0 * t / 4.0 });
}

fn v_shape(level: usize, coarsest: usize, t: f64, out: &mut Vec<Phase>) {
    if level == coarsest {
        out.push(Phase::Solve { level, amount: t });
        return;
    }
    out.push(Phase::Solve { level, amount: t / 4.0 });
    out.push(Phase::Restrict { from: level });
    v_shape(level + 1, coarsest, t / 4.0, out);
    out.push(Phase::Prolong { to: level });
    out.push(Phase::Solve { level, amount: t / 2.0 });
}

fn full(level: usize, coarsest: usize, t: f64, out: &mut Vec<Phase>) {
    if level == coarsest {
        out.push(Phase::Solve { level, amount: t });
        return;
    }
    out.push(Phase::Restrict { from: level });
    full(level + 1, coarsest, t / 4.0, out);
    out.push(Phase::Prolong { to: level });
    v_shape(level, coarsest, 3.0 * t / 4.0, out);
}

/// Sum of all solve allocations in a schedule.
pub fn allocated_total(plan: &[Phase]) -> f64 {
    plan.iter()
        .map(|p| match p {
            Phase::Solve { amount, .. } => *amount,
            _ => 0.0,
        })
        .sum()
}

/// Runs a schedule from fine-level iterates `(v0, w0)`.
pub fn execute(
    hierarchy: &GridHierarchy,
    plan: &[Phase],
    v0: &NonnegMatrix,
    w0: &NonnegMatrix,
    kind: SolverKind,
    budget: Budget,
    trace_every: usize,
) -> Result<(NonnegMatrix, NonnegMatrix, RunTrace)> {
    let fine = hierarchy.data(0);
    check_factor_dims(fine, v0, w0)?;
    for phase in plan {
        let deepest = match *phase {
            Phase::Solve { level, .. } => level,
            Phase::Restrict { from } => from + 1,
            Phase::Prolong { to } => to + 1,
        };
        if deepest >= hierarchy.depth() {
            return Err(Error::invalid(format!(
                "schedule reaches level {deepest} but the hierarchy has {} levels",
                hierarchy.depth()
            )));
        }
    }
    let last_solve = plan
        .iter()
        .rposition(|p| matches!(p, Phase::Solve { .. }))
        .ok_or_else(|| Error::invalid("schedule contains no solve phase"))?;

    let mut runner = Runner::new(kind, budget.mode, fine.rows(), fine.cols(), v0.cols(), trace_every);
    if !matches!(plan.first(), Some(Phase::Solve { level: 0, .. })) {
        runner.sample(0, fine, v0, w0);
    }
    let mut v = v0.clone();
    let mut w = w0.clone();
    let mut level = 0usize;
    let mut carry = 0.0;
    for (idx, phase) in plan.iter().enumerate() {
        match *phase {
            Phase::Restrict { from } => {
                debug_assert_eq!(from, level);
                v = hierarchy.restriction(from).apply(&v)?;
                level = from + 1;
            }
            Phase::Prolong { to } => {
                debug_assert_eq!(to + 1, level);
                v = hierarchy.prolongation(to).apply(&v)?;
                level = to;
            }
            Phase::Solve { level: l, amount } => {
                debug_assert_eq!(l, level);
                let granted = if idx == last_solve { amount + carry } else { amount };
                let record = runner.solve_phase(l, hierarchy.data(l), &mut v, &mut w, amount, granted)?;
                if idx != last_solve {
                    carry += (amount - record.consumed).max(0.0);
                }
            }
        }
    }
    debug_assert_eq!(level, 0);
    Ok((v, w, runner.finish()))
}

fn run_cycle(
    hierarchy: &GridHierarchy,
    cycle: CycleKind,
    levels: usize,
    v0: &NonnegMatrix,
    w0: &NonnegMatrix,
    kind: SolverKind,
    budget: Budget,
    trace_every: usize,
) -> Result<(NonnegMatrix, NonnegMatrix, RunTrace)> {
    if levels > hierarchy.depth() {
        return Err(Error::invalid(format!(
            "{levels} levels requested but the hierarchy has {}",
            hierarchy.depth()
        )));
    }
    let plan = schedule(cycle, levels, budget.amount)?;
    execute(hierarchy, &plan, v0, w0, kind, budget, trace_every)
}

/// Nested iteration on the first `levels` levels of `hierarchy`.
pub fn nested_iteration(
    hierarchy: &GridHierarchy,
    levels: usize,
    v0: &NonnegMatrix,
    w0: &NonnegMatrix,
    kind: SolverKind,
    budget: Budget,
    trace_every: usize,
) -> Result<(NonnegMatrix, NonnegMatrix, RunTrace)> {
    run_cycle(hierarchy, CycleKind::NestedIteration, levels, v0, w0, kind, budget, trace_every)
}

pub fn v_cycle(
    hierarchy: &GridHierarchy,
    levels: usize,
    v0: &NonnegMatrix,
    w0: &NonnegMatrix,
    kind: SolverKind,
    budget: Budget,
    trace_every: usize,
) -> Result<(NonnegMatrix, NonnegMatrix, RunTrace)> {
    run_cycle(hierarchy, CycleKind::VCycle, levels, v0, w0, kind, budget, trace_every)
}

/// Full multigrid: restricted data comes from the hierarchy cache, so each
/// level's data is computed once no matter how often the V-cycles visit it.
pub fn full_multigrid(
    hierarchy: &GridHierarchy,
    levels: usize,
    v0: &NonnegMatrix,
    w0: &NonnegMatrix,
    kind: SolverKind,
    budget: Budget,
    trace_every: usize,
) -> Result<(NonnegMatrix, NonnegMatrix, RunTrace)> {
    run_cycle(hierarchy, CycleKind::FullMultigrid, levels, v0, w0, kind, budget, trace_every)
}

/// Settings of one factorization run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub kind: SolverKind,
    pub cycle: CycleKind,
    pub levels: usize,
    pub rank: usize,
    pub seed: u64,
    pub budget: Budget,
    pub trace_every: usize,
}

/// Builds the hierarchy, draws `(V0, W0)` from `seed`, and runs the cycle.
///
/// `SingleLevel` ignores `levels` and needs no grid. Every other cycle needs
/// a grid that can be coarsened `levels - 1` times; this is checked before
/// any iteration runs.
pub fn run_configuration(
    m: &NonnegMatrix,
    grid: Option<ImageGrid>,
    cfg: &RunConfig,
) -> Result<(NonnegMatrix, NonnegMatrix, RunTrace)> {
    if cfg.levels == 0 {
        return Err(Error::invalid("level count must be at least 1"));
    }
    let (v0, w0) = random_init(m.rows(), m.cols(), cfg.rank, cfg.seed)?;
    if cfg.cycle == CycleKind::SingleLevel || cfg.levels == 1 {
        return run_solver(m, &v0, &w0, cfg.kind, cfg.budget, cfg.trace_every);
    }
    let grid = grid.ok_or_else(|| Error::Unsupported("multilevel cycles need image grid dimensions".into()))?;
    let hierarchy = GridHierarchy::new(m.clone(), grid, cfg.levels)?;
    run_cycle(&hierarchy, cfg.cycle, cfg.levels, &v0, &w0, cfg.kind, cfg.budget, cfg.trace_every)
}
