use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use super::SolverKind;
use crate::cost::{default_s_r, iteration_cost, CostParams};
use crate::error::{Error, Result};
use crate::matrix::{check_factor_dims, frobenius_error, NonnegMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetMode {
    /// Model flops of one fine-level iteration of the running solver.
    WorkUnits,
    WallClockSeconds,
}

/// Total effort `T` granted to a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub mode: BudgetMode,
    pub amount: f64,
}

impl Budget {
    /// A zero amount is accepted and means "perform no iterations".
    pub fn new(mode: BudgetMode, amount: f64) -> Result<Self> {
        if !amount.is_finite() || amount < 0.0 {
            return Err(Error::invalid(format!("budget must be a finite nonnegative amount, got {amount}")));
        }
        Ok(Self { mode, amount })
    }

    pub fn work(units: f64) -> Result<Self> {
        Self::new(BudgetMode::WorkUnits, units)
    }

    pub fn seconds(secs: f64) -> Result<Self> {
        Self::new(BudgetMode::WallClockSeconds, secs)
    }

    pub fn with_amount(self, amount: f64) -> Self {
        Self { amount, ..self }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            BudgetMode::WorkUnits => write!(f, "work:{}", self.amount),
            BudgetMode::WallClockSeconds => write!(f, "time:{}", self.amount),
        }
    }
}

/// Parses `work:<units>` or `time:<seconds>`.
impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mode, value) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("budget '{s}' is not of the form work:<units> or time:<seconds>")))?;
        let amount: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("budget amount '{value}' is not a number")))?;
        match mode.trim() {
            "work" => Budget::work(amount),
            "time" => Budget::seconds(amount),
            other => Err(Error::invalid(format!("unknown budget mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub elapsed_s: f64,
    pub work_units: f64,
    /// Grid level the error was measured on; 0 is the finest.
    pub level: usize,
    /// `||M_l - V_l W||_F` on that level.
    pub error: f64,
}

/// One solver phase of a (possibly multilevel) run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRecord {
    pub level: usize,
    /// Share of the total budget assigned by the schedule.
    pub planned: f64,
    /// Planned share plus any remainder donated by earlier phases.
    pub granted: f64,
    /// Budget actually used (work units or seconds).
    pub consumed: f64,
    pub steps: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub samples: Vec<TraceSample>,
    /// Total NNLS exchanges per ANLS step; empty for MU and HALS.
    pub nnls_iteration_counts: Vec<u64>,
    /// Number of NNLS solves behind `nnls_iteration_counts`.
    pub nnls_solves: u64,
    pub phases: Vec<PhaseRecord>,
}

impl RunTrace {
    pub fn final_error(&self) -> Option<f64> {
        self.samples.last().map(|s| s.error)
    }

    pub fn total_steps(&self) -> u64 {
        self.phases.iter().map(|p| p.steps).sum()
    }
}

/// Drives solver steps under a budget and records the trace.
pub(crate) struct Runner {
    kind: SolverKind,
    mode: BudgetMode,
    n: usize,
    r: usize,
    fine_cost: f64,
    trace_every: usize,
    start: Instant,
    work: f64,
    trace: RunTrace,
}

impl Runner {
    pub fn new(kind: SolverKind, mode: BudgetMode, fine_rows: usize, n: usize, r: usize, trace_every: usize) -> Self {
        let mut runner = Self {
            kind,
            mode,
            n,
            r,
            fine_cost: 1.0,
            trace_every,
            start: Instant::now(),
            work: 0.0,
            trace: RunTrace::default(),
        };
        runner.fine_cost = runner.raw_cost(fine_rows);
        runner
    }

    fn raw_cost(&self, rows: usize) -> f64 {
        let p = CostParams {
            m: rows,
            n: self.n,
            r: self.r,
            s_r: default_s_r(self.r),
        };
        iteration_cost(&p, self.kind)
    }

    /// Work units charged for one step on a level with `rows` pixels.
    pub fn step_charge(&self, rows: usize) -> f64 {
        self.raw_cost(rows) / self.fine_cost
    }

    pub fn sample(&mut self, level: usize, m: &NonnegMatrix, v: &NonnegMatrix, w: &NonnegMatrix) {
        let error = frobenius_error(m, v, w).expect("runner checks shapes");
        self.trace.samples.push(TraceSample {
            elapsed_s: self.start.elapsed().as_secs_f64(),
            work_units: self.work,
            level,
            error,
        });
    }

    /// Runs steps on one level until `granted` is used up.
    pub fn solve_phase(
        &mut self,
        level: usize,
        m: &NonnegMatrix,
        v: &mut NonnegMatrix,
        w: &mut NonnegMatrix,
        planned: f64,
        granted: f64,
    ) -> Result<PhaseRecord> {
        check_factor_dims(m, v, w)?;
        let charge = self.step_charge(m.rows());
        let slack = granted * 1e-12;
        let phase_start = Instant::now();
        let mut consumed = 0.0;
        let mut steps = 0u64;
        self.sample(level, m, v, w);
        loop {
            let more = match self.mode {
                BudgetMode::WorkUnits => consumed + charge <= granted + slack,
                BudgetMode::WallClockSeconds => phase_start.elapsed().as_secs_f64() < granted,
            };
            if !more {
                break;
            }
            let tally = self.kind.step(m, v, w)?;
            if self.kind == SolverKind::Anls {
                self.trace.nnls_iteration_counts.push(tally.exchanges);
                self.trace.nnls_solves += tally.solves;
            }
            steps += 1;
            self.work += charge;
            if self.mode == BudgetMode::WorkUnits {
                consumed += charge;
            }
            if self.trace_every > 0 && steps % self.trace_every as u64 == 0 {
                self.sample(level, m, v, w);
            }
        }
        if steps > 0 && (self.trace_every == 0 || steps % self.trace_every as u64 != 0) {
            self.sample(level, m, v, w);
        }
        if self.mode == BudgetMode::WallClockSeconds {
            consumed = phase_start.elapsed().as_secs_f64();
        }
        let record = PhaseRecord {
            level,
            planned,
            granted,
            consumed,
            steps,
        };
        self.trace.phases.push(record);
        Ok(record)
    }

    pub fn finish(self) -> RunTrace {
        self.trace
    }
}

/// Runs `kind` from `(v0, w0)` until the budget is used up.
///
/// In work-unit mode each step costs one unit, so a budget of `k` units gives
/// exactly `k` steps and the result is bit-reproducible. An error sample is
/// recorded at the start, every `trace_every` steps (0 disables) and at the end.
pub fn run_solver(
    m: &NonnegMatrix,
    v0: &NonnegMatrix,
    w0: &NonnegMatrix,
    kind: SolverKind,
    budget: Budget,
    trace_every: usize,
) -> Result<(NonnegMatrix, NonnegMatrix, RunTrace)> {
    check_factor_dims(m, v0, w0)?;
    let mut runner = Runner::new(kind, budget.mode, m.rows(), m.cols(), v0.cols(), trace_every);
    let (mut v, mut w) = (v0.clone(), w0.clone());
    runner.solve_phase(0, m, &mut v, &mut w, budget.amount, budget.amount)?;
    Ok((v, w, runner.finish()))
}
