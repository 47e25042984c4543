//! Multi-seed comparison of solver and cycle configurations.
//!
//! Run `i` of every configuration starts from the factors drawn with seed
//! `base_seed + i`, so all configurations see the same initial matrices.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::Dataset;
use crate::matrix::frobenius_error;
use crate::multilevel::{run_configuration, CycleKind, RunConfig};
use crate::solvers::{Budget, SolverKind};
use crate::transfer::ImageGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub algorithms: Vec<SolverKind>,
    pub cycles: Vec<CycleKind>,
    pub level_counts: Vec<usize>,
    pub rank: usize,
    pub runs: usize,
    pub budget: Budget,
    pub base_seed: u64,
}

/// Final-error statistics of one `(algorithm, cycle, levels)` configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub algorithm: SolverKind,
    pub cycle: CycleKind,
    pub levels: usize,
    pub mean: f64,
    /// Sample standard deviation; zero for a single run.
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    pub final_errors: Vec<f64>,
    /// Fine-level error of the initial factors, per run.
    pub initial_errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub dataset: String,
    pub rank: usize,
    pub runs: usize,
    pub budget: Budget,
    pub base_seed: u64,
    pub rows: Vec<BenchRow>,
    pub warnings: Vec<String>,
}

/// Whether `grid` supports a hierarchy with `levels` levels.
pub fn levels_feasible(grid: Option<ImageGrid>, levels: usize) -> bool {
    if levels <= 1 {
        return true;
    }
    let Some(mut g) = grid else { return false };
    for _ in 1..levels {
        match g.coarsen() {
            Ok(next) => g = next,
            Err(_) => return false,
        }
    }
    true
}

pub fn run_bench(data: &Dataset, cfg: &BenchConfig) -> Result<BenchSummary> {
    if cfg.runs == 0 {
        return Err(Error::invalid("runs must be at least 1"));
    }
    if cfg.level_counts.contains(&0) {
        return Err(Error::invalid("level counts must be at least 1"));
    }
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &cycle in &cfg.cycles {
            let levels: Vec<usize> = if cycle == CycleKind::SingleLevel {
                vec![1]
            } else {
                cfg.level_counts.clone()
            };
            for levels in levels {
                if cycle != CycleKind::SingleLevel && !levels_feasible(data.grid, levels) {
                    let msg = format!("skipped {algorithm}/{cycle} with {levels} levels: grid cannot be coarsened that far");
                    log::warn!("{msg}");
                    warnings.push(msg);
                    continue;
                }
                rows.push(run_one(data, cfg, algorithm, cycle, levels)?);
            }
        }
    }
    Ok(BenchSummary {
        dataset: data.name.clone(),
        rank: cfg.rank,
        runs: cfg.runs,
        budget: cfg.budget,
        base_seed: cfg.base_seed,
        rows,
        warnings,
    })
}

fn run_one(data: &Dataset, cfg: &BenchConfig, algorithm: SolverKind, cycle: CycleKind, levels: usize) -> Result<BenchRow> {
    let mut final_errors = Vec::with_capacity(cfg.runs);
    let mut initial_errors = Vec::with_capacity(cfg.runs);
    for run in 0..cfg.runs {
        let run_cfg = RunConfig {
            kind: algorithm,
            cycle,
            levels,
            rank: cfg.rank,
            seed: cfg.base_seed.wrapping_add(run as u64),
            budget: cfg.budget,
            trace_every: 0,
        };
        let (v, w, trace) = run_configuration(&data.matrix, data.grid, &run_cfg)?;
        final_errors.push(frobenius_error(&data.matrix, &v, &w)?);
        initial_errors.push(trace.samples.first().map_or(f64::NAN, |s| s.error));
    }
    let n = final_errors.len() as f64;
    let mean = final_errors.iter().sum::<f64>() / n;
    let std_dev = if final_errors.len() > 1 {
        (final_errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(BenchRow {
        algorithm,
        cycle,
        levels,
        mean,
        std_dev,
        min: final_errors.iter().cloned().fold(f64::INFINITY, f64::min),
        max: final_errors.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        final_errors,
        initial_errors,
    })
}

impl BenchSummary {
    pub fn row(&self, algorithm: SolverKind, cycle: CycleKind, levels: usize) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algorithm && r.cycle == cycle && r.levels == levels)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("algorithm,cycle,levels,runs,mean_error,std_error,min_error,max_error\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.algorithm, r.cycle, r.levels, self.runs, r.mean, r.std_dev, r.min, r.max
            )
            .unwrap();
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "dataset {}: rank {}, {} runs, budget {}, seeds {}..{}",
            self.dataset,
            self.rank,
            self.runs,
            self.budget,
            self.base_seed,
            self.base_seed.wrapping_add(self.runs as u64 - 1)
        )
        .unwrap();
        writeln!(out, "error = ||M - VW||_F (unsquared), final value per run").unwrap();
        writeln!(
            out,
            "{:<6} {:<6} {:>6} {:>14} {:>12} {:>14} {:>14}",
            "algo", "cycle", "levels", "mean", "std", "min", "max"
        )
        .unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{:<6} {:<6} {:>6} {:>14.6} {:>12.6} {:>14.6} {:>14.6}",
                r.algorithm.name(),
                r.cycle.name(),
                r.levels,
                r.mean,
                r.std_dev,
                r.min,
                r.max
            )
            .unwrap();
        }
        for w in &self.warnings {
            writeln!(out, "warning: {w}").unwrap();
        }
        out
    }
}
