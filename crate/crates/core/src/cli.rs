//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 data errors, 4 numerical
//! failure (NNLS exchange cap exceeded).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{run_bench, BenchConfig};
use crate::error::{Error, Result};
use crate::io::{self, Dataset};
use crate::matrix::frobenius_error;
use crate::multilevel::{run_configuration, CycleKind, RunConfig};
use crate::solvers::{Budget, SolverKind};
use crate::synth::synth_smooth_dataset;
use crate::transfer::{build_prolongation, build_restriction, smoothness, GridHierarchy, ImageGrid};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mlnmf", version, about = "Multilevel nonnegative matrix factorization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    PgmDir,
    Csv,
}

#[derive(Debug, clap::Args)]
struct DataArgs {
    /// PGM directory or CSV file
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "pgm-dir")]
    format: Format,
    /// Image dimensions HxW for CSV data (rows must equal H*W)
    #[arg(long, value_parser = parse_grid)]
    grid: Option<ImageGrid>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Factorize one dataset and write the factors and trace
    Factorize {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_parser = parse_solver)]
        algo: SolverKind,
        #[arg(long, value_parser = parse_cycle, default_value = "none")]
        cycle: CycleKind,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long)]
        rank: usize,
        /// work:<units> or time:<seconds>
        #[arg(long, value_parser = parse_budget)]
        budget: Budget,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trace_every: usize,
        /// Also write |M - VW| of this column as <prefix>.heatmap.pgm
        #[arg(long)]
        heatmap_col: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare configurations over many seeded runs
    Bench {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_delimiter = ',', value_parser = parse_solver)]
        algos: Vec<SolverKind>,
        #[arg(long, value_delimiter = ',', value_parser = parse_cycle)]
        cycles: Vec<CycleKind>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        levels: Vec<usize>,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, value_parser = parse_budget)]
        budget: Budget,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report smoothness and operator diagnostics per level
    TransferCheck {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 2)]
        levels: usize,
    },
    /// Write a synthetic smooth PGM dataset
    Synth {
        #[arg(long)]
        height: usize,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        blobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_solver(s: &str) -> std::result::Result<SolverKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_cycle(s: &str) -> std::result::Result<CycleKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_budget(s: &str) -> std::result::Result<Budget, String> {
    let b: Budget = s.parse().map_err(|e: Error| e.to_string())?;
    if b.amount <= 0.0 {
        return Err("budget must be positive".into());
    }
    Ok(b)
}

fn parse_grid(s: &str) -> std::result::Result<ImageGrid, String> {
    let (h, w) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid '{s}' is not of the form HxW"))?;
    let h = h.trim().parse().map_err(|_| format!("bad height in '{s}'"))?;
    let w = w.trim().parse().map_err(|_| format!("bad width in '{s}'"))?;
    ImageGrid::new(h, w).map_err(|e| e.to_string())
}

/// Maps an error to the documented exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::CannotCoarsen { .. } | Error::Unsupported(_) => EXIT_USAGE,
        Error::NnlsCapExceeded { .. } => EXIT_NUMERICAL,
        Error::InconsistentDataset(_)
        | Error::Parse { .. }
        | Error::NonnegativityViolation { .. }
        | Error::UndefinedSmoothness
        | Error::Io(_) => EXIT_DATA,
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn load(args: &DataArgs) -> Result<Dataset> {
    let mut dataset = match args.format {
        Format::PgmDir => io::load_pgm_dir(&args.data)?,
        Format::Csv => io::load_csv(&args.data)?,
    };
    if let Some(grid) = args.grid {
        dataset = Dataset::new(dataset.matrix, Some(grid), dataset.name)?;
    }
    Ok(dataset)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn ensure_parent(prefix: &Path) -> Result<()> {
    if let Some(parent) = prefix.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Factorize {
            data,
            algo,
            cycle,
            levels,
            rank,
            budget,
            seed,
            trace_every,
            heatmap_col,
            out,
        } => {
            let d = load(&data)?;
            let cfg = RunConfig {
                kind: algo,
                cycle,
                levels,
                rank,
                seed,
                budget,
                trace_every,
            };
            let (v, w, trace) = run_configuration(&d.matrix, d.grid, &cfg)?;
            ensure_parent(&out)?;
            io::save_trace_csv(&trace, &with_suffix(&out, ".trace.csv"))?;
            io::save_matrix_csv(&with_suffix(&out, ".V.csv"), &v)?;
            io::save_matrix_csv(&with_suffix(&out, ".W.csv"), &w)?;
            if d.grid.is_some() {
                io::save_basis_mosaic(&v, d.grid, &with_suffix(&out, ".basis"))?;
            }
            if let Some(col) = heatmap_col {
                io::save_error_heatmap(&d.matrix, &v, &w, d.grid, col, &with_suffix(&out, ".heatmap.pgm"))?;
            }
            println!(
                "{} {}x{} {algo}/{cycle} levels={levels} r={rank}: ||M - VW||_F = {} after {} steps",
                d.name,
                d.matrix.rows(),
                d.matrix.cols(),
                frobenius_error(&d.matrix, &v, &w)?,
                trace.total_steps()
            );
        }
        Command::Bench {
            data,
            algos,
            cycles,
            levels,
            rank,
            runs,
            budget,
            seed,
            out,
        } => {
            let d = load(&data)?;
            if algos.is_empty() || cycles.is_empty() {
                return Err(Error::invalid("at least one algorithm and one cycle are required"));
            }
            let summary = run_bench(
                &d,
                &BenchConfig {
                    algorithms: algos,
                    cycles,
                    level_counts: levels,
                    rank,
                    runs,
                    budget,
                    base_seed: seed,
                },
            )?;
            ensure_parent(&out)?;
            std::fs::write(with_suffix(&out, ".summary.csv"), summary.to_csv())?;
            let text = summary.to_text();
            std::fs::write(with_suffix(&out, ".summary.txt"), &text)?;
            print!("{text}");
        }
        Command::TransferCheck { data, levels } => {
            let d = load(&data)?;
            let grid = d
                .grid
                .ok_or_else(|| Error::Unsupported("transfer-check needs image grid dimensions".into()))?;
            let h = GridHierarchy::new(d.matrix.clone(), grid, levels)?;
            println!("{}: {} images, {} levels", d.name, d.matrix.cols(), h.depth());
            for l in 0..h.depth() {
                let g = h.grid(l);
                if l + 1 == h.depth() {
                    println!("level {l}: {}x{} (coarsest)", g.height, g.width);
                    continue;
                }
                let r = build_restriction(g)?;
                let p = build_prolongation(g)?;
                let s = smoothness(h.data(l), &r, &p)?;
                println!(
                    "level {l}: {}x{}  s_M = {s:.6}  restriction max|rowsum-1| = {:.3e}  prolongation max|rowsum-1| = {:.3e}  ||P||_F = {:.6}",
                    g.height,
                    g.width,
                    row_sum_defect(&r),
                    row_sum_defect(&p),
                    p.frobenius_norm()
                );
            }
        }
        Command::Synth {
            height,
            width,
            n,
            blobs,
            seed,
            out,
        } => {
            let d = synth_smooth_dataset(height, width, n, blobs, seed)?;
            io::save_dataset_pgm_dir(&d, &out, u16::MAX)?;
            println!("wrote {n} images of {height}x{width} to {}", out.display());
        }
    }
    Ok(())
}

fn row_sum_defect(op: &crate::transfer::TransferOperator) -> f64 {
    (0..op.out_dim())
        .map(|o| (op.row(o).iter().map(|(_, w)| w).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max)
}
