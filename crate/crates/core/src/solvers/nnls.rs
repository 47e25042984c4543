//! Primal active-set solver for `min_{x >= 0} x^T G x / 2 - h^T x`.
//!
//! This is the Lawson-Hanson scheme written on the normal equations: keep a
//! passive (free) set, solve the unconstrained system on it, step back to
//! the feasible region when a passive variable would go negative, and admit
//! the active variable with the most negative gradient until the KKT
//! conditions hold.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NnlsSolution {
    pub x: Vec<f64>,
    /// Active-set exchanges performed (variables added or dropped).
    pub iterations: u64,
}

/// Maximum number of exchanges before giving up: `3 * 2^r + 10 r`.
pub fn exchange_cap(r: usize) -> u64 {
    let pow = if r >= 62 { u64::MAX / 4 } else { 1u64 << r };
    pow.saturating_mul(3).saturating_add(10 * r as u64)
}

/// Solves the NNLS problem for the symmetric positive semidefinite `g`
/// (row-major `r x r`), warm-started from the support of `x0`.
pub fn nnls_active_set(g: &[f64], h: &[f64], x0: &[f64]) -> Result<NnlsSolution> {
    let r = h.len();
    if g.len() != r * r || x0.len() != r {
        return Err(Error::invalid(format!(
            "NNLS shapes: G has {} entries, h {}, x0 {}",
            g.len(),
            r,
            x0.len()
        )));
    }
    let trace: f64 = (0..r).map(|i| g[i * r + i]).sum();
    if !(trace > 0.0) {
        // G = 0 happens only when the fixed factor is zero; any x is optimal.
        return Ok(NnlsSolution {
            x: vec![0.0; r],
            iterations: 0,
        });
    }
    let cap = exchange_cap(r);
    let tol = dual_tolerance(g, h);
    let ridge = 1e-12 * trace / r as f64;

    let mut x: Vec<f64> = x0.iter().map(|&v| if v > 0.0 && v.is_finite() { v } else { 0.0 }).collect();
    let mut passive: Vec<bool> = x.iter().map(|&v| v > 0.0).collect();
    let mut blocked = vec![false; r];
    let mut iterations = 0u64;
    let mut z = vec![0.0; r];

    loop {
        // restore optimality on the passive set while staying feasible
        loop {
            solve_passive(g, h, &passive, ridge, &mut z);
            let mut alpha = f64::INFINITY;
            let mut leaving = None;
            for i in (0..r).filter(|&i| passive[i] && z[i] <= 0.0) {
                let a = x[i] / (x[i] - z[i]);
                if a < alpha {
                    alpha = a;
                    leaving = Some(i);
                }
            }
            let Some(leaving) = leaving else {
                x.copy_from_slice(&z);
                break;
            };
            for i in 0..r {
                if !passive[i] {
                    continue;
                }
                x[i] += alpha * (z[i] - x[i]);
                if i == leaving || x[i] <= 0.0 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
            iterations += 1;
            if iterations > cap {
                return Err(Error::NnlsCapExceeded { cap });
            }
        }

        let gradient = negative_gradient(g, h, &x);
        let entering = (0..r)
            .filter(|&j| !passive[j] && !blocked[j] && gradient[j] > tol)
            .max_by(|&a, &b| gradient[a].total_cmp(&gradient[b]));
        let Some(j) = entering else { break };
        passive[j] = true;
        iterations += 1;
        if iterations > cap {
            return Err(Error::NnlsCapExceeded { cap });
        }
        // A variable that cannot become positive on entry would be dropped
        // again immediately; skip it until the passive set changes.
        solve_passive(g, h, &passive, ridge, &mut z);
        if z[j] <= 0.0 {
            passive[j] = false;
            blocked[j] = true;
        } else {
            blocked.iter_mut().for_each(|b| *b = false);
        }
    }
    Ok(NnlsSolution { x, iterations })
}

/// Largest violation of primal feasibility, dual feasibility on zero
/// coordinates, stationarity on positive coordinates, and complementarity.
pub fn kkt_residual(g: &[f64], h: &[f64], x: &[f64]) -> f64 {
    let grad: Vec<f64> = negative_gradient(g, h, x).into_iter().map(|v| -v).collect();
    let mut worst = 0.0f64;
    for (&xi, &gi) in x.iter().zip(&grad) {
        worst = worst.max((-xi).max(0.0));
        if xi > 0.0 {
            worst = worst.max(gi.abs());
        } else {
            worst = worst.max((-gi).max(0.0));
        }
        worst = worst.max((xi * gi).abs());
    }
    worst
}

/// Objective value `x^T G x / 2 - h^T x`.
pub fn objective(g: &[f64], h: &[f64], x: &[f64]) -> f64 {
    let r = h.len();
    let mut quad = 0.0;
    for i in 0..r {
        for j in 0..r {
            quad += x[i] * g[i * r + j] * x[j];
        }
    }
    0.5 * quad - h.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
}

fn dual_tolerance(g: &[f64], h: &[f64]) -> f64 {
    let r = h.len();
    let gmax = (0..r).map(|i| g[i * r + i]).fold(0.0f64, f64::max);
    let hmax = h.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    1e-12 * gmax.max(hmax).max(f64::MIN_POSITIVE) * r as f64
}

/// `h - G x`.
fn negative_gradient(g: &[f64], h: &[f64], x: &[f64]) -> Vec<f64> {
    let r = h.len();
    (0..r)
        .map(|i| h[i] - g[i * r..(i + 1) * r].iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
        .collect()
}

/// Least-squares solution restricted to the passive set; zero elsewhere.
fn solve_passive(g: &[f64], h: &[f64], passive: &[bool], ridge: f64, z: &mut [f64]) {
    let r = h.len();
    let idx: Vec<usize> = (0..r).filter(|&i| passive[i]).collect();
    z.iter_mut().for_each(|v| *v = 0.0);
    if idx.is_empty() {
        return;
    }
    let p = idx.len();
    let mut sub = vec![0.0; p * p];
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            sub[a * p + b] = g[i * r + j];
        }
    }
    let rhs: Vec<f64> = idx.iter().map(|&i| h[i]).collect();
    let mut shift = 0.0;
    let mut attempts = 0;
    let sol = loop {
        if let Some(sol) = cholesky_solve(&sub, &rhs, p, shift) {
            break sol;
        }
        attempts += 1;
        if attempts > 12 {
            return;
        }
        shift = if shift == 0.0 { ridge } else { shift * 100.0 };
        log::debug!("nnls: singular passive subsystem of size {p}, ridge {shift:e}");
    };
    for (&i, v) in idx.iter().zip(sol) {
        z[i] = v;
    }
}

fn cholesky_solve(a: &[f64], b: &[f64], n: usize, shift: f64) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    let scale = (0..n).map(|i| a[i * n + i]).fold(0.0f64, f64::max);
    for j in 0..n {
        let mut d = a[j * n + j] + shift;
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 1e-14 * scale) {
            return None;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i * n + k] * y[k]).sum();
        y[i] = (b[i] - s) / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[k * n + i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i * n + i];
    }
    Some(x)
}
