//! Test oracles shared by the integration suites. Nothing here calls into
//! the solver code it is used to check.

#![allow(dead_code)]

use mlnmf::{NonnegMatrix, Rng};

pub fn uniform_matrix(rows: usize, cols: usize, rng: &mut Rng) -> NonnegMatrix {
    NonnegMatrix::from_fn(rows, cols, |_, _| rng.next_uniform()).unwrap()
}

/// Random symmetric positive definite `r x r` matrix `A^T A + I/10` and a
/// right-hand side with entries of both signs.
pub fn spd_instance(r: usize, rng: &mut Rng) -> (Vec<f64>, Vec<f64>) {
    let k = r + 3;
    let a: Vec<f64> = (0..k * r).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
    let mut g = vec![0.0; r * r];
    for i in 0..r {
        for j in 0..r {
            g[i * r + j] = (0..k).map(|t| a[t * r + i] * a[t * r + j]).sum::<f64>();
        }
        g[i * r + i] += 0.1;
    }
    let h = (0..r).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
    (g, h)
}

/// Gaussian elimination with partial pivoting on a dense square system.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

pub fn quadratic(g: &[f64], h: &[f64], x: &[f64]) -> f64 {
    let r = h.len();
    let mut q = 0.0;
    for i in 0..r {
        for j in 0..r {
            q += x[i] * g[i * r + j] * x[j];
        }
    }
    0.5 * q - h.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
}

/// Minimizes `x^T G x / 2 - h^T x` over `x >= 0` by trying every support:
/// solve the unconstrained system on the support, keep feasible points,
/// return the one with the smallest objective.
pub fn brute_force_nnls(g: &[f64], h: &[f64]) -> Vec<f64> {
    let r = h.len();
    let mut best = vec![0.0; r];
    let mut best_val = 0.0;
    for mask in 1u32..(1 << r) {
        let idx: Vec<usize> = (0..r).filter(|&i| mask & (1 << i) != 0).collect();
        let a = idx.iter().map(|&i| idx.iter().map(|&j| g[i * r + j]).collect()).collect();
        let b = idx.iter().map(|&i| h[i]).collect();
        let Some(sol) = dense_solve(a, b) else { continue };
        if sol.iter().any(|&v| v < 0.0) {
            continue;
        }
        let mut x = vec![0.0; r];
        for (&i, &v) in idx.iter().zip(&sol) {
            x[i] = v;
        }
        let val = quadratic(g, h, &x);
        if val < best_val {
            best_val = val;
            best = x;
        }
    }
    best
}

/// `||M - VW||_F^2` by direct triple loop.
pub fn squared_error(m: &NonnegMatrix, v: &NonnegMatrix, w: &NonnegMatrix) -> f64 {
    let mut total = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let approx: f64 = (0..v.cols()).map(|k| v.get(i, k) * w.get(k, j)).sum();
            total += (m.get(i, j) - approx).powi(2);
        }
    }
    total
}
