//! Dense nonnegative matrices and the factorization error.

use crate::error::{Error, Result};

/// Dense matrix with entrywise nonnegative, finite entries.
///
/// Entries are addressed by `(row, col)`; storage is row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NonnegMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl NonnegMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_shape(rows, cols)?;
        Ok(Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        })
    }

    /// Builds a matrix from row-major entries, rejecting negative or
    /// non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_shape(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::NonnegativityViolation {
                row: k / cols + 1,
                col: k % cols + 1,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::invalid("ragged rows"));
        }
        Self::from_vec(rows.len(), ncols, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_vec(rows, cols, data)
    }

    /// Wraps entries produced by an update that cannot create negatives.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|v| *v >= 0.0), "negative entry in from_raw");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.data[i * self.cols + col]).collect()
    }

    /// Row-major view of the entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| v.is_finite() && *v >= 0.0)
    }

    /// Matrix product `self * rhs`.
    pub fn product(&self, rhs: &NonnegMatrix) -> Result<NonnegMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = dense::gemm_nn(&self.data, &rhs.data, self.rows, self.cols, rhs.cols);
        Ok(Self::from_raw(self.rows, rhs.cols, data))
    }
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid(format!("matrix dimensions must be positive, got {rows}x{cols}")));
    }
    Ok(())
}

pub(crate) fn check_factor_dims(m: &NonnegMatrix, v: &NonnegMatrix, w: &NonnegMatrix) -> Result<()> {
    if v.rows != m.rows || w.cols != m.cols || v.cols != w.rows {
        return Err(Error::invalid(format!(
            "factor shapes {}x{} and {}x{} do not match data {}x{}",
            v.rows, v.cols, w.rows, w.cols, m.rows, m.cols
        )));
    }
    Ok(())
}

/// `||M - VW||_F`, the unsquared Frobenius norm of the residual.
pub fn frobenius_error(m: &NonnegMatrix, v: &NonnegMatrix, w: &NonnegMatrix) -> Result<f64> {
    check_factor_dims(m, v, w)?;
    Ok(residual_norm_sq(m, v, w).sqrt())
}

pub(crate) fn residual_norm_sq(m: &NonnegMatrix, v: &NonnegMatrix, w: &NonnegMatrix) -> f64 {
    let (rows, cols, r) = (m.rows, m.cols, v.cols);
    let mut approx = vec![0.0; cols];
    let mut total = 0.0;
    for i in 0..rows {
        approx.iter_mut().for_each(|a| *a = 0.0);
        let vrow = &v.data[i * r..(i + 1) * r];
        for (k, &vik) in vrow.iter().enumerate() {
            if vik == 0.0 {
                continue;
            }
            let wrow = &w.data[k * cols..(k + 1) * cols];
            for (a, &wkj) in approx.iter_mut().zip(wrow) {
                *a += vik * wkj;
            }
        }
        let mrow = &m.data[i * cols..(i + 1) * cols];
        for (a, &mij) in approx.iter().zip(mrow) {
            let d = mij - a;
            total += d * d;
        }
    }
    total
}

/// Row-major dense kernels on raw slices.
pub(crate) mod dense {
    /// `A * B` with `A: m x k`, `B: k x n`.
    pub fn gemm_nn(a: &[f64], b: &[f64], m: usize, k: usize, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; m * n];
        for i in 0..m {
            let orow = &mut out[i * n..(i + 1) * n];
            for p in 0..k {
                let aip = a[i * k + p];
                if aip == 0.0 {
                    continue;
                }
                for (o, &bpj) in orow.iter_mut().zip(&b[p * n..(p + 1) * n]) {
                    *o += aip * bpj;
                }
            }
        }
        out
    }

    /// `A * B^T` with `A: m x k`, `B: n x k`.
    pub fn gemm_nt(a: &[f64], b: &[f64], m: usize, k: usize, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; m * n];
        for i in 0..m {
            let arow = &a[i * k..(i + 1) * k];
            for j in 0..n {
                let brow = &b[j * k..(j + 1) * k];
                out[i * n + j] = arow.iter().zip(brow).map(|(x, y)| x * y).sum();
            }
        }
        out
    }

    /// `A^T * B` with `A: k x m`, `B: k x n`.
    pub fn gemm_tn(a: &[f64], b: &[f64], k: usize, m: usize, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; m * n];
        for p in 0..k {
            let arow = &a[p * m..(p + 1) * m];
            let brow = &b[p * n..(p + 1) * n];
            for (i, &api) in arow.iter().enumerate() {
                if api == 0.0 {
                    continue;
                }
                for (o, &bpj) in out[i * n..(i + 1) * n].iter_mut().zip(brow) {
                    *o += api * bpj;
                }
            }
        }
        out
    }
}
