//! Image grids, full-weighting restriction, neighbor-mean prolongation, and
//! the grid hierarchy that caches restricted data.
//!
//! Coarse pixel `(i, j)` sits on fine pixel `(2i, 2j)`, so a grid of height
//! `h` coarsens to `ceil(h / 2)`; `2^a + 1` heights map to `2^(a-1) + 1`.

use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;

/// Pixel dimensions of one image, vectorized by column concatenation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageGrid {
    pub height: usize,
    pub width: usize,
}

impl ImageGrid {
    pub fn new(height: usize, width: usize) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::invalid(format!("grid dimensions must be positive, got {height}x{width}")));
        }
        Ok(Self { height, width })
    }

    /// Number of pixels, the length of a vectorized image.
    pub fn len(&self) -> usize {
        self.height * self.width
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Vector index of pixel `(i, j)`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.height + i
    }

    pub fn is_coarsenable(&self) -> bool {
        self.height >= 2 && self.width >= 2
    }

    pub fn coarsen(&self) -> Result<ImageGrid> {
        if !self.is_coarsenable() {
            return Err(Error::CannotCoarsen {
                height: self.height,
                width: self.width,
            });
        }
        Ok(ImageGrid {
            height: self.height.div_ceil(2),
            width: self.width.div_ceil(2),
        })
    }
}

/// Sparse nonnegative linear map whose rows each sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferOperator {
    out_dim: usize,
    in_dim: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl TransferOperator {
    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    /// `(input index, weight)` pairs of one output row, sorted by input index.
    pub fn row(&self, out: usize) -> &[(usize, f64)] {
        &self.rows[out]
    }

    pub fn weight(&self, out: usize, input: usize) -> f64 {
        self.rows[out]
            .iter()
            .find(|(k, _)| *k == input)
            .map_or(0.0, |(_, w)| *w)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![0.0; self.in_dim];
                for &(k, w) in row {
                    dense[k] = w;
                }
                dense
            })
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|(_, w)| w * w)
            .sum::<f64>()
            .sqrt()
    }

    /// Applies the operator to every column of `x`.
    pub fn apply(&self, x: &NonnegMatrix) -> Result<NonnegMatrix> {
        if x.rows() != self.in_dim {
            return Err(Error::invalid(format!(
                "operator expects {} rows, matrix has {}",
                self.in_dim,
                x.rows()
            )));
        }
        let cols = x.cols();
        let src = x.as_slice();
        let mut out = vec![0.0; self.out_dim * cols];
        for (o, row) in self.rows.iter().enumerate() {
            let dst = &mut out[o * cols..(o + 1) * cols];
            for &(k, w) in row {
                for (d, &s) in dst.iter_mut().zip(&src[k * cols..(k + 1) * cols]) {
                    *d += w * s;
                }
            }
        }
        Ok(NonnegMatrix::from_raw(self.out_dim, cols, out))
    }

    fn from_rows(out_dim: usize, in_dim: usize, mut rows: Vec<Vec<(usize, f64)>>) -> Self {
        for row in &mut rows {
            row.sort_by_key(|(k, _)| *k);
            let total: f64 = row.iter().map(|(_, w)| w).sum();
            for (_, w) in row.iter_mut() {
                *w /= total;
            }
        }
        Self { out_dim, in_dim, rows }
    }
}

/// Full-weighting restriction from `fine` to its coarsened grid.
///
/// Interior weights are 4/16 at the matching fine pixel, 2/16 on its four
/// edge neighbors and 1/16 on the diagonals. Stencil points falling outside
/// the image are dropped and the row renormalized to sum to one.
pub fn build_restriction(fine: ImageGrid) -> Result<TransferOperator> {
    let coarse = fine.coarsen()?;
    let mut rows = Vec::with_capacity(coarse.len());
    for cj in 0..coarse.width {
        for ci in 0..coarse.height {
            let (fi, fj) = (2 * ci as isize, 2 * cj as isize);
            let mut row = Vec::with_capacity(9);
            for di in -1isize..=1 {
                for dj in -1isize..=1 {
                    let (i, j) = (fi + di, fj + dj);
                    if i < 0 || j < 0 || i >= fine.height as isize || j >= fine.width as isize {
                        continue;
                    }
                    let w = ((2 - di.abs()) * (2 - dj.abs())) as f64;
                    row.push((fine.index(i as usize, j as usize), w));
                }
            }
            rows.push(row);
        }
    }
    Ok(TransferOperator::from_rows(coarse.len(), fine.len(), rows))
}

/// Coarse indices averaged to produce fine index `k` along one axis.
fn coarse_neighbors(k: usize, coarse_len: usize) -> impl Iterator<Item = usize> {
    let candidates = if k % 2 == 0 {
        [Some(k / 2), None]
    } else {
        [Some((k - 1) / 2), Some((k + 1) / 2)]
    };
    candidates.into_iter().flatten().filter(move |&c| c < coarse_len)
}

/// Prolongation from the coarsened grid back to `fine`: each fine pixel is
/// the unweighted mean of its nearest coarse pixels.
pub fn build_prolongation(fine: ImageGrid) -> Result<TransferOperator> {
    let coarse = fine.coarsen()?;
    let mut rows = Vec::with_capacity(fine.len());
    for j in 0..fine.width {
        for i in 0..fine.height {
            let mut row = Vec::with_capacity(4);
            for ci in coarse_neighbors(i, coarse.height) {
                for cj in coarse_neighbors(j, coarse.width) {
                    row.push((coarse.index(ci, cj), 1.0));
                }
            }
            rows.push(row);
        }
    }
    Ok(TransferOperator::from_rows(fine.len(), coarse.len(), rows))
}

pub fn restrict(op: &TransferOperator, x: &NonnegMatrix) -> Result<NonnegMatrix> {
    op.apply(x)
}

pub fn prolong(op: &TransferOperator, x: &NonnegMatrix) -> Result<NonnegMatrix> {
    op.apply(x)
}

/// `||M - P(R(M))||_F / ||M||_F`.
pub fn smoothness(m: &NonnegMatrix, restriction: &TransferOperator, prolongation: &TransferOperator) -> Result<f64> {
    let norm = m.frobenius_norm();
    if norm == 0.0 {
        return Err(Error::UndefinedSmoothness);
    }
    let recon = prolongation.apply(&restriction.apply(m)?)?;
    Ok(distance(m, &recon) / norm)
}

fn distance(a: &NonnegMatrix, b: &NonnegMatrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Both sides of the bound on the error of a prolongated coarse solution:
/// `lhs = ||M - P(V')W||_F` and `rhs = s_M ||M||_F + ||P||_F ||R(M) - V'W||_F`.
pub fn initialization_bound(
    m: &NonnegMatrix,
    restriction: &TransferOperator,
    prolongation: &TransferOperator,
    v_coarse: &NonnegMatrix,
    w: &NonnegMatrix,
) -> Result<(f64, f64)> {
    let restricted = restriction.apply(m)?;
    crate::matrix::check_factor_dims(&restricted, v_coarse, w)?;
    let v_fine = prolongation.apply(v_coarse)?;
    let lhs = crate::matrix::frobenius_error(m, &v_fine, w)?;
    let s_m = smoothness(m, restriction, prolongation)?;
    let coarse_err = crate::matrix::frobenius_error(&restricted, v_coarse, w)?;
    let rhs = s_m * m.frobenius_norm() + prolongation.frobenius_norm() * coarse_err;
    Ok((lhs, rhs))
}

/// Grids, transfer operators and restricted data for levels `0` (fine)
/// through `depth() - 1` (coarsest).
#[derive(Debug, Clone)]
pub struct GridHierarchy {
    grids: Vec<ImageGrid>,
    restrictions: Vec<TransferOperator>,
    prolongations: Vec<TransferOperator>,
    data: Vec<NonnegMatrix>,
}

impl GridHierarchy {
    /// Builds `levels` levels, restricting `m` once per level.
    pub fn new(m: NonnegMatrix, grid: ImageGrid, levels: usize) -> Result<Self> {
        if levels == 0 {
            return Err(Error::invalid("level count must be at least 1"));
        }
        if grid.len() != m.rows() {
            return Err(Error::invalid(format!(
                "grid {}x{} has {} pixels but the data has {} rows",
                grid.height,
                grid.width,
                grid.len(),
                m.rows()
            )));
        }
        let mut grids = vec![grid];
        for _ in 1..levels {
            let next = grids.last().unwrap().coarsen()?;
            grids.push(next);
        }
        let mut restrictions = Vec::with_capacity(levels - 1);
        let mut prolongations = Vec::with_capacity(levels - 1);
        let mut data = vec![m];
        for g in &grids[..levels - 1] {
            let r = build_restriction(*g)?;
            prolongations.push(build_prolongation(*g)?);
            data.push(r.apply(data.last().unwrap())?);
            restrictions.push(r);
        }
        Ok(Self {
            grids,
            restrictions,
            prolongations,
            data,
        })
    }

    pub fn depth(&self) -> usize {
        self.grids.len()
    }

    pub fn grid(&self, level: usize) -> ImageGrid {
        self.grids[level]
    }

    /// Data restricted to `level`; level 0 is the original matrix.
    pub fn data(&self, level: usize) -> &NonnegMatrix {
        &self.data[level]
    }

    /// Restriction from `level` to `level + 1`.
    pub fn restriction(&self, level: usize) -> &TransferOperator {
        &self.restrictions[level]
    }

    /// Prolongation from `level + 1` to `level`.
    pub fn prolongation(&self, level: usize) -> &TransferOperator {
        &self.prolongations[level]
    }
}
