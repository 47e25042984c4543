use super::nnls::nnls_active_set;
use crate::error::Result;
use crate::matrix::{dense, NonnegMatrix};

/// Exchange counts accumulated over a batch of NNLS solves.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NnlsTally {
    pub exchanges: u64,
    pub solves: u64,
}

impl NnlsTally {
    fn add(&mut self, other: NnlsTally) {
        self.exchanges += other.exchanges;
        self.solves += other.solves;
    }
}

/// Replaces V by the exact minimizer of `||M - VW||_F` over `V >= 0`.
///
/// The problem splits into one NNLS per row of V sharing the Gram matrix
/// `W W^T`; each row is warm-started from its current value.
pub fn anls_update_v(m: &NonnegMatrix, v: &mut NonnegMatrix, w: &NonnegMatrix) -> Result<NnlsTally> {
    crate::matrix::check_factor_dims(m, v, w)?;
    let (rows, cols, r) = (m.rows(), m.cols(), v.cols());
    let gram = dense::gemm_nt(w.as_slice(), w.as_slice(), r, cols, r);
    let lin = dense::gemm_nt(m.as_slice(), w.as_slice(), rows, cols, r);
    let vs = v.as_mut_slice();
    let mut tally = NnlsTally::default();
    for i in 0..rows {
        let row = &mut vs[i * r..(i + 1) * r];
        let sol = nnls_active_set(&gram, &lin[i * r..(i + 1) * r], row)?;
        row.copy_from_slice(&sol.x);
        tally.exchanges += sol.iterations;
        tally.solves += 1;
    }
    Ok(tally)
}

/// Replaces W by the exact minimizer over `W >= 0`, one NNLS per column with
/// Gram matrix `V^T V`.
pub fn anls_update_w(m: &NonnegMatrix, v: &NonnegMatrix, w: &mut NonnegMatrix) -> Result<NnlsTally> {
    crate::matrix::check_factor_dims(m, v, w)?;
    let (rows, cols, r) = (m.rows(), m.cols(), v.cols());
    let gram = dense::gemm_tn(v.as_slice(), v.as_slice(), rows, r, r);
    let lin = dense::gemm_tn(v.as_slice(), m.as_slice(), rows, r, cols);
    let ws = w.as_mut_slice();
    let mut tally = NnlsTally::default();
    let mut h = vec![0.0; r];
    let mut x0 = vec![0.0; r];
    for j in 0..cols {
        for k in 0..r {
            h[k] = lin[k * cols + j];
            x0[k] = ws[k * cols + j];
        }
        let sol = nnls_active_set(&gram, &h, &x0)?;
        for (k, x) in sol.x.into_iter().enumerate() {
            ws[k * cols + j] = x;
        }
        tally.exchanges += sol.iterations;
        tally.solves += 1;
    }
    Ok(tally)
}

/// One ANLS sweep: exact V half-step, then exact W half-step.
pub fn anls_step(m: &NonnegMatrix, v: &mut NonnegMatrix, w: &mut NonnegMatrix) -> Result<NnlsTally> {
    let mut tally = anls_update_v(m, v, w)?;
    tally.add(anls_update_w(m, v, w)?);
    Ok(tally)
}
