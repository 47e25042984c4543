use crate::matrix::{dense, NonnegMatrix};

/// One HALS sweep: each column of V in turn, then each row of W in turn,
/// replaced by its closed-form nonnegative least-squares optimum with the
/// other blocks fixed.
///
/// A column (row) whose Gram diagonal entry is zero has no unique optimum and
/// is left unchanged. Panics if the shapes are not conformable.
pub fn hals_step(m: &NonnegMatrix, v: &mut NonnegMatrix, w: &mut NonnegMatrix) {
    super::assert_conformable(m, v, w);
    let (rows, cols, r) = (m.rows(), m.cols(), v.cols());

    let a = dense::gemm_nt(m.as_slice(), w.as_slice(), rows, cols, r);
    let b = dense::gemm_nt(w.as_slice(), w.as_slice(), r, cols, r);
    let vs = v.as_mut_slice();
    for k in 0..r {
        let bkk = b[k * r + k];
        if bkk <= 0.0 {
            log::debug!("hals: row {k} of W is zero, keeping column {k} of V");
            continue;
        }
        for i in 0..rows {
            let vrow = &vs[i * r..(i + 1) * r];
            let mut s = a[i * r + k];
            for (l, &vil) in vrow.iter().enumerate() {
                if l != k {
                    s -= vil * b[l * r + k];
                }
            }
            vs[i * r + k] = (s / bkk).max(0.0);
        }
    }

    let c = dense::gemm_tn(v.as_slice(), m.as_slice(), rows, r, cols);
    let d = dense::gemm_tn(v.as_slice(), v.as_slice(), rows, r, r);
    let ws = w.as_mut_slice();
    let mut acc = vec![0.0; cols];
    for k in 0..r {
        let dkk = d[k * r + k];
        if dkk <= 0.0 {
            log::debug!("hals: column {k} of V is zero, keeping row {k} of W");
            continue;
        }
        acc.copy_from_slice(&c[k * cols..(k + 1) * cols]);
        for l in (0..r).filter(|&l| l != k) {
            let dkl = d[k * r + l];
            if dkl == 0.0 {
                continue;
            }
            for (s, &wlj) in acc.iter_mut().zip(&ws[l * cols..(l + 1) * cols]) {
                *s -= dkl * wlj;
            }
        }
        for (x, &s) in ws[k * cols..(k + 1) * cols].iter_mut().zip(&acc) {
            *x = (s / dkk).max(0.0);
        }
    }
}
