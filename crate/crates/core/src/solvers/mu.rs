use crate::matrix::{dense, NonnegMatrix};

/// Denominators of the multiplicative ratios are floored at this value.
pub const MU_DENOMINATOR_FLOOR: f64 = 1e-16;

/// One multiplicative-update sweep:
/// `V <- V o (M W^T) / (V W W^T)`, then `W <- W o (V^T M) / (V^T V W)` with
/// the updated V.
///
/// Panics if the shapes of `m`, `v` and `w` are not conformable.
pub fn mu_step(m: &NonnegMatrix, v: &mut NonnegMatrix, w: &mut NonnegMatrix) {
    super::assert_conformable(m, v, w);
    let (rows, cols, r) = (m.rows(), m.cols(), v.cols());

    let num = dense::gemm_nt(m.as_slice(), w.as_slice(), rows, cols, r);
    let wwt = dense::gemm_nt(w.as_slice(), w.as_slice(), r, cols, r);
    let den = dense::gemm_nn(v.as_slice(), &wwt, rows, r, r);
    scale(v.as_mut_slice(), &num, &den);

    let num = dense::gemm_tn(v.as_slice(), m.as_slice(), rows, r, cols);
    let vtv = dense::gemm_tn(v.as_slice(), v.as_slice(), rows, r, r);
    let den = dense::gemm_nn(&vtv, w.as_slice(), r, r, cols);
    scale(w.as_mut_slice(), &num, &den);
}

fn scale(x: &mut [f64], num: &[f64], den: &[f64]) {
    for ((x, &n), &d) in x.iter_mut().zip(num).zip(den) {
        *x *= n / d.max(MU_DENOMINATOR_FLOOR);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::frobenius_error;
    use crate::rng::{random_init, Rng};

    #[test]
    fn scalar_sweep_by_hand() {
        let m = NonnegMatrix::from_rows(&[vec![2.0]]).unwrap();
        let mut v = NonnegMatrix::from_rows(&[vec![1.0]]).unwrap();
        let mut w = v.clone();
        mu_step(&m, &mut v, &mut w);
        assert_eq!(v.as_slice(), &[2.0]);
        assert_eq!(w.as_slice(), &[1.0]);
    }

    #[test]
    fn exact_positive_factorization_is_fixed_point() {
        let (v0, w0) = random_init(6, 5, 2, 3).unwrap();
        let v0 = NonnegMatrix::from_fn(6, 2, |i, j| v0.get(i, j) + 0.1).unwrap();
        let m = v0.product(&w0).unwrap();
        let (mut v, mut w) = (v0.clone(), w0.clone());
        mu_step(&m, &mut v, &mut w);
        for (a, b) in v.as_slice().iter().zip(v0.as_slice()).chain(w.as_slice().iter().zip(w0.as_slice())) {
            assert!((a - b).abs() <= 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn objective_does_not_increase() {
        let mut rng = Rng::new(11);
        let m = NonnegMatrix::from_fn(10, 8, |_, _| rng.next_uniform()).unwrap();
        let (mut v, mut w) = random_init(10, 8, 3, 1).unwrap();
        let mut prev = frobenius_error(&m, &v, &w).unwrap();
        for _ in 0..50 {
            mu_step(&m, &mut v, &mut w);
            let e = frobenius_error(&m, &v, &w).unwrap();
            assert!(e <= prev + 1e-9 * prev);
            prev = e;
        }
        assert!(v.is_nonnegative() && w.is_nonnegative());
    }

    #[test]
    fn zero_row_of_w_stays_finite() {
        let m = NonnegMatrix::from_rows(&[vec![1.0, 2.0], vec![0.5, 1.0]]).unwrap();
        let mut v = NonnegMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let mut w = NonnegMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        mu_step(&m, &mut v, &mut w);
        assert!(v.is_nonnegative() && w.is_nonnegative());
    }
}
