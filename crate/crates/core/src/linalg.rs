//! Rank and null-space computations through the singular value decomposition.
//!
//! Singular values below `rel_tol * sigma_max` count as zero.

use nalgebra::{DMatrix, DVector};

/// Singular values in descending order together with a full right basis.
///
/// Columns of `v` are right singular vectors ordered like `sigma`; when the
/// matrix is wide the trailing columns span the remaining null directions and
/// carry singular value zero.
#[derive(Debug, Clone)]
pub struct FullSvd {
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
}

pub fn full_svd(a: &DMatrix<f64>) -> FullSvd {
    let (m, n) = a.shape();
    if n == 0 {
        return FullSvd { sigma: Vec::new(), v: DMatrix::zeros(0, 0) };
    }
    // pad wide matrices with zero rows so the thin SVD returns all of V
    let padded = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut v = DMatrix::zeros(n, order.len());
    for (col, &i) in order.iter().enumerate() {
        v.set_column(col, &vt.row(i).transpose());
    }
    FullSvd { sigma, v }
}

pub fn numerical_rank(sigma: &[f64], rel_tol: f64) -> usize {
    let max = sigma.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > rel_tol * max).count()
}

pub fn rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let sv = a.singular_values();
    numerical_rank(sv.as_slice(), rel_tol)
}

/// Orthonormal basis (as columns) of `{x : a x = 0}`.
pub fn null_space(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let svd = full_svd(a);
    let r = numerical_rank(&svd.sigma, rel_tol);
    svd.v.columns(r, n - r).into_owned()
}

/// Orthonormal basis (as columns) of `{y : a^T y = 0}`.
pub fn left_null_space(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    null_space(&a.transpose(), rel_tol)
}

/// Flips the sign of a vector so its largest-magnitude entry is positive.
pub fn orient_by_largest(v: &mut DVector<f64>) {
    if let Some((idx, _)) = v.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())) {
        if v[idx] < 0.0 {
            v.neg_mut();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_matrix_null_space_is_complete() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 0.0, 0.0]);
        let ns = null_space(&a, 1e-9);
        assert_eq!(ns.ncols(), 2);
        assert!((&a * &ns).norm() < 1e-14);
        let gram = ns.transpose() * &ns;
        assert!((gram - DMatrix::<f64>::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn tall_matrix_left_null_space() {
        // rows (1,0), (0,1), (1,1): one dependency
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let lns = left_null_space(&a, 1e-9);
        assert_eq!(lns.ncols(), 1);
        assert!((a.transpose() * &lns).norm() < 1e-14);
    }

    #[test]
    fn empty_rows_give_identity() {
        let a = DMatrix::<f64>::zeros(0, 4);
        assert_eq!(null_space(&a, 1e-9).ncols(), 4);
        assert_eq!(rank(&a, 1e-9), 0);
    }

    #[test]
    fn orientation_is_deterministic() {
        let mut v = DVector::from_vec(vec![0.1, -3.0, 2.0]);
        orient_by_largest(&mut v);
        assert_eq!(v[1], 3.0);
    }
}
