//! Small dense helpers shared by the spectral and certificate code.

use nalgebra::{DMatrix, DVector};

/// Largest absolute entry (0 for an empty matrix).
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Orthonormalizes the columns of `m` by modified Gram-Schmidt with one
/// reorthogonalization pass. Columns whose residual norm falls below
/// `drop_tol` times their original norm are discarded.
pub fn orthonormalize_columns(m: &DMatrix<f64>, drop_tol: f64) -> DMatrix<f64> {
    let mut kept: Vec<DVector<f64>> = Vec::with_capacity(m.ncols());
    for c in 0..m.ncols() {
        let mut v = m.column(c).into_owned();
        let original = v.norm();
        if original == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &kept {
                let d = q.dot(&v);
                v.axpy(-d, q, 1.0);
            }
        }
        let norm = v.norm();
        if norm > drop_tol * original {
            kept.push(v / norm);
        }
    }
    if kept.is_empty() {
        return DMatrix::zeros(m.nrows(), 0);
    }
    DMatrix::from_columns(&kept)
}

/// Length of the symmetric-vectorization of a `k x k` matrix.
pub fn svec_len(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Isometric vectorization of the upper triangle: off-diagonal entries are
/// scaled by √2 so that `svec(X)·svec(Y) = tr(XY)`.
pub fn svec(x: &DMatrix<f64>) -> DVector<f64> {
    let k = x.nrows();
    let mut out = DVector::zeros(svec_len(k));
    let mut idx = 0;
    for i in 0..k {
        for j in i..k {
            out[idx] = if i == j {
                x[(i, i)]
            } else {
                std::f64::consts::SQRT_2 * 0.5 * (x[(i, j)] + x[(j, i)])
            };
            idx += 1;
        }
    }
    out
}

/// Inverse of [`svec`].
pub fn smat(v: &DVector<f64>, k: usize) -> DMatrix<f64> {
    debug_assert_eq!(v.len(), svec_len(k));
    let mut x = DMatrix::zeros(k, k);
    let mut idx = 0;
    for i in 0..k {
        for j in i..k {
            if i == j {
                x[(i, i)] = v[idx];
            } else {
                let val = v[idx] / std::f64::consts::SQRT_2;
                x[(i, j)] = val;
                x[(j, i)] = val;
            }
            idx += 1;
        }
    }
    x
}

/// Orthonormal basis (as columns) of the null space of `a`, treating singular
/// values below `rel_tol * σ_max` as zero.
pub fn null_space(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    // Pad to at least square so the SVD returns a full right basis.
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.max();
    let cutoff = rel_tol * smax.max(f64::MIN_POSITIVE);
    let null: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff || smax == 0.0)
        .map(|(r, _)| v_t.row(r).transpose())
        .collect();
    if null.is_empty() {
        DMatrix::zeros(cols, 0)
    } else {
        DMatrix::from_columns(&null)
    }
}

/// Numerical rank with singular values below `rel_tol * σ_max` discarded.
pub fn rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let s = a.singular_values();
    let smax = s.max();
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * smax).count()
}
