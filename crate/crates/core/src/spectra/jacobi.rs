use nalgebra::{DMatrix, DVector};

use super::SpectraError;

pub(crate) const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a symmetric matrix, eigenvalues ascending, eigenvectors as
/// the matching columns.
#[derive(Debug, Clone)]
pub struct JacobiEigen {
    pub values: DVector<f64>,
    pub vectors: Option<DMatrix<f64>>,
    pub sweeps: usize,
}

/// Cyclic Jacobi eigensolver. Rotations sweep the strict upper triangle in
/// row-major order; the iteration stops once the off-diagonal Frobenius norm
/// reaches rounding level.
pub fn jacobi_eigen(m: &DMatrix<f64>, want_vectors: bool) -> Result<JacobiEigen, SpectraError> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(SpectraError::NotSquare {
            rows: n,
            cols: m.ncols(),
        });
    }
    let scale = crate::linalg::max_abs(m);
    let asym = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .fold(0.0f64, |acc, (i, j)| acc.max((m[(i, j)] - m[(j, i)]).abs()));
    if asym > 1e-12 * scale.max(1.0) {
        return Err(SpectraError::NotSymmetric { asymmetry: asym });
    }

    // Row-major working copy, symmetrized.
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }
    let mut v = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    });

    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = (n as f64) * f64::EPSILON * frob;
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += a[p * n + q] * a[p * n + q];
            }
        }
        (2.0 * s).sqrt()
    };

    let mut sweeps = 0;
    let mut residual = off(&a);
    while residual > target {
        if sweeps == MAX_SWEEPS {
            if residual <= 1e-10 * frob {
                break;
            }
            return Err(SpectraError::NoConvergence {
                sweeps,
                off_diagonal: residual,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        residual = off(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| a[i * n + i]));
    let vectors = v.map(|v| DMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]));
    Ok(JacobiEigen {
        values,
        vectors,
        sweeps,
    })
}
