//! Dense symmetric eigendecomposition, eigenspace grouping, extreme weighted
//! eigenvalues and closed-form spectra of abelian Cayley graphs.

mod characters;
mod jacobi;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{laplacian, unit_laplacian, Graph, GraphError, WeightVector};
use crate::linalg::{max_abs, orthonormalize_columns};

pub use characters::{character_spectrum, circulant_curve_extremes, CharacterTable, CurveExtremes};
pub use jacobi::{jacobi_eigen, JacobiEigen};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("matrix is not symmetric (max |M - M^T| = {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },
    #[error("grouping tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("n = {0} is below the family's range (n >= 6)")]
    NTooSmall(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Eigenvalues of a symmetric matrix grouped into eigenspaces.
#[derive(Debug, Clone, Serialize)]
pub struct EigenspaceDecomposition {
    eigenvalues: Vec<f64>,
    multiplicities: Vec<usize>,
    #[serde(skip)]
    bases: Vec<DMatrix<f64>>,
    group_tol: f64,
    raw: Vec<f64>,
}

/// Default grouping tolerance `1e-8 · n · max|M|`.
pub fn default_group_tol(m: &DMatrix<f64>) -> f64 {
    let t = 1e-8 * m.nrows() as f64 * max_abs(m);
    if t > 0.0 {
        t
    } else {
        1e-8
    }
}

/// Full eigendecomposition with eigenvalues closer than `group_tol` (chained)
/// merged into a single eigenspace. `None` selects [`default_group_tol`].
pub fn eigendecompose(
    m: &DMatrix<f64>,
    group_tol: Option<f64>,
) -> Result<EigenspaceDecomposition, SpectraError> {
    let tol = group_tol.unwrap_or_else(|| default_group_tol(m));
    if !(tol.is_finite() && tol > 0.0) {
        return Err(SpectraError::InvalidTolerance(tol));
    }
    let eig = jacobi_eigen(m, true)?;
    let vectors = eig.vectors.expect("vectors requested");
    let raw: Vec<f64> = eig.values.iter().copied().collect();

    let mut eigenvalues = Vec::new();
    let mut multiplicities = Vec::new();
    let mut bases = Vec::new();
    let mut start = 0;
    while start < raw.len() {
        let mut end = start + 1;
        while end < raw.len() && raw[end] - raw[end - 1] <= tol {
            end += 1;
        }
        let mean = raw[start..end].iter().sum::<f64>() / (end - start) as f64;
        let block = vectors.columns(start, end - start).into_owned();
        let basis = orthonormalize_columns(&block, 1e-8);
        eigenvalues.push(mean);
        multiplicities.push(basis.ncols());
        bases.push(basis);
        start = end;
    }
    Ok(EigenspaceDecomposition {
        eigenvalues,
        multiplicities,
        bases,
        group_tol: tol,
        raw,
    })
}

impl EigenspaceDecomposition {
    /// Distinct eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Orthonormal basis of the `idx`-th eigenspace, one column per dimension.
    pub fn basis(&self, idx: usize) -> &DMatrix<f64> {
        &self.bases[idx]
    }

    pub fn bases(&self) -> &[DMatrix<f64>] {
        &self.bases
    }

    pub fn group_tol(&self) -> f64 {
        self.group_tol
    }

    /// Ungrouped eigenvalues, ascending, with repetition.
    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.raw.len()
    }

    /// Index of the eigenspace whose eigenvalue is within `tol` of `lambda`
    /// (`None` uses the grouping tolerance).
    pub fn index_of(&self, lambda: f64, tol: Option<f64>) -> Option<usize> {
        let tol = tol.unwrap_or(self.group_tol).max(self.group_tol);
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &v)| (v - lambda).abs() <= tol)
            .min_by(|a, b| (a.1 - lambda).abs().total_cmp(&(b.1 - lambda).abs()))
            .map(|(i, _)| i)
    }

    /// Orthogonal projector `U Uᵀ` onto the `idx`-th eigenspace.
    pub fn projector(&self, idx: usize) -> DMatrix<f64> {
        let u = &self.bases[idx];
        u * u.transpose()
    }

    /// `Σ λ U Uᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for (lambda, u) in self.eigenvalues.iter().zip(&self.bases) {
            out += *lambda * u * u.transpose();
        }
        out
    }
}

/// A graph's unit Laplacian together with its eigenspace decomposition.
#[derive(Debug, Clone)]
pub struct GraphSpectrum {
    laplacian: DMatrix<f64>,
    dec: EigenspaceDecomposition,
}

impl GraphSpectrum {
    /// Decomposes `L(𝟙)`; fails with [`SpectraError::Disconnected`] unless the
    /// kernel is one-dimensional.
    pub fn of(g: &Graph, group_tol: Option<f64>) -> Result<Self, SpectraError> {
        if g.n() < 2 || !g.is_connected() {
            return Err(SpectraError::Disconnected);
        }
        let l = unit_laplacian(g);
        let dec = eigendecompose(&l, group_tol)?;
        if dec.multiplicities()[0] != 1 {
            return Err(SpectraError::Disconnected);
        }
        Ok(Self { laplacian: l, dec })
    }

    pub fn laplacian(&self) -> &DMatrix<f64> {
        &self.laplacian
    }

    pub fn decomposition(&self) -> &EigenspaceDecomposition {
        &self.dec
    }

    /// Index of the λ₂ eigenspace (always 1 for connected graphs).
    pub fn lambda2_index(&self) -> usize {
        1
    }

    pub fn lambda_max_index(&self) -> usize {
        self.dec.len() - 1
    }

    pub fn lambda2(&self) -> f64 {
        self.dec.eigenvalues()[1]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.dec.eigenvalues().last().expect("nonempty")
    }
}

/// `(λ₂, λₙ)` of `L(w)`. No normalization is applied to `w`.
pub fn lambda_ends(g: &Graph, w: &WeightVector) -> Result<(f64, f64), SpectraError> {
    if g.n() < 2 || !g.is_connected() {
        return Err(SpectraError::Disconnected);
    }
    let l = laplacian(g, Some(w))?;
    let values = jacobi_eigen(&l, false)?.values;
    Ok((values[1], values[values.len() - 1]))
}

/// Eigenvalue at position `k` (ascending) together with a unit eigenvector.
pub(crate) fn eigenpair(l: &DMatrix<f64>, k: usize) -> Result<(f64, DVector<f64>), SpectraError> {
    let eig = jacobi_eigen(l, true)?;
    let v = eig.vectors.expect("vectors requested");
    Ok((eig.values[k], v.column(k).into_owned()))
}
