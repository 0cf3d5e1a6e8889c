//! Spectral embeddings and their diagnostics.
//!
//! An [`Embedding`] places vertex `i` at row `i` of an `n x k` matrix whose
//! columns lie in a single Laplacian eigenspace `E_λ`.

mod orbit;
mod product;

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{unit_laplacian, Graph};
use crate::spectra::{EigenspaceDecomposition, SpectraError};
use crate::symmetry::{enumerate_group, PermutationSet, SymmetryError};

pub use orbit::{chi_gamma, chi_gamma_sum, phi_psi, OrbitVector};
pub use product::{product_embedding, ProductMode};

/// Default relative tolerance for edge-isometry and sphericity.
pub const DEFAULT_ISO_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbeddingError {
    #[error("eigenvalue {0} is zero; embeddings need a positive eigenvalue")]
    ZeroEigenvalue(f64),
    #[error("{0} is not an eigenvalue of the Laplacian within the grouping tolerance")]
    UnknownEigenvalue(f64),
    #[error("vector is not in the eigenspace (residual {residual:e})")]
    NotInEigenspace { residual: f64 },
    #[error("vector is zero")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// How an embedding was produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum EmbeddingSource {
    Canonical,
    Symmetrized { group_order: usize },
    Explicit,
    Product { mode: ProductMode },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    points: DMatrix<f64>,
    eigenvalue: f64,
    source: EmbeddingSource,
}

/// `‖L P - λ P‖_max` relative to `1 + λ` and the scale of `P`.
fn eigen_residual(l: &DMatrix<f64>, p: &DMatrix<f64>, lambda: f64) -> f64 {
    let scale = p.amax().max(f64::MIN_POSITIVE);
    (l * p - p * lambda).amax() / scale
}

impl Embedding {
    /// Wraps `points` after checking the eigenspace residual, centering and
    /// nonvanishing invariants against the Laplacian `l`.
    pub fn new(
        l: &DMatrix<f64>,
        points: DMatrix<f64>,
        eigenvalue: f64,
        source: EmbeddingSource,
    ) -> Result<Self, EmbeddingError> {
        if points.nrows() != l.nrows() {
            return Err(EmbeddingError::DimensionMismatch {
                expected: l.nrows(),
                found: points.nrows(),
            });
        }
        if eigenvalue <= 0.0 {
            return Err(EmbeddingError::ZeroEigenvalue(eigenvalue));
        }
        if points.ncols() == 0 || points.amax() == 0.0 {
            return Err(EmbeddingError::ZeroVector);
        }
        let residual = eigen_residual(l, &points, eigenvalue);
        if residual > 1e-7 * (1.0 + eigenvalue) {
            return Err(EmbeddingError::NotInEigenspace { residual });
        }
        Ok(Self {
            points,
            eigenvalue,
            source,
        })
    }

    /// Row `i` is the image of vertex `i`.
    pub fn points(&self) -> &DMatrix<f64> {
        &self.points
    }

    pub fn eigenvalue(&self) -> f64 {
        self.eigenvalue
    }

    pub fn source(&self) -> &EmbeddingSource {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn point(&self, i: usize) -> DVector<f64> {
        self.points.row(i).transpose()
    }

    /// Largest absolute column sum relative to the largest entry.
    pub fn centering_residual(&self) -> f64 {
        let scale = self.points.amax();
        self.points
            .column_iter()
            .map(|c| c.sum().abs())
            .fold(0.0, f64::max)
            / scale
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            points: &self.points * factor,
            eigenvalue: self.eigenvalue,
            source: self.source.clone(),
        }
    }

    /// Rescales so that the mean edge length of `g` is 1.
    pub fn unit_edge_normalized(&self, g: &Graph) -> Self {
        let lengths = edge_lengths(&self.points, g);
        let mean = lengths.iter().sum::<f64>() / lengths.len().max(1) as f64;
        if mean > 0.0 {
            self.scaled(1.0 / mean)
        } else {
            self.clone()
        }
    }

    /// `vertex,x0,x1,…` header followed by one row per vertex.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertex");
        for c in 0..self.dim() {
            let _ = write!(out, ",x{c}");
        }
        out.push('\n');
        for (i, row) in self.points.row_iter().enumerate() {
            let _ = write!(out, "{i}");
            for x in row.iter() {
                let _ = write!(out, ",{x:.17e}");
            }
            out.push('\n');
        }
        out
    }
}

fn edge_lengths(p: &DMatrix<f64>, g: &Graph) -> Vec<f64> {
    g.edges()
        .iter()
        .map(|&(i, j)| (p.row(i) - p.row(j)).norm())
        .collect()
}

/// Edge lengths, vertex norms and the resulting isometry verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EdgeProfile {
    pub lengths: Vec<f64>,
    pub norms: Vec<f64>,
    pub min_length: f64,
    pub max_length: f64,
    pub is_edge_isometric: bool,
    /// Common edge length (the mean when not edge-isometric).
    pub c: f64,
    pub is_spherical: bool,
    /// Common vertex norm (the mean when not spherical).
    pub radius: f64,
    pub tol: f64,
}

fn uniform(values: &[f64], tol: f64) -> (bool, f64, f64, f64) {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    let ok = !values.is_empty() && hi - lo <= tol * (1.0 + hi) && lo > tol;
    (ok, lo, hi, mean)
}

/// Diagnoses `e` on `g`: edge-isometric iff `max - min ≤ tol·(1 + max)` and
/// `min > tol`; spherical under the same rule on vertex norms. Lengths and
/// norms are divided by the largest coordinate before the comparison, so the
/// verdicts do not depend on the overall scale of `e`.
pub fn edge_length_profile(e: &Embedding, g: &Graph, tol: f64) -> EdgeProfile {
    let p = e.points();
    let scale = p.amax().max(f64::MIN_POSITIVE);
    let lengths = edge_lengths(p, g);
    let norms: Vec<f64> = p.row_iter().map(|r| r.norm()).collect();
    // Decide on the scale-free copy so normalized and raw embeddings agree.
    let rel_l: Vec<f64> = lengths.iter().map(|x| x / scale).collect();
    let rel_n: Vec<f64> = norms.iter().map(|x| x / scale).collect();
    let (iso, _, _, _) = uniform(&rel_l, tol);
    let (sph, _, _, _) = uniform(&rel_n, tol);
    let (_, min_length, max_length, c) = uniform(&lengths, tol);
    let (_, _, _, radius) = uniform(&norms, tol);
    EdgeProfile {
        lengths,
        norms,
        min_length,
        max_length,
        is_edge_isometric: iso,
        c,
        is_spherical: sph,
        radius,
        tol,
    }
}

/// `P = U_λ`, the canonical embedding on the eigenspace of `lambda`.
pub fn canonical_embedding(
    g: &Graph,
    dec: &EigenspaceDecomposition,
    lambda: f64,
) -> Result<Embedding, EmbeddingError> {
    if dec.dim() != g.n() {
        return Err(EmbeddingError::DimensionMismatch {
            expected: g.n(),
            found: dec.dim(),
        });
    }
    let idx = dec
        .index_of(lambda, None)
        .ok_or(EmbeddingError::UnknownEigenvalue(lambda))?;
    let value = dec.eigenvalues()[idx];
    if value.abs() <= dec.group_tol() {
        return Err(EmbeddingError::ZeroEigenvalue(value));
    }
    Ok(Embedding {
        points: dec.basis(idx).clone(),
        eigenvalue: value,
        source: EmbeddingSource::Canonical,
    })
}

/// Checks `Lφ = λφ` to the embedding tolerance.
pub(crate) fn check_eigenvector(
    l: &DMatrix<f64>,
    phi: &DVector<f64>,
    lambda: f64,
) -> Result<(), EmbeddingError> {
    let scale = phi.amax();
    if scale == 0.0 {
        return Err(EmbeddingError::ZeroVector);
    }
    let residual = (l * phi - phi * lambda).amax() / scale;
    if residual > 1e-7 * (1.0 + lambda.abs()) {
        return Err(EmbeddingError::NotInEigenspace { residual });
    }
    Ok(())
}

/// The orbit of `φ` under the group generated by `p`: one column per group
/// element `σ`, with entry `i` equal to `φ_{σ(i)}`.
pub fn symmetrized_embedding(
    g: &Graph,
    phi: &DVector<f64>,
    lambda: f64,
    p: &PermutationSet,
    group_cap: usize,
) -> Result<Embedding, EmbeddingError> {
    if phi.len() != g.n() {
        return Err(EmbeddingError::DimensionMismatch {
            expected: g.n(),
            found: phi.len(),
        });
    }
    p.check_automorphisms(g)?;
    let l = unit_laplacian(g);
    check_eigenvector(&l, phi, lambda)?;
    let group = enumerate_group(p, group_cap)?;
    let mut points = DMatrix::zeros(g.n(), group.order());
    for (c, sigma) in group.iter().enumerate() {
        for i in 0..g.n() {
            points[(i, c)] = phi[sigma[i] as usize];
        }
    }
    Embedding::new(
        &l,
        points,
        lambda,
        EmbeddingSource::Symmetrized {
            group_order: group.order(),
        },
    )
}
