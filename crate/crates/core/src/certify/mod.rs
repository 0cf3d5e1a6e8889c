//! Positive certificates and the rigidity pipeline.
//!
//! Every certificate produced here is re-verified by reconstructing a
//! concrete embedding and running [`edge_length_profile`] on it; a certificate
//! that fails re-verification is dropped. Refutations carry a weight vector
//! whose eigenvalue is recomputed with an independent eigensolver.

mod lp;
mod pipeline;
mod product;
mod sdp;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::embeddings::{
    edge_length_profile, phi_psi, symmetrized_embedding, EdgeProfile, Embedding, EmbeddingError,
    EmbeddingSource, OrbitVector,
};
use crate::falsify::End;
use crate::graph::{unit_laplacian, Graph, GraphError};
use crate::spectra::{EigenspaceDecomposition, SpectraError};
use crate::symmetry::{
    enumerate_group, is_vertex_transitive, orbits, Group, PermutationSet, SymmetryError,
};
use crate::walkreg::WalkError;

pub use lp::{
    abelian_lp_certificate, character_embedding, phase1_simplex, CharacterCertificate, LpOutcome,
    Phase1, LP_FEASIBLE, LP_INFEASIBLE,
};
pub use pipeline::{
    check_conformal_rigidity, CheckOptions, EndReport, GraphInfo, Method, RankRecord,
    RigidityReport, Stage, StageAttempt, Timings, Tolerances, Verdict, Witness,
};
pub use product::{product_rigidity, ProductRigidity};
pub use sdp::{
    rank_reduce, sdp_feasibility, RankReduction, SdpInstance, SdpOutcome, DEFAULT_FEAS_TOL,
    DEFAULT_MAX_ITER,
};

/// Largest `n · |Ψ| · k` for which a symmetrized embedding is materialized.
pub const MAX_SYMMETRIZED_ENTRIES: usize = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("{0} is not an eigenvalue of the Cayley graph")]
    NotAnEigenvalue(f64),
    #[error("the supplied group does not act vertex-transitively")]
    NotVertexTransitive,
    #[error("invalid SDP instance: {0}")]
    InvalidInstance(String),
    #[error("rank reduction lost feasibility at rank {rank} (residual {residual:e})")]
    NumericalRankAmbiguity { rank: usize, residual: f64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("certificate failed re-verification: {0}")]
    VerificationFailed(String),
    #[error("Cayley spec does not describe the input graph")]
    SpecMismatch,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// What a certificate asserts, with its numeric payload.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all_fields = "camelCase")]
pub enum CertificateKind {
    /// One edge orbit under the automorphisms in use.
    EdgeTransitive { edge_orbits: usize },
    /// The graph is 1-walk regular.
    OneWalkRegular,
    /// The canonical embedding is already edge-isometric.
    CanonicalIsometric,
    /// `φ ∈ E_λ` with constant orbit sums `φ_Ψ`.
    Eigenvector {
        phi: Vec<f64>,
        phi_psi: Vec<f64>,
        group_order: usize,
        rank_reduction_steps: usize,
    },
    /// Convex weights over characters.
    #[serde(rename = "CharacterLP")]
    CharacterLp(CharacterCertificate),
    /// A feasible Gram matrix `X` on the eigenspace basis.
    SdpGram {
        x: Vec<Vec<f64>>,
        rank: usize,
        group_order: usize,
    },
    /// Built from certified factors.
    Product {
        mode: crate::embeddings::ProductMode,
        factors: Vec<Certificate>,
    },
}

/// Re-verification diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Residuals {
    /// `‖LP - λP‖_max / ‖P‖_max`.
    pub eigen_residual: f64,
    pub min_edge_length: f64,
    pub max_edge_length: f64,
    /// `(max - min) / max` over edge lengths.
    pub relative_spread: f64,
    pub embedding_dim: usize,
    /// Constraint residual of the SDP or LP, where one was solved.
    pub constraint_residual: Option<f64>,
    pub group_tol: f64,
    pub iso_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    #[serde(flatten)]
    pub kind: CertificateKind,
    pub end: End,
    pub eigenvalue: f64,
    pub residuals: Residuals,
}

/// Runs `edge_length_profile` on `e` and packages the residuals, failing if
/// the embedding is not edge-isometric.
pub(crate) fn verify(
    g: &Graph,
    e: &Embedding,
    iso_tol: f64,
    group_tol: f64,
    constraint_residual: Option<f64>,
) -> Result<(Residuals, EdgeProfile), CertifyError> {
    let prof = edge_length_profile(e, g, iso_tol);
    if !prof.is_edge_isometric {
        return Err(CertifyError::VerificationFailed(format!(
            "edge lengths range over {:.6e}..{:.6e}",
            prof.min_length, prof.max_length
        )));
    }
    let l = unit_laplacian(g);
    let p = e.points();
    let eigen_residual = (&l * p - p * e.eigenvalue()).amax() / p.amax();
    Ok((
        Residuals {
            eigen_residual,
            min_edge_length: prof.min_length,
            max_edge_length: prof.max_length,
            relative_spread: (prof.max_length - prof.min_length) / prof.max_length,
            embedding_dim: e.dim(),
            constraint_residual,
            group_tol,
            iso_tol,
        },
        prof,
    ))
}

/// Symmetrizes every column of `p` over `group`.
pub(crate) fn symmetrize_columns(p: &DMatrix<f64>, group: &Group) -> DMatrix<f64> {
    let (n, k) = p.shape();
    let mut out = DMatrix::zeros(n, k * group.order());
    for (s, sigma) in group.iter().enumerate() {
        for c in 0..k {
            for i in 0..n {
                out[(i, s * k + c)] = p[(sigma[i] as usize, c)];
            }
        }
    }
    out
}

/// Options for [`eigenvector_certificate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions {
    pub feas_tol: f64,
    pub max_iter: usize,
    pub iso_tol: f64,
    pub group_cap: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            feas_tol: DEFAULT_FEAS_TOL,
            max_iter: DEFAULT_MAX_ITER,
            iso_tol: crate::embeddings::DEFAULT_ISO_TOL,
            group_cap: crate::symmetry::DEFAULT_GROUP_CAP,
        }
    }
}

/// Output of [`eigenvector_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvectorCertificate {
    /// Present when rank reduction reached rank one.
    pub phi: Option<DVector<f64>>,
    pub phi_psi: Option<OrbitVector>,
    /// Gram matrix after rank reduction.
    pub x: DMatrix<f64>,
    /// Rank of the feasible point before reduction.
    pub initial_rank: usize,
    pub rank: usize,
    pub rank_reduction_steps: usize,
    pub residual: f64,
    pub group_order: usize,
    /// The re-verified symmetrized embedding.
    pub embedding: Embedding,
    pub residuals: Residuals,
}

/// Solves the `Ψ`-symmetrized SDP on `E_λ`, reduces the rank and, at rank
/// one, returns `φ = U a` with `φ_Ψ` constant. `Ok(None)` means the SDP
/// stayed undecided.
pub fn eigenvector_certificate(
    g: &Graph,
    dec: &EigenspaceDecomposition,
    lambda: f64,
    p: &PermutationSet,
    opts: &SdpOptions,
) -> Result<Option<EigenvectorCertificate>, CertifyError> {
    if !is_vertex_transitive(g, p)? {
        return Err(CertifyError::NotVertexTransitive);
    }
    let idx = dec
        .index_of(lambda, None)
        .ok_or(EmbeddingError::UnknownEigenvalue(lambda))?;
    let lambda = dec.eigenvalues()[idx];
    if lambda <= dec.group_tol() {
        return Err(EmbeddingError::ZeroEigenvalue(lambda).into());
    }
    let o = orbits(g, p)?;
    let u = dec.basis(idx);
    let inst = SdpInstance::new(g, u, &o)?;
    let x = match sdp_feasibility(&inst, opts.feas_tol, opts.max_iter) {
        SdpOutcome::Feasible { x, .. } => x,
        SdpOutcome::Undecided { .. } => return Ok(None),
    };
    let initial_rank = crate::linalg::rank(&x, sdp::RANK_CUTOFF);
    let red = rank_reduce(&x, &inst, opts.feas_tol)?;
    let group = enumerate_group(p, opts.group_cap)?;
    if g.n() * group.order() * red.rank > MAX_SYMMETRIZED_ENTRIES {
        return Err(SymmetryError::GroupTooLarge {
            cap: opts.group_cap,
        }
        .into());
    }
    let l = unit_laplacian(g);

    if red.rank == 1 {
        let eig = nalgebra::SymmetricEigen::new(red.x.clone());
        let top = eig.eigenvalues.imax();
        let a = eig.eigenvectors.column(top) * eig.eigenvalues[top].max(0.0).sqrt();
        let a = sdp::polish_rank_one(&inst, &a);
        let phi = (u * &a).normalize();
        let values = phi_psi(g, &phi, &group, &o)?;
        let scale = group.order() as f64;
        if values.spread()
            > 1e-8 * scale.max(values.values.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
        {
            return Err(CertifyError::VerificationFailed(format!(
                "φ_Ψ spread {:e}",
                values.spread()
            )));
        }
        let emb = symmetrized_embedding(g, &phi, lambda, p, opts.group_cap)?;
        let (residuals, _) = verify(
            g,
            &emb,
            opts.iso_tol,
            dec.group_tol(),
            Some(inst.residual(&(&a * a.transpose()))),
        )?;
        return Ok(Some(EigenvectorCertificate {
            x: &a * a.transpose(),
            phi: Some(phi),
            phi_psi: Some(values),
            initial_rank,
            rank: 1,
            rank_reduction_steps: red.steps,
            residual: red.residual,
            group_order: group.order(),
            embedding: emb,
            residuals,
        }));
    }

    let eig = nalgebra::SymmetricEigen::new(red.x.clone());
    let v = DMatrix::from_fn(red.x.nrows(), red.x.ncols(), |i, j| {
        eig.eigenvectors[(i, j)] * eig.eigenvalues[j].max(0.0).sqrt()
    });
    let points = symmetrize_columns(&(u * v), &group);
    let emb = Embedding::new(
        &l,
        points,
        lambda,
        EmbeddingSource::Symmetrized {
            group_order: group.order(),
        },
    )?;
    let (residuals, _) = verify(g, &emb, opts.iso_tol, dec.group_tol(), Some(red.residual))?;
    Ok(Some(EigenvectorCertificate {
        phi: None,
        phi_psi: None,
        x: red.x,
        initial_rank,
        rank: red.rank,
        rank_reduction_steps: red.steps,
        residual: red.residual,
        group_order: group.order(),
        embedding: emb,
        residuals,
    }))
}

pub(crate) fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}
