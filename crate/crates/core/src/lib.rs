//! Conformal rigidity of finite graphs.
//!
//! A connected graph is *lower* conformally rigid when no redistribution of
//! nonnegative edge weights (keeping the total fixed) raises the algebraic
//! connectivity λ₂ of its Laplacian, and *upper* conformally rigid when no
//! redistribution lowers the top eigenvalue λₙ. Both ends are equivalent to the
//! existence of an edge-isometric spectral embedding on the corresponding
//! eigenspace, which is what this crate searches for and re-verifies.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`graph`] | graphs, graph6, constructors, catalog, weighted Laplacians |
//! | [`spectra`] | cyclic Jacobi eigensolver, eigenspace grouping, character spectra |
//! | [`symmetry`] | permutation groups, orbits, automorphism search |
//! | [`walkreg`] | exact 0-/1-walk regularity and the canonical-embedding check |
//! | [`embeddings`] | canonical, symmetrized and product embeddings, φ_Ψ, χ_Γ |
//! | [`certify`] | character LP, SDP feasibility, rank reduction, the rigidity pipeline |
//! | [`falsify`] | random weight search and projected subgradient ascent |
//!
//! The `parallel` feature (on by default) runs falsifier trials and the two
//! spectral ends on rayon; without it everything runs sequentially with the
//! same results.

pub mod certify;
pub mod embeddings;
mod error;
pub mod falsify;
pub mod graph;
pub mod linalg;
pub mod par;
pub mod spectra;
pub mod symmetry;
pub mod walkreg;

pub use error::{Error, Result};

pub use certify::{check_conformal_rigidity, CheckOptions, RigidityReport, Verdict};
pub use graph::{catalog, CayleySpec, Graph, WeightVector};
pub use spectra::{eigendecompose, EigenspaceDecomposition, GraphSpectrum};

/// Version string recorded in every report.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
