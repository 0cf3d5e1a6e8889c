use thiserror::Error;

use crate::certify::CertifyError;
use crate::embeddings::EmbeddingError;
use crate::graph::GraphError;
use crate::spectra::SpectraError;
use crate::symmetry::SymmetryError;
use crate::walkreg::WalkError;

/// Crate-level error; the variant names the module the failure came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error("spectra: {0}")]
    Spectra(#[from] SpectraError),
    #[error("symmetry: {0}")]
    Symmetry(#[from] SymmetryError),
    #[error("walkreg: {0}")]
    Walk(#[from] WalkError),
    #[error("embeddings: {0}")]
    Embedding(#[from] EmbeddingError),
    #[error("certify: {0}")]
    Certify(#[from] CertifyError),
}

pub type Result<T> = std::result::Result<T, Error>;
