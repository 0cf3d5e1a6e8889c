use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{edge_length_profile, Embedding, EmbeddingError, EmbeddingSource, DEFAULT_ISO_TOL};
use crate::graph::{cartesian_product, unit_laplacian, Graph};

/// Which end of the product spectrum the construction targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ProductMode {
    /// `[U_G ⊗ 1, 1 ⊗ U_H]` on `E_λ₂` when `λ₂(G) = λ₂(H)`.
    Lambda2,
    /// `U_G ⊗ U_H` on `E_{λmax(G) + λmax(H)}`.
    LambdaMax,
}

const REL_TOL: f64 = 1e-8;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Builds an edge-isometric embedding of `G □ H` from embeddings of the
/// factors. Each factor is first rescaled to unit edge length.
pub fn product_embedding(
    g: &Graph,
    ge: &Embedding,
    h: &Graph,
    he: &Embedding,
    mode: ProductMode,
) -> Result<Embedding, EmbeddingError> {
    let violated = |msg: String| Err(EmbeddingError::HypothesisViolated(msg));
    let gp = edge_length_profile(ge, g, DEFAULT_ISO_TOL);
    let hp = edge_length_profile(he, h, DEFAULT_ISO_TOL);
    if !gp.is_edge_isometric {
        return violated("first factor embedding is not edge-isometric".into());
    }
    if !hp.is_edge_isometric {
        return violated("second factor embedding is not edge-isometric".into());
    }
    let gu = ge.unit_edge_normalized(g);
    let hu = he.unit_edge_normalized(h);
    let (gn, hn) = (g.n(), h.n());
    let product = cartesian_product(g, h);

    let (points, eigenvalue) = match mode {
        ProductMode::Lambda2 => {
            if !close(ge.eigenvalue(), he.eigenvalue()) {
                return violated(format!(
                    "algebraic connectivities differ: {} vs {}",
                    ge.eigenvalue(),
                    he.eigenvalue()
                ));
            }
            let (kg, kh) = (gu.dim(), hu.dim());
            let p = DMatrix::from_fn(gn * hn, kg + kh, |r, c| {
                let (a, x) = (r / hn, r % hn);
                if c < kg {
                    gu.points()[(a, c)]
                } else {
                    hu.points()[(x, c - kg)]
                }
            });
            (p, ge.eigenvalue())
        }
        ProductMode::LambdaMax => {
            if !gp.is_spherical || !hp.is_spherical {
                return violated("factor embeddings must be spherical".into());
            }
            let (dg, dh) = match (g.regular_degree(), h.regular_degree()) {
                (Some(a), Some(b)) => (a as f64, b as f64),
                _ => return violated("factors must be regular".into()),
            };
            let (rg, rh) = (dg / (2.0 * ge.eigenvalue()), dh / (2.0 * he.eigenvalue()));
            if !close(rg, rh) {
                return violated(format!("δ/(2λmax) differ: {rg} vs {rh}"));
            }
            let (kg, kh) = (gu.dim(), hu.dim());
            let p = DMatrix::from_fn(gn * hn, kg * kh, |r, c| {
                let (a, x) = (r / hn, r % hn);
                gu.points()[(a, c / kh)] * hu.points()[(x, c % kh)]
            });
            (p, ge.eigenvalue() + he.eigenvalue())
        }
    };
    Embedding::new(
        &unit_laplacian(&product),
        points,
        eigenvalue,
        EmbeddingSource::Product { mode },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::canonical_embedding;
    use crate::graph::catalog;
    use crate::spectra::GraphSpectrum;

    fn end(name: &str, top: bool) -> (Graph, Embedding) {
        let g = catalog(name).unwrap();
        let s = GraphSpectrum::of(&g, None).unwrap();
        let lambda = if top { s.lambda_max() } else { s.lambda2() };
        let e = canonical_embedding(&g, s.decomposition(), lambda).unwrap();
        (g, e)
    }

    #[test]
    fn torus_lambda2() {
        let (c4, e) = end("cycle_4", false);
        let p = product_embedding(&c4, &e, &c4, &e, ProductMode::Lambda2).unwrap();
        assert!((p.eigenvalue() - 2.0).abs() < 1e-12);
        let prof = edge_length_profile(&p, &cartesian_product(&c4, &c4), DEFAULT_ISO_TOL);
        assert!(prof.is_edge_isometric);
    }

    #[test]
    fn k3_square_lambda_max() {
        let (k3, e) = end("complete_3", true);
        let p = product_embedding(&k3, &e, &k3, &e, ProductMode::LambdaMax).unwrap();
        assert!((p.eigenvalue() - 6.0).abs() < 1e-12);
        let prof = edge_length_profile(&p, &cartesian_product(&k3, &k3), DEFAULT_ISO_TOL);
        assert!(prof.is_edge_isometric && prof.is_spherical);
    }

    #[test]
    fn mismatched_connectivity() {
        let (c4, e4) = end("cycle_4", false);
        let (c6, e6) = end("cycle_6", false);
        assert!(matches!(
            product_embedding(&c4, &e4, &c6, &e6, ProductMode::Lambda2),
            Err(EmbeddingError::HypothesisViolated(_))
        ));
    }
}
