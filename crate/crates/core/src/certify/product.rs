use super::pipeline::{check_conformal_rigidity, CheckOptions, Verdict};
use super::{verify, Certificate, CertificateKind, CertifyError};
use crate::embeddings::{
    canonical_embedding, edge_length_profile, product_embedding, Embedding, ProductMode,
};
use crate::falsify::End;
use crate::graph::{cartesian_product, Graph};
use crate::spectra::GraphSpectrum;

const REL_TOL: f64 = 1e-8;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Both ends of `G □ H`, certified from the factors.
#[derive(Debug, Clone)]
pub struct ProductRigidity {
    pub product: Graph,
    pub lower: Certificate,
    pub upper: Certificate,
    pub lower_embedding: Embedding,
    pub upper_embedding: Embedding,
}

/// Certified, spherical factor embedding at `λ_max`: the pipeline's embedding
/// if it is spherical, else the canonical one.
fn spherical_top(
    g: &Graph,
    spec: &GraphSpectrum,
    found: Option<&Embedding>,
    iso_tol: f64,
) -> Option<Embedding> {
    let ok = |e: &Embedding| {
        let p = edge_length_profile(e, g, iso_tol);
        p.is_edge_isometric && p.is_spherical
    };
    if let Some(e) = found.filter(|e| ok(e)) {
        return Some(e.clone());
    }
    canonical_embedding(g, spec.decomposition(), spec.lambda_max())
        .ok()
        .filter(ok)
}

/// Certifies `G □ H` from certified factors with equal algebraic
/// connectivity and equal `δ/(2λ_max)`. The hypotheses are checked before any
/// factor is analysed.
pub fn product_rigidity(
    g: &Graph,
    h: &Graph,
    opts: &CheckOptions,
) -> Result<ProductRigidity, CertifyError> {
    let violated = |msg: String| Err(CertifyError::HypothesisViolated(msg));
    let sg = GraphSpectrum::of(g, opts.group_tol)?;
    let sh = GraphSpectrum::of(h, opts.group_tol)?;
    if !close(sg.lambda2(), sh.lambda2()) {
        return violated(format!(
            "algebraic connectivities differ: {} vs {}",
            sg.lambda2(),
            sh.lambda2()
        ));
    }
    let (Some(dg), Some(dh)) = (g.regular_degree(), h.regular_degree()) else {
        return violated("factors must be regular".into());
    };
    let (rg, rh) = (
        dg as f64 / (2.0 * sg.lambda_max()),
        dh as f64 / (2.0 * sh.lambda_max()),
    );
    if !close(rg, rh) {
        return violated(format!("δ/(2λmax) differ: {rg} vs {rh}"));
    }

    let factor_opts = CheckOptions {
        cayley: None,
        generators: None,
        ..opts.clone()
    };
    let rep_g = check_conformal_rigidity(g, &factor_opts)?;
    let rep_h = check_conformal_rigidity(h, &factor_opts)?;
    for (name, rep) in [("first", &rep_g), ("second", &rep_h)] {
        for end in [&rep.lower, &rep.upper] {
            if end.verdict != Verdict::Certified {
                return violated(format!(
                    "{name} factor is not certified at the {:?} end",
                    end.end
                ));
            }
        }
    }
    let (Some(low_g), Some(low_h)) = (rep_g.lower.embedding(), rep_h.lower.embedding()) else {
        return violated("factor certificate carries no embedding".into());
    };
    let Some(top_g) = spherical_top(g, &sg, rep_g.upper.embedding(), opts.iso_tol) else {
        return violated("first factor has no spherical λmax embedding".into());
    };
    let Some(top_h) = spherical_top(h, &sh, rep_h.upper.embedding(), opts.iso_tol) else {
        return violated("second factor has no spherical λmax embedding".into());
    };

    let lower_embedding = product_embedding(g, low_g, h, low_h, ProductMode::Lambda2)?;
    let upper_embedding = product_embedding(g, &top_g, h, &top_h, ProductMode::LambdaMax)?;

    let product = cartesian_product(g, h);
    let sp = GraphSpectrum::of(&product, opts.group_tol)?;
    let tol = sp.decomposition().group_tol();
    if (lower_embedding.eigenvalue() - sp.lambda2()).abs() > tol
        || (upper_embedding.eigenvalue() - sp.lambda_max()).abs() > tol
    {
        return Err(CertifyError::VerificationFailed(
            "product embeddings do not sit on the extreme eigenspaces".into(),
        ));
    }
    let cert = |end: End, mode: ProductMode, e: &Embedding, fg: &Certificate, fh: &Certificate| {
        let (residuals, _) = verify(&product, e, opts.iso_tol, tol, None)?;
        Ok::<_, CertifyError>(Certificate {
            kind: CertificateKind::Product {
                mode,
                factors: vec![fg.clone(), fh.clone()],
            },
            end,
            eigenvalue: e.eigenvalue(),
            residuals,
        })
    };
    let certs = |r: &super::pipeline::EndReport| r.certificate.clone().expect("certified end");
    let lower = cert(
        End::Lower,
        ProductMode::Lambda2,
        &lower_embedding,
        &certs(&rep_g.lower),
        &certs(&rep_h.lower),
    )?;
    let upper = cert(
        End::Upper,
        ProductMode::LambdaMax,
        &upper_embedding,
        &certs(&rep_g.upper),
        &certs(&rep_h.upper),
    )?;
    Ok(ProductRigidity {
        product,
        lower,
        upper,
        lower_embedding,
        upper_embedding,
    })
}
