//! Character-basis LP for abelian Cayley graphs.
//!
//! On `Cay(Γ, S)` the eigenspace `E_λ` is spanned by the characters `χ^j`
//! with `λ_j = λ`. An edge-isometric embedding on `E_λ` exists exactly when
//! some convex combination `Σ c_j χ^j_Γ` of the vectors
//! `χ^j_Γ(s) = |Γ| conj(χ^j(s))` is a real constant `t` over `S`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::CertifyError;
use crate::embeddings::{chi_gamma, edge_length_profile, Embedding, EmbeddingSource};
use crate::graph::{cayley_abelian, unit_laplacian, CayleySpec};
use crate::spectra::{character_spectrum, CharacterTable};

/// Phase-1 optimum at or below this value counts as feasible.
pub const LP_FEASIBLE: f64 = 1e-9;
/// Phase-1 optimum above this value counts as infeasible.
pub const LP_INFEASIBLE: f64 = 1e-7;
/// Pivot tolerance of the simplex.
pub const PIVOT_TOL: f64 = 1e-9;

/// Result of a phase-1 simplex run on `A x = b, x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Phase1 {
    pub x: DVector<f64>,
    /// Sum of the artificial variables at the optimum.
    pub infeasibility: f64,
    pub pivots: usize,
}

/// Dense phase-1 simplex with Bland's rule. Rows with negative right-hand
/// side are negated first; one artificial variable is added per row.
pub fn phase1_simplex(a: &DMatrix<f64>, b: &DVector<f64>) -> Phase1 {
    let (rows, vars) = a.shape();
    let width = vars + rows + 1;
    let rhs = width - 1;
    let mut t = DMatrix::zeros(rows, width);
    for i in 0..rows {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..vars {
            t[(i, j)] = sign * a[(i, j)];
        }
        t[(i, vars + i)] = 1.0;
        t[(i, rhs)] = sign * b[i];
    }
    let mut basis: Vec<usize> = (vars..vars + rows).collect();
    let mut pivots = 0;
    // Bland's rule terminates; the cap only guards against float cycling.
    let cap = 50 * (width + rows).max(1);
    while pivots < cap {
        // reduced cost of column j is -Σ over rows with artificial basics
        let entering = (0..vars + rows).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let gain: f64 = (0..rows)
                .filter(|&i| basis[i] >= vars)
                .map(|i| t[(i, j)])
                .sum();
            let cost = if j >= vars { 1.0 } else { 0.0 };
            gain - cost > PIVOT_TOL
        });
        let Some(col) = entering else { break };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            let piv = t[(i, col)];
            if piv > PIVOT_TOL {
                let ratio = t[(i, rhs)] / piv;
                let better = match leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < best - 1e-15 || (ratio <= best + 1e-15 && basis[i] < basis[r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else { break };
        let piv = t[(row, col)];
        for j in 0..width {
            t[(row, j)] /= piv;
        }
        for i in 0..rows {
            if i != row {
                let f = t[(i, col)];
                if f != 0.0 {
                    for j in 0..width {
                        t[(i, j)] -= f * t[(row, j)];
                    }
                }
            }
        }
        basis[row] = col;
        pivots += 1;
    }
    let mut x = DVector::zeros(vars);
    let mut infeasibility = 0.0;
    for (i, &bv) in basis.iter().enumerate() {
        if bv < vars {
            x[bv] = t[(i, rhs)];
        } else {
            infeasibility += t[(i, rhs)];
        }
    }
    Phase1 {
        x,
        infeasibility: infeasibility.max(0.0),
        pivots,
    }
}

/// Convex weights over characters certifying an edge-isometric embedding.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CharacterCertificate {
    pub eigenvalue: f64,
    /// Character indices (group-element order) with `λ_j = λ`.
    pub characters: Vec<usize>,
    /// `c_j ≥ 0`, summing to 1, aligned with `characters`.
    pub coefficients: Vec<f64>,
    /// The common real value of `Σ c_j χ^j_Γ(s)`.
    pub t: f64,
    /// Phase-1 optimum.
    pub infeasibility: f64,
    /// A real eigenvector `φ` with `Σ_g φ(g) φ(g+s)` independent of `s`,
    /// when one was built from `c` and verified.
    pub real_eigenvector: Option<Vec<f64>>,
    /// True when only the complex combination was verified.
    pub complex_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase", tag = "status")]
pub enum LpOutcome {
    Certified(CharacterCertificate),
    NotInPolytope {
        infeasibility: f64,
    },
    /// Optimum between the two thresholds, or a solution that failed
    /// re-verification.
    Degenerate {
        infeasibility: f64,
        reason: String,
    },
}

/// The LP rows in the variables `(c_j..., t⁺, t⁻)`: real parts minus `t`,
/// imaginary parts, and `Σ c_j = 1`. Entries are divided by `|Γ|`.
fn lp_system(table: &CharacterTable, chars: &[usize]) -> (DMatrix<f64>, DVector<f64>) {
    let s_len = table.spec().gens().len();
    let order = table.len() as f64;
    let cols: Vec<Vec<Complex64>> = chars.iter().map(|&j| chi_gamma(table, j)).collect();
    let (rows, vars) = (2 * s_len + 1, chars.len() + 2);
    let mut a = DMatrix::zeros(rows, vars);
    let mut b = DVector::zeros(rows);
    for s in 0..s_len {
        for (c, col) in cols.iter().enumerate() {
            a[(s, c)] = col[s].re / order;
            a[(s_len + s, c)] = col[s].im / order;
        }
        a[(s, vars - 2)] = -1.0;
        a[(s, vars - 1)] = 1.0;
    }
    for c in 0..chars.len() {
        a[(rows - 1, c)] = 1.0;
    }
    b[rows - 1] = 1.0;
    (a, b)
}

/// Solves the character LP for `λ` on `Cay(spec)`. `tol` selects the
/// characters with `|λ_j - λ| ≤ tol`. A positive answer is re-verified by
/// building the embedding `[√c_j Re χ^j, √c_j Im χ^j]` and checking that it is
/// an edge-isometric eigenspace embedding.
pub fn abelian_lp_certificate(
    spec: &CayleySpec,
    lambda: f64,
    tol: f64,
) -> Result<LpOutcome, CertifyError> {
    let table = character_spectrum(spec);
    let chars = table.characters_for(lambda, tol);
    if chars.is_empty() {
        return Err(CertifyError::NotAnEigenvalue(lambda));
    }
    let (a, b) = lp_system(&table, &chars);
    let sol = phase1_simplex(&a, &b);
    if sol.infeasibility > LP_INFEASIBLE {
        return Ok(LpOutcome::NotInPolytope {
            infeasibility: sol.infeasibility,
        });
    }
    if sol.infeasibility > LP_FEASIBLE {
        return Ok(LpOutcome::Degenerate {
            infeasibility: sol.infeasibility,
            reason: "phase-1 optimum between the feasibility thresholds".into(),
        });
    }
    let k = chars.len();
    let mut c: Vec<f64> = sol.x.iter().take(k).map(|&x| x.max(0.0)).collect();
    let total: f64 = c.iter().sum();
    c.iter_mut().for_each(|x| *x /= total);
    let t = (sol.x[k] - sol.x[k + 1]) * table.len() as f64;

    if let Err(reason) = verify_complex(&table, &chars, &c, lambda) {
        return Ok(LpOutcome::Degenerate {
            infeasibility: sol.infeasibility,
            reason,
        });
    }
    let real = real_eigenvector(&table, &chars, &c, lambda);
    Ok(LpOutcome::Certified(CharacterCertificate {
        eigenvalue: lambda,
        characters: chars,
        coefficients: c,
        t,
        infeasibility: sol.infeasibility,
        complex_only: real.is_none(),
        real_eigenvector: real.map(|v| v.iter().copied().collect()),
    }))
}

/// Embedding implied by `c`: columns `√c_j Re χ^j` and `√c_j Im χ^j`, with
/// all-zero columns dropped.
pub fn character_embedding(
    table: &CharacterTable,
    chars: &[usize],
    c: &[f64],
    lambda: f64,
) -> Result<Embedding, CertifyError> {
    let n = table.len();
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for (&j, &cj) in chars.iter().zip(c) {
        if cj <= 0.0 {
            continue;
        }
        let v = table.vector(j);
        let w = cj.sqrt();
        let re = DVector::from_fn(n, |i, _| w * v[i].re);
        let im = DVector::from_fn(n, |i, _| w * v[i].im);
        for col in [re, im] {
            if col.amax() > 1e-12 * w {
                cols.push(col);
            }
        }
    }
    let g = cayley_abelian(table.spec());
    let points = DMatrix::from_columns(&cols);
    Ok(Embedding::new(
        &unit_laplacian(&g),
        points,
        lambda,
        EmbeddingSource::Explicit,
    )?)
}

fn verify_complex(
    table: &CharacterTable,
    chars: &[usize],
    c: &[f64],
    lambda: f64,
) -> Result<(), String> {
    let e = character_embedding(table, chars, c, lambda).map_err(|e| e.to_string())?;
    let g = cayley_abelian(table.spec());
    let prof = edge_length_profile(&e, &g, crate::embeddings::DEFAULT_ISO_TOL);
    if prof.is_edge_isometric {
        Ok(())
    } else {
        Err(format!(
            "reconstructed embedding is not edge-isometric (lengths {}..{})",
            prof.min_length, prof.max_length
        ))
    }
}

/// Pairs each character with its conjugate `χ^{-j}`, pools their weights and
/// returns `φ = Σ √(2 c_j') Re χ^j` (`√c_j χ^j` for real characters) when
/// `Σ_g φ(g) φ(g+s)` is verified to be constant over `S` and `φ ∈ E_λ`.
fn real_eigenvector(
    table: &CharacterTable,
    chars: &[usize],
    c: &[f64],
    lambda: f64,
) -> Option<DVector<f64>> {
    let spec = table.spec();
    let n = table.len();
    let mut phi = DVector::zeros(n);
    for (pos, &j) in chars.iter().enumerate() {
        let neg = spec.index(&spec.neg(&spec.element(j)));
        let pooled = if neg == j {
            c[pos]
        } else if neg > j {
            // the conjugate has the same eigenvalue, so it is in `chars`
            let other = chars.iter().position(|&x| x == neg)?;
            2.0 * (c[pos] + c[other])
        } else {
            continue;
        };
        if pooled <= 0.0 {
            continue;
        }
        let v = table.vector(j);
        phi += DVector::from_fn(n, |i, _| pooled.sqrt() * v[i].re);
    }
    let norm2 = phi.norm_squared();
    if norm2 == 0.0 {
        return None;
    }
    let g = cayley_abelian(spec);
    crate::embeddings::check_eigenvector(&unit_laplacian(&g), &phi, lambda).ok()?;
    let sums: Vec<f64> = spec
        .gens()
        .iter()
        .map(|s| {
            (0..n)
                .map(|x| phi[x] * phi[spec.index(&spec.add(&spec.element(x), s))])
                .sum()
        })
        .collect();
    let spread = sums.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - sums.iter().cloned().fold(f64::INFINITY, f64::min);
    (spread <= 1e-9 * norm2).then_some(phi)
}
