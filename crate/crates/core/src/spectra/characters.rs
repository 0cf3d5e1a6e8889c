use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::SpectraError;
use crate::graph::{circulant_spec, CayleySpec};

/// Characters of `Γ = Z_{n1} x ... x Z_{nr}` and the Laplacian eigenvalue each
/// one carries on `Cay(Γ, S)`. Characters are indexed like group elements:
/// index `k` corresponds to `spec.element(k)`.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    spec: CayleySpec,
    eigenvalues: Vec<f64>,
}

pub fn character_spectrum(spec: &CayleySpec) -> CharacterTable {
    let eigenvalues = (0..spec.order())
        .map(|k| {
            let kv = spec.element(k);
            spec.gens()
                .iter()
                .map(|s| 1.0 - phase(spec, &kv, s).cos())
                .sum()
        })
        .collect();
    CharacterTable {
        spec: spec.clone(),
        eigenvalues,
    }
}

/// `2π Σ k_t g_t / n_t`.
fn phase(spec: &CayleySpec, k: &[u64], g: &[u64]) -> f64 {
    k.iter()
        .zip(g)
        .zip(spec.orders())
        .map(|((&k, &g), &n)| TAU * (((k * g) % n) as f64) / n as f64)
        .sum()
}

impl CharacterTable {
    pub fn spec(&self) -> &CayleySpec {
        &self.spec
    }

    /// `|Γ|`.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `λ_k = Σ_{s∈S} (1 - Re χ^k(s))`, summed over the full symmetric `S`.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.eigenvalues[k]
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `χ^k(g) = exp(2πi Σ k_t g_t / n_t)`.
    pub fn value(&self, k: usize, g: &[u64]) -> Complex64 {
        Complex64::from_polar(1.0, phase(&self.spec, &self.spec.element(k), g))
    }

    /// `χ^k` as a vector over the group in vertex order.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let kv = self.spec.element(k);
        (0..self.len())
            .map(|g| Complex64::from_polar(1.0, phase(&self.spec, &kv, &self.spec.element(g))))
            .collect()
    }

    /// Characters whose eigenvalue lies within `tol` of `lambda`, ascending.
    pub fn characters_for(&self, lambda: f64, tol: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| (self.eigenvalues[k] - lambda).abs() <= tol)
            .collect()
    }
}

/// Extremal nonzero eigenvalues of `Cay(Z_{3n}, {±1, ±(n-1)})`.
#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct CurveExtremes {
    pub n: u64,
    /// Smallest `k ≥ 1` attaining the smallest nonzero eigenvalue.
    pub argmin: usize,
    /// Smallest `k ≥ 1` attaining the largest eigenvalue.
    pub argmax: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Range of `λ_k` over `k ∉ 3Z`.
    pub off_lattice_range: (f64, f64),
    /// Whether the observed extremes sit at `3` and `3⌊n/2⌋` with the
    /// off-lattice values inside `[2, 6]`.
    pub matches_prediction: bool,
}

pub fn circulant_curve_extremes(n: u64) -> Result<CurveExtremes, SpectraError> {
    if n < 6 {
        return Err(SpectraError::NTooSmall(n));
    }
    let spec = circulant_spec(3 * n, &[1, n as i64 - 1])?;
    let table = character_spectrum(&spec);
    let tol = 1e-9;
    let vals = table.eigenvalues();
    let (mut argmin, mut argmax) = (1, 1);
    for k in 1..vals.len() {
        if vals[k] < vals[argmin] - tol {
            argmin = k;
        }
        if vals[k] > vals[argmax] + tol {
            argmax = k;
        }
    }
    let (lo, hi) = (1..vals.len())
        .filter(|k| k % 3 != 0)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| {
            (lo.min(vals[k]), hi.max(vals[k]))
        });
    let predicted_max = 3 * (n as usize / 2);
    Ok(CurveExtremes {
        n,
        argmin,
        argmax,
        lambda_min: vals[argmin],
        lambda_max: vals[argmax],
        off_lattice_range: (lo, hi),
        matches_prediction: argmin == 3
            && argmax == predicted_max
            && lo >= 2.0 - tol
            && hi <= 6.0 + tol,
    })
}
