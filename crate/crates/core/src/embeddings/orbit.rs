use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use super::EmbeddingError;
use crate::graph::{unit_laplacian, CayleySpec, Graph};
use crate::spectra::CharacterTable;
use crate::symmetry::{Group, OrbitPartition};

/// One value per edge orbit, ordered like [`OrbitPartition::edge_orbits`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitVector {
    pub values: Vec<f64>,
    /// Representative edge of each orbit.
    pub representatives: Vec<(usize, usize)>,
}

impl OrbitVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest pairwise difference between entries.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        if self.values.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    pub fn is_constant(&self, tol: f64) -> bool {
        self.spread() <= tol
    }
}

/// `φ_Ψ`: for each edge orbit, `Σ_{σ∈Ψ} φ_{σ(i)} φ_{σ(j)}` at the orbit
/// representative. Fails if `φ` is not a Laplacian eigenvector, or if some
/// orbit member disagrees with its representative (the orbits do not belong
/// to `group`).
pub fn phi_psi(
    g: &Graph,
    phi: &DVector<f64>,
    group: &Group,
    orbits: &OrbitPartition,
) -> Result<OrbitVector, EmbeddingError> {
    if phi.len() != g.n() || group.n() != g.n() {
        return Err(EmbeddingError::DimensionMismatch {
            expected: g.n(),
            found: phi.len().min(group.n()),
        });
    }
    let l = unit_laplacian(g);
    let norm2 = phi.norm_squared();
    if norm2 == 0.0 {
        return Err(EmbeddingError::ZeroVector);
    }
    let rayleigh = phi.dot(&(&l * phi)) / norm2;
    super::check_eigenvector(&l, phi, rayleigh)?;

    let pair_sum = |i: usize, j: usize| -> f64 {
        group
            .iter()
            .map(|s| phi[s[i] as usize] * phi[s[j] as usize])
            .sum()
    };
    let mut values = Vec::with_capacity(orbits.num_edge_orbits());
    let mut representatives = Vec::with_capacity(orbits.num_edge_orbits());
    let scale = group.order() as f64 * phi.amax().powi(2);
    for orbit in orbits.edge_orbits() {
        let (i, j) = g.edges()[orbit[0]];
        let value = pair_sum(i, j);
        for &e in &orbit[1..] {
            let (a, b) = g.edges()[e];
            let other = pair_sum(a, b);
            if (other - value).abs() > 1e-9 * scale {
                return Err(EmbeddingError::HypothesisViolated(format!(
                    "orbit sum at edge ({a}, {b}) is {other}, representative ({i}, {j}) has {value}"
                )));
            }
        }
        values.push(value);
        representatives.push((i, j));
    }
    Ok(OrbitVector {
        values,
        representatives,
    })
}

/// `χ_Γ = (|Γ| · conj(χ^k(s)))_{s∈S}` in the order of `spec.gens()`.
pub fn chi_gamma(table: &CharacterTable, k: usize) -> Vec<Complex64> {
    let order = table.len() as f64;
    let out: Vec<Complex64> = table
        .spec()
        .gens()
        .iter()
        .map(|s| table.value(k, s).conj() * order)
        .collect();
    if cfg!(debug_assertions) && table.len() <= 256 {
        for (a, b) in out.iter().zip(chi_gamma_sum(table, k)) {
            debug_assert!((a - b).norm() <= 1e-9 * order);
        }
    }
    out
}

/// `χ_Γ` by direct summation `Σ_g χ^k(g) conj(χ^k(g + s))`.
pub fn chi_gamma_sum(table: &CharacterTable, k: usize) -> Vec<Complex64> {
    let spec: &CayleySpec = table.spec();
    let chi = table.vector(k);
    spec.gens()
        .iter()
        .map(|s| {
            (0..table.len())
                .map(|g| {
                    let gs = spec.index(&spec.add(&spec.element(g), s));
                    chi[g] * chi[gs].conj()
                })
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{catalog, circulant, circulant_spec};
    use crate::spectra::{character_spectrum, GraphSpectrum};
    use crate::symmetry::{enumerate_group, find_automorphisms, orbits, rotation};
    use std::f64::consts::PI;

    #[test]
    fn z18_chi_gamma() {
        // half set {1, 5}
        let spec = CayleySpec::new(vec![18], vec![vec![1], vec![5], vec![17], vec![13]]).unwrap();
        let t = character_spectrum(&spec);
        let v3 = chi_gamma(&t, 3);
        assert!((v3[0] - Complex64::from_polar(18.0, -PI / 3.0)).norm() < 1e-12);
        assert!((v3[1] - Complex64::from_polar(18.0, PI / 3.0)).norm() < 1e-12);
        let v15 = chi_gamma(&t, 15);
        for s in 0..2 {
            let avg = (v3[s] + v15[s]) * 0.5;
            assert!((avg - Complex64::new(9.0, 0.0)).norm() < 1e-12);
        }
        for z in chi_gamma(&t, 0) {
            assert!((z - Complex64::new(18.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_sum() {
        for spec in [
            circulant_spec(12, &[1, 5]).unwrap(),
            CayleySpec::new(
                vec![3, 3],
                vec![vec![1, 0], vec![2, 0], vec![1, 1], vec![2, 2]],
            )
            .unwrap(),
        ] {
            let t = character_spectrum(&spec);
            for k in 0..t.len() {
                for (a, b) in chi_gamma(&t, k).iter().zip(chi_gamma_sum(&t, k)) {
                    assert!((a - b).norm() <= 1e-10 * t.len() as f64);
                }
            }
        }
    }

    #[test]
    fn paper_vector_on_z18() {
        let g = circulant(18, &[1, 5]).unwrap();
        let phi = DVector::from_fn(18, |i, _| [-1.0, -1.0, 0.0, 1.0, 1.0, 0.0][i % 6]);
        let p = rotation(18);
        let group = enumerate_group(&p, 100).unwrap();
        let o = orbits(&g, &p).unwrap();
        let v = phi_psi(&g, &phi, &group, &o).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.is_constant(1e-12));
        // with Ψ = Γ the orbit sum is the plain sum Σ_g φ(g)φ(g + s)
        let plain = |s: usize| (0..18).map(|x| phi[x] * phi[(x + s) % 18]).sum::<f64>();
        assert!((plain(1) - 6.0).abs() < 1e-12 && (plain(5) - 6.0).abs() < 1e-12);
        assert!((v.values[0] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn well_defined_across_orbit_members() {
        let g = catalog("shrikhande_complement").unwrap();
        let s = GraphSpectrum::of(&g, None).unwrap();
        let aut = find_automorphisms(&g, 1 << 20).unwrap();
        let group = enumerate_group(aut.generators(), 1000).unwrap();
        let o = orbits(&g, aut.generators()).unwrap();
        let phi = s.decomposition().basis(1).column(3).into_owned();
        let v = phi_psi(&g, &phi, &group, &o).unwrap();
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn single_orbit_on_edge_transitive_graph() {
        let g = catalog("petersen").unwrap();
        let s = GraphSpectrum::of(&g, None).unwrap();
        let aut = find_automorphisms(&g, 1 << 20).unwrap();
        let group = enumerate_group(aut.generators(), 1000).unwrap();
        let o = orbits(&g, aut.generators()).unwrap();
        let phi = s.decomposition().basis(1).column(0).into_owned();
        assert_eq!(phi_psi(&g, &phi, &group, &o).unwrap().len(), 1);
    }
}
