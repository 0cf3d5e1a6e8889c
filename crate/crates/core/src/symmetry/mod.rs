//! Permutation groups acting on graphs: orbits, transitivity, explicit group
//! enumeration and a bounded automorphism search.

mod group;
mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

pub use group::{enumerate_group, Group, DEFAULT_GROUP_CAP};
pub use search::{find_automorphisms, AutomorphismSearch, DEFAULT_NODE_BUDGET, MAX_SEARCH_N};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("generator {index} is not a bijection on 0..{n}")]
    NotPermutation { index: usize, n: usize },
    #[error("generator {index} has length {found}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("generator {generator} maps edge {edge:?} to non-edge {image:?}")]
    NotAutomorphism {
        generator: usize,
        edge: (usize, usize),
        image: (usize, usize),
    },
    #[error("graph has {n} vertices; automorphism search is capped at {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("group has more than {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("generator file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Generators of a permutation group on `0..n`, each as an image array
/// `perm[i] = σ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationSet {
    n: usize,
    gens: Vec<Vec<usize>>,
}

impl PermutationSet {
    pub fn new(n: usize, gens: Vec<Vec<usize>>) -> Result<Self, SymmetryError> {
        for (index, g) in gens.iter().enumerate() {
            if g.len() != n {
                return Err(SymmetryError::LengthMismatch {
                    index,
                    expected: n,
                    found: g.len(),
                });
            }
            let mut seen = vec![false; n];
            for &x in g {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(SymmetryError::NotPermutation { index, n });
                }
            }
        }
        Ok(Self { n, gens })
    }

    /// The trivial group (no generators).
    pub fn trivial(n: usize) -> Self {
        Self {
            n,
            gens: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Vec<usize>] {
        &self.gens
    }

    pub fn is_trivial(&self) -> bool {
        self.gens
            .iter()
            .all(|g| g.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// Appends generators, dropping identities and duplicates.
    pub fn extended(&self, more: &[Vec<usize>]) -> Result<Self, SymmetryError> {
        let mut gens = self.gens.clone();
        for g in more {
            if !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        Self::new(self.n, gens)
    }

    /// Checks that every generator maps edges of `g` to edges.
    pub fn check_automorphisms(&self, g: &Graph) -> Result<(), SymmetryError> {
        if self.n != g.n() {
            return Err(SymmetryError::LengthMismatch {
                index: 0,
                expected: g.n(),
                found: self.n,
            });
        }
        for (generator, perm) in self.gens.iter().enumerate() {
            for &(i, j) in g.edges() {
                let image = (perm[i], perm[j]);
                if !g.has_edge(image.0, image.1) {
                    return Err(SymmetryError::NotAutomorphism {
                        generator,
                        edge: (i, j),
                        image,
                    });
                }
            }
        }
        Ok(())
    }

    /// Parses one permutation per line (`π(0) π(1) … π(n-1)`). Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, SymmetryError> {
        let mut gens = Vec::new();
        let mut n = None;
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perm: Vec<usize> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|e| SymmetryError::Parse {
                        line: k + 1,
                        msg: format!("{t:?}: {e}"),
                    })
                })
                .collect::<Result<_, _>>()?;
            match n {
                None => n = Some(perm.len()),
                Some(n) if n != perm.len() => {
                    return Err(SymmetryError::Parse {
                        line: k + 1,
                        msg: format!("expected {n} images, found {}", perm.len()),
                    })
                }
                _ => {}
            }
            gens.push(perm);
        }
        let n = n.ok_or(SymmetryError::Parse {
            line: 1,
            msg: "no permutations found".into(),
        })?;
        Self::new(n, gens)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.gens {
            let line: Vec<String> = g.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Vertex and edge orbits of a permutation group acting on a graph. Blocks are
/// sorted internally and ordered by their smallest member, which is also the
/// block's representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitPartition {
    vertex_orbits: Vec<Vec<usize>>,
    edge_orbits: Vec<Vec<usize>>,
    #[serde(skip)]
    vertex_orbit_of: Vec<usize>,
    #[serde(skip)]
    edge_orbit_of: Vec<usize>,
}

impl OrbitPartition {
    pub fn vertex_orbits(&self) -> &[Vec<usize>] {
        &self.vertex_orbits
    }

    /// Edge orbits as lists of edge indices into [`Graph::edges`].
    pub fn edge_orbits(&self) -> &[Vec<usize>] {
        &self.edge_orbits
    }

    pub fn vertex_orbit_of(&self, v: usize) -> usize {
        self.vertex_orbit_of[v]
    }

    pub fn edge_orbit_of(&self, e: usize) -> usize {
        self.edge_orbit_of[e]
    }

    /// Smallest edge index of each edge orbit.
    pub fn edge_representatives(&self) -> Vec<usize> {
        self.edge_orbits.iter().map(|o| o[0]).collect()
    }

    pub fn num_vertex_orbits(&self) -> usize {
        self.vertex_orbits.len()
    }

    pub fn num_edge_orbits(&self) -> usize {
        self.edge_orbits.len()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller root so roots are block minima
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }

    fn blocks(mut self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let n = self.0.len();
        let mut block_of_root = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut of = vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            if block_of_root[r] == usize::MAX {
                block_of_root[r] = blocks.len();
                blocks.push(Vec::new());
            }
            of[x] = block_of_root[r];
            blocks[of[x]].push(x);
        }
        (blocks, of)
    }
}

/// Orbits of `p` on the vertices and edges of `g`.
pub fn orbits(g: &Graph, p: &PermutationSet) -> Result<OrbitPartition, SymmetryError> {
    p.check_automorphisms(g)?;
    let mut vuf = UnionFind::new(g.n());
    let mut euf = UnionFind::new(g.m());
    for perm in p.gens() {
        for (v, &img) in perm.iter().enumerate() {
            vuf.union(v, img);
        }
        for (e, &(i, j)) in g.edges().iter().enumerate() {
            let img = g
                .edge_index(perm[i], perm[j])
                .expect("checked automorphism");
            euf.union(e, img);
        }
    }
    let (vertex_orbits, vertex_orbit_of) = vuf.blocks();
    let (edge_orbits, edge_orbit_of) = euf.blocks();
    Ok(OrbitPartition {
        vertex_orbits,
        edge_orbits,
        vertex_orbit_of,
        edge_orbit_of,
    })
}

/// Transitivity on vertices under the group generated by `p`.
pub fn is_vertex_transitive(g: &Graph, p: &PermutationSet) -> Result<bool, SymmetryError> {
    Ok(orbits(g, p)?.num_vertex_orbits() == 1)
}

/// Transitivity on edges under the group generated by `p`.
pub fn is_edge_transitive(g: &Graph, p: &PermutationSet) -> Result<bool, SymmetryError> {
    Ok(orbits(g, p)?.num_edge_orbits() <= 1)
}

/// The rotation `i -> i + 1 mod n`.
pub fn rotation(n: usize) -> PermutationSet {
    PermutationSet {
        n,
        gens: vec![(0..n).map(|i| (i + 1) % n).collect()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{catalog, circulant};

    #[test]
    fn cycle_rotation() {
        let g = catalog("cycle_6").unwrap();
        let o = orbits(&g, &rotation(6)).unwrap();
        assert_eq!((o.num_vertex_orbits(), o.num_edge_orbits()), (1, 1));
        assert!(is_vertex_transitive(&g, &rotation(6)).unwrap());
        assert!(is_edge_transitive(&g, &rotation(6)).unwrap());
    }

    #[test]
    fn circulant_two_edge_orbits() {
        let g = circulant(18, &[1, 5]).unwrap();
        let o = orbits(&g, &rotation(18)).unwrap();
        assert_eq!((o.num_vertex_orbits(), o.num_edge_orbits()), (1, 2));
        // first orbit holds the step-1 edges, represented by (0, 1)
        let reps = o.edge_representatives();
        assert_eq!(g.edges()[reps[0]], (0, 1));
        assert_eq!(g.edges()[reps[1]], (0, 5));
        for (k, &(i, j)) in g.edges().iter().enumerate() {
            let step = (j - i).min(18 - (j - i));
            assert_eq!(o.edge_orbit_of(k), usize::from(step == 5));
        }
    }

    #[test]
    fn not_automorphism_reports_pair() {
        let g = catalog("path_4").unwrap();
        let err = orbits(&g, &rotation(4)).unwrap_err();
        assert_eq!(
            err,
            SymmetryError::NotAutomorphism {
                generator: 0,
                edge: (2, 3),
                image: (3, 0)
            }
        );
    }

    #[test]
    fn validation_and_file_format() {
        assert!(PermutationSet::new(3, vec![vec![0, 0, 1]]).is_err());
        assert!(PermutationSet::new(3, vec![vec![0, 1]]).is_err());
        let p = PermutationSet::parse("# rotation\n1 2 3 0\n\n3 2 1 0\n").unwrap();
        assert_eq!(p.n(), 4);
        assert_eq!(PermutationSet::parse(&p.to_text()).unwrap(), p);
        assert!(PermutationSet::parse("1 0\n0 1 2\n").is_err());
        assert!(PermutationSet::parse("a b\n").is_err());
        assert!(PermutationSet::trivial(3).is_trivial());
    }

    #[test]
    fn adding_generators_never_adds_edge_orbits() {
        let g = catalog("hypercube_3").unwrap();
        let aut = find_automorphisms(&g, DEFAULT_NODE_BUDGET).unwrap();
        let mut p = PermutationSet::trivial(g.n());
        let mut last = orbits(&g, &p).unwrap().num_edge_orbits();
        for gen in aut.generators().gens() {
            p = p.extended(std::slice::from_ref(gen)).unwrap();
            let now = orbits(&g, &p).unwrap().num_edge_orbits();
            assert!(now <= last);
            last = now;
        }
        assert_eq!(last, 1);
    }
}
