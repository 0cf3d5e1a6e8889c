use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// A finite abelian group `Z_{n1} x ... x Z_{nr}` together with a symmetric
/// generator set `S`. Group elements are coordinate vectors reduced modulo the
/// orders; vertex indices enumerate the group in mixed-radix order with the
/// first coordinate most significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleySpec {
    orders: Vec<u64>,
    gens: Vec<Vec<u64>>,
}

impl CayleySpec {
    /// Validates and reduces the generators. `S` must be nonempty, free of the
    /// identity and closed under negation.
    pub fn new(orders: Vec<u64>, gens: Vec<Vec<i64>>) -> Result<Self, GraphError> {
        if orders.is_empty() || orders.iter().any(|&o| o < 1) {
            return Err(GraphError::InvalidGroup(format!(
                "cyclic orders must be positive, got {orders:?}"
            )));
        }
        if orders
            .iter()
            .try_fold(1u64, |acc, &o| acc.checked_mul(o))
            .is_none_or(|total| total > (1 << 24))
        {
            return Err(GraphError::InvalidGroup("group too large".into()));
        }
        if gens.is_empty() {
            return Err(GraphError::EmptyGenerators);
        }
        let mut reduced: Vec<Vec<u64>> = Vec::with_capacity(gens.len());
        for g in gens {
            if g.len() != orders.len() {
                return Err(GraphError::InvalidGroup(format!(
                    "generator {g:?} has {} coordinates, group has {}",
                    g.len(),
                    orders.len()
                )));
            }
            let r: Vec<u64> = g
                .iter()
                .zip(&orders)
                .map(|(&x, &o)| x.rem_euclid(o as i64) as u64)
                .collect();
            if r.iter().all(|&x| x == 0) {
                return Err(GraphError::IdentityGenerator);
            }
            if !reduced.contains(&r) {
                reduced.push(r);
            }
        }
        let spec = Self {
            orders,
            gens: reduced,
        };
        for g in &spec.gens {
            let neg = spec.neg(g);
            if !spec.gens.contains(&neg) {
                return Err(GraphError::NonSymmetricGenerators(g.clone()));
            }
        }
        Ok(spec)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// The symmetric generator set, in insertion order.
    pub fn gens(&self) -> &[Vec<u64>] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// `|Γ|`.
    pub fn order(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    pub fn element(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &o) in out.iter_mut().zip(&self.orders).rev() {
            *slot = (index % o as usize) as u64;
            index /= o as usize;
        }
        out
    }

    pub fn index(&self, element: &[u64]) -> usize {
        element
            .iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&x, &o)| acc * o as usize + x as usize)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &o)| (x + y) % o)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &o)| (o - x) % o)
            .collect()
    }

    /// Whether `S` generates the whole group (equivalently, the Cayley graph is
    /// connected).
    pub fn generates_group(&self) -> bool {
        cayley_abelian(self).is_connected()
    }

    /// Translation permutations `g -> g + e_t`, one per cyclic factor. They
    /// generate the regular action of Γ on its Cayley graph.
    pub fn translation_generators(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..self.rank())
            .filter(|&t| self.orders[t] > 1)
            .map(|t| {
                let mut unit = vec![0u64; self.rank()];
                unit[t] = 1;
                (0..n)
                    .map(|i| self.index(&self.add(&self.element(i), &unit)))
                    .collect()
            })
            .collect()
    }
}

/// Symmetrizes `s` modulo `n` and builds the corresponding cyclic spec.
pub fn circulant_spec(n: u64, s: &[i64]) -> Result<CayleySpec, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidGroup(format!(
            "circulant order must be at least 3, got {n}"
        )));
    }
    if s.is_empty() {
        return Err(GraphError::EmptyGenerators);
    }
    let mut gens = Vec::with_capacity(2 * s.len());
    for &x in s {
        let r = x.rem_euclid(n as i64);
        if r == 0 {
            return Err(GraphError::IdentityGenerator);
        }
        gens.push(vec![r]);
        gens.push(vec![(n as i64 - r) % n as i64]);
    }
    CayleySpec::new(vec![n], gens)
}

/// `Cay(Z_n, ±S)`. Vertex `g` is adjacent to `g ± s mod n`.
pub fn circulant(n: u64, s: &[i64]) -> Result<Graph, GraphError> {
    let spec = circulant_spec(n, s)?;
    let mut name = format!("circulant_{n}");
    for x in s {
        name.push('_');
        name.push_str(&x.to_string());
    }
    Ok(cayley_abelian(&spec).with_name(name))
}

/// The Cayley graph of an abelian group on a symmetric generator set.
pub fn cayley_abelian(spec: &CayleySpec) -> Graph {
    let n = spec.order();
    let mut edges = Vec::with_capacity(n * spec.gens().len() / 2);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let g = spec.element(i);
        for s in spec.gens() {
            let j = spec.index(&spec.add(&g, s));
            if i < j {
                edges.push((i, j));
            }
        }
        labels.push(g);
    }
    Graph::new(n, edges)
        .expect("Cayley edges are in range and loop-free")
        .with_labels(labels)
}

/// `G □ H`; vertex `(a, x)` has index `a * h.n() + x`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let hn = h.n();
    let mut edges = Vec::with_capacity(g.n() * h.m() + hn * g.m());
    for a in 0..g.n() {
        for &(x, y) in h.edges() {
            edges.push((a * hn + x, a * hn + y));
        }
    }
    for &(a, b) in g.edges() {
        for x in 0..hn {
            edges.push((a * hn + x, b * hn + x));
        }
    }
    let product = Graph::new(g.n() * hn, edges).expect("product edges are valid");
    match (g.name(), h.name()) {
        (Some(a), Some(b)) => product.with_name(format!("{a}_x_{b}")),
        _ => product,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn circulant_18_1_5() {
        let g = circulant(18, &[1, 5]).unwrap();
        assert_eq!((g.n(), g.m()), (18, 36));
        assert_eq!(g.regular_degree(), Some(4));
        assert_eq!(g.labels().unwrap()[7], vec![7]);
    }

    #[test]
    fn circulant_5_is_cycle() {
        let g = circulant(5, &[1]).unwrap();
        assert_eq!(g.edges(), catalog("cycle_5").unwrap().edges());
    }

    #[test]
    fn circulant_21_1_6() {
        let g = circulant(21, &[1, 6]).unwrap();
        assert_eq!((g.n(), g.m(), g.regular_degree()), (21, 42, Some(4)));
    }

    #[test]
    fn circulant_errors() {
        assert_eq!(circulant(6, &[]), Err(GraphError::EmptyGenerators));
        assert_eq!(circulant(6, &[6]), Err(GraphError::IdentityGenerator));
        assert!(circulant(2, &[1]).is_err());
    }

    #[test]
    fn half_order_generator_counts_once() {
        let g = circulant(6, &[3]).unwrap();
        assert_eq!(g.regular_degree(), Some(1));
    }

    #[test]
    fn cayley_k4() {
        let spec = CayleySpec::new(vec![2, 2], vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let g = cayley_abelian(&spec);
        assert_eq!(g.edges(), catalog("complete_4").unwrap().edges());
    }

    #[test]
    fn cayley_z18_matches_circulant() {
        let spec = CayleySpec::new(vec![18], vec![vec![1], vec![-1], vec![5], vec![-5]]).unwrap();
        assert_eq!(
            cayley_abelian(&spec).edges(),
            circulant(18, &[1, 5]).unwrap().edges()
        );
    }

    #[test]
    fn cayley_torus_matches_product() {
        let spec = CayleySpec::new(
            vec![3, 3],
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
        )
        .unwrap();
        let torus = cayley_abelian(&spec);
        let c3 = catalog("cycle_3").unwrap();
        assert_eq!(torus.edges(), cartesian_product(&c3, &c3).edges());
        assert_eq!(torus.regular_degree(), Some(4));
    }

    #[test]
    fn cayley_rejects_non_symmetric() {
        assert_eq!(
            CayleySpec::new(vec![5], vec![vec![1]]),
            Err(GraphError::NonSymmetricGenerators(vec![1]))
        );
        assert_eq!(
            CayleySpec::new(vec![5], vec![vec![0]]),
            Err(GraphError::IdentityGenerator)
        );
    }

    #[test]
    fn generation_detects_subgroups() {
        let spec = CayleySpec::new(vec![6], vec![vec![2], vec![4]]).unwrap();
        assert!(!spec.generates_group());
        assert!(circulant_spec(7, &[2]).unwrap().generates_group());
    }

    #[test]
    fn translations_are_automorphisms() {
        let spec = circulant_spec(10, &[1, 3]).unwrap();
        let g = cayley_abelian(&spec);
        for perm in spec.translation_generators() {
            for &(i, j) in g.edges() {
                assert!(g.has_edge(perm[i], perm[j]));
            }
        }
    }

    #[test]
    fn small_products() {
        let k2 = catalog("complete_2").unwrap();
        let c4 = cartesian_product(&k2, &k2);
        assert_eq!(c4.m(), 4);
        assert_eq!(c4.regular_degree(), Some(2));
        assert!(c4.is_connected());
        let prism = cartesian_product(&catalog("cycle_3").unwrap(), &k2);
        assert_eq!((prism.n(), prism.m()), (6, 9));
    }

    #[test]
    fn product_edge_count_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let random = |rng: &mut ChaCha8Rng| {
                let n = rng.gen_range(1..7);
                let mut e = Vec::new();
                for j in 1..n {
                    for i in 0..j {
                        if rng.gen_bool(0.5) {
                            e.push((i, j));
                        }
                    }
                }
                Graph::new(n, e).unwrap()
            };
            let (g, h) = (random(&mut rng), random(&mut rng));
            let p = cartesian_product(&g, &h);
            // brute force: count adjacent pairs by the definition
            let mut count = 0;
            for u in 0..p.n() {
                for v in (u + 1)..p.n() {
                    let (a, x) = (u / h.n(), u % h.n());
                    let (b, y) = (v / h.n(), v % h.n());
                    if (a == b && h.has_edge(x, y)) || (x == y && g.has_edge(a, b)) {
                        count += 1;
                    }
                }
            }
            assert_eq!(p.m(), count);
            assert_eq!(p.m(), g.n() * h.m() + h.n() * g.m());
        }
    }
}
