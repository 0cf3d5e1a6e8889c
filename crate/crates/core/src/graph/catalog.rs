use super::{parse_graph6, Graph, GraphError};

/// Names understood by [`catalog`]. Parametric families take their size
/// parameters as `_`-separated suffixes, e.g. `cycle_7` or
/// `complete_bipartite_2_3`.
pub const CATALOG_NAMES: &[&str] = &[
    "path_<n>",
    "cycle_<n>",
    "complete_<n>",
    "complete_bipartite_<a>_<b>",
    "hypercube_<d>",
    "petersen",
    "triangular_prism",
    "hoffman",
    "shrikhande_complement",
];

// Fixed graphs are stored as graph6 so that vertex orderings (and therefore
// eigenvectors and orbit representatives quoted in tests) are bit-exact.
//
// petersen: outer 5-cycle 0..4, spokes i -- i+5, inner pentagram i+5 -- (i+2)%5+5.
const PETERSEN: &str = "IheA@GUAo";
// triangular_prism: Cay(Z_6, {±2, 3}); triangles {0,2,4}, {1,3,5}, rungs i -- i+3.
const TRIANGULAR_PRISM: &str = "EUxo";
// hoffman: the Godsil-McKay switch of the 4-cube on a 4-cycle; the unique graph
// cospectral with but not isomorphic to Q_4. Bipartite, 4-regular, |Aut| = 48.
const HOFFMAN: &str = "OaD`SCSYP@O`AGc?_POAJ";
// shrikhande_complement: complement of Cay(Z_4 x Z_4, {±(1,0), ±(0,1), ±(1,1)})
// under a relabelling in which the vectors
//   (0,0,1,-1,-1,1,0,-1,0,0,0,0,0,0,0,1)/sqrt(6)
//   (2,-1,-1,0,-1,-1,0,1,0,0,0,0,0,0,1,0)/sqrt(10)
// are Laplacian eigenvectors for the eigenvalue 8.
const SHRIKHANDE_COMPLEMENT: &str = "OISk|rKzvV]ULznXYmVkR";

/// Looks up a named graph.
pub fn catalog(name: &str) -> Result<Graph, GraphError> {
    let unknown = || GraphError::UnknownName(name.to_string());
    let fixed = |g6: &str| parse_graph6(g6).map(|g| g.with_name(name));
    match name {
        "petersen" => return fixed(PETERSEN),
        "triangular_prism" => return fixed(TRIANGULAR_PRISM),
        "hoffman" => return fixed(HOFFMAN),
        "shrikhande_complement" => return fixed(SHRIKHANDE_COMPLEMENT),
        _ => {}
    }

    let (family, params) = split_params(name).ok_or_else(unknown)?;
    let g = match (family, params.as_slice()) {
        ("path", &[n]) if n >= 1 => Graph::new(n, (1..n).map(|i| (i - 1, i)))?,
        ("cycle", &[n]) if n >= 3 => Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))?,
        ("complete", &[n]) if n >= 1 => {
            Graph::new(n, (0..n).flat_map(|j| (0..j).map(move |i| (i, j))))?
        }
        ("complete_bipartite", &[a, b]) if a >= 1 && b >= 1 => {
            Graph::new(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))))?
        }
        ("hypercube", &[d]) if d <= 16 => {
            let n = 1usize << d;
            Graph::new(
                n,
                (0..n).flat_map(|v| (0..d).map(move |b| (v, v ^ (1 << b)))),
            )?
        }
        _ => return Err(unknown()),
    };
    Ok(g.with_name(name))
}

/// Splits `complete_bipartite_2_3` into `("complete_bipartite", [2, 3])`.
fn split_params(name: &str) -> Option<(&str, Vec<usize>)> {
    let mut cut = name.len();
    let mut params = Vec::new();
    while let Some(pos) = name[..cut].rfind('_') {
        match name[pos + 1..cut].parse::<usize>() {
            Ok(v) => {
                params.push(v);
                cut = pos;
            }
            Err(_) => break,
        }
    }
    if params.is_empty() {
        return None;
    }
    params.reverse();
    Some((&name[..cut], params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cartesian_product, emit_graph6};

    #[test]
    fn fixed_graphs_have_expected_shape() {
        let hoffman = catalog("hoffman").unwrap();
        assert_eq!((hoffman.n(), hoffman.m()), (16, 32));
        assert_eq!(hoffman.regular_degree(), Some(4));
        assert!(hoffman.is_bipartite());

        let sc = catalog("shrikhande_complement").unwrap();
        assert_eq!((sc.n(), sc.m()), (16, 72));
        assert_eq!(sc.regular_degree(), Some(9));

        let pet = catalog("petersen").unwrap();
        assert_eq!((pet.n(), pet.m(), pet.regular_degree()), (10, 15, Some(3)));

        let prism = catalog("triangular_prism").unwrap();
        assert_eq!(
            (prism.n(), prism.m(), prism.regular_degree()),
            (6, 9, Some(3))
        );
    }

    #[test]
    fn prism_is_c3_times_k2_up_to_relabeling() {
        // (a, x) -> a*2 + x in the product; Z_6 label g = 2a + 3x mod 6 in the catalog.
        let product = cartesian_product(
            &catalog("cycle_3").unwrap(),
            &catalog("complete_2").unwrap(),
        );
        let prism = catalog("triangular_prism").unwrap();
        let map = |v: usize| (2 * (v / 2) + 3 * (v % 2)) % 6;
        for &(u, v) in product.edges() {
            assert!(prism.has_edge(map(u), map(v)));
        }
        assert_eq!(product.m(), prism.m());
    }

    #[test]
    fn families() {
        assert_eq!(
            catalog("path_4").unwrap().edges(),
            &[(0, 1), (1, 2), (2, 3)]
        );
        assert_eq!(catalog("cycle_5").unwrap().m(), 5);
        assert_eq!(catalog("complete_6").unwrap().m(), 15);
        let kab = catalog("complete_bipartite_2_3").unwrap();
        assert_eq!((kab.n(), kab.m()), (5, 6));
        let q4 = catalog("hypercube_4").unwrap();
        assert_eq!((q4.n(), q4.m(), q4.regular_degree()), (16, 32, Some(4)));
        assert_eq!(catalog("path_4").unwrap().name(), Some("path_4"));
    }

    #[test]
    fn unknown_names() {
        for bad in [
            "nope",
            "cycle_2",
            "cycle",
            "complete_bipartite_3",
            "cycle_x",
        ] {
            assert!(
                matches!(catalog(bad), Err(GraphError::UnknownName(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn constructor_outputs_are_normalized_and_round_trip() {
        for name in [
            "path_7",
            "cycle_9",
            "complete_5",
            "complete_bipartite_3_4",
            "hypercube_3",
            "petersen",
            "triangular_prism",
            "hoffman",
            "shrikhande_complement",
        ] {
            let g = catalog(name).unwrap();
            assert!(g.edges().windows(2).all(|w| w[0] < w[1]));
            assert!(g.edges().iter().all(|&(i, j)| i < j && j < g.n()));
            let back = parse_graph6(&emit_graph6(&g).unwrap()).unwrap();
            assert_eq!(back.edges(), g.edges());
        }
    }
}
