//! Simple undirected graphs, their constructors and weighted Laplacians.
//!
//! Vertices are dense indices `0..n`. Edges are stored as sorted, deduplicated
//! pairs `(i, j)` with `i < j`; every per-edge quantity in the crate (weights,
//! lengths, orbit ids) is aligned with that order.

mod catalog;
mod constructors;
mod edgelist;
mod graph6;
mod laplacian;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use catalog::{catalog, CATALOG_NAMES};
pub use constructors::{cartesian_product, cayley_abelian, circulant, circulant_spec, CayleySpec};
pub use edgelist::{emit_edge_list, parse_edge_list};
pub use graph6::{emit_graph6, parse_graph6};
pub use laplacian::{laplacian, unit_laplacian};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("empty graph6 record")]
    EmptyRecord,
    #[error("byte {byte:#04x} at offset {offset} is outside the printable graph6 range 63..=126")]
    InvalidChar { offset: usize, byte: u8 },
    #[error("graph6 record needs {expected} data bytes, found {found}")]
    TruncatedBits { expected: usize, found: usize },
    #[error("graph6 record has {extra} unexpected trailing bytes")]
    TrailingBytes { extra: usize },
    #[error("graph with {n} vertices is too large for graph6 (limit 2^18 - 1)")]
    TooLarge { n: usize },
    #[error("edge ({0}, {1}) is a loop")]
    Loop(usize, usize),
    #[error("edge ({i}, {j}) references a vertex outside 0..{n}")]
    VertexOutOfRange { i: usize, j: usize, n: usize },
    #[error("generator set is empty")]
    EmptyGenerators,
    #[error("generator set contains the identity element")]
    IdentityGenerator,
    #[error("generator set is not closed under negation: {0:?} has no inverse in S")]
    NonSymmetricGenerators(Vec<u64>),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("weight vector has {found} entries but the graph has {expected} edges")]
    WeightLengthMismatch { expected: usize, found: usize },
    #[error("weight {value} on edge {edge} is negative or not finite")]
    NegativeWeight { edge: usize, value: f64 },
    #[error("unknown catalog graph {0:?}")]
    UnknownName(String),
    #[error("edge list parse error on line {line}: {msg}")]
    EdgeList { line: usize, msg: String },
}

/// An undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<Vec<u64>>>,
    name: Option<String>,
}

impl Graph {
    /// Builds a graph, normalizing each pair to `i < j` and sorting/deduplicating
    /// the edge list.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange { i: a, j: b, n });
            }
            if a == b {
                return Err(GraphError::Loop(a, b));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self {
            n,
            edges: list,
            labels: None,
            name: None,
        })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            labels: None,
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Attaches per-vertex group-element annotations. Labels never act as keys.
    pub fn with_labels(mut self, labels: Vec<Vec<u64>>) -> Self {
        debug_assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[Vec<u64>]> {
        self.labels.as_deref()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Index of edge `{i, j}` in [`Graph::edges`].
    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.edge_index(i, j).is_some()
    }

    /// Sorted adjacency lists.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// Common degree, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let first = *deg.first()?;
        deg.iter().all(|&d| d == first).then_some(first)
    }

    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            2.0 * self.m() as f64 / self.n as f64
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let adj = self.adjacency_lists();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == self.n
    }

    /// Whether the edges admit a proper 2-colouring.
    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency_lists();
        let mut colour = vec![u8::MAX; self.n];
        for start in 0..self.n {
            if colour[start] != u8::MAX {
                continue;
            }
            colour[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &u in &adj[v] {
                    if colour[u] == u8::MAX {
                        colour[u] = 1 - colour[v];
                        queue.push_back(u);
                    } else if colour[u] == colour[v] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Nonnegative edge weights aligned with [`Graph::edges`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self, GraphError> {
        if let Some((edge, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(GraphError::NegativeWeight { edge, value });
        }
        Ok(Self(values))
    }

    /// All-ones weights for `m` edges.
    pub fn unit(m: usize) -> Self {
        Self(vec![1.0; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Rescales so that the weights sum to the number of edges (equivalently,
    /// the sum over ordered pairs is `2|E|`). Zero vectors are returned as-is.
    pub fn normalized(&self) -> Self {
        let total = self.total();
        if total <= 0.0 {
            return self.clone();
        }
        let scale = self.0.len() as f64 / total;
        Self(self.0.iter().map(|w| w * scale).collect())
    }

    pub fn is_normalized(&self) -> bool {
        let target = self.0.len() as f64;
        (self.total() - target).abs() <= 1e-12 * target.max(1.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|w| w * factor).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_normalizes_and_dedups() {
        let g = Graph::new(4, [(2, 1), (0, 3), (1, 2), (3, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 3), (1, 2)]);
        assert_eq!(g.edge_index(2, 1), Some(1));
        assert!(!g.has_edge(0, 1));
    }

    #[test]
    fn rejects_loops_and_out_of_range() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::Loop(1, 1)));
        assert!(matches!(
            Graph::new(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn connectivity_and_bipartiteness() {
        let path = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(path.is_connected());
        assert!(path.is_bipartite());
        let split = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!split.is_connected());
        let tri = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!tri.is_bipartite());
    }

    #[test]
    fn weight_normalization() {
        let w = WeightVector::new(vec![1.0, 3.0, 0.0, 4.0]).unwrap();
        let nw = w.normalized();
        assert!(nw.is_normalized());
        assert!((nw.as_slice()[1] - 1.5).abs() < 1e-15);
        assert!(WeightVector::new(vec![1.0, -0.5]).is_err());
        assert!(WeightVector::new(vec![f64::NAN]).is_err());
    }
}
