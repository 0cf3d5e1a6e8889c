//! Exact 0- and 1-walk regularity, and the equivalent test on canonical
//! embeddings: a regular graph is 1-walk regular exactly when every
//! eigenspace projector has constant diagonal and is constant across edges.

use num_bigint::BigUint;
use num_traits::{CheckedAdd, One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::spectra::{eigendecompose, EigenspaceDecomposition, SpectraError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("graph is not regular (degrees range over {min}..={max})")]
    NotRegular { min: usize, max: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Which walk counts disagreed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum WalkFailure {
    /// `(A^s)_{ii}` is not constant over vertices.
    Diagonal,
    /// `(A^s)_{ij}` is not constant over edges.
    Edge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FailingPower {
    pub power: usize,
    pub kind: WalkFailure,
    /// Pair holding the reference value (a vertex repeated for diagonal
    /// failures).
    pub reference: (usize, usize),
    /// Pair whose count differs from the reference.
    pub offending: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WalkRegularityReport {
    pub regular: bool,
    pub degree: usize,
    pub walk0: bool,
    pub walk1: bool,
    pub failing_power: Option<FailingPower>,
    /// Largest power `s` examined (all of `0..=powers_checked` were checked).
    pub powers_checked: usize,
    /// Whether the 128-bit counters overflowed and arbitrary precision was used.
    pub big_integers: bool,
}

fn check_regular(g: &Graph) -> Result<usize, WalkError> {
    if g.n() == 0 || !g.is_connected() {
        return Err(WalkError::Disconnected);
    }
    let deg = g.degrees();
    let (min, max) = (*deg.iter().min().unwrap(), *deg.iter().max().unwrap());
    if min != max {
        return Err(WalkError::NotRegular { min, max });
    }
    Ok(min)
}

/// Exact 0-/1-walk regularity from integer adjacency powers.
pub fn walk_regularity(g: &Graph) -> Result<WalkRegularityReport, WalkError> {
    let degree = check_regular(g)?;
    let n = g.n();
    // A regular graph's adjacency eigenvalues are d - (Laplacian eigenvalues).
    let distinct = eigendecompose(&crate::graph::unit_laplacian(g), None)?.len();
    let mut s_max = distinct.saturating_sub(1);
    if n <= 24 {
        s_max = s_max.max(n.saturating_sub(1));
    }
    let adj = g.adjacency_lists();
    let (failures, big) = match scan::<u128>(&adj, s_max) {
        Some(f) => (f, false),
        None => (
            scan::<BigUint>(&adj, s_max).expect("arbitrary precision"),
            true,
        ),
    };
    let diag = failures.iter().find(|f| f.kind == WalkFailure::Diagonal);
    let edge = failures.iter().find(|f| f.kind == WalkFailure::Edge);
    let walk0 = diag.is_none();
    let walk1 = walk0 && edge.is_none();
    Ok(WalkRegularityReport {
        regular: true,
        degree,
        walk0,
        walk1,
        failing_power: diag.or(edge).cloned(),
        powers_checked: s_max,
        big_integers: big,
    })
}

/// Per power, the first diagonal and edge disagreement, sorted by power.
/// `None` signals overflow of `T`.
fn scan<T>(adj: &[Vec<usize>], s_max: usize) -> Option<Vec<FailingPower>>
where
    T: Clone + PartialEq + Zero + One + CheckedAdd,
{
    let n = adj.len();
    let mut ref_diag: Vec<Option<(usize, T)>> = vec![None; s_max + 1];
    let mut ref_edge: Vec<Option<((usize, usize), T)>> = vec![None; s_max + 1];
    let mut diag_fail: Vec<Option<FailingPower>> = vec![None; s_max + 1];
    let mut edge_fail: Vec<Option<FailingPower>> = vec![None; s_max + 1];

    for i in 0..n {
        // x = A^s e_i
        let mut x: Vec<T> = vec![T::zero(); n];
        x[i] = T::one();
        for s in 0..=s_max {
            if s > 0 {
                let mut y = vec![T::zero(); n];
                for (v, nbrs) in adj.iter().enumerate() {
                    let mut acc = T::zero();
                    for &u in nbrs {
                        acc = acc.checked_add(&x[u])?;
                    }
                    y[v] = acc;
                }
                x = y;
            }
            match &ref_diag[s] {
                None => ref_diag[s] = Some((i, x[i].clone())),
                Some((r, val)) => {
                    if *val != x[i] && diag_fail[s].is_none() {
                        diag_fail[s] = Some(FailingPower {
                            power: s,
                            kind: WalkFailure::Diagonal,
                            reference: (*r, *r),
                            offending: (i, i),
                        });
                    }
                }
            }
            for &j in adj[i].iter().filter(|&&j| j > i) {
                match &ref_edge[s] {
                    None => ref_edge[s] = Some(((i, j), x[j].clone())),
                    Some((r, val)) => {
                        if *val != x[j] && edge_fail[s].is_none() {
                            edge_fail[s] = Some(FailingPower {
                                power: s,
                                kind: WalkFailure::Edge,
                                reference: *r,
                                offending: (i, j),
                            });
                        }
                    }
                }
            }
        }
    }
    Some(diag_fail.into_iter().chain(edge_fail).flatten().collect())
}

/// `A^s` with exact entries.
pub fn adjacency_power(g: &Graph, s: usize) -> Vec<Vec<BigUint>> {
    let n = g.n();
    let adj = g.adjacency_lists();
    let mut rows: Vec<Vec<BigUint>> = (0..n)
        .map(|i| (0..n).map(|j| BigUint::from(u8::from(i == j))).collect())
        .collect();
    for _ in 0..s {
        rows = rows
            .iter()
            .map(|row| {
                (0..n)
                    .map(|v| adj[v].iter().map(|&u| &row[u]).sum())
                    .collect()
            })
            .collect();
    }
    rows
}

/// Canonical-embedding form of 1-walk regularity: every eigenspace projector
/// `U Uᵀ` has constant diagonal and constant entries over edges (to `tol`).
pub fn canonical_walk1_check(g: &Graph, dec: &EigenspaceDecomposition) -> Result<bool, WalkError> {
    check_regular(g)?;
    Ok(canonical_walk1_check_with(g, dec, 1e-8))
}

pub(crate) fn canonical_walk1_check_with(
    g: &Graph,
    dec: &EigenspaceDecomposition,
    tol: f64,
) -> bool {
    let spread = |it: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        });
        hi - lo
    };
    (0..dec.len()).all(|idx| {
        let p = dec.projector(idx);
        spread(&mut (0..g.n()).map(|i| p[(i, i)])) <= tol
            && (g.m() == 0 || spread(&mut g.edges().iter().map(|&(i, j)| p[(i, j)])) <= tol)
    })
}
