use num_bigint::BigUint;
use serde::Serialize;

use super::{PermutationSet, SymmetryError};
use crate::graph::Graph;

/// Default cap on the number of vertices accepted by [`find_automorphisms`].
pub const MAX_SEARCH_N: usize = 512;
/// Default search-tree node budget.
pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

/// Result of an automorphism search.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AutomorphismSearch {
    generators: PermutationSet,
    #[serde(serialize_with = "serialize_order")]
    order: Option<BigUint>,
    exhausted: bool,
    nodes: usize,
}

fn serialize_order<S: serde::Serializer>(o: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match o {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

impl AutomorphismSearch {
    /// Generators found. When the budget ran out they generate a subgroup
    /// of `Aut(G)`.
    pub fn generators(&self) -> &PermutationSet {
        &self.generators
    }

    pub fn into_generators(self) -> PermutationSet {
        self.generators
    }

    /// `|Aut(G)|` as the product of the stabilizer-chain orbit lengths;
    /// `None` if the budget ran out.
    pub fn order(&self) -> Option<&BigUint> {
        self.order.as_ref()
    }

    /// Whether the node budget was exhausted.
    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }
}

/// Ordered partition of the vertex set.
type Cells = Vec<Vec<usize>>;

struct Ctx<'a> {
    adj: &'a [Vec<usize>],
    matrix: Vec<bool>,
    n: usize,
    nodes: usize,
    budget: usize,
}

impl Ctx<'_> {
    fn charge(&mut self) -> bool {
        self.nodes += 1;
        self.nodes <= self.budget
    }
}

/// Iterated neighbour-count refinement to an equitable partition. Returns the
/// refined cells and a trace of every split; two partitions related by an
/// automorphism produce identical traces.
fn refine(adj: &[Vec<usize>], n: usize, mut cells: Cells) -> (Cells, Vec<u64>) {
    let mut trace = Vec::new();
    let mut counts = vec![0u64; n];
    'outer: loop {
        for s in 0..cells.len() {
            counts.iter_mut().for_each(|c| *c = 0);
            for &v in &cells[s] {
                for &u in &adj[v] {
                    counts[u] += 1;
                }
            }
            let mut next: Cells = Vec::with_capacity(cells.len() + 1);
            let mut split = false;
            for (ci, cell) in cells.iter().enumerate() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut sorted = cell.clone();
                sorted.sort_by_key(|&v| (counts[v], v));
                let mut start = 0;
                let before = next.len();
                for k in 1..=sorted.len() {
                    if k == sorted.len() || counts[sorted[k]] != counts[sorted[start]] {
                        next.push(sorted[start..k].to_vec());
                        start = k;
                    }
                }
                if next.len() - before > 1 {
                    split = true;
                    trace.push(((s as u64) << 32) | ci as u64);
                    for piece in &next[before..] {
                        trace.push((counts[piece[0]] << 32) | piece.len() as u64);
                    }
                }
            }
            if split {
                cells = next;
                continue 'outer;
            }
        }
        break;
    }
    (cells, trace)
}

fn individualize(cells: &Cells, cell: usize, v: usize) -> Cells {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for (ci, c) in cells.iter().enumerate() {
        if ci == cell {
            out.push(vec![v]);
            out.push(c.iter().copied().filter(|&x| x != v).collect());
        } else {
            out.push(c.clone());
        }
    }
    out
}

fn same_shape(a: &Cells, b: &Cells) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.len() == y.len())
}

/// One level of the base path: the partition, the cell to individualize and
/// the base point chosen in it.
struct Level {
    cells: Cells,
    target: usize,
    base: usize,
}

/// Searches for a generating set of `Aut(g)` by individualization and
/// equitable refinement, building a stabilizer chain from the bottom up.
pub fn find_automorphisms(g: &Graph, budget: usize) -> Result<AutomorphismSearch, SymmetryError> {
    let n = g.n();
    if n > MAX_SEARCH_N {
        return Err(SymmetryError::TooLarge {
            n,
            cap: MAX_SEARCH_N,
        });
    }
    let adj = g.adjacency_lists();
    let mut matrix = vec![false; n * n];
    for &(i, j) in g.edges() {
        matrix[i * n + j] = true;
        matrix[j * n + i] = true;
    }
    let mut ctx = Ctx {
        adj: &adj,
        matrix,
        n,
        nodes: 0,
        budget,
    };

    // Base path: always individualize the first smallest non-singleton cell.
    let mut path: Vec<Level> = Vec::new();
    let mut traces: Vec<Vec<u64>> = Vec::new();
    let (mut cells, _) = refine(
        &adj,
        n,
        if n == 0 {
            vec![]
        } else {
            vec![(0..n).collect()]
        },
    );
    while let Some(target) = pick_cell(&cells) {
        let base = cells[target][0];
        let (next, trace) = refine(&adj, n, individualize(&cells, target, base));
        path.push(Level {
            cells,
            target,
            base,
        });
        traces.push(trace);
        cells = next;
    }
    let leaf = cells;

    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut order = BigUint::from(1u32);
    let mut exhausted = false;
    for level in (0..path.len()).rev() {
        let Level {
            cells,
            target,
            base,
        } = &path[level];
        let mut orbit = orbit_of(*base, &gens, n);
        for &x in &cells[*target] {
            if exhausted {
                break;
            }
            if orbit[x] {
                continue;
            }
            let (right, trace) = refine(&adj, n, individualize(cells, *target, x));
            if trace != traces[level] || !same_shape(&right, next_cells(&path, level, &leaf)) {
                continue;
            }
            match descend(&mut ctx, &path, &traces, &leaf, level + 1, right) {
                Descent::Found(perm) => {
                    gens.push(perm);
                    orbit = orbit_of(*base, &gens, n);
                }
                Descent::None => {}
                Descent::Exhausted => exhausted = true,
            }
        }
        if exhausted {
            break;
        }
        order *= BigUint::from(orbit.iter().filter(|&&b| b).count());
    }

    Ok(AutomorphismSearch {
        generators: PermutationSet::new(n, gens).expect("search yields bijections"),
        order: (!exhausted).then_some(order),
        exhausted,
        nodes: ctx.nodes,
    })
}

fn pick_cell(cells: &Cells) -> Option<usize> {
    cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(i, c)| (c.len(), *i))
        .map(|(i, _)| i)
}

fn next_cells<'a>(path: &'a [Level], level: usize, leaf: &'a Cells) -> &'a Cells {
    path.get(level + 1).map_or(leaf, |l| &l.cells)
}

enum Descent {
    Found(Vec<usize>),
    None,
    Exhausted,
}

/// Extends the right-hand partition along the base path; at the leaf the cell
/// correspondence defines a candidate permutation.
fn descend(
    ctx: &mut Ctx<'_>,
    path: &[Level],
    traces: &[Vec<u64>],
    leaf: &Cells,
    level: usize,
    right: Cells,
) -> Descent {
    if !ctx.charge() {
        return Descent::Exhausted;
    }
    if level == path.len() {
        let mut perm = vec![0; ctx.n];
        for (l, r) in leaf.iter().zip(&right) {
            perm[l[0]] = r[0];
        }
        let ok = (0..ctx.n).all(|i| {
            ctx.adj[i]
                .iter()
                .all(|&j| ctx.matrix[perm[i] * ctx.n + perm[j]])
        });
        return if ok {
            Descent::Found(perm)
        } else {
            Descent::None
        };
    }
    let target = path[level].target;
    for &y in &right[target] {
        let (next, trace) = refine(ctx.adj, ctx.n, individualize(&right, target, y));
        if trace != traces[level] || !same_shape(&next, next_cells(path, level, leaf)) {
            continue;
        }
        match descend(ctx, path, traces, leaf, level + 1, next) {
            Descent::None => {}
            other => return other,
        }
    }
    Descent::None
}

fn orbit_of(v: usize, gens: &[Vec<usize>], n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[v] = true;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g[x];
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}
