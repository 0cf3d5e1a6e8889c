use std::collections::{HashSet, VecDeque};

use super::{PermutationSet, SymmetryError};

/// Default cap on explicitly enumerated groups.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// All elements of a permutation group, identity first, in BFS order over the
/// generators.
#[derive(Debug, Clone)]
pub struct Group {
    n: usize,
    elements: Vec<Vec<u32>>,
}

impl Group {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Iterates over elements as image arrays.
    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.elements.iter().map(|e| e.as_slice())
    }

    pub fn element(&self, k: usize) -> &[u32] {
        &self.elements[k]
    }
}

/// Closes the generators under composition; fails once more than `cap`
/// elements are found.
pub fn enumerate_group(p: &PermutationSet, cap: usize) -> Result<Group, SymmetryError> {
    let n = p.n();
    let identity: Vec<u32> = (0..n as u32).collect();
    let gens: Vec<Vec<u32>> = p
        .gens()
        .iter()
        .map(|g| g.iter().map(|&x| x as u32).collect())
        .collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity.clone()];
    let mut queue = VecDeque::from([identity]);
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            // (g ∘ e)(i) = g(e(i))
            let composed: Vec<u32> = e.iter().map(|&x| g[x as usize]).collect();
            if seen.insert(composed.clone()) {
                if elements.len() == cap {
                    return Err(SymmetryError::GroupTooLarge { cap });
                }
                elements.push(composed.clone());
                queue.push_back(composed);
            }
        }
    }
    Ok(Group { n, elements })
}
