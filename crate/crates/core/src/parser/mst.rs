//! Exact arborescence decoding.
//!
//! [`decode_mst`] finds the maximum-scoring dependency tree by recursive
//! cycle contraction. [`brute_force_decode`] enumerates every tree; it
//! exists so the fast decoder can be cross-checked and is only usable for
//! short sentences.
//!
//! Both decoders break score ties identically: every candidate edge gets a
//! rank by enumerating (head, dependent) pairs with the head ascending and
//! the dependent ascending within a head, and among equal-scoring trees the
//! one whose ascending-sorted rank vector is lexicographically smallest
//! wins. The fast decoder realizes this rule algebraically: edge weights
//! carry a signed multiset of ranks next to the score, and contraction adds
//! and subtracts those multisets exactly, so no tie is ever resolved by
//! iteration order or floating-point accident.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::corpus::DependencyTree;

use super::ScoreMatrix;

/// Signed multiset of edge ranks. Order: walk ranks ascending; at the first
/// rank where multiplicities differ, the side holding more copies owns more
/// of a smaller rank and compares greater (= is preferred). For two plain
/// edge sets of equal size this is exactly "ascending-sorted rank vector is
/// lexicographically smaller", and it stays a total order compatible with
/// addition on signed combinations, which contraction needs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct TieBreak(BTreeMap<u32, i32>);

impl TieBreak {
    fn single(rank: u32) -> Self {
        let mut m = BTreeMap::new();
        m.insert(rank, 1);
        TieBreak(m)
    }

    #[cfg(test)]
    fn add(&mut self, other: &TieBreak) {
        for (&rank, &mult) in &other.0 {
            let entry = self.0.entry(rank).or_insert(0);
            *entry += mult;
            if *entry == 0 {
                self.0.remove(&rank);
            }
        }
    }

    fn sub(&mut self, other: &TieBreak) {
        for (&rank, &mult) in &other.0 {
            let entry = self.0.entry(rank).or_insert(0);
            *entry -= mult;
            if *entry == 0 {
                self.0.remove(&rank);
            }
        }
    }
}

impl Ord for TieBreak {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter().peekable();
        let mut b = other.0.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some((_, &va)), None) => {
                    return if va > 0 { Ordering::Greater } else { Ordering::Less }
                }
                (None, Some((_, &vb))) => {
                    return if vb > 0 { Ordering::Less } else { Ordering::Greater }
                }
                (Some((ka, &va)), Some((kb, &vb))) => {
                    if ka < kb {
                        return if va > 0 { Ordering::Greater } else { Ordering::Less };
                    }
                    if kb < ka {
                        return if vb > 0 { Ordering::Less } else { Ordering::Greater };
                    }
                    if va != vb {
                        return if va > vb { Ordering::Greater } else { Ordering::Less };
                    }
                    a.next();
                    b.next();
                }
            }
        }
    }
}

impl PartialOrd for TieBreak {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An edge weight or a signed combination of edge weights: the score plus
/// the tie-break multiset. Scores are always finite here.
#[derive(Debug, Clone, PartialEq)]
struct Weight {
    score: f64,
    tie: TieBreak,
}

impl Eq for Weight {}

impl Weight {
    fn edge(score: f64, rank: u32) -> Self {
        debug_assert!(score.is_finite());
        Weight {
            score,
            tie: TieBreak::single(rank),
        }
    }

    fn minus(&self, other: &Weight) -> Weight {
        let mut tie = self.tie.clone();
        tie.sub(&other.tie);
        Weight {
            score: self.score - other.score,
            tie,
        }
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .partial_cmp(&other.score)
            .expect("weight scores are finite")
            .then_with(|| self.tie.cmp(&other.tie))
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Rank of each candidate edge: heads ascending, dependents ascending
/// within a head. `table[h][d]` is `None` for invalid cells.
fn edge_rank_table(n: usize) -> Vec<Vec<Option<u32>>> {
    let mut table = vec![vec![None; n + 1]; n + 1];
    let mut rank = 0u32;
    for (h, row) in table.iter_mut().enumerate() {
        for (d, cell) in row.iter_mut().enumerate().skip(1) {
            if h != d {
                *cell = Some(rank);
                rank += 1;
            }
        }
    }
    table
}

type WeightMatrix = Vec<Vec<Option<Weight>>>;

/// A cycle among the currently-best incoming edges, if one exists: the set
/// of node indices on the cycle.
fn find_cycle(parent: &[usize]) -> Option<Vec<usize>> {
    let size = parent.len();
    // 0 = unvisited, 1 = on current walk, 2 = finished or root.
    let mut color = vec![0u8; size];
    color[0] = 2;
    for start in 1..size {
        if color[start] != 0 {
            continue;
        }
        let mut node = start;
        while color[node] == 0 {
            color[node] = 1;
            node = parent[node];
        }
        if color[node] == 1 {
            // Walked back into our own path: collect the cycle.
            let mut cycle = vec![node];
            let mut cur = parent[node];
            while cur != node {
                cycle.push(cur);
                cur = parent[cur];
            }
            return Some(cycle);
        }
        let mut cur = start;
        while color[cur] == 1 {
            color[cur] = 2;
            cur = parent[cur];
        }
    }
    None
}

/// Maximum arborescence rooted at node 0 of a complete-enough weighted
/// digraph; returns the parent of each node 1..size.
fn solve(matrix: &WeightMatrix) -> Vec<usize> {
    let size = matrix.len();
    debug_assert!(size >= 2);

    // Best incoming edge for every non-root node. Weights are pairwise
    // distinct (distinct edge sets have distinct tie-break multisets), so
    // the maximum is unique.
    let mut parent = vec![0usize; size];
    for v in 1..size {
        let mut best: Option<usize> = None;
        for (u, row) in matrix.iter().enumerate() {
            if let Some(w) = &row[v] {
                if best.is_none_or(|b| w > matrix[b][v].as_ref().unwrap()) {
                    best = Some(u);
                }
            }
        }
        parent[v] = best.expect("every node has an incoming candidate");
    }

    let Some(cycle) = find_cycle(&parent) else {
        return parent;
    };
    let in_cycle = {
        let mut mask = vec![false; size];
        for &v in &cycle {
            mask[v] = true;
        }
        mask
    };

    // Contract the cycle into one supernode, placed at the end.
    let mut old_of = vec![0usize]; // new index -> old index (root stays 0)
    let mut new_of = vec![usize::MAX; size];
    new_of[0] = 0;
    for v in 1..size {
        if !in_cycle[v] {
            new_of[v] = old_of.len();
            old_of.push(v);
        }
    }
    let supernode = old_of.len();
    let new_size = supernode + 1;

    let mut contracted: WeightMatrix = vec![vec![None; new_size]; new_size];
    // For an external node entering the supernode, which cycle node the
    // winning edge actually enters.
    let mut entry_node: Vec<Option<usize>> = vec![None; new_size];
    // For an external node fed from the supernode, which cycle node feeds it.
    let mut exit_node: Vec<Option<usize>> = vec![None; new_size];

    for u in 0..size {
        for v in 1..size {
            let Some(w) = &matrix[u][v] else { continue };
            match (in_cycle.get(u).copied().unwrap_or(false), in_cycle[v]) {
                (false, false) => {
                    contracted[new_of[u]][new_of[v]] = Some(w.clone());
                }
                (false, true) => {
                    // Entering the cycle at v displaces the cycle's own edge
                    // into v; weigh the swap.
                    let cycle_edge = matrix[parent[v]][v].as_ref().unwrap();
                    let candidate = w.minus(cycle_edge);
                    let nu = new_of[u];
                    let better = match &contracted[nu][supernode] {
                        None => true,
                        Some(cur) => candidate > *cur,
                    };
                    if better {
                        contracted[nu][supernode] = Some(candidate);
                        entry_node[nu] = Some(v);
                    }
                }
                (true, false) => {
                    let nv = new_of[v];
                    let better = match &contracted[supernode][nv] {
                        None => true,
                        Some(cur) => w > cur,
                    };
                    if better {
                        contracted[supernode][nv] = Some(w.clone());
                        exit_node[nv] = Some(u);
                    }
                }
                (true, true) => {}
            }
        }
    }

    let contracted_parent = solve(&contracted);

    // Expand the contracted solution back to this level's node space.
    let mut result = parent; // cycle edges stay unless displaced below
    for nv in 1..new_size {
        let np = contracted_parent[nv];
        if nv == supernode {
            // The edge chosen into the supernode enters the cycle at
            // entry_node[np] and displaces that node's cycle edge.
            let enter_at = entry_node[np].expect("supernode parent has an entry node");
            result[enter_at] = old_of[np];
        } else {
            let v = old_of[nv];
            if np == supernode {
                result[v] = exit_node[nv].expect("edge out of supernode has an exit node");
            } else {
                result[v] = old_of[np];
            }
        }
    }
    result
}

/// Decode the maximum-scoring dependency tree, with deterministic
/// tie-breaking (see the module docs). Returns the tree and its score,
/// summed over dependents in ascending order.
pub fn decode_mst(scores: &ScoreMatrix) -> (DependencyTree, f64) {
    let n = scores.n();
    let ranks = edge_rank_table(n);
    let mut matrix: WeightMatrix = vec![vec![None; n + 1]; n + 1];
    for h in 0..=n {
        for d in 1..=n {
            if let Some(rank) = ranks[h][d] {
                matrix[h][d] = Some(Weight::edge(scores.get(h, d), rank));
            }
        }
    }
    let parent = solve(&matrix);
    let heads: Vec<usize> = (1..=n).map(|d| parent[d]).collect();
    let tree = DependencyTree::new(heads).expect("decoder produced a valid tree");
    let score = scores.tree_score(&tree);
    (tree, score)
}

/// Enumerate every head assignment, keep the valid trees, and return the
/// best one under exactly the ordering [`decode_mst`] uses: score first,
/// then lexicographically smallest ascending-sorted edge-rank vector.
/// Reference implementation for cross-checking; panics above 7 tokens.
pub fn brute_force_decode(scores: &ScoreMatrix) -> (DependencyTree, f64) {
    let n = scores.n();
    assert!(n <= 7, "exhaustive decoding is exponential; use decode_mst");
    let ranks = edge_rank_table(n);

    let mut heads = vec![0usize; n];
    let mut best: Option<(f64, Vec<u32>, Vec<usize>)> = None;
    enumerate_heads(scores, &ranks, &mut heads, 1, &mut best);
    let (_, _, best_heads) = best.expect("at least the all-root tree is valid");
    let tree = DependencyTree::new(best_heads).unwrap();
    let score = scores.tree_score(&tree);
    (tree, score)
}

fn enumerate_heads(
    scores: &ScoreMatrix,
    ranks: &[Vec<Option<u32>>],
    heads: &mut Vec<usize>,
    dep: usize,
    best: &mut Option<(f64, Vec<u32>, Vec<usize>)>,
) {
    let n = scores.n();
    if dep > n {
        consider(scores, ranks, heads, best);
        return;
    }
    for h in 0..=n {
        if h != dep {
            heads[dep - 1] = h;
            enumerate_heads(scores, ranks, heads, dep + 1, best);
        }
    }
}

fn consider(
    scores: &ScoreMatrix,
    ranks: &[Vec<Option<u32>>],
    heads: &[usize],
    best: &mut Option<(f64, Vec<u32>, Vec<usize>)>,
) {
    let n = heads.len();
    // Arborescence check: every head chain must reach the root.
    for start in 1..=n {
        let mut node = start;
        let mut steps = 0;
        while node != 0 {
            node = heads[node - 1];
            steps += 1;
            if steps > n {
                return;
            }
        }
    }
    let score: f64 = (1..=n).map(|d| scores.get(heads[d - 1], d)).sum();
    let better = match best {
        None => true,
        Some((best_score, best_ranks, _)) => {
            if score != *best_score {
                score > *best_score
            } else {
                let mut rank_vec: Vec<u32> = (1..=n)
                    .map(|d| ranks[heads[d - 1]][d].unwrap())
                    .collect();
                rank_vec.sort_unstable();
                rank_vec < *best_ranks
            }
        }
    };
    if better {
        let mut rank_vec: Vec<u32> = (1..=n)
            .map(|d| ranks[heads[d - 1]][d].unwrap())
            .collect();
        rank_vec.sort_unstable();
        *best = Some((score, rank_vec, heads.to_vec()));
    }
}
