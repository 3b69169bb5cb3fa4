//! Paths in trees and best-scoring paths in the complete graph.

use crate::corpus::{Alignment, DependencyTree};
use crate::error::{Error, Result};

use super::{Direction, ProjectedPath};

/// The unique undirected simple path between tokens `a` and `b` in the
/// tree, as a node list from `a` to `b` inclusive. The artificial root 0
/// can appear as an interior node when the endpoints hang off different
/// root children. `a == b` gives the empty list.
pub fn tree_path(tree: &DependencyTree, a: usize, b: usize) -> Vec<usize> {
    let n = tree.len();
    assert!(a >= 1 && a <= n && b >= 1 && b <= n, "endpoints out of range");
    if a == b {
        return Vec::new();
    }
    // Chains of ancestors up to and including the root.
    let chain = |mut node: usize| {
        let mut nodes = vec![node];
        while node != 0 {
            node = tree.head_of(node);
            nodes.push(node);
        }
        nodes
    };
    let chain_a = chain(a);
    let chain_b = chain(b);
    // Depth of each node on b's chain, for the lowest common ancestor scan.
    let mut b_depth = vec![usize::MAX; n + 1];
    for (depth, &node) in chain_b.iter().enumerate() {
        b_depth[node] = depth;
    }
    let mut path = Vec::new();
    let mut lca_depth_in_b = 0;
    for &node in &chain_a {
        path.push(node);
        if b_depth[node] != usize::MAX {
            lca_depth_in_b = b_depth[node];
            break;
        }
    }
    for depth in (0..lca_depth_in_b).rev() {
        path.push(chain_b[depth]);
    }
    path
}

/// Map both endpoints of an edge through the alignment. An endpoint with
/// several counterparts takes the smallest index; an unaligned endpoint, or
/// both endpoints landing on the same token, makes the edge unprojectable.
pub fn project_endpoints(
    alignment: &Alignment,
    a: usize,
    b: usize,
    direction: Direction,
) -> Option<(usize, usize)> {
    let map = |idx: usize| match direction {
        Direction::SrcToTgt => alignment.min_target(idx),
        Direction::TgtToSrc => alignment.min_source(idx),
    };
    let pa = map(a)?;
    let pb = map(b)?;
    if pa == pb {
        None
    } else {
        Some((pa, pb))
    }
}

/// The maximum-score simple path with exactly `k` edges from `from` to `to`
/// in the complete undirected graph over tokens 1..=n.
///
/// Interior nodes are enumerated in ascending lexicographic order and only
/// a strictly better score displaces the incumbent, so ties resolve to the
/// lexicographically smallest interior sequence. `k == 1` returns the
/// direct edge without consulting the scorer. Fails when no simple path of
/// length `k` exists, i.e. `k > n - 1`.
pub fn best_path<F>(
    endpoints: (usize, usize),
    k: usize,
    edge_scorer: F,
    n: usize,
) -> Result<ProjectedPath>
where
    F: Fn(usize, usize) -> f64,
{
    let (from, to) = endpoints;
    assert!(from != to, "path endpoints must differ");
    assert!(
        from >= 1 && from <= n && to >= 1 && to <= n,
        "endpoints out of range"
    );
    assert!((1..=5).contains(&k), "path length must be in 1..=5");
    if k > n - 1 {
        return Err(Error::Projection(format!(
            "no simple path with {k} edges exists over {n} tokens"
        )));
    }
    if k == 1 {
        return ProjectedPath::new(vec![from, to]);
    }

    let mut used = vec![false; n + 1];
    used[from] = true;
    used[to] = true;
    let mut interior = Vec::with_capacity(k - 1);
    let mut best: Option<(f64, Vec<usize>)> = None;
    search(
        from,
        to,
        k,
        n,
        &edge_scorer,
        &mut used,
        &mut interior,
        0.0,
        &mut best,
    );
    let (_, interior) = best.expect("k <= n-1 guarantees at least one path");
    let mut nodes = Vec::with_capacity(k + 1);
    nodes.push(from);
    nodes.extend(interior);
    nodes.push(to);
    ProjectedPath::new(nodes)
}

#[allow(clippy::too_many_arguments)]
fn search<F>(
    current: usize,
    to: usize,
    k: usize,
    n: usize,
    edge_scorer: &F,
    used: &mut Vec<bool>,
    interior: &mut Vec<usize>,
    score_so_far: f64,
    best: &mut Option<(f64, Vec<usize>)>,
) where
    F: Fn(usize, usize) -> f64,
{
    if interior.len() == k - 1 {
        let total = score_so_far + edge_scorer(current, to);
        let better = match best {
            None => true,
            Some((best_score, _)) => total > *best_score,
        };
        if better {
            *best = Some((total, interior.clone()));
        }
        return;
    }
    for next in 1..=n {
        if used[next] {
            continue;
        }
        used[next] = true;
        interior.push(next);
        search(
            next,
            to,
            k,
            n,
            edge_scorer,
            used,
            interior,
            score_so_far + edge_scorer(current, next),
            best,
        );
        interior.pop();
        used[next] = false;
    }
}

#[cfg(test)]
pub(crate) mod test_oracles {
    use std::collections::VecDeque;

    use crate::corpus::DependencyTree;

    /// Breadth-first search over the tree's undirected edges (root node 0
    /// included); independent of the ancestor-chain construction.
    pub fn bfs_tree_path(tree: &DependencyTree, a: usize, b: usize) -> Vec<usize> {
        if a == b {
            return Vec::new();
        }
        let n = tree.len();
        let mut adj = vec![Vec::new(); n + 1];
        for (h, d) in tree.edges() {
            adj[h].push(d);
            adj[d].push(h);
        }
        let mut prev = vec![usize::MAX; n + 1];
        prev[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(node) = queue.pop_front() {
            if node == b {
                break;
            }
            for &next in &adj[node] {
                if prev[next] == usize::MAX {
                    prev[next] = node;
                    queue.push_back(next);
                }
            }
        }
        let mut path = vec![b];
        let mut node = b;
        while node != a {
            node = prev[node];
            path.push(node);
        }
        path.reverse();
        path
    }

    /// Every simple path with exactly k edges, scored; returns the best by
    /// (score, then lexicographically smallest interior sequence).
    pub fn exhaustive_best_path<F>(
        endpoints: (usize, usize),
        k: usize,
        edge_scorer: F,
        n: usize,
    ) -> Option<(f64, Vec<usize>)>
    where
        F: Fn(usize, usize) -> f64,
    {
        fn visit<F: Fn(usize, usize) -> f64>(
            nodes: &mut Vec<usize>,
            to: usize,
            k: usize,
            n: usize,
            scorer: &F,
            all: &mut Vec<(f64, Vec<usize>)>,
        ) {
            if nodes.len() == k {
                let mut full = nodes.clone();
                full.push(to);
                let score = full.windows(2).map(|w| scorer(w[0], w[1])).sum();
                all.push((score, full));
                return;
            }
            for next in 1..=n {
                if next != to && !nodes.contains(&next) {
                    nodes.push(next);
                    visit(nodes, to, k, n, scorer, all);
                    nodes.pop();
                }
            }
        }
        let (from, to) = endpoints;
        if k == 1 {
            return Some((edge_scorer(from, to), vec![from, to]));
        }
        let mut all = Vec::new();
        visit(&mut vec![from], to, k, n, &edge_scorer, &mut all);
        all.into_iter().reduce(|best, cand| {
            if cand.0 > best.0 || (cand.0 == best.0 && cand.1 < best.1) {
                cand
            } else {
                best
            }
        })
    }
}
