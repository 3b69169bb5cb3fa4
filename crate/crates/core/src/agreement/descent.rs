//! The two inference loops: re-decoding one side against a fixed partner
//! tree (subgradient dual decomposition), and the outer alternation that
//! swaps which side is fixed until neither tree moves.

use crate::corpus::{BitextPair, DependencyTree};
use crate::error::{Error, Result};
use crate::parser::{decode_mst, edge_scores, ScoreMatrix};
use crate::projection::{
    best_path, four_node_features, path_edge_score, project_endpoints, ProjectedPath,
};

use super::{r_score, AgreementConfig, ConvergenceMode, DualState, ModelSet, Side};

/// One subgradient iteration's diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerRecord {
    /// 1-based iteration number.
    pub inner: usize,
    /// Value of the relaxed objective at the current prices: the decoded
    /// tree's modified score plus every predicted path's priced score.
    pub dual_value: f64,
    /// Path edges absent from the decoded tree (undirected), summed over
    /// all coupled edges.
    pub disagreements: usize,
    /// Whether this iteration's tree differs from the previous one (the
    /// plain parser decode before iteration 1).
    pub changed: bool,
}

/// Result of re-decoding one side against a fixed partner tree.
#[derive(Debug, Clone)]
pub struct ProjectOutcome {
    pub tree: DependencyTree,
    /// True when every predicted path lay inside the tree before the
    /// iteration budget ran out.
    pub converged: bool,
    /// Iterations actually used.
    pub inner_iters: usize,
    pub records: Vec<InnerRecord>,
    /// Prices as they stood at return, for certificate re-checks and
    /// diagnostics.
    pub duals: DualState,
}

impl ProjectOutcome {
    pub fn final_u_nonzero(&self) -> usize {
        self.duals.nonzero_count()
    }
}

/// One outer alternation round: both directions' outcomes.
#[derive(Debug, Clone)]
pub struct OuterRecord {
    /// 1-based round number.
    pub outer: usize,
    pub src: ProjectOutcome,
    pub tgt: ProjectOutcome,
}

/// Final state of the alternation.
#[derive(Debug, Clone)]
pub struct AgreementResult {
    pub src_tree: DependencyTree,
    pub tgt_tree: DependencyTree,
    /// Plain one-language decodes the alternation started from.
    pub baseline_src: DependencyTree,
    pub baseline_tgt: DependencyTree,
    /// Whether the last projection of each side reached full agreement.
    pub converged_src: bool,
    pub converged_tgt: bool,
    pub outer_iters_used: usize,
    /// True when the stopping rule fired, false when the round budget ran
    /// out with both trees still moving.
    pub stopped_early: bool,
    pub log: Vec<OuterRecord>,
}

/// A fixed-tree edge with everything its path subproblem needs: projected
/// endpoints, predicted length, and the price-free edge scores over the
/// decoded sentence, indexed `a * (n + 1) + b`.
struct EdgeTask {
    edge: (usize, usize),
    endpoints: (usize, usize),
    k_hat: usize,
    phi: Vec<f64>,
}

/// Re-decode `decode_side` of `pair` under pressure to agree with
/// `fixed_tree` on the opposite side.
///
/// Each iteration decodes a tree over parser scores plus a path-evidence
/// bonus minus the current prices, predicts the best path for every
/// projectable fixed-tree edge under its priced scorer, and stops when all
/// path edges lie inside the tree (undirected). Otherwise every
/// disagreeing (edge, token-pair) price moves one step against the side
/// that used the pair. Runs out of budget → last tree, `converged: false`.
///
/// A projection model with no weights carries no path evidence, so when
/// the fixed-to-decoded direction's model is zero the coupling is empty
/// and the plain parser decode is returned as already agreed.
pub fn project(
    pair: &BitextPair,
    fixed_tree: &DependencyTree,
    decode_side: Side,
    models: &ModelSet,
    cfg: &AgreementConfig,
) -> Result<ProjectOutcome> {
    cfg.validate()?;
    models.validate_for(pair)?;
    let fixed_sentence = decode_side.flipped().sentence(pair);
    if fixed_tree.len() != fixed_sentence.len() {
        return Err(Error::Mismatch(format!(
            "fixed tree has {} tokens but the sentence has {}",
            fixed_tree.len(),
            fixed_sentence.len()
        )));
    }
    let sentence = decode_side.sentence(pair);
    let n = sentence.len();
    let stride = n + 1;

    let theta = edge_scores(sentence, models.parser(decode_side));

    // Evidence for decoded-side edge candidates read off the fixed tree.
    let mut r = vec![0.0; stride * stride];
    for d in 1..=n {
        for h in 0..=n {
            if h == d {
                continue;
            }
            r[h * stride + d] = r_score((h, d), fixed_tree, decode_side, pair, models);
        }
    }

    // Path subproblems, one per projectable fixed-tree edge.
    let forward = decode_side.incoming_direction();
    let forward_model = models.projection(forward);
    let mut tasks: Vec<EdgeTask> = Vec::new();
    if !forward_model.is_zero() {
        for (h, d) in fixed_tree.edges() {
            if h == 0 {
                continue;
            }
            let Some(endpoints) = project_endpoints(pair.alignment(), h, d, forward) else {
                continue;
            };
            let features = four_node_features(pair, forward, (h, d), endpoints);
            let k_hat = forward_model.path_length.predict(&features).min(n - 1);
            let mut phi = vec![0.0; stride * stride];
            for a in 1..=n {
                for b in 1..=n {
                    if a == b {
                        continue;
                    }
                    phi[a * stride + b] = path_edge_score(
                        &forward_model.path_predictor,
                        k_hat,
                        (h, d),
                        (a, b),
                        pair,
                        forward,
                    );
                }
            }
            tasks.push(EdgeTask { edge: (h, d), endpoints, k_hat, phi });
        }
    }

    let mut u = DualState::new();
    let mut records = Vec::new();
    let (baseline, _) = decode_mst(&theta);
    let mut previous = baseline;

    for inner in 1..=cfg.inner_iters {
        u.begin_iteration();

        let mut modified = ScoreMatrix::new(n);
        for d in 1..=n {
            for h in 0..=n {
                if h == d {
                    continue;
                }
                let mut score = theta.get(h, d) + r[h * stride + d];
                if h >= 1 {
                    score -= u.pair_total((h, d));
                }
                modified.set(h, d, score);
            }
        }
        let (tree, tree_value) = decode_mst(&modified);

        let mut paths: Vec<ProjectedPath> = Vec::with_capacity(tasks.len());
        let mut dual_value = tree_value;
        let mut disagreements = 0usize;
        for task in &tasks {
            let path = best_path(
                task.endpoints,
                task.k_hat,
                |a, b| task.phi[a * stride + b] + u.get(task.edge, (a, b)),
                n,
            )?;
            for (a, b) in path.edges() {
                dual_value += task.phi[a * stride + b] + u.get(task.edge, (a, b));
                if !tree.has_undirected_edge(a, b) {
                    disagreements += 1;
                }
            }
            paths.push(path);
        }

        let changed = tree != previous;
        records.push(InnerRecord { inner, dual_value, disagreements, changed });

        if disagreements == 0 {
            return Ok(ProjectOutcome {
                tree,
                converged: true,
                inner_iters: inner,
                records,
                duals: u,
            });
        }

        let alpha = u.alpha(cfg);
        for (task, path) in tasks.iter().zip(&paths) {
            for (a, b) in path.edges() {
                if !tree.has_undirected_edge(a, b) {
                    u.apply(task.edge, (a, b), -alpha);
                }
            }
            for (h, d) in tree.edges() {
                if h >= 1 && !path.has_undirected_edge(h, d) {
                    u.apply(task.edge, (h, d), alpha);
                }
            }
        }

        previous = tree;
    }

    Ok(ProjectOutcome {
        tree: previous,
        converged: false,
        inner_iters: cfg.inner_iters,
        records,
        duals: u,
    })
}

/// Alternate [`project`] over both sides, each round re-decoding both
/// trees against the other side's tree from the previous round, until the
/// stopping rule fires or the round budget runs out.
///
/// Both new trees are always adopted; the stopping rule then compares them
/// with the round's starting trees — `Either`: at least one side
/// unchanged; `Both`: neither side changed.
pub fn coordinate_descent(
    pair: &BitextPair,
    models: &ModelSet,
    cfg: &AgreementConfig,
) -> Result<AgreementResult> {
    cfg.validate()?;
    models.validate_for(pair)?;

    let (baseline_src, _) = decode_mst(&edge_scores(pair.src(), &models.src_parser));
    let (baseline_tgt, _) = decode_mst(&edge_scores(pair.tgt(), &models.tgt_parser));

    let mut src_tree = baseline_src.clone();
    let mut tgt_tree = baseline_tgt.clone();
    let mut converged_src = false;
    let mut converged_tgt = false;
    let mut stopped_early = false;
    let mut outer_iters_used = 0;
    let mut log = Vec::new();

    for outer in 1..=cfg.outer_iters {
        let src_outcome = project(pair, &tgt_tree, Side::Src, models, cfg)?;
        let tgt_outcome = project(pair, &src_tree, Side::Tgt, models, cfg)?;

        let src_changed = src_outcome.tree != src_tree;
        let tgt_changed = tgt_outcome.tree != tgt_tree;

        src_tree = src_outcome.tree.clone();
        tgt_tree = tgt_outcome.tree.clone();
        converged_src = src_outcome.converged;
        converged_tgt = tgt_outcome.converged;
        outer_iters_used = outer;
        log.push(OuterRecord { outer, src: src_outcome, tgt: tgt_outcome });

        let stable = match cfg.convergence_mode {
            ConvergenceMode::Either => !src_changed || !tgt_changed,
            ConvergenceMode::Both => !src_changed && !tgt_changed,
        };
        if stable {
            stopped_early = true;
            break;
        }
    }

    Ok(AgreementResult {
        src_tree,
        tgt_tree,
        baseline_src,
        baseline_tgt,
        converged_src,
        converged_tgt,
        outer_iters_used,
        stopped_early,
        log,
    })
}
