//! Bilingual agreement inference: re-decode one language's tree under
//! pressure to agree, through the word alignment, with the other language's
//! tree, and alternate the two directions until neither side moves.
//!
//! The coupling is Lagrangian: each projectable edge `t` of the fixed tree
//! wants its projected path to lie inside the re-decoded tree, and a dual
//! variable per (edge, token pair) prices every disagreement. Tree decoding
//! and per-edge path prediction stay independent subproblems coordinated
//! only through those prices, updated by subgradient steps.

mod descent;

pub use descent::{
    coordinate_descent, project, AgreementResult, InnerRecord, OuterRecord, ProjectOutcome,
};

use std::collections::BTreeMap;

use crate::corpus::{BitextPair, DependencyTree, ParsedSentence};
use crate::error::{Error, Result};
use crate::parser::{edge_scores, Weights};
use crate::projection::{
    path_score, project_endpoints, tree_path, Direction, ProjectionModel,
};

/// Which half of a bitext pair an operation re-decodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Src,
    Tgt,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Src => Side::Tgt,
            Side::Tgt => Side::Src,
        }
    }

    pub fn sentence<'a>(&self, pair: &'a BitextPair) -> &'a ParsedSentence {
        match self {
            Side::Src => pair.src(),
            Side::Tgt => pair.tgt(),
        }
    }

    /// Direction whose edges live on the *other* side and whose paths live
    /// on this side — the direction used to project onto this side.
    pub fn incoming_direction(&self) -> Direction {
        match self {
            Side::Src => Direction::TgtToSrc,
            Side::Tgt => Direction::SrcToTgt,
        }
    }
}

/// Step-size schedule for the subgradient updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlphaSchedule {
    /// α is alpha0 at every inner iteration.
    #[default]
    Constant,
    /// α at inner iteration i (1-based) is alpha0 / i.
    Harmonic,
}

/// When the outer alternation stops: as soon as one side stops moving, or
/// only once both sides are stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConvergenceMode {
    #[default]
    Either,
    Both,
}

/// Knobs for [`project`] and [`coordinate_descent`].
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementConfig {
    /// Outer alternation rounds (>= 1).
    pub outer_iters: usize,
    /// Subgradient iterations inside one projection (>= 1).
    pub inner_iters: usize,
    /// Base step size (> 0).
    pub alpha0: f64,
    pub alpha_schedule: AlphaSchedule,
    pub convergence_mode: ConvergenceMode,
    /// Reserved for interface stability; inference is deterministic and
    /// never draws randomness.
    pub seed: u64,
}

impl Default for AgreementConfig {
    fn default() -> Self {
        AgreementConfig {
            outer_iters: 30,
            inner_iters: 100,
            alpha0: 0.1,
            alpha_schedule: AlphaSchedule::Constant,
            convergence_mode: ConvergenceMode::Either,
            seed: 0,
        }
    }
}

impl AgreementConfig {
    pub fn validate(&self) -> Result<()> {
        if self.outer_iters == 0 {
            return Err(Error::Config("outer-iters must be >= 1".into()));
        }
        if self.inner_iters == 0 {
            return Err(Error::Config("inner-iters must be >= 1".into()));
        }
        if !(self.alpha0 > 0.0 && self.alpha0.is_finite()) {
            return Err(Error::Config("alpha0 must be a positive number".into()));
        }
        Ok(())
    }
}

/// Everything inference needs: both parsers and both directional projection
/// models, with the language ids the parsers were trained for.
#[derive(Debug, Clone)]
pub struct ModelSet {
    pub src_lang: String,
    pub tgt_lang: String,
    pub src_parser: Weights,
    pub tgt_parser: Weights,
    /// Source-side edges to target-side paths.
    pub src_to_tgt: ProjectionModel,
    /// Target-side edges to source-side paths.
    pub tgt_to_src: ProjectionModel,
}

impl ModelSet {
    pub fn parser(&self, side: Side) -> &Weights {
        match side {
            Side::Src => &self.src_parser,
            Side::Tgt => &self.tgt_parser,
        }
    }

    pub fn projection(&self, direction: Direction) -> &ProjectionModel {
        match direction {
            Direction::SrcToTgt => &self.src_to_tgt,
            Direction::TgtToSrc => &self.tgt_to_src,
        }
    }

    /// Both projection models zero — inference reduces to plain decoding
    /// only when this holds *and* the alignment/tree structure cooperates.
    pub fn projections_are_zero(&self) -> bool {
        self.src_to_tgt.is_zero() && self.tgt_to_src.is_zero()
    }

    pub fn validate_for(&self, pair: &BitextPair) -> Result<()> {
        if pair.src().lang() != self.src_lang || pair.tgt().lang() != self.tgt_lang {
            return Err(Error::Mismatch(format!(
                "models are for {}/{} but the pair is {}/{}",
                self.src_lang,
                self.tgt_lang,
                pair.src().lang(),
                pair.tgt().lang()
            )));
        }
        Ok(())
    }
}

/// An unordered token pair of the decoded side, stored as (min, max).
type TokenPair = (usize, usize);

/// Dual prices on (fixed-tree edge, decoded-side token pair) combinations.
/// Pairs are stored unordered — agreement itself is direction-blind — and
/// absent entries read as zero. A per-pair aggregate is kept alongside so
/// the decoder's score modification is one lookup.
#[derive(Debug, Clone, Default)]
pub struct DualState {
    by_edge: BTreeMap<((usize, usize), TokenPair), f64>,
    by_pair: BTreeMap<(usize, usize), f64>,
    iteration: usize,
}

fn canonical(pair: (usize, usize)) -> (usize, usize) {
    (pair.0.min(pair.1), pair.0.max(pair.1))
}

impl DualState {
    pub fn new() -> Self {
        DualState::default()
    }

    /// 1-based count of iterations started.
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn begin_iteration(&mut self) {
        self.iteration += 1;
    }

    /// Step size for the current iteration under `cfg`'s schedule.
    pub fn alpha(&self, cfg: &AgreementConfig) -> f64 {
        match cfg.alpha_schedule {
            AlphaSchedule::Constant => cfg.alpha0,
            AlphaSchedule::Harmonic => cfg.alpha0 / self.iteration as f64,
        }
    }

    /// Price of `pair` for the path tied to fixed-tree edge `t`.
    pub fn get(&self, t: (usize, usize), pair: (usize, usize)) -> f64 {
        self.by_edge
            .get(&(t, canonical(pair)))
            .copied()
            .unwrap_or(0.0)
    }

    /// Sum over all fixed-tree edges of the price of `pair`.
    pub fn pair_total(&self, pair: (usize, usize)) -> f64 {
        self.by_pair.get(&canonical(pair)).copied().unwrap_or(0.0)
    }

    pub fn apply(&mut self, t: (usize, usize), pair: (usize, usize), delta: f64) {
        let pair = canonical(pair);
        let entry = self.by_edge.entry((t, pair)).or_insert(0.0);
        *entry += delta;
        if *entry == 0.0 {
            self.by_edge.remove(&(t, pair));
        }
        let total = self.by_pair.entry(pair).or_insert(0.0);
        *total += delta;
        if *total == 0.0 {
            self.by_pair.remove(&pair);
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.by_edge.len()
    }

    pub fn is_zero(&self) -> bool {
        self.by_edge.is_empty()
    }
}

/// Agreement bonus for a candidate edge (head, dep) of the side being
/// re-decoded: map both endpoints through the alignment onto the fixed
/// side, read the unique path between them off the fixed tree, and score
/// that path with the trained path models of the decoded-to-fixed
/// direction. Root candidates, unprojectable candidates, and paths longer
/// than five edges score zero.
pub fn r_score(
    candidate: (usize, usize),
    fixed_tree: &DependencyTree,
    decode_side: Side,
    pair: &BitextPair,
    models: &ModelSet,
) -> f64 {
    let (head, dep) = candidate;
    if head == 0 {
        return 0.0;
    }
    // Direction whose edges are on the decoded side: the flipped side's
    // incoming direction.
    let direction = decode_side.flipped().incoming_direction();
    let Some((a, b)) = project_endpoints(pair.alignment(), head, dep, direction) else {
        return 0.0;
    };
    let nodes = tree_path(fixed_tree, a, b);
    path_score(
        &models.projection(direction).path_predictor,
        candidate,
        &nodes,
        pair,
        direction,
    )
}

/// The quantity the alternation tries to push up: both trees' parser
/// scores plus, for every projectable edge of each tree, the trained score
/// of its projected path read off the other tree. Unprojectable edges and
/// paths over five edges contribute zero.
pub fn joint_objective(
    src_tree: &DependencyTree,
    tgt_tree: &DependencyTree,
    pair: &BitextPair,
    models: &ModelSet,
) -> f64 {
    let mut total = edge_scores(pair.src(), &models.src_parser).tree_score(src_tree)
        + edge_scores(pair.tgt(), &models.tgt_parser).tree_score(tgt_tree);
    for (direction, edge_tree, path_tree) in [
        (Direction::SrcToTgt, src_tree, tgt_tree),
        (Direction::TgtToSrc, tgt_tree, src_tree),
    ] {
        for (h, d) in edge_tree.edges() {
            if h == 0 {
                continue;
            }
            let Some((a, b)) = project_endpoints(pair.alignment(), h, d, direction) else {
                continue;
            };
            let nodes = tree_path(path_tree, a, b);
            total += path_score(
                &models.projection(direction).path_predictor,
                (h, d),
                &nodes,
                pair,
                direction,
            );
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Alignment, Token};

    fn sentence(lang: &str, words: &[(&str, &str)]) -> ParsedSentence {
        let tokens = words
            .iter()
            .enumerate()
            .map(|(i, (form, pos))| Token::new(i + 1, *form, *pos).unwrap())
            .collect();
        ParsedSentence::new(lang, tokens).unwrap()
    }

    fn identity_pair() -> BitextPair {
        let src = sentence("en", &[("a", "X"), ("b", "V"), ("c", "Y")]);
        let tgt = sentence("hi", &[("p", "X"), ("q", "V"), ("r", "Y")]);
        let tree = DependencyTree::new(vec![2, 0, 2]).unwrap();
        let alignment = Alignment::new((1..=3).map(|i| (i, i))).unwrap();
        BitextPair::new(src, tgt, alignment, Some(tree.clone()), Some(tree)).unwrap()
    }

    fn zero_models() -> ModelSet {
        ModelSet {
            src_lang: "en".into(),
            tgt_lang: "hi".into(),
            src_parser: Weights::new(),
            tgt_parser: Weights::new(),
            src_to_tgt: ProjectionModel::zero(),
            tgt_to_src: ProjectionModel::zero(),
        }
    }

    #[test]
    fn config_validation() {
        let cfg = AgreementConfig::default();
        assert_eq!(cfg.outer_iters, 30);
        assert_eq!(cfg.inner_iters, 100);
        assert!(cfg.validate().is_ok());
        assert!(AgreementConfig { outer_iters: 0, ..cfg.clone() }.validate().is_err());
        assert!(AgreementConfig { inner_iters: 0, ..cfg.clone() }.validate().is_err());
        assert!(AgreementConfig { alpha0: 0.0, ..cfg.clone() }.validate().is_err());
        assert!(AgreementConfig { alpha0: f64::NAN, ..cfg }.validate().is_err());
    }

    #[test]
    fn dual_state_is_orientation_blind() {
        let mut u = DualState::new();
        u.begin_iteration();
        u.apply((2, 5), (4, 2), -0.1);
        assert_eq!(u.get((2, 5), (2, 4)), -0.1);
        assert_eq!(u.get((2, 5), (4, 2)), -0.1);
        assert_eq!(u.pair_total((2, 4)), -0.1);
        u.apply((3, 1), (2, 4), 0.25);
        assert!((u.pair_total((4, 2)) - 0.15).abs() < 1e-15);
        assert_eq!(u.nonzero_count(), 2);
        // Exact cancellation removes the entry.
        u.apply((2, 5), (2, 4), 0.1);
        assert_eq!(u.nonzero_count(), 1);
        assert_eq!(u.get((2, 5), (2, 4)), 0.0);
    }

    #[test]
    fn alpha_schedules() {
        let mut u = DualState::new();
        let constant = AgreementConfig::default();
        let harmonic = AgreementConfig {
            alpha_schedule: AlphaSchedule::Harmonic,
            alpha0: 0.4,
            ..AgreementConfig::default()
        };
        u.begin_iteration();
        assert_eq!(u.alpha(&constant), 0.1);
        assert_eq!(u.alpha(&harmonic), 0.4);
        u.begin_iteration();
        assert_eq!(u.alpha(&constant), 0.1);
        assert_eq!(u.alpha(&harmonic), 0.2);
        u.begin_iteration();
        u.begin_iteration();
        assert_eq!(u.alpha(&harmonic), 0.1);
    }

    #[test]
    fn r_score_zero_rules() {
        let pair = identity_pair();
        let models = zero_models();
        let tree = pair.src_gold().unwrap();
        // Root candidate.
        assert_eq!(r_score((0, 2), tree, Side::Tgt, &pair, &models), 0.0);
        // Zero models: everything scores zero anyway.
        assert_eq!(r_score((2, 3), tree, Side::Tgt, &pair, &models), 0.0);
    }

    #[test]
    fn r_score_reads_path_from_fixed_tree() {
        let pair = identity_pair();
        let mut models = zero_models();
        // Candidate (2,3) on the target side maps to (2,3) on the source
        // side; the source tree has that very edge, so the path is direct
        // and scored with the length-2 vector by the low-length rule.
        models
            .tgt_to_src
            .path_predictor
            .vector_mut(2)
            .set("tpp=V|Y", 2.5);
        let tree = pair.src_gold().unwrap().clone();
        assert_eq!(r_score((2, 3), &tree, Side::Tgt, &pair, &models), 2.5);
        // Candidate (1,3): source path 1-2-3, two edges: V|Y appears once
        // (edge 2-3); edge 1-2 is X|V.
        assert_eq!(r_score((1, 3), &tree, Side::Tgt, &pair, &models), 2.5);
        models
            .tgt_to_src
            .path_predictor
            .vector_mut(2)
            .set("tpp=X|V", 1.0);
        assert_eq!(r_score((1, 3), &tree, Side::Tgt, &pair, &models), 3.5);
    }

    #[test]
    fn joint_objective_identity_doubling() {
        let pair = identity_pair();
        let mut models = zero_models();
        assert_eq!(
            joint_objective(
                pair.src_gold().unwrap(),
                pair.tgt_gold().unwrap(),
                &pair,
                &models
            ),
            0.0
        );
        // Give both parsers the same score for the gold trees and both
        // path predictors a uniform per-edge bonus; with identical trees
        // and identity alignment the objective doubles each part.
        models.src_parser.set("dp=V", 3.0);
        models.tgt_parser.set("dp=V", 3.0);
        models.src_to_tgt.path_predictor.vector_mut(2).set("tdist=1", 0.5);
        models.tgt_to_src.path_predictor.vector_mut(2).set("tdist=1", 0.5);
        let value = joint_objective(
            pair.src_gold().unwrap(),
            pair.tgt_gold().unwrap(),
            &pair,
            &models,
        );
        // Parser: each side scores 3.0 (one V dependent). Paths: each side
        // has two projectable edges, each a direct path at distance 1.
        assert_eq!(value, 2.0 * 3.0 + 2.0 * 2.0 * 0.5);
    }

    #[test]
    fn model_set_language_check() {
        let pair = identity_pair();
        let mut models = zero_models();
        assert!(models.validate_for(&pair).is_ok());
        models.src_lang = "de".into();
        assert!(models.validate_for(&pair).is_err());
    }
}
