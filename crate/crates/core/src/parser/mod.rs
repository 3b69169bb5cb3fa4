//! Edge-factored dependency parsing: feature extraction, scoring, exact
//! decoding, and perceptron training.
//!
//! An edge from head `h` (0 for the root) to dependent `d` is described by a
//! sparse feature vector; a linear model scores it; decoding finds the
//! maximum-scoring arborescence over all n tokens. Ties are broken
//! deterministically (see [`decode_mst`]).

mod mst;
mod train;

pub use mst::{brute_force_decode, decode_mst};
pub use train::{train_parser, EpochStats};

pub(crate) use train::AveragedPerceptron;

use std::collections::BTreeMap;

use crate::corpus::{DependencyTree, ParsedSentence};

/// POS stand-in for the artificial root node in POS-pair features.
pub const ROOT_POS: &str = "<root>";

/// Sparse feature vector: feature name to count.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureVector(BTreeMap<String, f64>);

impl FeatureVector {
    pub fn new() -> Self {
        FeatureVector::default()
    }

    /// Add `value` to the named feature's count.
    pub fn add(&mut self, feature: impl Into<String>, value: f64) {
        *self.0.entry(feature.into()).or_insert(0.0) += value;
    }

    /// Features in sorted name order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, feature: &str) -> f64 {
        self.0.get(feature).copied().unwrap_or(0.0)
    }
}

impl FromIterator<(String, f64)> for FeatureVector {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        let mut fv = FeatureVector::new();
        for (k, v) in iter {
            fv.add(k, v);
        }
        fv
    }
}

/// A linear model: feature name to weight. Iteration order is sorted by
/// name, so dot products and serialization are deterministic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Weights(BTreeMap<String, f64>);

impl Weights {
    pub fn new() -> Self {
        Weights::default()
    }

    pub fn get(&self, feature: &str) -> f64 {
        self.0.get(feature).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, feature: impl Into<String>, weight: f64) {
        self.0.insert(feature.into(), weight);
    }

    /// `self += scale * fv`.
    pub fn add_scaled(&mut self, fv: &FeatureVector, scale: f64) {
        for (feature, value) in fv.iter() {
            *self.0.entry(feature.to_owned()).or_insert(0.0) += scale * value;
        }
    }

    /// Dot product, accumulated in the vector's sorted feature order.
    pub fn dot(&self, fv: &FeatureVector) -> f64 {
        fv.iter()
            .map(|(feature, value)| self.get(feature) * value)
            .sum()
    }

    /// Drop features whose weight is exactly zero.
    pub fn prune_zeros(&mut self) {
        self.0.retain(|_, w| *w != 0.0);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(String, f64)> for Weights {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        Weights(iter.into_iter().collect())
    }
}

/// Distance bucket: signed head-to-dependent offset, magnitudes above four
/// collapsed into `+5+` / `-5+`.
fn distance_bucket(head: usize, dep: usize) -> String {
    let delta = dep as i64 - head as i64;
    let magnitude = delta.unsigned_abs().min(5);
    let sign = if delta > 0 { '+' } else { '-' };
    if magnitude >= 5 {
        format!("{sign}5+")
    } else {
        format!("{sign}{magnitude}")
    }
}

/// Features describing one candidate edge of one sentence.
///
/// `head` is 0 for the root; `dep` is a 1-based token position. Templates:
/// dependent form/POS, head form/POS (token heads only), the POS pair, the
/// form pair, direction, bucketed signed distance, the POS tags flanking the
/// gap between the two positions, and a root indicator for `head == 0`.
pub fn extract_edge_features(
    sentence: &ParsedSentence,
    head: usize,
    dep: usize,
) -> FeatureVector {
    let n = sentence.len();
    assert!(dep >= 1 && dep <= n && head <= n && head != dep, "invalid edge");

    let mut fv = FeatureVector::new();
    let dpos = sentence.pos(dep);
    fv.add(format!("df={}", sentence.form(dep)), 1.0);
    fv.add(format!("dp={dpos}"), 1.0);
    if head == 0 {
        fv.add("root", 1.0);
        fv.add(format!("pp={ROOT_POS}|{dpos}"), 1.0);
    } else {
        let hpos = sentence.pos(head);
        fv.add(format!("hf={}", sentence.form(head)), 1.0);
        fv.add(format!("hp={hpos}"), 1.0);
        fv.add(format!("pp={hpos}|{dpos}"), 1.0);
        fv.add(format!("ff={}|{}", sentence.form(head), sentence.form(dep)), 1.0);
    }
    fv.add(
        format!("dir={}", if dep > head { 'R' } else { 'L' }),
        1.0,
    );
    fv.add(format!("dist={}", distance_bucket(head, dep)), 1.0);

    let (lo, hi) = (head.min(dep), head.max(dep));
    if hi - lo >= 2 {
        fv.add(
            format!("btw={}_{}", sentence.pos(lo + 1), sentence.pos(hi - 1)),
            1.0,
        );
    }
    fv
}

/// Dense (n+1) x (n+1) matrix of edge scores. Cell (h, d) scores head `h`
/// over dependent `d`; cells with `d == 0` or `h == d` are structurally
/// invalid and read as negative infinity. Valid cells are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    n: usize,
    scores: Vec<f64>,
}

impl ScoreMatrix {
    /// All valid cells start at zero.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a score matrix needs at least one token");
        let mut scores = vec![f64::NEG_INFINITY; (n + 1) * (n + 1)];
        for h in 0..=n {
            for d in 1..=n {
                if h != d {
                    scores[h * (n + 1) + d] = 0.0;
                }
            }
        }
        ScoreMatrix { n, scores }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_valid_cell(&self, head: usize, dep: usize) -> bool {
        head <= self.n && dep >= 1 && dep <= self.n && head != dep
    }

    pub fn get(&self, head: usize, dep: usize) -> f64 {
        self.scores[head * (self.n + 1) + dep]
    }

    /// Panics on a structurally invalid cell or a non-finite score.
    pub fn set(&mut self, head: usize, dep: usize, score: f64) {
        assert!(self.is_valid_cell(head, dep), "invalid cell ({head}, {dep})");
        assert!(score.is_finite(), "edge scores must be finite");
        self.scores[head * (self.n + 1) + dep] = score;
    }

    /// Sum of this matrix's scores over the tree's edges, accumulated in
    /// dependent order.
    pub fn tree_score(&self, tree: &DependencyTree) -> f64 {
        assert_eq!(tree.len(), self.n, "tree and matrix sizes differ");
        (1..=self.n).map(|d| self.get(tree.head_of(d), d)).sum()
    }
}

/// Score every candidate edge of `sentence` under `weights`.
pub fn edge_scores(sentence: &ParsedSentence, weights: &Weights) -> ScoreMatrix {
    let n = sentence.len();
    let mut matrix = ScoreMatrix::new(n);
    for h in 0..=n {
        for d in 1..=n {
            if h != d {
                matrix.set(h, d, weights.dot(&extract_edge_features(sentence, h, d)));
            }
        }
    }
    matrix
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Token;

    fn sentence(words: &[(&str, &str)]) -> ParsedSentence {
        let tokens = words
            .iter()
            .enumerate()
            .map(|(i, (form, pos))| Token::new(i + 1, *form, *pos).unwrap())
            .collect();
        ParsedSentence::new("en", tokens).unwrap()
    }

    #[test]
    fn edge_features_for_token_head() {
        let s = sentence(&[
            ("I", "PRP"),
            ("washed", "VBD"),
            ("the", "DT"),
            ("jeans", "NNS"),
            ("with", "IN"),
            ("soap", "NN"),
        ]);
        let fv = extract_edge_features(&s, 2, 5);
        assert_eq!(fv.get("hf=washed"), 1.0);
        assert_eq!(fv.get("hp=VBD"), 1.0);
        assert_eq!(fv.get("df=with"), 1.0);
        assert_eq!(fv.get("dp=IN"), 1.0);
        assert_eq!(fv.get("pp=VBD|IN"), 1.0);
        assert_eq!(fv.get("ff=washed|with"), 1.0);
        assert_eq!(fv.get("dir=R"), 1.0);
        assert_eq!(fv.get("dist=+3"), 1.0);
        assert_eq!(fv.get("btw=DT_NNS"), 1.0);
        assert_eq!(fv.get("root"), 0.0);
        assert_eq!(fv.len(), 9);
    }

    #[test]
    fn edge_features_for_root_head() {
        let s = sentence(&[("a", "X"), ("b", "VB"), ("c", "Y")]);
        let fv = extract_edge_features(&s, 0, 2);
        assert_eq!(fv.get("root"), 1.0);
        assert_eq!(fv.get("pp=<root>|VB"), 1.0);
        assert_eq!(fv.get("dp=VB"), 1.0);
        assert_eq!(fv.get("df=b"), 1.0);
        assert_eq!(fv.get("dir=R"), 1.0);
        assert_eq!(fv.get("dist=+2"), 1.0);
        // Root-to-2 spans exactly token 1.
        assert_eq!(fv.get("btw=X_X"), 1.0);
        assert_eq!(fv.get("hp=<root>"), 0.0);
        assert_eq!(fv.len(), 7);
    }

    #[test]
    fn edge_features_leftward_and_distance_cap() {
        let s = sentence(&[
            ("t1", "A"),
            ("t2", "B"),
            ("t3", "C"),
            ("t4", "D"),
            ("t5", "E"),
            ("t6", "F"),
            ("t7", "G"),
        ]);
        let fv = extract_edge_features(&s, 7, 1);
        assert_eq!(fv.get("dir=L"), 1.0);
        assert_eq!(fv.get("dist=-5+"), 1.0);
        assert_eq!(fv.get("btw=B_F"), 1.0);
        let fv = extract_edge_features(&s, 1, 7);
        assert_eq!(fv.get("dist=+5+"), 1.0);
        let fv = extract_edge_features(&s, 3, 2);
        assert_eq!(fv.get("dist=-1"), 1.0);
        assert_eq!(fv.get("btw=B_F"), 0.0);
    }

    #[test]
    fn adjacent_edge_has_no_between_feature() {
        let s = sentence(&[("a", "X"), ("b", "Y")]);
        let fv = extract_edge_features(&s, 1, 2);
        assert!(fv.iter().all(|(f, _)| !f.starts_with("btw=")));
        let fv = extract_edge_features(&s, 0, 1);
        assert!(fv.iter().all(|(f, _)| !f.starts_with("btw=")));
    }

    #[test]
    fn weights_dot_and_prune() {
        let mut w = Weights::new();
        w.set("a", 2.0);
        w.set("b", -1.5);
        w.set("c", 0.0);
        let mut fv = FeatureVector::new();
        fv.add("a", 1.0);
        fv.add("b", 2.0);
        fv.add("missing", 5.0);
        assert_eq!(w.dot(&fv), 2.0 - 3.0);
        w.prune_zeros();
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn score_matrix_guards_cells() {
        let mut m = ScoreMatrix::new(3);
        m.set(0, 1, 2.5);
        assert_eq!(m.get(0, 1), 2.5);
        assert_eq!(m.get(1, 1), f64::NEG_INFINITY);
        assert_eq!(m.get(2, 0), f64::NEG_INFINITY);
        assert!(std::panic::catch_unwind(move || {
            let mut m = ScoreMatrix::new(3);
            m.set(1, 1, 0.0)
        })
        .is_err());
    }

    #[test]
    fn tree_score_sums_edges() {
        let mut m = ScoreMatrix::new(3);
        m.set(0, 2, 1.0);
        m.set(2, 1, 2.0);
        m.set(2, 3, 4.0);
        let tree = DependencyTree::new(vec![2, 0, 2]).unwrap();
        assert_eq!(m.tree_score(&tree), 7.0);
    }
}
