//! Cross-lingual edge projection: mapping an edge of one language's tree to
//! a path in the other language, the models that predict and score such
//! paths, and extraction of their training data from parsed bitext.

mod path;
mod train;

pub use path::{best_path, project_endpoints, tree_path};
pub use train::{train_path_length, train_path_predictor};

use crate::corpus::BitextPair;
use crate::error::{Error, Result};
use crate::parser::{FeatureVector, Weights, ROOT_POS};

/// Which side's edges are being projected onto which side's sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Edges of the pair's source sentence, paths in its target sentence.
    SrcToTgt,
    /// Edges of the pair's target sentence, paths in its source sentence.
    TgtToSrc,
}

impl Direction {
    pub fn flipped(self) -> Direction {
        match self {
            Direction::SrcToTgt => Direction::TgtToSrc,
            Direction::TgtToSrc => Direction::SrcToTgt,
        }
    }

    /// Sentence whose tree supplies the edges.
    pub fn edge_side<'a>(&self, pair: &'a BitextPair) -> &'a crate::corpus::ParsedSentence {
        match self {
            Direction::SrcToTgt => pair.src(),
            Direction::TgtToSrc => pair.tgt(),
        }
    }

    /// Sentence in which paths are predicted.
    pub fn path_side<'a>(&self, pair: &'a BitextPair) -> &'a crate::corpus::ParsedSentence {
        match self {
            Direction::SrcToTgt => pair.tgt(),
            Direction::TgtToSrc => pair.src(),
        }
    }
}

/// A simple path [a0, …, ak] of 1..=5 edges between two tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedPath {
    nodes: Vec<usize>,
}

impl ProjectedPath {
    pub fn new(nodes: Vec<usize>) -> Result<Self> {
        let k = nodes.len().saturating_sub(1);
        if !(1..=5).contains(&k) {
            return Err(Error::Projection(format!(
                "a projected path must have 1..=5 edges, got {k}"
            )));
        }
        for (i, a) in nodes.iter().enumerate() {
            if *a == 0 {
                return Err(Error::Projection("path nodes are 1-based tokens".into()));
            }
            if nodes[i + 1..].contains(a) {
                return Err(Error::Projection(format!("path node {a} repeats")));
            }
        }
        Ok(ProjectedPath { nodes })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// Number of edges.
    pub fn k(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    /// Edges in traversal order, oriented along the traversal.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }

    /// Whether the unordered pair {a, b} is one of this path's edges.
    pub fn has_undirected_edge(&self, a: usize, b: usize) -> bool {
        self.edges().any(|(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
    }
}

/// Distance bucket on the path side: |j - j'|, distances above four
/// collapsed into `5+`.
fn target_distance_bucket(a: usize, b: usize) -> String {
    let distance = a.abs_diff(b).min(5);
    if distance >= 5 {
        "5+".to_string()
    } else {
        distance.to_string()
    }
}

/// Features of the four tokens tying an edge of one sentence to a token
/// pair of the other: each token's form (position-tagged; omitted for the
/// root) and POS, the edge-side POS pair, the path-side POS pair, and the
/// bucketed path-side distance. Index 0 (the artificial root, legal on
/// either side because tree paths may run through it) contributes a root
/// POS and no form.
pub fn four_node_features(
    pair: &BitextPair,
    direction: Direction,
    src_edge: (usize, usize),
    tgt_pair: (usize, usize),
) -> FeatureVector {
    let edge_sent = direction.edge_side(pair);
    let path_sent = direction.path_side(pair);
    let (i, i2) = src_edge;
    let (j, j2) = tgt_pair;
    assert!(
        i <= edge_sent.len() && i2 <= edge_sent.len(),
        "edge indices out of range"
    );
    assert!(
        j <= path_sent.len() && j2 <= path_sent.len(),
        "pair indices out of range"
    );

    let pos_of = |sent: &crate::corpus::ParsedSentence, idx: usize| {
        if idx == 0 {
            ROOT_POS.to_string()
        } else {
            sent.pos(idx).to_string()
        }
    };

    let mut fv = FeatureVector::new();
    if i != 0 {
        fv.add(format!("sf1={}", edge_sent.form(i)), 1.0);
    }
    if i2 != 0 {
        fv.add(format!("sf2={}", edge_sent.form(i2)), 1.0);
    }
    if j != 0 {
        fv.add(format!("tf1={}", path_sent.form(j)), 1.0);
    }
    if j2 != 0 {
        fv.add(format!("tf2={}", path_sent.form(j2)), 1.0);
    }
    let sp1 = pos_of(edge_sent, i);
    let sp2 = pos_of(edge_sent, i2);
    let tp1 = pos_of(path_sent, j);
    let tp2 = pos_of(path_sent, j2);
    fv.add(format!("sp1={sp1}"), 1.0);
    fv.add(format!("sp2={sp2}"), 1.0);
    fv.add(format!("tp1={tp1}"), 1.0);
    fv.add(format!("tp2={tp2}"), 1.0);
    fv.add(format!("spp={sp1}|{sp2}"), 1.0);
    fv.add(format!("tpp={tp1}|{tp2}"), 1.0);
    fv.add(format!("tdist={}", target_distance_bucket(j, j2)), 1.0);
    fv
}

/// Five per-length linear classifiers; the predicted length is the argmax,
/// ties resolving to the smallest length.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PathLengthModel {
    vectors: [Weights; 5],
}

impl PathLengthModel {
    pub fn zero() -> Self {
        PathLengthModel::default()
    }

    pub fn from_vectors(vectors: [Weights; 5]) -> Self {
        PathLengthModel { vectors }
    }

    /// Weight vector for length `k` (1..=5).
    pub fn vector(&self, k: usize) -> &Weights {
        assert!((1..=5).contains(&k), "length out of range");
        &self.vectors[k - 1]
    }

    pub fn vector_mut(&mut self, k: usize) -> &mut Weights {
        assert!((1..=5).contains(&k), "length out of range");
        &mut self.vectors[k - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.iter().all(Weights::is_empty)
    }

    /// Predicted path length in 1..=5.
    pub fn predict(&self, features: &FeatureVector) -> usize {
        let mut best_k = 1;
        let mut best_score = self.vectors[0].dot(features);
        for k in 2..=5 {
            let score = self.vectors[k - 1].dot(features);
            if score > best_score {
                best_score = score;
                best_k = k;
            }
        }
        best_k
    }
}

/// Four per-length structured models scoring the edges of candidate paths
/// of lengths 2..=5.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PathPredictorModel {
    vectors: [Weights; 4],
}

impl PathPredictorModel {
    pub fn zero() -> Self {
        PathPredictorModel::default()
    }

    pub fn from_vectors(vectors: [Weights; 4]) -> Self {
        PathPredictorModel { vectors }
    }

    /// Weight vector for paths of `k` edges (2..=5).
    pub fn vector(&self, k: usize) -> &Weights {
        assert!((2..=5).contains(&k), "length out of range");
        &self.vectors[k - 2]
    }

    pub fn vector_mut(&mut self, k: usize) -> &mut Weights {
        assert!((2..=5).contains(&k), "length out of range");
        &mut self.vectors[k - 2]
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.iter().all(Weights::is_empty)
    }
}

/// Score of one candidate path edge `(a, b)` for paths of `k` edges tied to
/// `src_edge`. Lengths 0 and 1 borrow the length-2 vector so that direct
/// edges still carry a learned score; `k` above 5 is a caller bug.
pub fn path_edge_score(
    model: &PathPredictorModel,
    k: usize,
    src_edge: (usize, usize),
    tgt_edge: (usize, usize),
    pair: &BitextPair,
    direction: Direction,
) -> f64 {
    assert!(k <= 5, "path length out of range");
    let vector = model.vector(k.max(2));
    vector.dot(&four_node_features(pair, direction, src_edge, tgt_edge))
}

/// Score of a whole path: the sum of [`path_edge_score`] over its edges in
/// traversal order. Paths longer than 5 edges score 0, as does the empty
/// path.
pub fn path_score(
    model: &PathPredictorModel,
    src_edge: (usize, usize),
    path_nodes: &[usize],
    pair: &BitextPair,
    direction: Direction,
) -> f64 {
    let k = path_nodes.len().saturating_sub(1);
    if k == 0 || k > 5 {
        return 0.0;
    }
    path_nodes
        .windows(2)
        .map(|w| path_edge_score(model, k, src_edge, (w[0], w[1]), pair, direction))
        .sum()
}

/// One direction's trained pair of models.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProjectionModel {
    pub path_length: PathLengthModel,
    pub path_predictor: PathPredictorModel,
}

impl ProjectionModel {
    pub fn zero() -> Self {
        ProjectionModel::default()
    }

    pub fn is_zero(&self) -> bool {
        self.path_length.is_zero() && self.path_predictor.is_zero()
    }
}

/// A labeled path-length example: the four-node features of a projectable
/// edge and the length of the path its endpoints span in the other tree.
#[derive(Debug, Clone)]
pub struct LengthInstance {
    pub features: FeatureVector,
    /// 1..=5.
    pub length: usize,
}

/// A structured path example: everything needed to re-predict the path.
#[derive(Debug, Clone)]
pub struct PathInstance {
    pub pair: BitextPair,
    pub direction: Direction,
    pub src_edge: (usize, usize),
    pub endpoints: (usize, usize),
    pub gold: ProjectedPath,
}

/// Where extraction's skips went.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExtractionStats {
    pub pairs: usize,
    pub edges_seen: usize,
    /// An endpoint was unaligned, or both endpoints landed on one token.
    pub unprojectable: usize,
    /// The other tree's path between the endpoints exceeds 5 edges.
    pub too_long: usize,
    /// Path runs through the artificial root: kept as a length example but
    /// not as a path example (paths are predicted over tokens only).
    pub through_root: usize,
    pub length_instances: usize,
    pub path_instances: usize,
}

/// Extraction output: both instance kinds plus the skip accounting.
#[derive(Debug, Clone)]
pub struct ProjectionTrainingData {
    pub length_instances: Vec<LengthInstance>,
    pub path_instances: Vec<PathInstance>,
    pub stats: ExtractionStats,
}

/// Walk every edge of the edge-side tree of each pair; for each one whose
/// endpoints project, read the path between the projected endpoints off the
/// path-side tree and emit a length example (lengths 1..=5) plus, for
/// lengths >= 2 avoiding the root, a structured path example.
pub fn extract_projection_training(
    corpus: &[BitextPair],
    direction: Direction,
) -> Result<ProjectionTrainingData> {
    let mut data = ProjectionTrainingData {
        length_instances: Vec::new(),
        path_instances: Vec::new(),
        stats: ExtractionStats {
            pairs: corpus.len(),
            ..ExtractionStats::default()
        },
    };
    for (index, pair) in corpus.iter().enumerate() {
        let (edge_tree, path_tree) = match direction {
            Direction::SrcToTgt => (pair.src_gold(), pair.tgt_gold()),
            Direction::TgtToSrc => (pair.tgt_gold(), pair.src_gold()),
        };
        let (edge_tree, path_tree) = match (edge_tree, path_tree) {
            (Some(e), Some(p)) => (e, p),
            _ => {
                return Err(Error::Training(format!(
                    "pair {} lacks a gold tree on at least one side",
                    index + 1
                )))
            }
        };
        for (h, d) in edge_tree.edges() {
            data.stats.edges_seen += 1;
            let Some((j, j2)) = (if h == 0 {
                None // the root has no alignment
            } else {
                project_endpoints(pair.alignment(), h, d, direction)
            }) else {
                data.stats.unprojectable += 1;
                continue;
            };
            let nodes = tree_path(path_tree, j, j2);
            let k = nodes.len() - 1;
            if k > 5 {
                data.stats.too_long += 1;
                continue;
            }
            data.length_instances.push(LengthInstance {
                features: four_node_features(pair, direction, (h, d), (j, j2)),
                length: k,
            });
            if k >= 2 {
                if nodes.contains(&0) {
                    data.stats.through_root += 1;
                } else {
                    data.path_instances.push(PathInstance {
                        pair: pair.clone(),
                        direction,
                        src_edge: (h, d),
                        endpoints: (j, j2),
                        gold: ProjectedPath::new(nodes)?,
                    });
                }
            }
        }
    }
    data.stats.length_instances = data.length_instances.len();
    data.stats.path_instances = data.path_instances.len();
    Ok(data)
}

/// Extract training instances from a gold-annotated parallel corpus and fit
/// both halves of a projection model in one call.
pub fn train_projection_model(
    corpus: &[BitextPair],
    direction: Direction,
    epochs: usize,
    seed: u64,
) -> Result<(ProjectionModel, ExtractionStats)> {
    let data = extract_projection_training(corpus, direction)?;
    let path_length = train_path_length(&data.length_instances, epochs, seed)?;
    let path_predictor = train_path_predictor(&data.path_instances, epochs, seed)?;
    Ok((
        ProjectionModel {
            path_length,
            path_predictor,
        },
        data.stats,
    ))
}
