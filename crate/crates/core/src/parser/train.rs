//! Averaged-perceptron training for the edge-factored parser, plus the
//! shared averaging machinery the path models reuse.

use std::collections::BTreeMap;

use crate::corpus::TreebankEntry;
use crate::error::{Error, Result};

use super::{decode_mst, extract_edge_features, FeatureVector, ScoreMatrix, Weights};

/// Score every candidate edge using cached feature vectors against the
/// trainer's current raw weights.
fn edge_scores_cached(cache: &EdgeFeatureCache, model: &AveragedPerceptron) -> ScoreMatrix {
    let n = cache.n();
    let mut matrix = ScoreMatrix::new(n);
    for h in 0..=n {
        for d in 1..=n {
            if h != d {
                matrix.set(h, d, model.raw_dot(cache.features(h, d)));
            }
        }
    }
    matrix
}

/// Weight averaging via the lagged-sum trick: alongside the raw weights `w`
/// keep `u[f] = Σ t_i · δ_i` over the updates to feature f, where t_i is the
/// 1-based global step at which update δ_i happened. After T steps the
/// average of the T post-step weight snapshots is ((T + 1) · w[f] − u[f]) / T,
/// so no per-step sweep over the whole weight map is needed.
#[derive(Debug, Default)]
pub(crate) struct AveragedPerceptron {
    w: BTreeMap<String, f64>,
    u: BTreeMap<String, f64>,
    step: u64,
}

impl AveragedPerceptron {
    pub fn new() -> Self {
        AveragedPerceptron::default()
    }

    /// Mark the start of the next example; must precede its updates.
    pub fn begin_step(&mut self) {
        self.step += 1;
    }

    /// `w += scale * fv`, with the averaging bookkeeping.
    pub fn update(&mut self, fv: &FeatureVector, scale: f64) {
        debug_assert!(self.step >= 1, "update before the first step");
        let t = self.step as f64;
        for (feature, value) in fv.iter() {
            let delta = scale * value;
            if delta == 0.0 {
                continue;
            }
            *self.w.entry(feature.to_owned()).or_insert(0.0) += delta;
            *self.u.entry(feature.to_owned()).or_insert(0.0) += t * delta;
        }
    }

    /// Dot product against the current raw (unaveraged) weights.
    pub fn raw_dot(&self, fv: &FeatureVector) -> f64 {
        fv.iter()
            .map(|(feature, value)| self.w.get(feature).copied().unwrap_or(0.0) * value)
            .sum()
    }

    /// Averaged weights over all steps taken; zero steps yields the empty
    /// model. Exactly-zero weights are dropped.
    pub fn finalize(self) -> Weights {
        if self.step == 0 {
            return Weights::new();
        }
        let t = self.step as f64;
        let mut avg = Weights::new();
        for (feature, &w) in &self.w {
            let u = self.u.get(feature).copied().unwrap_or(0.0);
            let value = ((t + 1.0) * w - u) / t;
            if value != 0.0 {
                avg.set(feature.clone(), value);
            }
        }
        avg
    }
}

/// Training-set attachment accuracy of one epoch's sequential predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpochStats {
    /// 1-based epoch number.
    pub epoch: usize,
    /// Heads predicted correctly before each sentence's update.
    pub correct_heads: usize,
    /// Total heads in the training set.
    pub total_heads: usize,
    /// Sentences whose prediction differed from gold.
    pub updates: usize,
}

/// Train an edge-factored parser by the averaged structured perceptron.
///
/// Sentences are visited in the given order every epoch. For each sentence
/// the current raw model decodes a tree; if it differs from gold, weights
/// move toward the gold tree's features and away from the prediction's.
/// The returned model is the average over all steps. `_seed` is accepted
/// for interface stability; training is deterministic and ignores it.
pub fn train_parser(
    treebank: &[TreebankEntry],
    epochs: usize,
    _seed: u64,
) -> Result<(Weights, Vec<EpochStats>)> {
    if treebank.is_empty() {
        return Err(Error::Training("empty treebank".into()));
    }
    for (i, (_, tree)) in treebank.iter().enumerate() {
        if tree.is_none() {
            return Err(Error::Training(format!(
                "sentence {} has no gold tree",
                i + 1
            )));
        }
    }

    // Feature extraction is by far the dominant cost, and features do not
    // change across epochs; cache them per sentence and edge.
    let cached: Vec<EdgeFeatureCache> = treebank
        .iter()
        .map(|(sentence, _)| EdgeFeatureCache::build(sentence))
        .collect();

    let mut model = AveragedPerceptron::new();
    let mut stats = Vec::with_capacity(epochs);
    for epoch in 1..=epochs {
        let mut correct_heads = 0;
        let mut total_heads = 0;
        let mut updates = 0;
        for ((_, gold), cache) in treebank.iter().zip(&cached) {
            let gold = gold.as_ref().unwrap();
            model.begin_step();
            let scores = edge_scores_cached(cache, &model);
            let (predicted, _) = decode_mst(&scores);
            total_heads += gold.len();
            correct_heads += (1..=gold.len())
                .filter(|&d| predicted.head_of(d) == gold.head_of(d))
                .count();
            if predicted != *gold {
                updates += 1;
                for d in 1..=gold.len() {
                    let (gh, ph) = (gold.head_of(d), predicted.head_of(d));
                    if gh != ph {
                        model.update(cache.features(gh, d), 1.0);
                        model.update(cache.features(ph, d), -1.0);
                    }
                }
            }
        }
        stats.push(EpochStats {
            epoch,
            correct_heads,
            total_heads,
            updates,
        });
    }
    Ok((model.finalize(), stats))
}

/// All candidate-edge feature vectors of one sentence.
pub(crate) struct EdgeFeatureCache {
    n: usize,
    vectors: Vec<Option<FeatureVector>>,
}

impl EdgeFeatureCache {
    pub fn build(sentence: &crate::corpus::ParsedSentence) -> Self {
        let n = sentence.len();
        let mut vectors = vec![None; (n + 1) * (n + 1)];
        for h in 0..=n {
            for d in 1..=n {
                if h != d {
                    vectors[h * (n + 1) + d] = Some(extract_edge_features(sentence, h, d));
                }
            }
        }
        EdgeFeatureCache { n, vectors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn features(&self, head: usize, dep: usize) -> &FeatureVector {
        self.vectors[head * (self.n + 1) + dep]
            .as_ref()
            .expect("valid edge")
    }
}
