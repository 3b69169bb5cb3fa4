//! Averaged-perceptron training of the path-length classifiers and the
//! structured path predictors.

use crate::error::{Error, Result};
use crate::parser::{AveragedPerceptron, FeatureVector};

use super::{
    best_path, four_node_features, LengthInstance, PathInstance, PathLengthModel,
    PathPredictorModel,
};

/// Train the five path-length classifiers as a multiclass perceptron:
/// predict by argmax over the five raw vectors (ties to the smallest
/// length); on error, move the gold length's vector toward the features and
/// the predicted length's away. Instances are visited in the given order
/// every epoch; `_seed` is accepted for interface stability and unused.
pub fn train_path_length(
    instances: &[LengthInstance],
    epochs: usize,
    _seed: u64,
) -> Result<PathLengthModel> {
    if instances.is_empty() {
        return Err(Error::Training("no path-length instances".into()));
    }
    for (i, instance) in instances.iter().enumerate() {
        if !(1..=5).contains(&instance.length) {
            return Err(Error::Training(format!(
                "instance {}: path length {} outside 1..=5",
                i + 1,
                instance.length
            )));
        }
    }

    let mut trainers: Vec<AveragedPerceptron> =
        (0..5).map(|_| AveragedPerceptron::new()).collect();
    for _ in 0..epochs {
        for instance in instances {
            for trainer in trainers.iter_mut() {
                trainer.begin_step();
            }
            let predicted = raw_argmax(&trainers, &instance.features);
            if predicted != instance.length {
                trainers[instance.length - 1].update(&instance.features, 1.0);
                trainers[predicted - 1].update(&instance.features, -1.0);
            }
        }
    }
    let mut vectors = trainers.into_iter().map(AveragedPerceptron::finalize);
    Ok(PathLengthModel::from_vectors(std::array::from_fn(|_| {
        vectors.next().unwrap()
    })))
}

fn raw_argmax(trainers: &[AveragedPerceptron], features: &FeatureVector) -> usize {
    let mut best_k = 1;
    let mut best_score = trainers[0].raw_dot(features);
    for (i, trainer) in trainers.iter().enumerate().skip(1) {
        let score = trainer.raw_dot(features);
        if score > best_score {
            best_score = score;
            best_k = i + 1;
        }
    }
    best_k
}

/// Train the four structured path predictors: for each example, find the
/// best path of the gold length under the current raw vector for that
/// length; if it differs from the gold path, add the gold path's summed
/// edge features and subtract the prediction's. An empty instance list is
/// legal (some corpora only ever project direct edges) and yields the zero
/// model.
pub fn train_path_predictor(
    instances: &[PathInstance],
    epochs: usize,
    _seed: u64,
) -> Result<PathPredictorModel> {
    for (i, instance) in instances.iter().enumerate() {
        if !(2..=5).contains(&instance.gold.k()) {
            return Err(Error::Training(format!(
                "instance {}: gold path length {} outside 2..=5",
                i + 1,
                instance.gold.k()
            )));
        }
    }

    let mut trainers: Vec<AveragedPerceptron> =
        (0..4).map(|_| AveragedPerceptron::new()).collect();
    for _ in 0..epochs {
        for instance in instances {
            for trainer in trainers.iter_mut() {
                trainer.begin_step();
            }
            let k = instance.gold.k();
            let n = instance.direction.path_side(&instance.pair).len();
            // The scorer is linear, so one pass over ordered pairs gives a
            // lookup table for the path search.
            let table = score_table(&trainers[k - 2], instance, n);
            let predicted = best_path(
                instance.endpoints,
                k,
                |a, b| table[a * (n + 1) + b],
                n,
            )?;
            if predicted != instance.gold {
                let gold_features = summed_edge_features(instance, instance.gold.edges());
                let predicted_features = summed_edge_features(instance, predicted.edges());
                trainers[k - 2].update(&gold_features, 1.0);
                trainers[k - 2].update(&predicted_features, -1.0);
            }
        }
    }
    let mut vectors = trainers.into_iter().map(AveragedPerceptron::finalize);
    Ok(PathPredictorModel::from_vectors(std::array::from_fn(
        |_| vectors.next().unwrap(),
    )))
}

fn score_table(trainer: &AveragedPerceptron, instance: &PathInstance, n: usize) -> Vec<f64> {
    let mut table = vec![0.0; (n + 1) * (n + 1)];
    for a in 1..=n {
        for b in 1..=n {
            if a != b {
                let fv = four_node_features(
                    &instance.pair,
                    instance.direction,
                    instance.src_edge,
                    (a, b),
                );
                table[a * (n + 1) + b] = trainer.raw_dot(&fv);
            }
        }
    }
    table
}

fn summed_edge_features(
    instance: &PathInstance,
    edges: impl Iterator<Item = (usize, usize)>,
) -> FeatureVector {
    let mut sum = FeatureVector::new();
    for (a, b) in edges {
        let fv = four_node_features(
            &instance.pair,
            instance.direction,
            instance.src_edge,
            (a, b),
        );
        for (feature, value) in fv.iter() {
            sum.add(feature, value);
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Alignment, BitextPair, ParsedSentence, Token};
    use crate::projection::{Direction, ProjectedPath};

    fn marked_instance(marker: &str, length: usize) -> LengthInstance {
        let mut features = FeatureVector::new();
        features.add(format!("m={marker}"), 1.0);
        features.add("bias", 1.0);
        LengthInstance { features, length }
    }

    #[test]
    fn length_training_fits_separable_markers() {
        // Length is a deterministic function of the marker feature.
        let instances: Vec<LengthInstance> = (1..=5)
            .flat_map(|k| (0..3).map(move |_| marked_instance(&format!("k{k}"), k)))
            .collect();
        let model = train_path_length(&instances, 50, 0).unwrap();
        for instance in &instances {
            assert_eq!(model.predict(&instance.features), instance.length);
        }
    }

    #[test]
    fn length_training_rejects_empty_and_bad_labels() {
        assert!(train_path_length(&[], 5, 0).is_err());
        assert!(train_path_length(&[marked_instance("x", 6)], 5, 0).is_err());
        assert!(train_path_length(&[marked_instance("x", 0)], 5, 0).is_err());
    }

    #[test]
    fn zero_epoch_length_model_predicts_one() {
        let model = train_path_length(&[marked_instance("x", 4)], 0, 0).unwrap();
        assert!(model.is_zero());
        assert_eq!(model.predict(&marked_instance("x", 4).features), 1);
    }

    fn sentence(lang: &str, words: &[(&str, &str)]) -> ParsedSentence {
        let tokens = words
            .iter()
            .enumerate()
            .map(|(i, (form, pos))| Token::new(i + 1, *form, *pos).unwrap())
            .collect();
        ParsedSentence::new(lang, tokens).unwrap()
    }

    /// A pair whose target side carries a POS marker on the gold interior
    /// node, making the path prediction separable.
    fn path_instance(interior_pos: &str, gold_interior: usize) -> PathInstance {
        let src = sentence("en", &[("a", "A"), ("b", "B")]);
        let tgt = sentence(
            "hi",
            &[
                ("w1", "E1"),
                ("w2", if gold_interior == 2 { interior_pos } else { "F" }),
                ("w3", if gold_interior == 3 { interior_pos } else { "F" }),
                ("w4", "E2"),
            ],
        );
        let alignment = Alignment::new(vec![(1, 1), (2, 4)]).unwrap();
        let pair = BitextPair::new(src, tgt, alignment, None, None).unwrap();
        PathInstance {
            pair,
            direction: Direction::SrcToTgt,
            src_edge: (2, 1),
            endpoints: (1, 4),
            gold: ProjectedPath::new(vec![1, gold_interior, 4]).unwrap(),
        }
    }

    #[test]
    fn path_training_fits_marked_interiors() {
        // Paths must run through the POS-marked token, which is sometimes
        // position 2 and sometimes position 3.
        let instances = vec![
            path_instance("M", 2),
            path_instance("M", 3),
            path_instance("M", 2),
            path_instance("M", 3),
        ];
        let model = train_path_predictor(&instances, 50, 0).unwrap();
        for instance in &instances {
            let n = instance.direction.path_side(&instance.pair).len();
            let predicted = best_path(
                instance.endpoints,
                instance.gold.k(),
                |a, b| {
                    crate::projection::path_edge_score(
                        &model,
                        instance.gold.k(),
                        instance.src_edge,
                        (a, b),
                        &instance.pair,
                        instance.direction,
                    )
                },
                n,
            )
            .unwrap();
            assert_eq!(predicted, instance.gold);
        }
    }

    #[test]
    fn path_training_accepts_empty_and_rejects_bad_lengths() {
        let model = train_path_predictor(&[], 10, 0).unwrap();
        assert!(model.is_zero());
        let mut bad = path_instance("M", 2);
        bad.gold = ProjectedPath::new(vec![1, 4]).unwrap();
        assert!(train_path_predictor(&[bad], 10, 0).is_err());
    }

    #[test]
    fn path_training_is_deterministic() {
        let instances = vec![path_instance("M", 2), path_instance("M", 3)];
        let m1 = train_path_predictor(&instances, 12, 7).unwrap();
        let m2 = train_path_predictor(&instances, 12, 8).unwrap();
        assert_eq!(m1, m2);
    }
}
