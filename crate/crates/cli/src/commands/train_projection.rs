//! `train-projection`: fit the cross-lingual path classifiers. For each
//! requested direction this extracts training instances from the parallel
//! trees, trains the path-length classifier and the four path predictors,
//! and writes five model files.

use std::path::PathBuf;

use biparse::{
    extract_projection_training, train_path_length, train_path_predictor, Direction,
    PathLengthModel, PathPredictorModel, ProjectionModel,
};

use crate::commands::load_corpus;
use crate::config::FileConfig;
use crate::fail::{CmdResult, Failure};
use crate::store;
use crate::TrainProjectionArgs;

fn parse_directions(text: &str) -> CmdResult<Vec<Direction>> {
    match text {
        "src-to-tgt" => Ok(vec![Direction::SrcToTgt]),
        "tgt-to-src" => Ok(vec![Direction::TgtToSrc]),
        "both" => Ok(vec![Direction::SrcToTgt, Direction::TgtToSrc]),
        other => Err(Failure::validation(format!(
            "direction must be `src-to-tgt`, `tgt-to-src`, or `both`, got {other:?}"
        ))),
    }
}

pub fn run(args: TrainProjectionArgs, cfg: &FileConfig) -> CmdResult<()> {
    let direction_name = cfg.or_default(args.direction, "direction", "both".to_string())?;
    let directions = parse_directions(&direction_name)?;
    let epochs = cfg.or_default(args.epochs, "epochs", 10)?;
    let seed = cfg.or_default(args.seed, "seed", 0)?;
    let out: PathBuf = cfg.or_default(args.out, "out", PathBuf::from("models"))?;
    let corpus = load_corpus(args.pair, cfg)?;

    for (i, pair) in corpus.pairs.iter().enumerate() {
        if pair.src_gold().is_none() || pair.tgt_gold().is_none() {
            return Err(Failure::validation(format!(
                "pair {}: projection training needs trees on both sides",
                i + 1
            )));
        }
    }
    if epochs == 0 {
        eprintln!("warning: epochs = 0; the written models are all zeros");
    }

    for direction in directions {
        let stem = store::direction_stem(direction);
        let data = extract_projection_training(&corpus.pairs, direction)
            .map_err(|e| Failure::validation(e.to_string()))?;
        let s = &data.stats;
        println!(
            "{stem}: {} pairs, {} edges; {} length instances, {} path instances; \
             skipped {} unprojectable, {} over-length, {} through-root",
            s.pairs,
            s.edges_seen,
            s.length_instances,
            s.path_instances,
            s.unprojectable,
            s.too_long,
            s.through_root
        );

        let path_length = if data.length_instances.is_empty() {
            eprintln!("warning: {stem}: no projectable edges; writing a zero path-length model");
            PathLengthModel::zero()
        } else {
            train_path_length(&data.length_instances, epochs, seed)
                .map_err(|e| Failure::validation(e.to_string()))?
        };
        let path_predictor = if data.path_instances.is_empty() {
            eprintln!(
                "warning: {stem}: no multi-edge paths; writing zero path-predictor models"
            );
            PathPredictorModel::zero()
        } else {
            train_path_predictor(&data.path_instances, epochs, seed)
                .map_err(|e| Failure::validation(e.to_string()))?
        };

        let model = ProjectionModel {
            path_length,
            path_predictor,
        };
        for path in store::save_projection(&out, direction, &model)? {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
