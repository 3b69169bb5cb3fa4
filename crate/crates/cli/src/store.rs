//! File-backed inputs and outputs: treebank loading, sentence-pair
//! assembly, and the on-disk model directory layout.
//!
//! A model directory holds one `<lang>.parser` file per parser plus, for
//! each projection direction (`src_to_tgt`, `tgt_to_src`), a `.pathlen`
//! file and four `.pathpred.k{2..5}` files.

use std::path::{Path, PathBuf};

use biparse::{
    read_alignments, read_conll, read_parser_model, read_path_length_model,
    read_path_predictor_vector, write_parser_model, write_path_length_model,
    write_path_predictor_vector, BitextPair, Direction, ModelSet, PathPredictorModel,
    ProjectionModel, TreebankEntry, Weights,
};

use crate::fail::{CmdResult, Failure};

/// Reading an input is a validation concern: the user pointed at the file.
pub fn read_input(path: &Path) -> CmdResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))
}

/// Writing an output is a runtime concern; parent directories are created.
pub fn write_output(path: &Path, text: &str) -> CmdResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| {
                Failure::runtime(format!("cannot create {}: {e}", parent.display()))
            })?;
        }
    }
    std::fs::write(path, text)
        .map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn load_treebank(path: &Path, lang: &str) -> CmdResult<Vec<TreebankEntry>> {
    let text = read_input(path)?;
    read_conll(&text, lang).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

/// Read the three parallel files and zip them into sentence pairs. The
/// files must agree on sentence count; alignment links must fit inside
/// their sentences.
pub fn assemble_pairs(
    src_path: &Path,
    tgt_path: &Path,
    align_path: &Path,
    src_lang: &str,
    tgt_lang: &str,
) -> CmdResult<Vec<BitextPair>> {
    let src = load_treebank(src_path, src_lang)?;
    let tgt = load_treebank(tgt_path, tgt_lang)?;
    let align_text = read_input(align_path)?;
    let alignments = read_alignments(&align_text)
        .map_err(|e| Failure::validation(format!("{}: {e}", align_path.display())))?;
    if src.len() != tgt.len() || src.len() != alignments.len() {
        return Err(Failure::validation(format!(
            "sentence counts differ: {} has {}, {} has {}, {} has {}",
            src_path.display(),
            src.len(),
            tgt_path.display(),
            tgt.len(),
            align_path.display(),
            alignments.len(),
        )));
    }
    src.into_iter()
        .zip(tgt)
        .zip(alignments)
        .enumerate()
        .map(|(i, (((src_sent, src_gold), (tgt_sent, tgt_gold)), alignment))| {
            BitextPair::new(src_sent, tgt_sent, alignment, src_gold, tgt_gold)
                .map_err(|e| Failure::validation(format!("pair {}: {e}", i + 1)))
        })
        .collect()
}

/// Sentence ids for pair-level outputs: the 1-based position in the input
/// files, rendered in decimal. Gold attachment files must use the same ids.
pub fn positional_ids(count: usize) -> Vec<String> {
    (1..=count).map(|i| i.to_string()).collect()
}

pub fn direction_stem(direction: Direction) -> &'static str {
    match direction {
        Direction::SrcToTgt => "src_to_tgt",
        Direction::TgtToSrc => "tgt_to_src",
    }
}

pub fn parser_path(dir: &Path, lang: &str) -> PathBuf {
    dir.join(format!("{lang}.parser"))
}

pub fn save_parser(dir: &Path, lang: &str, weights: &Weights) -> CmdResult<PathBuf> {
    let path = parser_path(dir, lang);
    write_output(&path, &write_parser_model(weights, lang))?;
    Ok(path)
}

pub fn load_parser(dir: &Path, lang: &str) -> CmdResult<Weights> {
    let path = parser_path(dir, lang);
    let text = read_input(&path)?;
    let (weights, model_lang) = read_parser_model(&text)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    if model_lang != lang {
        return Err(Failure::validation(format!(
            "{}: model is for language {model_lang:?}, not {lang:?}",
            path.display()
        )));
    }
    Ok(weights)
}

/// Write the five files of one projection direction; returns their paths.
pub fn save_projection(
    dir: &Path,
    direction: Direction,
    model: &ProjectionModel,
) -> CmdResult<Vec<PathBuf>> {
    let stem = direction_stem(direction);
    let mut written = Vec::with_capacity(5);
    let len_path = dir.join(format!("{stem}.pathlen"));
    write_output(&len_path, &write_path_length_model(&model.path_length))?;
    written.push(len_path);
    for k in 2..=5 {
        let path = dir.join(format!("{stem}.pathpred.k{k}"));
        write_output(&path, &write_path_predictor_vector(&model.path_predictor, k))?;
        written.push(path);
    }
    Ok(written)
}

pub fn load_projection(dir: &Path, direction: Direction) -> CmdResult<ProjectionModel> {
    let stem = direction_stem(direction);
    let len_path = dir.join(format!("{stem}.pathlen"));
    let path_length = read_path_length_model(&read_input(&len_path)?)
        .map_err(|e| Failure::validation(format!("{}: {e}", len_path.display())))?;
    let mut path_predictor = PathPredictorModel::zero();
    for k in 2..=5 {
        let path = dir.join(format!("{stem}.pathpred.k{k}"));
        let (file_k, vector) = read_path_predictor_vector(&read_input(&path)?)
            .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
        if file_k != k {
            return Err(Failure::validation(format!(
                "{}: file holds path length {file_k}, expected {k}",
                path.display()
            )));
        }
        *path_predictor.vector_mut(k) = vector;
    }
    Ok(ProjectionModel {
        path_length,
        path_predictor,
    })
}

/// Load everything inference needs. With `parsers_only` the projection
/// files are not touched (and need not exist); both projections stay zero.
pub fn load_model_set(
    dir: &Path,
    src_lang: &str,
    tgt_lang: &str,
    parsers_only: bool,
) -> CmdResult<ModelSet> {
    let (src_to_tgt, tgt_to_src) = if parsers_only {
        (ProjectionModel::zero(), ProjectionModel::zero())
    } else {
        (
            load_projection(dir, Direction::SrcToTgt)?,
            load_projection(dir, Direction::TgtToSrc)?,
        )
    };
    Ok(ModelSet {
        src_lang: src_lang.to_string(),
        tgt_lang: tgt_lang.to_string(),
        src_parser: load_parser(dir, src_lang)?,
        tgt_parser: load_parser(dir, tgt_lang)?,
        src_to_tgt,
        tgt_to_src,
    })
}
