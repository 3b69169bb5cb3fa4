//! `gen-fixtures`: write one of the synthetic scenarios to disk so every
//! other subcommand can be exercised end-to-end on known data.
//!
//! Each scenario directory ships a `run.conf` holding the settings its
//! follow-on commands share, so flows chain with `-c <dir>/run.conf`:
//!
//! * `ppflip` — gold-annotated training pairs, 20 raw held-out pairs (half
//!   of them misattached by the engineered source parser), both parser
//!   files, and the gold attachment list;
//! * `multiround` — a single pair plus a complete model directory tuned so
//!   the correction needs two agreement rounds;
//! * `identity` — pairs whose two sides share one tree, on which
//!   projection training yields all-zero models.

use std::path::{Path, PathBuf};

use biparse::{
    identity_corpus, multi_round_fixture, pp_flip_fixture, write_alignments, write_conll,
    write_pp_gold, Alignment, AlphaSchedule, BitextPair, ConvergenceMode, Direction, PPInstance,
    TreebankEntry,
};

use crate::config::FileConfig;
use crate::fail::{CmdResult, Failure};
use crate::store;
use crate::GenFixturesArgs;

/// Split pairs into the three parallel files. `keep_gold` controls whether
/// the CoNLL-X files carry the gold heads (training data) or `_` (raw
/// inference input).
fn write_corpus(dir: &Path, stem: &str, pairs: &[BitextPair], keep_gold: bool) -> CmdResult<()> {
    let mut src: Vec<TreebankEntry> = Vec::with_capacity(pairs.len());
    let mut tgt: Vec<TreebankEntry> = Vec::with_capacity(pairs.len());
    let mut align: Vec<Alignment> = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let (src_gold, tgt_gold) = if keep_gold {
            (pair.src_gold().cloned(), pair.tgt_gold().cloned())
        } else {
            (None, None)
        };
        src.push((pair.src().clone(), src_gold));
        tgt.push((pair.tgt().clone(), tgt_gold));
        align.push(pair.alignment().clone());
    }
    store::write_output(&dir.join(format!("{stem}.src.conll")), &write_conll(&src))?;
    store::write_output(&dir.join(format!("{stem}.tgt.conll")), &write_conll(&tgt))?;
    store::write_output(&dir.join(format!("{stem}.align")), &write_alignments(&align))?;
    Ok(())
}

/// Re-key gold attachments to the 1-based positional ids the other
/// commands assign when reading the written corpus files.
fn positional_instances(instances: &[PPInstance]) -> Vec<PPInstance> {
    instances
        .iter()
        .enumerate()
        .map(|(i, inst)| PPInstance {
            sentence_id: (i + 1).to_string(),
            ..inst.clone()
        })
        .collect()
}

fn write_ppflip(dir: &Path) -> CmdResult<()> {
    let fx = pp_flip_fixture();
    write_corpus(dir, "train", &fx.train, true)?;
    let test_pairs: Vec<BitextPair> = fx.test.iter().map(|(_, pair)| pair.clone()).collect();
    write_corpus(dir, "test", &test_pairs, false)?;
    let models = dir.join("models");
    store::save_parser(&models, "en", &fx.src_parser)?;
    store::save_parser(&models, "hi", &fx.tgt_parser)?;
    store::write_output(
        &dir.join("gold.tsv"),
        &write_pp_gold(&positional_instances(&fx.instances)),
    )?;
    let conf = "\
# Preposition-flip scenario. Train projections on train.*, then infer on
# test.* and evaluate against gold.tsv, all with `-c run.conf`.
src-lang = en
tgt-lang = hi
models = models
gold = gold.tsv
";
    store::write_output(&dir.join("run.conf"), conf)
}

fn write_multiround(dir: &Path) -> CmdResult<()> {
    let fx = multi_round_fixture();
    write_corpus(dir, "pair", std::slice::from_ref(&fx.pair), false)?;
    let models_dir = dir.join("models");
    store::save_parser(&models_dir, &fx.models.src_lang, &fx.models.src_parser)?;
    store::save_parser(&models_dir, &fx.models.tgt_lang, &fx.models.tgt_parser)?;
    store::save_projection(&models_dir, Direction::SrcToTgt, &fx.models.src_to_tgt)?;
    store::save_projection(&models_dir, Direction::TgtToSrc, &fx.models.tgt_to_src)?;
    store::write_output(
        &dir.join("gold.tsv"),
        &write_pp_gold(&positional_instances(&fx.instances)),
    )?;
    let schedule = match fx.config.alpha_schedule {
        AlphaSchedule::Constant => "constant",
        AlphaSchedule::Harmonic => "harmonic",
    };
    let convergence = match fx.config.convergence_mode {
        ConvergenceMode::Either => "either",
        ConvergenceMode::Both => "both",
    };
    let conf = format!(
        "\
# Two-round scenario: complete run configuration. The correction lands
# only with two or more outer iterations.
src = pair.src.conll
tgt = pair.tgt.conll
alignments = pair.align
src-lang = {}
tgt-lang = {}
models = models
gold = gold.tsv
outer-iters = {}
inner-iters = {}
alpha0 = {}
alpha-schedule = {schedule}
convergence = {convergence}
seed = {}
",
        fx.models.src_lang,
        fx.models.tgt_lang,
        fx.config.outer_iters,
        fx.config.inner_iters,
        fx.config.alpha0,
        fx.config.seed,
    );
    store::write_output(&dir.join("run.conf"), &conf)
}

fn write_identity(dir: &Path, pairs: usize, seed: u64) -> CmdResult<()> {
    if pairs == 0 {
        return Err(Failure::validation("--pairs must be >= 1".to_string()));
    }
    let corpus = identity_corpus(pairs, seed);
    write_corpus(dir, "pairs", &corpus, true)?;
    let conf = "\
# Identity scenario: both sides share one tree under the identity
# alignment, so trained projection models are all zeros and the full
# pipeline reduces to the baseline parsers.
src = pairs.src.conll
tgt = pairs.tgt.conll
alignments = pairs.align
src-lang = en
tgt-lang = hi
models = models
";
    store::write_output(&dir.join("run.conf"), conf)
}

pub fn run(args: GenFixturesArgs, cfg: &FileConfig) -> CmdResult<()> {
    let kind: String = cfg.required(args.kind, "kind")?;
    let out: PathBuf = cfg.or_default(args.out, "out", PathBuf::from("fixtures"))?;
    let pairs = cfg.or_default(args.pairs, "pairs", 50)?;
    let seed = cfg.or_default(args.seed, "seed", 0)?;
    match kind.as_str() {
        "ppflip" => write_ppflip(&out)?,
        "multiround" => write_multiround(&out)?,
        "identity" => write_identity(&out, pairs, seed)?,
        other => {
            return Err(Failure::validation(format!(
                "kind must be `ppflip`, `multiround`, or `identity`, got {other:?}"
            )))
        }
    }
    println!("wrote {kind} fixture into {}", out.display());
    Ok(())
}
