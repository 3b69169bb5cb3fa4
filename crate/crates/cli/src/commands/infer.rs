//! `infer`: parse each sentence pair and reconcile the two sides' trees,
//! writing corrected CoNLL-X files for both languages. `--baseline-only`
//! skips reconciliation and writes each side's plain best parse, which is
//! also what the full run degenerates to when every projection weight is
//! zero.

use std::fmt::Write as _;
use std::path::PathBuf;

use biparse::{coordinate_descent, decode_mst, edge_scores, write_conll, TreebankEntry};

use crate::commands::load_corpus;
use crate::config::{resolve_agreement, FileConfig};
use crate::fail::{CmdResult, Failure};
use crate::store;
use crate::InferArgs;

/// Column header of the `--diagnostics` stream; present even when no
/// record follows (a baseline-only run, or zero pairs).
const DIAG_HEADER: &str = "pair\tside\touter\tinner\tdual\tdisagreements\tchanged\n";

pub fn run(args: InferArgs, cfg: &FileConfig) -> CmdResult<()> {
    let models_dir: PathBuf = cfg.required(args.models, "models")?;
    let out_src: PathBuf =
        cfg.or_default(args.out_src, "out-src", PathBuf::from("corrected.src.conll"))?;
    let out_tgt: PathBuf =
        cfg.or_default(args.out_tgt, "out-tgt", PathBuf::from("corrected.tgt.conll"))?;
    let diagnostics: Option<PathBuf> = cfg.optional(args.diagnostics, "diagnostics")?;
    let baseline_only = cfg.enabled(args.baseline_only, "baseline-only")?;
    let agreement = resolve_agreement(&args.agreement, cfg)?;
    let corpus = load_corpus(args.pair, cfg)?;

    let models = store::load_model_set(
        &models_dir,
        &corpus.src_lang,
        &corpus.tgt_lang,
        baseline_only,
    )?;

    let ids = store::positional_ids(corpus.pairs.len());
    let mut src_entries: Vec<TreebankEntry> = Vec::with_capacity(corpus.pairs.len());
    let mut tgt_entries: Vec<TreebankEntry> = Vec::with_capacity(corpus.pairs.len());
    let mut diag = String::from(DIAG_HEADER);

    for (id, pair) in ids.iter().zip(&corpus.pairs) {
        if baseline_only {
            let (src_tree, _) = decode_mst(&edge_scores(pair.src(), &models.src_parser));
            let (tgt_tree, _) = decode_mst(&edge_scores(pair.tgt(), &models.tgt_parser));
            src_entries.push((pair.src().clone(), Some(src_tree)));
            tgt_entries.push((pair.tgt().clone(), Some(tgt_tree)));
            continue;
        }
        let result = coordinate_descent(pair, &models, &agreement)
            .map_err(|e| Failure::runtime(format!("pair {id}: {e}")))?;
        for round in &result.log {
            for (side, outcome) in [("src", &round.src), ("tgt", &round.tgt)] {
                for rec in &outcome.records {
                    let _ = writeln!(
                        diag,
                        "{id}\t{side}\t{}\t{}\t{:.6}\t{}\t{}",
                        round.outer, rec.inner, rec.dual_value, rec.disagreements, rec.changed
                    );
                }
            }
        }
        src_entries.push((pair.src().clone(), Some(result.src_tree)));
        tgt_entries.push((pair.tgt().clone(), Some(result.tgt_tree)));
    }

    store::write_output(&out_src, &write_conll(&src_entries))?;
    println!("wrote {}", out_src.display());
    store::write_output(&out_tgt, &write_conll(&tgt_entries))?;
    println!("wrote {}", out_tgt.display());
    if let Some(path) = diagnostics {
        store::write_output(&path, &diag)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
