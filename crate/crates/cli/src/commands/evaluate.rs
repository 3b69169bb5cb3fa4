//! `evaluate`: score preposition attachments in a baseline parse file and
//! a corrected parse file against a gold attachment list, print the
//! two-column summary, and write it as TSV.
//!
//! Sentences are identified by their 1-based position in the parse files;
//! the gold file's `sentence_id` column must use those same decimal ids.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use biparse::{parse_pp_gold, read_conll, DependencyTree, EvalReport};

use crate::config::FileConfig;
use crate::fail::{CmdResult, Failure};
use crate::store;
use crate::EvaluateArgs;

fn load_predictions(path: &Path) -> CmdResult<Vec<(String, DependencyTree)>> {
    let text = store::read_input(path)?;
    let entries = read_conll(&text, "eval")
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    entries
        .into_iter()
        .enumerate()
        .map(|(i, (_, tree))| {
            let tree = tree.ok_or_else(|| {
                Failure::validation(format!(
                    "{}: sentence {} has no heads",
                    path.display(),
                    i + 1
                ))
            })?;
            Ok(((i + 1).to_string(), tree))
        })
        .collect()
}

pub fn run(args: EvaluateArgs, cfg: &FileConfig) -> CmdResult<()> {
    let baseline_path: PathBuf = cfg.required(args.baseline, "baseline")?;
    let corrected_path: PathBuf = cfg.required(args.corrected, "corrected")?;
    let gold_path: PathBuf = cfg.required(args.gold, "gold")?;
    let out: PathBuf = cfg.or_default(args.out, "out", PathBuf::from("report.tsv"))?;

    let baseline = load_predictions(&baseline_path)?;
    let corrected = load_predictions(&corrected_path)?;
    if baseline.len() != corrected.len() {
        return Err(Failure::validation(format!(
            "sentence counts differ: {} has {}, {} has {}",
            baseline_path.display(),
            baseline.len(),
            corrected_path.display(),
            corrected.len()
        )));
    }
    let gold_text = store::read_input(&gold_path)?;
    let instances = parse_pp_gold(&gold_text)
        .map_err(|e| Failure::validation(format!("{}: {e}", gold_path.display())))?;
    if instances.is_empty() {
        return Err(Failure::validation(format!(
            "{}: no instances",
            gold_path.display()
        )));
    }

    let report = EvalReport::paired(&baseline, &corrected, &instances)
        .map_err(|e| Failure::validation(e.to_string()))?;
    print!("{}", report.render_table());

    let mut tsv = String::from("set\tcorrect\ttotal\taccuracy\n");
    let _ = writeln!(
        tsv,
        "baseline\t{}\t{}\t{}",
        report.correct_baseline,
        report.total,
        report.accuracy_baseline()
    );
    let _ = writeln!(
        tsv,
        "corrected\t{}\t{}\t{}",
        report.correct_corrected,
        report.total,
        report.accuracy_corrected()
    );
    store::write_output(&out, &tsv)?;
    println!("wrote {}", out.display());
    Ok(())
}
