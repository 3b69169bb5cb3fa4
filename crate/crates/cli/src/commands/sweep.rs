//! `sweep`: run the full pipeline once per outer-iteration budget and
//! tabulate attachment accuracy on the chosen side at each budget.

use std::fmt::Write as _;
use std::path::PathBuf;

use biparse::{iteration_sweep, parse_pp_gold, BitextPair};

use crate::commands::load_corpus;
use crate::config::{parse_side, resolve_agreement, FileConfig};
use crate::fail::{CmdResult, Failure};
use crate::store;
use crate::SweepArgs;

fn parse_iters(text: &str) -> CmdResult<Vec<usize>> {
    let mut budgets = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let value: usize = part
            .parse()
            .map_err(|_| Failure::validation(format!("--iters: bad budget {part:?}")))?;
        if value == 0 {
            return Err(Failure::validation("--iters: budgets must be >= 1".to_string()));
        }
        budgets.push(value);
    }
    Ok(budgets)
}

pub fn run(args: SweepArgs, cfg: &FileConfig) -> CmdResult<()> {
    let models_dir: PathBuf = cfg.required(args.models, "models")?;
    let gold_path: PathBuf = cfg.required(args.gold, "gold")?;
    let iters_text = cfg.or_default(args.iters, "iters", "10,20,30,40,50,60".to_string())?;
    let budgets = parse_iters(&iters_text)?;
    let side_name = cfg.or_default(args.side, "side", "src".to_string())?;
    let side = parse_side(&side_name)?;
    let out: PathBuf = cfg.or_default(args.out, "out", PathBuf::from("sweep.tsv"))?;
    let agreement = resolve_agreement(&args.agreement, cfg)?;
    let corpus = load_corpus(args.pair, cfg)?;
    let models =
        store::load_model_set(&models_dir, &corpus.src_lang, &corpus.tgt_lang, false)?;

    let gold_text = store::read_input(&gold_path)?;
    let instances = parse_pp_gold(&gold_text)
        .map_err(|e| Failure::validation(format!("{}: {e}", gold_path.display())))?;
    if instances.is_empty() {
        return Err(Failure::validation(format!(
            "{}: no instances",
            gold_path.display()
        )));
    }

    let named: Vec<(String, BitextPair)> = store::positional_ids(corpus.pairs.len())
        .into_iter()
        .zip(corpus.pairs)
        .collect();
    let rows = iteration_sweep(&named, &models, &agreement, &budgets, &instances, side)
        .map_err(|e| Failure::runtime(e.to_string()))?;

    let mut tsv = String::from("outer_iters\tcorrect\ttotal\taccuracy\n");
    println!("outer_iters\tcorrect\ttotal\taccuracy");
    for row in &rows {
        let line = format!(
            "{}\t{}\t{}\t{}",
            row.outer_iters, row.correct, row.total, row.accuracy
        );
        println!("{line}");
        let _ = writeln!(tsv, "{line}");
    }
    store::write_output(&out, &tsv)?;
    println!("wrote {}", out.display());
    Ok(())
}
