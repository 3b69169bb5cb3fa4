//! `train-parser`: fit one language's edge-factored parser on a treebank.

use std::path::PathBuf;

use biparse::{percent_2dp, train_parser};

use crate::config::FileConfig;
use crate::fail::{CmdResult, Failure};
use crate::store;
use crate::TrainParserArgs;

pub fn run(args: TrainParserArgs, cfg: &FileConfig) -> CmdResult<()> {
    let lang: String = cfg.required(args.lang, "lang")?;
    let treebank: PathBuf = cfg.required(args.treebank, "treebank")?;
    let epochs = cfg.or_default(args.epochs, "epochs", 10)?;
    let seed = cfg.or_default(args.seed, "seed", 0)?;
    let out: PathBuf = cfg.or_default(args.out, "out", PathBuf::from("models"))?;

    let entries = store::load_treebank(&treebank, &lang)?;
    if epochs == 0 {
        eprintln!("warning: epochs = 0; the written model is all zeros");
    }
    let (weights, stats) = train_parser(&entries, epochs, seed)
        .map_err(|e| Failure::validation(format!("{}: {e}", treebank.display())))?;

    println!("epoch\tcorrect\ttotal\taccuracy\tupdates");
    for s in &stats {
        println!(
            "{}\t{}\t{}\t{}\t{}",
            s.epoch,
            s.correct_heads,
            s.total_heads,
            percent_2dp(s.correct_heads, s.total_heads),
            s.updates
        );
    }
    let path = store::save_parser(&out, &lang, &weights)?;
    println!("wrote {}", path.display());
    Ok(())
}
