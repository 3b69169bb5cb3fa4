//! One module per subcommand, plus the corpus-loading step they share.

pub mod evaluate;
pub mod gen_fixtures;
pub mod infer;
pub mod sweep;
pub mod train_parser;
pub mod train_projection;

use std::path::PathBuf;

use biparse::BitextPair;

use crate::config::FileConfig;
use crate::fail::CmdResult;
use crate::store;
use crate::PairFlags;

/// A parallel corpus resolved from flags/config and loaded from disk.
pub struct LoadedCorpus {
    pub pairs: Vec<BitextPair>,
    pub src_lang: String,
    pub tgt_lang: String,
}

pub fn load_corpus(flags: PairFlags, cfg: &FileConfig) -> CmdResult<LoadedCorpus> {
    let src: PathBuf = cfg.required(flags.src, "src")?;
    let tgt: PathBuf = cfg.required(flags.tgt, "tgt")?;
    let alignments: PathBuf = cfg.required(flags.alignments, "alignments")?;
    let src_lang: String = cfg.required(flags.src_lang, "src-lang")?;
    let tgt_lang: String = cfg.required(flags.tgt_lang, "tgt-lang")?;
    let pairs = store::assemble_pairs(&src, &tgt, &alignments, &src_lang, &tgt_lang)?;
    Ok(LoadedCorpus {
        pairs,
        src_lang,
        tgt_lang,
    })
}
