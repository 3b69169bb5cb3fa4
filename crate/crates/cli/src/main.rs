//! `biparse` — train, run, and evaluate the bilingual agreement pipeline.
//!
//! Subcommands cover the whole workflow: `train-parser` and
//! `train-projection` fit models, `infer` parses a parallel corpus and
//! reconciles the two sides' trees, `evaluate` and `sweep` score
//! preposition attachments, and `gen-fixtures` writes the synthetic
//! corpora the test suite runs against.
//!
//! Every option can also come from a `key = value` config file
//! (`-c FILE`); command-line flags win over the file, the file wins over
//! built-in defaults. Exit codes: 0 success, 2 input validation, 3
//! runtime failure.

mod commands;
mod config;
mod fail;
mod store;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::FileConfig;
use crate::fail::CmdResult;

#[derive(Parser)]
#[command(
    name = "biparse",
    version,
    about = "Bilingual agreement-based correction of dependency attachments"
)]
struct Cli {
    /// `key = value` config file consulted when a flag is absent.
    #[arg(short = 'c', long = "config", global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train an edge-factored dependency parser on a CoNLL-X treebank.
    TrainParser(TrainParserArgs),
    /// Fit path-length and path-shape classifiers from parallel trees.
    TrainProjection(TrainProjectionArgs),
    /// Parse a parallel corpus and reconcile the two sides' trees.
    Infer(InferArgs),
    /// Score preposition attachments: baseline vs corrected parses.
    Evaluate(EvaluateArgs),
    /// Re-run inference at several iteration budgets and tabulate accuracy.
    Sweep(SweepArgs),
    /// Write the synthetic corpora and engineered models used by the tests.
    GenFixtures(GenFixturesArgs),
}

/// The three files describing a parallel corpus, plus its language ids.
#[derive(Args)]
struct PairFlags {
    /// Source-side CoNLL-X file.
    #[arg(long, value_name = "FILE")]
    src: Option<PathBuf>,

    /// Target-side CoNLL-X file.
    #[arg(long, value_name = "FILE")]
    tgt: Option<PathBuf>,

    /// Word alignment file, one `i-j` list per sentence pair.
    #[arg(long, value_name = "FILE")]
    alignments: Option<PathBuf>,

    /// Language id of the source side.
    #[arg(long, value_name = "LANG")]
    src_lang: Option<String>,

    /// Language id of the target side.
    #[arg(long, value_name = "LANG")]
    tgt_lang: Option<String>,
}

/// Knobs of the agreement loop, shared by `infer` and `sweep`.
#[derive(Args)]
struct AgreementFlags {
    /// Outer coordinate-descent rounds.
    #[arg(long, value_name = "N")]
    outer_iters: Option<usize>,

    /// Dual subgradient iterations per projection step.
    #[arg(long, value_name = "N")]
    inner_iters: Option<usize>,

    /// Initial dual step size.
    #[arg(long, value_name = "X")]
    alpha0: Option<f64>,

    /// Step-size schedule: `constant` or `harmonic`.
    #[arg(long, value_name = "NAME")]
    alpha_schedule: Option<String>,

    /// Stop when `either` side's projection certifies, or require `both`.
    #[arg(long, value_name = "NAME")]
    convergence: Option<String>,

    /// Random seed. The pipeline is deterministic; the seed is recorded
    /// so future stochastic variants keep a stable interface.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

#[derive(Args)]
struct TrainParserArgs {
    /// Language id recorded in the model file.
    #[arg(long, value_name = "LANG")]
    lang: Option<String>,

    /// CoNLL-X treebank with gold heads for every sentence.
    #[arg(long, value_name = "FILE")]
    treebank: Option<PathBuf>,

    /// Perceptron epochs.
    #[arg(long, value_name = "N")]
    epochs: Option<usize>,

    /// Random seed recorded for interface stability.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Directory the `<lang>.parser` file is written into.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainProjectionArgs {
    #[command(flatten)]
    pair: PairFlags,

    /// Which mapping to fit: `src-to-tgt`, `tgt-to-src`, or `both`.
    #[arg(long, value_name = "NAME")]
    direction: Option<String>,

    /// Perceptron epochs.
    #[arg(long, value_name = "N")]
    epochs: Option<usize>,

    /// Random seed recorded for interface stability.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Directory the model files are written into.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InferArgs {
    #[command(flatten)]
    pair: PairFlags,

    /// Directory holding the parser and projection model files.
    #[arg(long, value_name = "DIR")]
    models: Option<PathBuf>,

    /// Output path for the corrected source-side trees (CoNLL-X).
    #[arg(long, value_name = "FILE")]
    out_src: Option<PathBuf>,

    /// Output path for the corrected target-side trees (CoNLL-X).
    #[arg(long, value_name = "FILE")]
    out_tgt: Option<PathBuf>,

    /// Also write a per-iteration TSV record stream to this path.
    #[arg(long, value_name = "FILE")]
    diagnostics: Option<PathBuf>,

    /// Skip the agreement step: output each side's plain best parse.
    #[arg(long)]
    baseline_only: bool,

    #[command(flatten)]
    agreement: AgreementFlags,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Baseline parses (CoNLL-X), one sentence per gold-file id.
    #[arg(long, value_name = "FILE")]
    baseline: Option<PathBuf>,

    /// Corrected parses (CoNLL-X), aligned line-for-line with the baseline.
    #[arg(long, value_name = "FILE")]
    corrected: Option<PathBuf>,

    /// Gold attachments: `sentence_id<TAB>prep_index<TAB>gold_head` lines.
    #[arg(long, value_name = "FILE")]
    gold: Option<PathBuf>,

    /// Output path for the TSV report.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    pair: PairFlags,

    /// Directory holding the parser and projection model files.
    #[arg(long, value_name = "DIR")]
    models: Option<PathBuf>,

    /// Gold attachments for the scored side.
    #[arg(long, value_name = "FILE")]
    gold: Option<PathBuf>,

    /// Comma-separated outer-iteration budgets, e.g. `10,20,30`.
    #[arg(long, value_name = "LIST")]
    iters: Option<String>,

    /// Which side's corrected trees to score: `src` or `tgt`.
    #[arg(long, value_name = "NAME")]
    side: Option<String>,

    /// Output path for the sweep TSV.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(flatten)]
    agreement: AgreementFlags,
}

#[derive(Args)]
struct GenFixturesArgs {
    /// Scenario to write: `ppflip`, `multiround`, or `identity`.
    #[arg(long, value_name = "NAME")]
    kind: Option<String>,

    /// Directory the fixture files are written into.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Number of sentence pairs (identity scenario only).
    #[arg(long, value_name = "N")]
    pairs: Option<usize>,

    /// Seed for the generated sentences (identity scenario only).
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

/// Die quietly when stdout's reader goes away (`biparse ... | head`),
/// like any other text-pipeline tool, instead of panicking mid-print.
#[cfg(unix)]
fn restore_default_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn restore_default_sigpipe() {}

fn main() -> ExitCode {
    restore_default_sigpipe();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: Cli) -> CmdResult<()> {
    let cfg = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::TrainParser(args) => commands::train_parser::run(args, &cfg),
        Command::TrainProjection(args) => commands::train_projection::run(args, &cfg),
        Command::Infer(args) => commands::infer::run(args, &cfg),
        Command::Evaluate(args) => commands::evaluate::run(args, &cfg),
        Command::Sweep(args) => commands::sweep::run(args, &cfg),
        Command::GenFixtures(args) => commands::gen_fixtures::run(args, &cfg),
    }
}
