//! Deterministic corpora and hand-built model sets shared by the test suite
//! and the `gen-fixtures` command.
//!
//! Three scenario families live here:
//!
//! * [`rule_treebank`] — a synthetic treebank whose gold heads follow fixed
//!   part-of-speech rules, so a linear edge-factored model can fit it exactly;
//! * [`identity_corpus`] — sentence pairs whose two sides share one tree
//!   under the identity alignment, so projection training sees only direct
//!   edges and produces all-zero models;
//! * [`pp_flip_fixture`] / [`multi_round_fixture`] — engineered bilingual
//!   scenarios in which one language's unambiguous tree supplies the path
//!   evidence that corrects the other language's preposition attachment,
//!   either in a single round or only after an intermediate correction.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::agreement::{AgreementConfig, AlphaSchedule, ConvergenceMode, ModelSet};
use crate::corpus::{
    Alignment, BitextPair, DependencyTree, ParsedSentence, Token, TreebankEntry,
};
use crate::eval::PPInstance;
use crate::parser::Weights;
use crate::projection::{PathLengthModel, PathPredictorModel, ProjectionModel};

fn sentence(lang: &str, words: &[(&str, &str)]) -> ParsedSentence {
    let tokens = words
        .iter()
        .enumerate()
        .map(|(i, (form, pos))| Token::new(i + 1, *form, *pos).expect("fixture token"))
        .collect();
    ParsedSentence::new(lang, tokens).expect("fixture sentence")
}

fn tree(heads: Vec<usize>) -> DependencyTree {
    DependencyTree::new(heads).expect("fixture tree")
}

fn weights(entries: &[(&str, f64)]) -> Weights {
    let mut w = Weights::new();
    for (feature, value) in entries {
        w.set(*feature, *value);
    }
    w
}

// ---------------------------------------------------------------------------
// Rule-generated treebank
// ---------------------------------------------------------------------------

/// Generate `count` sentences whose gold heads are a deterministic function
/// of the POS sequence: the single verb heads the sentence; nouns,
/// prepositions, and adverbs attach to the verb; determiners and adjectives
/// attach to the nearest noun on their right. Sentences are built from
/// noun-phrase chunks, so that nearest noun always sits within two positions.
///
/// The same seed always reproduces the same treebank.
pub fn rule_treebank(count: usize, lang: &str, seed: u64) -> Vec<TreebankEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rule_entry(lang, &mut rng)).collect()
}

fn rule_entry(lang: &str, rng: &mut ChaCha8Rng) -> TreebankEntry {
    let tags = rule_pos_sequence(rng);
    let words: Vec<(String, &'static str)> = tags
        .iter()
        .map(|&pos| {
            let form = format!("{}{}", pos.to_lowercase(), rng.gen_range(0..12));
            (form, pos)
        })
        .collect();
    let heads = rule_heads(&tags);
    let tokens = words
        .iter()
        .enumerate()
        .map(|(i, (form, pos))| Token::new(i + 1, form.as_str(), *pos).expect("fixture token"))
        .collect();
    let sent = ParsedSentence::new(lang, tokens).expect("fixture sentence");
    (sent, Some(tree(heads)))
}

fn push_noun_phrase(tags: &mut Vec<&'static str>, rng: &mut ChaCha8Rng) {
    if rng.gen_bool(0.6) {
        tags.push("DT");
    }
    if rng.gen_bool(0.4) {
        tags.push("JJ");
    }
    tags.push("NN");
}

fn rule_pos_sequence(rng: &mut ChaCha8Rng) -> Vec<&'static str> {
    let mut tags = Vec::new();
    if rng.gen_bool(0.875) {
        push_noun_phrase(&mut tags, rng); // subject
    }
    tags.push("VB");
    if rng.gen_bool(0.8) {
        push_noun_phrase(&mut tags, rng); // object
    }
    if rng.gen_bool(0.5) {
        tags.push("IN");
        push_noun_phrase(&mut tags, rng); // prepositional phrase
    }
    if rng.gen_bool(1.0 / 3.0) {
        tags.push("RB");
    }
    tags
}

fn rule_heads(tags: &[&str]) -> Vec<usize> {
    let verb = tags
        .iter()
        .position(|&t| t == "VB")
        .expect("every generated sentence has a verb")
        + 1;
    (1..=tags.len())
        .map(|d| match tags[d - 1] {
            "VB" => 0,
            "NN" | "IN" | "RB" => verb,
            // DT and JJ: nearest NN to the right, falling back to the left.
            _ => (d + 1..=tags.len())
                .find(|&h| tags[h - 1] == "NN")
                .or_else(|| (1..d).rev().find(|&h| tags[h - 1] == "NN"))
                .expect("every DT/JJ has a noun in reach"),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Identity corpus
// ---------------------------------------------------------------------------

/// Generate `count` sentence pairs in which both sides carry the same POS
/// sequence and the same gold tree, linked token-for-token by the identity
/// alignment. Target forms are distinct from source forms. Because each
/// side's tree mirrors the other's, every projected edge lands on a direct
/// (length-1) path, so projection models trained on this corpus stay at zero.
pub fn identity_corpus(count: usize, seed: u64) -> Vec<BitextPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (src, gold) = rule_entry("en", &mut rng);
            let gold = gold.expect("rule entries carry trees");
            let tgt_tokens = src
                .tokens()
                .iter()
                .map(|t| {
                    Token::new(t.index(), format!("x{}", t.form()), t.pos())
                        .expect("fixture token")
                })
                .collect();
            let tgt = ParsedSentence::new("hi", tgt_tokens).expect("fixture sentence");
            let alignment =
                Alignment::new((1..=src.len()).map(|i| (i, i))).expect("identity alignment");
            BitextPair::new(src, tgt, alignment, Some(gold.clone()), Some(gold))
                .expect("fixture pair")
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Preposition-flip scenario
// ---------------------------------------------------------------------------

/// A bilingual evaluation scenario where the source-language parser narrowly
/// prefers verb attachment for every preposition, while the target language
/// marks the distinction overtly and its parser gets every tree right.
///
/// Half the held-out pairs are noun-attachment cases the source baseline
/// therefore gets wrong; path evidence read off the target trees (through
/// projection models fitted on [`FlipFixture::train`]) flips them back.
#[derive(Debug, Clone)]
pub struct FlipFixture {
    /// Gold-annotated pairs for fitting the projection models.
    pub train: Vec<BitextPair>,
    /// Held-out pairs with sentence ids: noun-attachment cases first
    /// ("p01".."p10"), then verb-attachment cases ("p11".."p20").
    pub test: Vec<(String, BitextPair)>,
    /// Hand-set source parser: wide margins everywhere except the
    /// preposition, which prefers the verb by half a point.
    pub src_parser: Weights,
    /// Hand-set target parser: wide margins on every decision, using the
    /// token between the candidate heads to tell the two constructions apart.
    pub tgt_parser: Weights,
    /// Gold preposition attachments for the held-out pairs (source side).
    pub instances: Vec<PPInstance>,
}

/// English-like side: "I washed the jeans with OBJ"; the target side marks
/// noun attachment with an adjectival linker ("waali") and verb attachment
/// with an instrumental marker ("se") on the second token.
fn flip_pair(noun: bool, src_obj: &str, tgt_obj: &str) -> BitextPair {
    let src = sentence(
        "en",
        &[
            ("I", "PRP"),
            ("washed", "VBD"),
            ("the", "DT"),
            ("jeans", "NNS"),
            ("with", "IN"),
            (src_obj, "NN"),
        ],
    );
    let src_gold = if noun {
        vec![2, 0, 4, 2, 4, 5]
    } else {
        vec![2, 0, 4, 2, 2, 5]
    };
    let tgt = if noun {
        sentence(
            "hi",
            &[
                ("maine", "PRP"),
                (tgt_obj, "NN"),
                ("waali", "JJ"),
                ("jeans", "NNS"),
                ("dhoyee", "VM"),
            ],
        )
    } else {
        sentence(
            "hi",
            &[
                ("maine", "PRP"),
                (tgt_obj, "NN"),
                ("se", "PSP"),
                ("jeans", "NNS"),
                ("dhoyee", "VM"),
            ],
        )
    };
    let tgt_gold = if noun {
        vec![5, 4, 2, 5, 0]
    } else {
        vec![5, 5, 2, 5, 0]
    };
    let alignment =
        Alignment::new([(1, 1), (2, 5), (4, 4), (5, 3), (6, 2)]).expect("fixture alignment");
    BitextPair::new(
        src,
        tgt,
        alignment,
        Some(tree(src_gold)),
        Some(tree(tgt_gold)),
    )
    .expect("fixture pair")
}

/// Build the preposition-flip scenario: 40 training pairs (alternating noun
/// and verb attachment, one vocabulary bank) and 20 held-out pairs (a second
/// bank; ten noun cases then ten verb cases), plus both hand-set parsers and
/// the gold attachment list for the held-out side.
pub fn pp_flip_fixture() -> FlipFixture {
    let train = (0..40)
        .map(|i| {
            let noun = i % 2 == 0;
            if noun {
                flip_pair(true, &format!("thing{i}"), &format!("cheez{i}"))
            } else {
                flip_pair(false, &format!("tool{i}"), &format!("auzaar{i}"))
            }
        })
        .collect();

    let mut test = Vec::new();
    let mut instances = Vec::new();
    for i in 0..20 {
        let noun = i < 10;
        let id = format!("p{:02}", i + 1);
        let pair = if noun {
            flip_pair(true, &format!("item{i}"), &format!("vastu{i}"))
        } else {
            flip_pair(false, &format!("gear{i}"), &format!("yantra{i}"))
        };
        instances.push(PPInstance {
            sentence_id: id.clone(),
            prep_index: 5,
            gold_head: if noun { 4 } else { 2 },
        });
        test.push((id, pair));
    }

    // The preposition's margin is the only narrow one: verb attachment wins
    // the baseline by 0.5, small enough for path evidence to overturn.
    let src_parser = weights(&[
        ("pp=<root>|VBD", 60.0),
        ("pp=VBD|PRP", 60.0),
        ("pp=NNS|DT", 60.0),
        ("pp=VBD|NNS", 60.0),
        ("pp=IN|NN", 60.0),
        ("pp=VBD|IN", 2.0),
        ("pp=NNS|IN", 1.5),
    ]);

    // The second token's head depends on the construction: under the
    // adjectival linker it belongs to the fourth token, under the
    // instrumental marker to the verb. The between-token tag pair separates
    // the two cases at full margin.
    let tgt_parser = weights(&[
        ("pp=<root>|VM", 60.0),
        ("pp=VM|PRP", 60.0),
        ("pp=VM|NNS", 60.0),
        ("pp=NNS|NN", 60.0),
        ("pp=VM|NN", 60.0),
        ("btw=JJ_NNS", -60.0),
        ("btw=PSP_NNS", 60.0),
        ("pp=NN|JJ", 60.0),
        ("pp=NN|PSP", 60.0),
    ]);

    FlipFixture {
        train,
        test,
        src_parser,
        tgt_parser,
        instances,
    }
}

// ---------------------------------------------------------------------------
// Multi-round scenario
// ---------------------------------------------------------------------------

/// A single sentence pair engineered so that agreement needs two rounds:
/// the first round fixes one attachment on each side, and only the corrected
/// target tree provides the path evidence that flips the source preposition
/// in the second round. With a one-round budget the preposition stays wrong;
/// with two or more rounds it is corrected.
#[derive(Debug, Clone)]
pub struct MultiRoundFixture {
    /// The sentence pair, id "m1" in the gold attachment list.
    pub pair: BitextPair,
    /// Hand-set parsers and projection models for both directions.
    pub models: ModelSet,
    /// Small, decaying step sizes and a short inner budget keep the
    /// engineered margins intact across rounds.
    pub config: AgreementConfig,
    /// The one gold preposition attachment (source side).
    pub instances: Vec<PPInstance>,
}

/// Build the two-round scenario. Baselines start with both the source
/// preposition and its object on the verb, and the target adjective on the
/// wrong noun; round one repairs the object and the adjective, round two
/// repairs the preposition using the now-correct target tree.
pub fn multi_round_fixture() -> MultiRoundFixture {
    let pair = flip_pair(true, "pockets", "jeb");

    let src_parser = weights(&[
        ("pp=<root>|VBD", 20.0),
        ("pp=VBD|PRP", 20.0),
        ("pp=NNS|DT", 20.0),
        ("pp=VBD|NNS", 20.0),
        ("pp=IN|NN", 19.5),
        ("pp=VBD|NN", 20.0),
        ("pp=VBD|IN", 2.5),
        ("pp=NNS|IN", 1.5),
    ]);
    let tgt_parser = weights(&[
        ("pp=<root>|VM", 20.0),
        ("pp=VM|PRP", 20.0),
        ("pp=VM|NNS", 20.0),
        ("pp=NNS|NN", 20.0),
        ("pp=NNS|JJ", 10.0),
        ("pp=NN|JJ", 9.5),
    ]);

    let mut src_to_tgt = ProjectionModel {
        path_length: PathLengthModel::zero(),
        path_predictor: PathPredictorModel::zero(),
    };
    for (feature, value) in [
        ("spp=VBD|PRP", 1.0),
        ("spp=VBD|NNS", 1.0),
        ("spp=IN|NN", 1.0),
    ] {
        src_to_tgt.path_length.vector_mut(1).set(feature, value);
    }
    src_to_tgt.path_length.vector_mut(2).set("spp=NNS|IN", 1.0);
    for (feature, value) in [
        ("tpp=NNS|NN", 1.0),
        ("tpp=NN|JJ", 1.0),
        ("spp=IN|NN", 2.0),
    ] {
        src_to_tgt.path_predictor.vector_mut(2).set(feature, value);
    }

    let mut tgt_to_src = ProjectionModel {
        path_length: PathLengthModel::zero(),
        path_predictor: PathPredictorModel::zero(),
    };
    for (feature, value) in [
        ("spp=VM|PRP", 1.0),
        ("spp=NN|JJ", 1.0),
        ("spp=VM|NNS", 1.0),
    ] {
        tgt_to_src.path_length.vector_mut(1).set(feature, value);
    }
    tgt_to_src.path_length.vector_mut(2).set("spp=NNS|NN", 1.0);
    for (feature, value) in [
        ("tpp=NNS|IN", 1.0),
        ("tpp=IN|NN", 1.0),
        ("spp=NN|JJ", 1.0),
    ] {
        tgt_to_src.path_predictor.vector_mut(2).set(feature, value);
    }

    let models = ModelSet {
        src_lang: "en".into(),
        tgt_lang: "hi".into(),
        src_parser,
        tgt_parser,
        src_to_tgt,
        tgt_to_src,
    };

    let config = AgreementConfig {
        outer_iters: 30,
        inner_iters: 10,
        alpha0: 0.02,
        alpha_schedule: AlphaSchedule::Harmonic,
        convergence_mode: ConvergenceMode::Either,
        seed: 0,
    };

    let instances = vec![PPInstance {
        sentence_id: "m1".into(),
        prep_index: 5,
        gold_head: 4,
    }];

    MultiRoundFixture {
        pair,
        models,
        config,
        instances,
    }
}
