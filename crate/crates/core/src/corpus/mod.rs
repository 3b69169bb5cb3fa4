//! Data model for parsed sentences, dependency trees, word alignments, and
//! aligned sentence pairs.
//!
//! All types validate their invariants on construction and are immutable
//! afterwards, so a value that exists is a value that is well-formed. Token
//! indices are 1-based throughout; index 0 is the artificial root and never
//! corresponds to a token.

mod conll;
mod pharaoh;

pub use conll::{read_conll, write_conll, TreebankEntry};
pub use pharaoh::{read_alignments, write_alignments};

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A single token: 1-based position, surface form, and POS tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    index: usize,
    form: String,
    pos: String,
}

impl Token {
    pub fn new(index: usize, form: impl Into<String>, pos: impl Into<String>) -> Result<Self> {
        let form = form.into();
        let pos = pos.into();
        if index == 0 {
            return Err(Error::Sentence("token index must be >= 1".into()));
        }
        if form.is_empty() || pos.is_empty() {
            return Err(Error::Sentence(format!(
                "token {} has an empty form or POS tag",
                index
            )));
        }
        Ok(Token { index, form, pos })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn form(&self) -> &str {
        &self.form
    }

    pub fn pos(&self) -> &str {
        &self.pos
    }
}

/// A POS-tagged sentence in one language. Position 0 (the root) is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSentence {
    lang: String,
    tokens: Vec<Token>,
}

impl ParsedSentence {
    /// Requires at least one token and token indices running exactly 1..=n.
    pub fn new(lang: impl Into<String>, tokens: Vec<Token>) -> Result<Self> {
        let lang = lang.into();
        if tokens.is_empty() {
            return Err(Error::Sentence("sentence has no tokens".into()));
        }
        for (i, token) in tokens.iter().enumerate() {
            if token.index() != i + 1 {
                return Err(Error::Sentence(format!(
                    "token indices must be contiguous from 1; found {} at position {}",
                    token.index(),
                    i + 1
                )));
            }
        }
        Ok(ParsedSentence { lang, tokens })
    }

    pub fn lang(&self) -> &str {
        &self.lang
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a sentence always has at least one token
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Form of the token at 1-based position `index`.
    pub fn form(&self, index: usize) -> &str {
        self.tokens[index - 1].form()
    }

    /// POS tag of the token at 1-based position `index`.
    pub fn pos(&self, index: usize) -> &str {
        self.tokens[index - 1].pos()
    }
}

/// A dependency tree over n tokens: one head per token, heads in 0..=n,
/// forming an arborescence rooted at the artificial node 0.
///
/// Several tokens may attach directly to the root; strict single-rootedness
/// can be checked separately with [`DependencyTree::require_single_root`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyTree {
    heads: Vec<usize>,
}

impl DependencyTree {
    /// `heads[i]` is the head of token i+1. Rejects out-of-range heads,
    /// self-attachment, and head cycles.
    pub fn new(heads: Vec<usize>) -> Result<Self> {
        let n = heads.len();
        if n == 0 {
            return Err(Error::Tree("tree has no tokens".into()));
        }
        for (i, &h) in heads.iter().enumerate() {
            let dep = i + 1;
            if h > n {
                return Err(Error::Tree(format!(
                    "head {} of token {} is out of range (n = {})",
                    h, dep, n
                )));
            }
            if h == dep {
                return Err(Error::Tree(format!("token {} is its own head", dep)));
            }
        }
        // Every token has exactly one head and only the root has none, so the
        // structure is a tree iff every head chain reaches 0.
        for start in 1..=n {
            let mut node = start;
            let mut steps = 0;
            while node != 0 {
                node = heads[node - 1];
                steps += 1;
                if steps > n {
                    return Err(Error::Tree(format!(
                        "head cycle involving token {}",
                        start
                    )));
                }
            }
        }
        Ok(DependencyTree { heads })
    }

    pub fn len(&self) -> usize {
        self.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Head of the token at 1-based position `dep` (0 means the root).
    pub fn head_of(&self, dep: usize) -> usize {
        self.heads[dep - 1]
    }

    pub fn heads(&self) -> &[usize] {
        &self.heads
    }

    /// Edges as (head, dependent), in dependent order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.heads.iter().enumerate().map(|(i, &h)| (h, i + 1))
    }

    /// Edge set with each edge as an unordered (min, max) pair.
    pub fn undirected_edges(&self) -> BTreeSet<(usize, usize)> {
        self.edges()
            .map(|(h, d)| (h.min(d), h.max(d)))
            .collect()
    }

    /// Whether the unordered pair {a, b} is an edge of this tree.
    pub fn has_undirected_edge(&self, a: usize, b: usize) -> bool {
        (a >= 1 && self.head_of(a) == b) || (b >= 1 && self.head_of(b) == a)
    }

    pub fn root_children(&self) -> usize {
        self.heads.iter().filter(|&&h| h == 0).count()
    }

    pub fn require_single_root(&self) -> Result<()> {
        match self.root_children() {
            1 => Ok(()),
            k => Err(Error::Tree(format!("{} tokens attach to the root", k))),
        }
    }
}

/// A many-to-many word alignment between two sentences, stored as a set of
/// 1-based (source index, target index) links.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alignment {
    links: BTreeSet<(usize, usize)>,
}

impl Alignment {
    /// Duplicate links collapse; zero indices are rejected (0 is the root,
    /// which is never aligned).
    pub fn new(links: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (s, t) in links {
            if s == 0 || t == 0 {
                return Err(Error::Alignment("alignment links are 1-based".into()));
            }
            set.insert((s, t));
        }
        Ok(Alignment { links: set })
    }

    pub fn empty() -> Self {
        Alignment::default()
    }

    pub fn links(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.links.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Smallest target index aligned to source token `src`, if any.
    pub fn min_target(&self, src: usize) -> Option<usize> {
        self.links
            .iter()
            .filter(|&&(s, _)| s == src)
            .map(|&(_, t)| t)
            .min()
    }

    /// Smallest source index aligned to target token `tgt`, if any.
    pub fn min_source(&self, tgt: usize) -> Option<usize> {
        self.links
            .iter()
            .filter(|&&(_, t)| t == tgt)
            .map(|&(s, _)| s)
            .min()
    }
}

/// An aligned sentence pair, optionally carrying a gold tree for each side.
#[derive(Debug, Clone)]
pub struct BitextPair {
    src: ParsedSentence,
    tgt: ParsedSentence,
    alignment: Alignment,
    src_gold: Option<DependencyTree>,
    tgt_gold: Option<DependencyTree>,
}

impl BitextPair {
    pub fn new(
        src: ParsedSentence,
        tgt: ParsedSentence,
        alignment: Alignment,
        src_gold: Option<DependencyTree>,
        tgt_gold: Option<DependencyTree>,
    ) -> Result<Self> {
        for (s, t) in alignment.links() {
            if s > src.len() || t > tgt.len() {
                return Err(Error::Alignment(format!(
                    "link {}-{} is outside the {}x{} sentence pair",
                    s,
                    t,
                    src.len(),
                    tgt.len()
                )));
            }
        }
        if let Some(tree) = &src_gold {
            if tree.len() != src.len() {
                return Err(Error::Mismatch(format!(
                    "source tree covers {} tokens but the sentence has {}",
                    tree.len(),
                    src.len()
                )));
            }
        }
        if let Some(tree) = &tgt_gold {
            if tree.len() != tgt.len() {
                return Err(Error::Mismatch(format!(
                    "target tree covers {} tokens but the sentence has {}",
                    tree.len(),
                    tgt.len()
                )));
            }
        }
        Ok(BitextPair {
            src,
            tgt,
            alignment,
            src_gold,
            tgt_gold,
        })
    }

    pub fn src(&self) -> &ParsedSentence {
        &self.src
    }

    pub fn tgt(&self) -> &ParsedSentence {
        &self.tgt
    }

    pub fn alignment(&self) -> &Alignment {
        &self.alignment
    }

    pub fn src_gold(&self) -> Option<&DependencyTree> {
        self.src_gold.as_ref()
    }

    pub fn tgt_gold(&self) -> Option<&DependencyTree> {
        self.tgt_gold.as_ref()
    }
}
