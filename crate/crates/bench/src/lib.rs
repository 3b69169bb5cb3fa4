//! Shared input builders for the benchmark targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use biparse::{ParsedSentence, ScoreMatrix, Token};

/// A dense random score matrix over `n` tokens.
pub fn random_scores(n: usize, seed: u64) -> ScoreMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scores = ScoreMatrix::new(n);
    for h in 0..=n {
        for d in 1..=n {
            if h != d {
                scores.set(h, d, rng.gen_range(-10.0..10.0));
            }
        }
    }
    scores
}

/// An `n`-token sentence cycling through a small tag bank, for feature
/// extraction and scoring benchmarks.
pub fn synthetic_sentence(n: usize) -> ParsedSentence {
    const TAGS: [&str; 6] = ["DT", "NN", "VB", "IN", "JJ", "RB"];
    let tokens = (1..=n)
        .map(|i| {
            let pos = TAGS[(i - 1) % TAGS.len()];
            Token::new(i, format!("w{i}"), pos).expect("bench token")
        })
        .collect();
    ParsedSentence::new("en", tokens).expect("bench sentence")
}
