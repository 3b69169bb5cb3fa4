//! Bilingual agreement-based correction of dependency attachments.
//!
//! This crate trains edge-factored dependency parsers for two languages plus
//! a pair of cross-lingual path models, then runs a dual-decomposition
//! inference step that nudges each language's parse toward agreement with
//! the parallel sentence's parse through the word alignment. The intended
//! payoff is on systematically ambiguous attachments — prepositional
//! phrases above all — where one language's syntax is unambiguous and the
//! other's is not.

pub mod agreement;
pub mod corpus;
mod error;
pub mod eval;
pub mod fixtures;
pub mod model_io;
pub mod parser;
pub mod projection;

pub use agreement::{
    coordinate_descent, joint_objective, project, r_score, AgreementConfig, AgreementResult,
    AlphaSchedule, ConvergenceMode, DualState, InnerRecord, ModelSet, OuterRecord,
    ProjectOutcome, Side,
};
pub use corpus::{
    read_alignments, read_conll, write_alignments, write_conll, Alignment, BitextPair,
    DependencyTree, ParsedSentence, Token, TreebankEntry,
};
pub use error::{Error, Result};
pub use eval::{
    count_correct_heads, find_pp_candidates, iteration_sweep, parse_pp_gold, percent_2dp,
    score_attachments, write_pp_gold, AttachmentScore, EvalReport, PPInstance, SweepRow,
};
pub use fixtures::{
    identity_corpus, multi_round_fixture, pp_flip_fixture, rule_treebank, FlipFixture,
    MultiRoundFixture,
};
pub use model_io::{
    read_parser_model, read_path_length_model, read_path_predictor_vector, write_parser_model,
    write_path_length_model, write_path_predictor_vector,
};
pub use parser::{
    brute_force_decode, decode_mst, edge_scores, extract_edge_features, train_parser,
    EpochStats, FeatureVector, ScoreMatrix, Weights, ROOT_POS,
};
pub use projection::{
    best_path, extract_projection_training, four_node_features, path_edge_score, path_score,
    project_endpoints, train_path_length, train_path_predictor, train_projection_model, tree_path,
    Direction,
    ExtractionStats, LengthInstance, PathInstance, PathLengthModel, PathPredictorModel,
    ProjectedPath, ProjectionModel, ProjectionTrainingData,
};
