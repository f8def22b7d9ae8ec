//! Text-only adult-content filtering for building a safe search index.
//!
//! Pages are reduced to 36 numeric attributes computed against a set of
//! term lists ([`lexicon`], [`page`], [`features`]), classified by a
//! cost-sensitive boosted decision forest ([`forest`]), and run through a
//! staged filter with a self-updating domain blacklist ([`pipeline`]).
//! [`eval`] scores labeled runs.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod forest;
pub mod lexicon;
pub mod page;
pub mod pipeline;
pub mod synth;

pub use error::{Error, Result};
pub use features::{extract_features, Attribute, FeatureVector};
pub use forest::{classify, forest_score, train_forest, Forest, TrainConfig, VoteThreshold};
pub use lexicon::{Lexicon, LexiconSet};
pub use page::{Label, Page};
pub use pipeline::{Filter, FilterState, PipelineOptions, Stage, Verdict};
