//! Boosted decision forest over page attributes, classifying by vote.

mod model;
mod split;
mod train;
mod tree;

use std::fmt;

use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::page::Label;

pub use self::model::MODEL_VERSION;
pub use self::split::{
    best_split, candidate_splits, entropy, midpoint, prefer, ClassWeights, Split, WeightedRow,
    LEAF_WEIGHT_EPS, MIN_GAIN, TIE_EPS,
};
pub use self::train::{cost_label, grow_tree, train_forest, TrainConfig, TrainReport, TreeReport};
pub use self::tree::{tree_classify, TreeNode};

/// When a page counts as adult.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VoteThreshold {
    /// Adult iff the fraction of adult votes is strictly above this.
    Fraction(f64),
    /// Adult iff at least this many trees vote adult.
    MinVotes(usize),
}

impl Default for VoteThreshold {
    fn default() -> Self {
        VoteThreshold::Fraction(0.5)
    }
}

impl fmt::Display for VoteThreshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VoteThreshold::Fraction(t) => write!(f, "score > {t}"),
            VoteThreshold::MinVotes(k) => write!(f, "at least {k} adult votes"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    trees: Vec<TreeNode>,
    vote: VoteThreshold,
}

impl Forest {
    pub fn new(trees: Vec<TreeNode>, vote: VoteThreshold) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::InvalidModel("forest has no trees".into()));
        }
        check_vote(vote, trees.len())?;
        Ok(Forest { trees, vote })
    }

    pub fn trees(&self) -> &[TreeNode] {
        &self.trees
    }

    pub fn vote_threshold(&self) -> VoteThreshold {
        self.vote
    }

    pub fn set_vote_threshold(&mut self, vote: VoteThreshold) -> Result<()> {
        check_vote(vote, self.trees.len())?;
        self.vote = vote;
        Ok(())
    }

    pub fn with_vote_threshold(mut self, vote: VoteThreshold) -> Result<Self> {
        self.set_vote_threshold(vote)?;
        Ok(self)
    }

    /// Number of trees voting adult.
    pub fn adult_votes(&self, fv: &FeatureVector) -> usize {
        self.trees
            .iter()
            .filter(|t| t.predict(fv) == Label::Adult)
            .count()
    }

    pub fn votes(&self, fv: &FeatureVector) -> Vec<Label> {
        self.trees.iter().map(|t| t.predict(fv)).collect()
    }

    /// Apply the vote rule to a vote count.
    pub fn decide(&self, adult_votes: usize) -> Label {
        let adult = match self.vote {
            VoteThreshold::Fraction(t) => adult_votes as f64 / self.trees.len() as f64 > t,
            VoteThreshold::MinVotes(k) => adult_votes >= k,
        };
        if adult {
            Label::Adult
        } else {
            Label::Safe
        }
    }

    fn training_report(&self, rows: &[(FeatureVector, Label)]) -> TrainReport {
        let n = rows.len() as f64;
        let trees = self
            .trees
            .iter()
            .map(|t| TreeReport {
                size: t.size(),
                training_error: rows.iter().filter(|(fv, l)| t.predict(fv) != *l).count() as f64
                    / n,
            })
            .collect();
        let wrong = rows
            .iter()
            .filter(|(fv, l)| classify(self, fv) != *l)
            .count();
        TrainReport {
            trees,
            global_training_error: wrong as f64 / n,
        }
    }
}

fn check_vote(vote: VoteThreshold, n_trees: usize) -> Result<()> {
    match vote {
        VoteThreshold::Fraction(t) if t > 0.0 && t <= 1.0 => Ok(()),
        VoteThreshold::MinVotes(k) if k >= 1 && k <= n_trees => Ok(()),
        other => Err(Error::InvalidModel(format!(
            "vote threshold `{other}` out of range for {n_trees} trees"
        ))),
    }
}

/// Fraction of trees voting adult.
pub fn forest_score(forest: &Forest, fv: &FeatureVector) -> f64 {
    forest.adult_votes(fv) as f64 / forest.trees.len() as f64
}

pub fn classify(forest: &Forest, fv: &FeatureVector) -> Label {
    forest.decide(forest.adult_votes(fv))
}
