//! Cost-sensitive boosted tree induction.
//!
//! Misclassification cost enters twice: adult rows start with `fn_cost`
//! times the weight of safe rows, and every leaf takes the label with the
//! lower expected cost under {FN = fn_cost, FP = 1}. Boosting follows
//! AdaBoost.M1 reweighting; the resulting trees vote with equal weight.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::split::{best_split, ClassWeights, WeightedRow};
use super::tree::TreeNode;
use super::{Forest, VoteThreshold};
use crate::error::{Error, Result};
use crate::features::{Attribute, FeatureVector};
use crate::page::Label;

/// Attempts per boosting round before a tree with weighted error >= 0.5
/// is kept anyway.
const MAX_ROUND_ATTEMPTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub n_trees: usize,
    pub fn_cost: f64,
    /// Minimum weight per leaf. Weights are rescaled to sum to the number
    /// of rows before each tree is grown, so this reads as a row count.
    pub min_leaf_weight: f64,
    pub max_depth: usize,
    pub rng_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            n_trees: 10,
            fn_cost: 20.0,
            min_leaf_weight: 2.0,
            max_depth: 12,
            rng_seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::InvalidConfig("n_trees must be at least 1".into()));
        }
        if !(self.fn_cost.is_finite() && self.fn_cost > 0.0) {
            return Err(Error::InvalidConfig("fn_cost must be positive".into()));
        }
        if !(self.min_leaf_weight.is_finite() && self.min_leaf_weight > 0.0) {
            return Err(Error::InvalidConfig(
                "min_leaf_weight must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeReport {
    pub size: usize,
    pub training_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub trees: Vec<TreeReport>,
    pub global_training_error: f64,
}

impl TrainReport {
    /// Two-column table of tree sizes and errors followed by the ensemble
    /// error.
    pub fn render(&self) -> String {
        let half = self.trees.len().div_ceil(2);
        let mut out = String::from("tree id  size   error | tree id  size   error\n");
        for i in 0..half {
            let cell = |j: usize| {
                self.trees.get(j).map_or(String::new(), |t| {
                    format!("{j:>7} {:>5} {:>6.1}%", t.size, 100.0 * t.training_error)
                })
            };
            out.push_str(format!("{} | {}", cell(i), cell(i + half)).trim_end());
            out.push('\n');
        }
        out.push_str(&format!(
            "global error {:.1}%\n",
            100.0 * self.global_training_error
        ));
        out
    }
}

/// Label with the lower expected misclassification cost. Ties go to safe.
pub fn cost_label(adult_weight: f64, safe_weight: f64, fn_cost: f64) -> Label {
    if fn_cost * adult_weight > safe_weight {
        Label::Adult
    } else {
        Label::Safe
    }
}

/// Grow one tree over weighted rows.
pub fn grow_tree(rows: &[WeightedRow<'_>], config: &TrainConfig) -> TreeNode {
    let attributes: Vec<Attribute> = Attribute::all().collect();
    grow(rows, &attributes, config, 0)
}

fn grow(
    rows: &[WeightedRow<'_>],
    attributes: &[Attribute],
    config: &TrainConfig,
    depth: usize,
) -> TreeNode {
    let w = ClassWeights::of(rows);
    let leaf = || TreeNode::Leaf {
        label: cost_label(w.adult, w.safe, config.fn_cost),
        weights: (w.adult, w.safe),
    };
    let pure = rows.windows(2).all(|p| p[0].label == p[1].label);
    if pure || depth >= config.max_depth {
        return leaf();
    }
    let Some(split) = best_split(rows, attributes, config.min_leaf_weight) else {
        return leaf();
    };
    let (left, right): (Vec<WeightedRow<'_>>, Vec<WeightedRow<'_>>) = rows
        .iter()
        .partition(|r| r.features[split.attribute] <= split.threshold);
    TreeNode::Internal {
        attribute: split.attribute,
        threshold: split.threshold,
        left: Box::new(grow(&left, attributes, config, depth + 1)),
        right: Box::new(grow(&right, attributes, config, depth + 1)),
    }
}

fn normalize(weights: &mut [f64]) {
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
}

/// Multiply each weight by an Exp(1) draw (a Bayesian bootstrap).
fn perturb(weights: &mut [f64], rng: &mut ChaCha8Rng) {
    for w in weights.iter_mut() {
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        *w *= -u.ln();
    }
    normalize(weights);
}

/// Train a boosted forest. Rows must contain both classes.
pub fn train_forest(
    rows: &[(FeatureVector, Label)],
    config: &TrainConfig,
) -> Result<(Forest, TrainReport)> {
    config.validate()?;
    let has = |l: Label| rows.iter().any(|(_, label)| *label == l);
    if rows.len() < 2 || !has(Label::Adult) || !has(Label::Safe) {
        return Err(Error::DegenerateClasses);
    }

    let n = rows.len() as f64;
    let mut initial: Vec<f64> = rows
        .iter()
        .map(|(_, l)| {
            if *l == Label::Adult {
                config.fn_cost
            } else {
                1.0
            }
        })
        .collect();
    normalize(&mut initial);

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut weights = initial.clone();
    let mut trees = Vec::with_capacity(config.n_trees);

    for _ in 0..config.n_trees {
        let mut attempt = 0;
        loop {
            attempt += 1;
            let weighted: Vec<WeightedRow<'_>> = rows
                .iter()
                .zip(&weights)
                .map(|((features, label), &w)| WeightedRow {
                    features,
                    label: *label,
                    weight: w * n,
                })
                .collect();
            let tree = grow_tree(&weighted, config);
            let wrong: Vec<bool> = rows.iter().map(|(fv, l)| tree.predict(fv) != *l).collect();
            let eps: f64 = weights
                .iter()
                .zip(&wrong)
                .filter(|(_, &x)| x)
                .map(|(w, _)| w)
                .sum();

            if eps >= 0.5 && attempt < MAX_ROUND_ATTEMPTS {
                weights.clone_from(&initial);
                perturb(&mut weights, &mut rng);
                continue;
            }
            if eps <= 0.0 || eps >= 0.5 {
                // Nothing to reweight towards; restart from the cost
                // weights with fresh noise.
                weights.clone_from(&initial);
                perturb(&mut weights, &mut rng);
            } else {
                let factor = (1.0 - eps) / eps;
                for (w, &x) in weights.iter_mut().zip(&wrong) {
                    if x {
                        *w *= factor;
                    }
                }
                normalize(&mut weights);
            }
            trees.push(tree);
            break;
        }
    }

    let forest = Forest::new(trees, VoteThreshold::default())?;
    let report = forest.training_report(rows);
    Ok((forest, report))
}
