//! Gain-ratio split search over continuous attributes.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::features::{Attribute, FeatureVector};
use crate::page::Label;

/// Gains at or below this are treated as zero.
pub const MIN_GAIN: f64 = 1e-12;
/// Gain ratios and gains closer than this compare as equal.
pub const TIE_EPS: f64 = 1e-12;
/// Slack on the minimum leaf weight, absorbing summation error.
pub const LEAF_WEIGHT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub struct WeightedRow<'a> {
    pub features: &'a FeatureVector,
    pub label: Label,
    pub weight: f64,
}

/// Class weights of a set of rows.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClassWeights {
    pub adult: f64,
    pub safe: f64,
}

impl ClassWeights {
    pub fn of(rows: &[WeightedRow<'_>]) -> Self {
        let mut w = ClassWeights::default();
        for r in rows {
            w.add(r.label, r.weight);
        }
        w
    }

    pub fn add(&mut self, label: Label, weight: f64) {
        match label {
            Label::Adult => self.adult += weight,
            Label::Safe => self.safe += weight,
        }
    }

    pub fn total(&self) -> f64 {
        self.adult + self.safe
    }

    fn sub(self, other: ClassWeights) -> ClassWeights {
        ClassWeights {
            adult: (self.adult - other.adult).max(0.0),
            safe: (self.safe - other.safe).max(0.0),
        }
    }
}

/// Shannon entropy in bits of a two-class weight pair.
pub fn entropy(adult: f64, safe: f64) -> Result<f64> {
    let total = adult + safe;
    if total.is_nan() || total <= 0.0 || adult < 0.0 || safe < 0.0 {
        return Err(Error::ZeroWeights);
    }
    Ok(plogp(adult / total) + plogp(safe / total))
}

fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

fn entropy_of(w: ClassWeights) -> f64 {
    entropy(w.adult, w.safe).unwrap_or(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub attribute: Attribute,
    pub threshold: f64,
    pub gain: f64,
    pub gain_ratio: f64,
}

/// Threshold between two consecutive distinct values. Rows with value
/// `<= threshold` go left.
pub fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid < hi {
        mid
    } else {
        lo
    }
}

/// Ordering used to pick among eligible splits: higher gain ratio, then
/// higher gain, then attribute name, then lower threshold. `Greater`
/// means `a` is preferred.
pub fn prefer(a: &Split, b: &Split) -> Ordering {
    fuzzy_cmp(a.gain_ratio, b.gain_ratio)
        .then_with(|| fuzzy_cmp(a.gain, b.gain))
        .then_with(|| b.attribute.name().cmp(a.attribute.name()))
        .then_with(|| b.threshold.total_cmp(&a.threshold))
}

fn fuzzy_cmp(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= TIE_EPS {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// Every admissible split of `rows`: both sides keep at least
/// `min_leaf_weight` and the gain is positive.
pub fn candidate_splits(
    rows: &[WeightedRow<'_>],
    attributes: &[Attribute],
    min_leaf_weight: f64,
) -> Vec<Split> {
    let total = ClassWeights::of(rows);
    let base = entropy_of(total);
    let w = total.total();
    let mut out = Vec::new();
    let mut order: Vec<usize> = (0..rows.len()).collect();

    for &attr in attributes {
        order.sort_by(|&i, &j| rows[i].features[attr].total_cmp(&rows[j].features[attr]));
        let mut left = ClassWeights::default();
        for k in 0..order.len().saturating_sub(1) {
            let row = &rows[order[k]];
            left.add(row.label, row.weight);
            let lo = row.features[attr];
            let hi = rows[order[k + 1]].features[attr];
            if lo == hi {
                continue;
            }
            let right = total.sub(left);
            let (wl, wr) = (left.total(), right.total());
            let floor = min_leaf_weight - LEAF_WEIGHT_EPS;
            if wl < floor || wr < floor || wl <= 0.0 || wr <= 0.0 {
                continue;
            }
            let gain = base - (wl / w) * entropy_of(left) - (wr / w) * entropy_of(right);
            if gain <= MIN_GAIN {
                continue;
            }
            let split_info = entropy_of(ClassWeights {
                adult: wl,
                safe: wr,
            });
            out.push(Split {
                attribute: attr,
                threshold: midpoint(lo, hi),
                gain,
                gain_ratio: gain / split_info,
            });
        }
    }
    out
}

/// Best gain-ratio split among candidates whose gain is at least the mean
/// gain of all admissible candidates.
pub fn best_split(
    rows: &[WeightedRow<'_>],
    attributes: &[Attribute],
    min_leaf_weight: f64,
) -> Option<Split> {
    let candidates = candidate_splits(rows, attributes, min_leaf_weight);
    if candidates.is_empty() {
        return None;
    }
    let mean = candidates.iter().map(|s| s.gain).sum::<f64>() / candidates.len() as f64;
    candidates
        .into_iter()
        .filter(|s| s.gain >= mean - TIE_EPS)
        .reduce(|best, s| {
            if prefer(&s, &best) == Ordering::Greater {
                s
            } else {
                best
            }
        })
}
