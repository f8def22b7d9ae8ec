//! Confusion matrices, summary metrics, and attribute usage.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{Attribute, FeatureVector};
use crate::forest::{tree_classify, Forest};
use crate::page::Label;

/// Adult is the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub fp: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn new(tp: usize, fn_: usize, fp: usize, tn: usize) -> Self {
        ConfusionMatrix { tp, fn_, fp, tn }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fn_ + self.fp + self.tn
    }

    pub fn add(&mut self, gold: Label, predicted: Label) {
        match (gold, predicted) {
            (Label::Adult, Label::Adult) => self.tp += 1,
            (Label::Adult, Label::Safe) => self.fn_ += 1,
            (Label::Safe, Label::Adult) => self.fp += 1,
            (Label::Safe, Label::Safe) => self.tn += 1,
        }
    }
}

/// Two-by-two layout: rows are gold classes, columns predictions.
impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = [self.tp, self.fn_, self.fp, self.tn]
            .iter()
            .map(|n| n.to_string().len())
            .max()
            .unwrap_or(1)
            .max(3);
        writeln!(f, "{:>w$} {:>w$}   <- classified as", "(a)", "(b)")?;
        writeln!(f, "{:>w$} {:>w$}   (a): class adult", self.tp, self.fn_)?;
        writeln!(f, "{:>w$} {:>w$}   (b): class safe", self.fp, self.tn)
    }
}

/// Tally (gold, predicted) pairs. Every gold label must be present.
pub fn score_run<I>(verdicts: I) -> Result<ConfusionMatrix>
where
    I: IntoIterator<Item = (Option<Label>, Label)>,
{
    let mut cm = ConfusionMatrix::default();
    for (i, (gold, predicted)) in verdicts.into_iter().enumerate() {
        cm.add(gold.ok_or(Error::Unlabeled(i))?, predicted);
    }
    Ok(cm)
}

/// Metrics whose denominator is zero are absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub miss_rate: Option<f64>,
    pub accuracy: Option<f64>,
    pub recall: Option<f64>,
    pub precision: Option<f64>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn metrics(cm: &ConfusionMatrix) -> Metrics {
    Metrics {
        miss_rate: ratio(cm.fn_, cm.tp + cm.fn_),
        accuracy: ratio(cm.tp + cm.tn, cm.total()),
        recall: ratio(cm.tp, cm.tp + cm.fn_),
        precision: ratio(cm.tp, cm.tp + cm.fp),
    }
}

/// Round to `digits` significant digits.
pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits - 1 - magnitude);
    (x * scale).round() / scale
}

/// A fraction as a percentage with two decimals, e.g. `97.22`.
pub fn percent_2dp(x: f64) -> f64 {
    (x * 10_000.0).round() / 100.0
}

impl Metrics {
    /// Same metrics rounded to 4 significant digits.
    pub fn rounded(&self) -> Metrics {
        let r = |m: Option<f64>| m.map(|v| round_sig(v, 4));
        Metrics {
            miss_rate: r(self.miss_rate),
            accuracy: r(self.accuracy),
            recall: r(self.recall),
            precision: r(self.precision),
        }
    }
}

impl fmt::Display for Metrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show =
            |m: Option<f64>| m.map_or("n/a".to_string(), |v| format!("{:.2}%", percent_2dp(v)));
        write!(
            f,
            "miss rate {}, accuracy {}, recall {}, precision {}",
            show(self.miss_rate),
            show(self.accuracy),
            show(self.recall),
            show(self.precision)
        )
    }
}

/// For each attribute, the fraction of pages on which some tree tested it.
/// Every attribute appears in the map. Empty input yields all zeros.
pub fn attribute_usage(forest: &Forest, pages: &[FeatureVector]) -> BTreeMap<Attribute, f64> {
    let mut counts: BTreeMap<Attribute, usize> = Attribute::all().map(|a| (a, 0)).collect();
    for fv in pages {
        let used: BTreeSet<Attribute> = forest
            .trees()
            .iter()
            .flat_map(|t| tree_classify(t, fv).1)
            .collect();
        for a in used {
            *counts.get_mut(&a).expect("all attributes seeded") += 1;
        }
    }
    let n = pages.len();
    counts
        .into_iter()
        .map(|(a, c)| (a, if n == 0 { 0.0 } else { c as f64 / n as f64 }))
        .collect()
}

/// Everything `eval` reports, in JSON-friendly form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub confusion: ConfusionMatrix,
    pub metrics: Metrics,
    pub attribute_usage: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<crate::pipeline::StageReport>,
}

impl EvalReport {
    pub fn new(cm: ConfusionMatrix, usage: &BTreeMap<Attribute, f64>) -> Self {
        EvalReport {
            confusion: cm,
            metrics: metrics(&cm).rounded(),
            attribute_usage: usage
                .iter()
                .filter(|(_, &f)| f > 0.0)
                .map(|(a, &f)| (a.name().to_string(), round_sig(f, 4)))
                .collect(),
            stages: None,
        }
    }
}
