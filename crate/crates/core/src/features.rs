//! The 36 page attributes: URL substring hits, image count, and three
//! statistics per content lexicon.

use std::fmt;
use std::io::Write;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, LexiconSet, CONTENT_LEXICONS};
use crate::page::{Label, Page};

pub const N_ATTRIBUTES: usize = 3 + 3 * CONTENT_LEXICONS.len();

/// Attribute names in vector order.
pub const ATTRIBUTE_NAMES: [&str; N_ATTRIBUTES] = [
    "in_url",
    "in_ndd",
    "nbr_img",
    "nb_brand-names",
    "ratio_brand-names",
    "prop_brand-names",
    "nb_categories-en",
    "ratio_categories-en",
    "prop_categories-en",
    "nb_categories-fr",
    "ratio_categories-fr",
    "prop_categories-fr",
    "nb_categories-gen",
    "ratio_categories-gen",
    "prop_categories-gen",
    "nb_en-words",
    "ratio_en-words",
    "prop_en-words",
    "nb_french-words",
    "ratio_french-words",
    "prop_french-words",
    "nb_pornstars",
    "ratio_pornstars",
    "prop_pornstars",
    "nb_queries",
    "ratio_queries",
    "prop_queries",
    "nb_small-set",
    "ratio_small-set",
    "prop_small-set",
    "nb_tags-en",
    "ratio_tags-en",
    "prop_tags-en",
    "nb_tags-fr",
    "ratio_tags-fr",
    "prop_tags-fr",
];

/// Index of one of the 36 attributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Attribute(u8);

impl Attribute {
    pub const IN_URL: Attribute = Attribute(0);
    pub const IN_NDD: Attribute = Attribute(1);
    pub const NBR_IMG: Attribute = Attribute(2);

    pub fn all() -> impl Iterator<Item = Attribute> + Clone {
        (0..N_ATTRIBUTES as u8).map(Attribute)
    }

    pub fn from_index(i: usize) -> Option<Attribute> {
        (i < N_ATTRIBUTES).then_some(Attribute(i as u8))
    }

    pub fn by_name(name: &str) -> Result<Attribute> {
        ATTRIBUTE_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| Attribute(i as u8))
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    /// `nb_X` for content lexicon `lexicon`.
    pub fn nb(lexicon: &str) -> Result<Attribute> {
        Self::by_name(&format!("nb_{lexicon}"))
    }

    pub fn ratio(lexicon: &str) -> Result<Attribute> {
        Self::by_name(&format!("ratio_{lexicon}"))
    }

    pub fn prop(lexicon: &str) -> Result<Attribute> {
        Self::by_name(&format!("prop_{lexicon}"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn name(self) -> &'static str {
        ATTRIBUTE_NAMES[self.index()]
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Attribute {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Attribute {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        Attribute::by_name(&name).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector([f64; N_ATTRIBUTES]);

impl FeatureVector {
    pub fn zeros() -> Self {
        FeatureVector([0.0; N_ATTRIBUTES])
    }

    pub fn from_values(values: [f64; N_ATTRIBUTES]) -> Self {
        FeatureVector(values)
    }

    pub fn get(&self, attr: Attribute) -> f64 {
        self.0[attr.index()]
    }

    pub fn set(&mut self, attr: Attribute, value: f64) {
        self.0[attr.index()] = value;
    }

    pub fn values(&self) -> &[f64; N_ATTRIBUTES] {
        &self.0
    }

    pub fn named(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        ATTRIBUTE_NAMES.iter().copied().zip(self.0.iter().copied())
    }
}

impl Index<Attribute> for FeatureVector {
    type Output = f64;

    fn index(&self, attr: Attribute) -> &f64 {
        &self.0[attr.index()]
    }
}

/// Number of distinct lexicon terms occurring as substrings of `haystack`.
pub fn substring_hits(haystack: &str, lexicon: &Lexicon) -> usize {
    lexicon.terms().filter(|t| haystack.contains(t)).count()
}

/// The three per-lexicon statistics of a token stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LexiconStats {
    pub nb: usize,
    pub ratio: f64,
    pub prop: f64,
}

/// Scan `tokens` once for every (term, start) match.
pub fn lexicon_stats(tokens: &[String], lexicon: &Lexicon) -> LexiconStats {
    let phrases = lexicon.phrases();
    let mut seen = vec![false; phrases.len()];
    let mut covered = vec![false; tokens.len()];
    let mut nb = 0;
    for (start, tok) in tokens.iter().enumerate() {
        for &p in lexicon.phrases_starting_with(tok) {
            let phrase = &phrases[p];
            if tokens[start..].starts_with(phrase) {
                nb += 1;
                seen[p] = true;
                covered[start..start + phrase.len()].fill(true);
            }
        }
    }
    let distinct = seen.iter().filter(|&&s| s).count();
    let positions = covered.iter().filter(|&&c| c).count();
    LexiconStats {
        nb,
        ratio: distinct as f64 / lexicon.term_count() as f64,
        prop: if tokens.is_empty() {
            0.0
        } else {
            positions as f64 / tokens.len() as f64
        },
    }
}

/// Occurrences of lexicon terms in the token stream, with multiplicity.
pub fn nb_metric(tokens: &[String], lexicon: &Lexicon) -> usize {
    lexicon_stats(tokens, lexicon).nb
}

/// Fraction of the lexicon's terms present at least once.
pub fn ratio_metric(tokens: &[String], lexicon: &Lexicon) -> f64 {
    lexicon_stats(tokens, lexicon).ratio
}

/// Fraction of token positions covered by some lexicon match.
pub fn prop_metric(tokens: &[String], lexicon: &Lexicon) -> f64 {
    lexicon_stats(tokens, lexicon).prop
}

pub fn extract_features(page: &Page, lexicons: &LexiconSet) -> Result<FeatureVector> {
    let mut fv = FeatureVector::zeros();
    let url_terms = lexicons.url_terms();
    fv.set(
        Attribute::IN_URL,
        substring_hits(&page.url.full_url, url_terms) as f64,
    );
    fv.set(
        Attribute::IN_NDD,
        substring_hits(&page.url.registrable_domain, url_terms) as f64,
    );
    fv.set(Attribute::NBR_IMG, page.image_count as f64);
    for (i, name) in CONTENT_LEXICONS.iter().enumerate() {
        let stats = lexicon_stats(&page.tokens, lexicons.get(name)?);
        let base = 3 + 3 * i;
        fv.0[base] = stats.nb as f64;
        fv.0[base + 1] = stats.ratio;
        fv.0[base + 2] = stats.prop;
    }
    Ok(fv)
}

/// Write one CSV row per page: `url,label,` then the 36 attributes in
/// [`ATTRIBUTE_NAMES`] order. Unlabeled rows carry `unlabeled`.
pub fn write_feature_dump<W: Write>(
    out: W,
    rows: &[(String, Option<Label>, FeatureVector)],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["url", "label"];
    header.extend(ATTRIBUTE_NAMES);
    w.write_record(&header)?;
    for (url, label, fv) in rows {
        let mut rec = vec![
            url.clone(),
            label.map_or("unlabeled", Label::as_str).to_string(),
        ];
        rec.extend(fv.values().iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<feature dump>", e))?;
    Ok(())
}
