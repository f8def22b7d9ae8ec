//! Staged filter over a page stream.
//!
//! Stages run in order and the first hit wins:
//!
//! 1. the page's registrable domain is blacklisted,
//! 2. an age-gate disclaimer phrase occurs in the text,
//! 3. the top-level domain is `xxx`,
//! 4. the decision forest votes.
//!
//! Every adult verdict, whatever its stage, counts against the page's
//! domain. Once `blacklist_trigger` distinct URLs of a domain have been
//! ruled adult, the domain joins the blacklist and later pages from it
//! stop at stage 1 without any feature extraction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{extract_features, lexicon_stats};
use crate::forest::Forest;
use crate::lexicon::LexiconSet;
use crate::page::{Label, Page};

pub const DEFAULT_BLACKLIST_TRIGGER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stage {
    Blacklist,
    Disclaimer,
    TldXxx,
    Forest,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Blacklist => "blacklist",
            Stage::Disclaimer => "disclaimer",
            Stage::TldXxx => "tld_xxx",
            Stage::Forest => "forest",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub label: Label,
    pub reason: Stage,
    /// Forest score; present iff `reason` is [`Stage::Forest`].
    pub score: Option<f64>,
}

impl Verdict {
    fn short_circuit(reason: Stage) -> Self {
        Verdict {
            label: Label::Adult,
            reason,
            score: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterState {
    blacklist: BTreeSet<String>,
    unsafe_counts: BTreeMap<String, usize>,
    counted_urls: BTreeSet<String>,
    blacklist_trigger: usize,
}

impl Default for FilterState {
    fn default() -> Self {
        FilterState::new(DEFAULT_BLACKLIST_TRIGGER)
    }
}

impl FilterState {
    pub fn new(blacklist_trigger: usize) -> Self {
        FilterState {
            blacklist: BTreeSet::new(),
            unsafe_counts: BTreeMap::new(),
            counted_urls: BTreeSet::new(),
            blacklist_trigger: blacklist_trigger.max(1),
        }
    }

    pub fn with_blacklist<I, S>(mut self, domains: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for d in domains {
            self.blacklist.insert(d.as_ref().trim().to_lowercase());
        }
        self
    }

    /// Parse a blacklist file: one registrable domain per line, `#`
    /// comments and blank lines ignored.
    pub fn parse_blacklist(text: &str) -> BTreeSet<String> {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect()
    }

    pub fn load_blacklist(mut self, path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.blacklist.extend(Self::parse_blacklist(&text));
        Ok(self)
    }

    pub fn blacklist_text(&self) -> String {
        let mut out = String::new();
        for d in &self.blacklist {
            out.push_str(d);
            out.push('\n');
        }
        out
    }

    pub fn save_blacklist(&self, path: &Path) -> Result<()> {
        fs::write(path, self.blacklist_text()).map_err(|e| Error::io(path, e))
    }

    pub fn blacklist(&self) -> &BTreeSet<String> {
        &self.blacklist
    }

    pub fn is_blacklisted(&self, domain: &str) -> bool {
        self.blacklist.contains(domain)
    }

    pub fn unsafe_count(&self, domain: &str) -> usize {
        self.unsafe_counts.get(domain).copied().unwrap_or(0)
    }

    pub fn unsafe_counts(&self) -> &BTreeMap<String, usize> {
        &self.unsafe_counts
    }

    pub fn blacklist_trigger(&self) -> usize {
        self.blacklist_trigger
    }

    /// Count an adult verdict for `url` on `domain`. A URL counts once.
    /// Returns true if this verdict put the domain on the blacklist.
    pub fn record_adult(&mut self, domain: &str, url: &str) -> bool {
        if !self.counted_urls.insert(url.to_string()) {
            return false;
        }
        let count = self.unsafe_counts.entry(domain.to_string()).or_insert(0);
        *count += 1;
        *count >= self.blacklist_trigger && self.blacklist.insert(domain.to_string())
    }
}

/// Which stages run. The forest stage always runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub blacklist: bool,
    pub disclaimer: bool,
    pub tld_xxx: bool,
    pub blacklist_update: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            blacklist: true,
            disclaimer: true,
            tld_xxx: true,
            blacklist_update: true,
        }
    }
}

impl PipelineOptions {
    pub fn forest_only() -> Self {
        PipelineOptions {
            blacklist: false,
            disclaimer: false,
            tld_xxx: false,
            blacklist_update: false,
        }
    }
}

/// Verdict tallies by stage.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub blacklist: usize,
    pub disclaimer: usize,
    pub tld_xxx: usize,
    pub forest_adult: usize,
    pub forest_safe: usize,
    pub skipped: usize,
}

impl StageReport {
    pub fn record(&mut self, v: &Verdict) {
        match (v.reason, v.label) {
            (Stage::Blacklist, _) => self.blacklist += 1,
            (Stage::Disclaimer, _) => self.disclaimer += 1,
            (Stage::TldXxx, _) => self.tld_xxx += 1,
            (Stage::Forest, Label::Adult) => self.forest_adult += 1,
            (Stage::Forest, Label::Safe) => self.forest_safe += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.blacklist + self.disclaimer + self.tld_xxx + self.forest_adult + self.forest_safe
    }
}

pub struct Filter<'a> {
    forest: &'a Forest,
    lexicons: &'a LexiconSet,
    options: PipelineOptions,
    extractions: usize,
}

impl<'a> Filter<'a> {
    pub fn new(forest: &'a Forest, lexicons: &'a LexiconSet) -> Self {
        Self::with_options(forest, lexicons, PipelineOptions::default())
    }

    pub fn with_options(
        forest: &'a Forest,
        lexicons: &'a LexiconSet,
        options: PipelineOptions,
    ) -> Self {
        Filter {
            forest,
            lexicons,
            options,
            extractions: 0,
        }
    }

    /// Feature extractions performed so far.
    pub fn extractions(&self) -> usize {
        self.extractions
    }

    pub fn options(&self) -> PipelineOptions {
        self.options
    }

    /// Run the stages on one page and update `state`.
    pub fn filter_page(&mut self, page: &Page, state: &mut FilterState) -> Result<Verdict> {
        let verdict = self.judge(page, state)?;
        if verdict.label == Label::Adult && self.options.blacklist_update {
            state.record_adult(page.domain(), &page.url.full_url);
        }
        Ok(verdict)
    }

    fn judge(&mut self, page: &Page, state: &FilterState) -> Result<Verdict> {
        if self.options.blacklist && state.is_blacklisted(page.domain()) {
            return Ok(Verdict::short_circuit(Stage::Blacklist));
        }
        if self.options.disclaimer
            && lexicon_stats(&page.tokens, self.lexicons.disclaimers()).nb > 0
        {
            return Ok(Verdict::short_circuit(Stage::Disclaimer));
        }
        if self.options.tld_xxx && page.url.tld == "xxx" {
            return Ok(Verdict::short_circuit(Stage::TldXxx));
        }
        let fv = extract_features(page, self.lexicons)?;
        self.extractions += 1;
        let votes = self.forest.adult_votes(&fv);
        Ok(Verdict {
            label: self.forest.decide(votes),
            reason: Stage::Forest,
            score: Some(votes as f64 / self.forest.trees().len() as f64),
        })
    }

    /// Filter a stream and collect the URLs of safe pages, in input order.
    /// Items that failed to load are counted as skipped.
    pub fn build_safe_index<I, E>(&mut self, pages: I, state: &mut FilterState) -> Result<SafeIndex>
    where
        I: IntoIterator<Item = std::result::Result<Page, E>>,
        E: fmt::Display,
    {
        let mut out = SafeIndex::default();
        for item in pages {
            match item {
                Ok(page) => {
                    let v = self.filter_page(&page, state)?;
                    out.report.record(&v);
                    if v.label == Label::Safe {
                        out.index.push(page.url.full_url.clone());
                    }
                }
                Err(e) => {
                    out.report.skipped += 1;
                    out.skips.push(e.to_string());
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SafeIndex {
    pub index: Vec<String>,
    pub report: StageReport,
    /// Why each skipped item was skipped.
    pub skips: Vec<String>,
}

/// One-shot form of [`Filter::filter_page`] with every stage enabled.
pub fn filter_page(
    page: &Page,
    forest: &Forest,
    lexicons: &LexiconSet,
    state: &mut FilterState,
) -> Result<Verdict> {
    Filter::new(forest, lexicons).filter_page(page, state)
}

/// One-shot form of [`Filter::build_safe_index`] with every stage enabled.
pub fn build_safe_index<I, E>(
    pages: I,
    forest: &Forest,
    lexicons: &LexiconSet,
    state: &mut FilterState,
) -> Result<SafeIndex>
where
    I: IntoIterator<Item = std::result::Result<Page, E>>,
    E: fmt::Display,
{
    Filter::new(forest, lexicons).build_safe_index(pages, state)
}
