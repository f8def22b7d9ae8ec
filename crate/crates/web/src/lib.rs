//! Browser demo: the filter with its bundled lexicons and model.
//!
//! [`Demo`] is plain Rust and testable natively; [`WebDemo`] wraps it for
//! JavaScript and speaks JSON strings.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use safeidx::corpus::CorpusDoc;
use safeidx::forest::TreeNode;
use safeidx::lexicon::{load_lexicon, CONTENT_LEXICONS, DISCLAIMER_LEXICON, URL_LEXICON};
use safeidx::pipeline::StageReport;
use safeidx::synth::{generate_corpus, CorpusSpec, SynthLexicons};
use safeidx::{
    extract_features, Filter, FilterState, Forest, Label, LexiconSet, Page, Stage, VoteThreshold,
};

/// Seed the bundled lexicons were generated from.
pub const LEXICON_SEED: u64 = 2024;

const MODEL: &str = include_str!("../../../data/model.json");

const LISTS: [(&str, &str); 13] = [
    ("in-url", include_str!("../../../data/lexicons/in-url.txt")),
    (
        "brand-names",
        include_str!("../../../data/lexicons/brand-names.txt"),
    ),
    (
        "categories-en",
        include_str!("../../../data/lexicons/categories-en.txt"),
    ),
    (
        "categories-fr",
        include_str!("../../../data/lexicons/categories-fr.txt"),
    ),
    (
        "categories-gen",
        include_str!("../../../data/lexicons/categories-gen.txt"),
    ),
    (
        "en-words",
        include_str!("../../../data/lexicons/en-words.txt"),
    ),
    (
        "french-words",
        include_str!("../../../data/lexicons/french-words.txt"),
    ),
    (
        "pornstars",
        include_str!("../../../data/lexicons/pornstars.txt"),
    ),
    (
        "queries",
        include_str!("../../../data/lexicons/queries.txt"),
    ),
    (
        "small-set",
        include_str!("../../../data/lexicons/small-set.txt"),
    ),
    (
        "tags-en",
        include_str!("../../../data/lexicons/tags-en.txt"),
    ),
    (
        "tags-fr",
        include_str!("../../../data/lexicons/tags-fr.txt"),
    ),
    (
        "disclaimer",
        include_str!("../../../data/lexicons/disclaimer.txt"),
    ),
];

pub fn bundled_lexicons() -> safeidx::Result<LexiconSet> {
    let mut url_terms = None;
    let mut disclaimers = None;
    let mut content = Vec::with_capacity(CONTENT_LEXICONS.len());
    for (name, source) in LISTS {
        let lex = load_lexicon(name, source)?;
        match name {
            URL_LEXICON => url_terms = Some(lex),
            DISCLAIMER_LEXICON => disclaimers = Some(lex),
            _ => content.push(lex),
        }
    }
    let url_terms = url_terms.expect("in-url is bundled");
    let set = LexiconSet::complete(url_terms, content)?;
    Ok(set.with_disclaimers(disclaimers.expect("disclaimer is bundled")))
}

pub fn bundled_model() -> safeidx::Result<Forest> {
    Forest::from_json(MODEL)
}

#[derive(Debug, Serialize)]
pub struct FeatureReport {
    pub url: String,
    pub domain: String,
    pub tld: String,
    pub tokens: usize,
    pub images: usize,
    pub features: Vec<(String, f64)>,
}

#[derive(Debug, Serialize)]
pub struct TreeVote {
    pub label: Label,
    /// Tests taken from root to leaf, e.g. `nb_tags-en = 3 > 1.5`.
    pub path: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct VoteReport {
    pub label: Label,
    pub adult_votes: usize,
    pub trees: usize,
    pub score: f64,
    pub rule: String,
    pub votes: Vec<TreeVote>,
}

#[derive(Debug, Serialize)]
pub struct StreamRow {
    pub line: usize,
    pub url: String,
    pub domain: String,
    pub label: Label,
    pub reason: Stage,
    pub score: Option<f64>,
    /// Set on the verdict that put the domain on the blacklist.
    pub blacklisted: bool,
}

#[derive(Debug, Serialize)]
pub struct StreamReport {
    pub rows: Vec<StreamRow>,
    pub skips: Vec<String>,
    pub report: StageReport,
    pub extractions: usize,
    pub blacklist: Vec<String>,
    pub index: Vec<String>,
}

pub struct Demo {
    lexicons: LexiconSet,
    forest: Forest,
}

impl Demo {
    pub fn bundled() -> safeidx::Result<Self> {
        Ok(Demo {
            lexicons: bundled_lexicons()?,
            forest: bundled_model()?,
        })
    }

    pub fn new(lexicons: LexiconSet, forest: Forest) -> Self {
        Demo { lexicons, forest }
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn features(&self, url: &str, html: &str) -> safeidx::Result<FeatureReport> {
        let page = Page::from_html(url, html, None)?;
        let fv = extract_features(&page, &self.lexicons)?;
        Ok(FeatureReport {
            url: page.url.full_url.clone(),
            domain: page.domain().to_string(),
            tld: page.url.tld.clone(),
            tokens: page.tokens.len(),
            images: page.image_count,
            features: fv.named().map(|(n, v)| (n.to_string(), v)).collect(),
        })
    }

    pub fn vote(&self, url: &str, html: &str, rule: VoteThreshold) -> safeidx::Result<VoteReport> {
        let forest = self.forest.clone().with_vote_threshold(rule)?;
        let page = Page::from_html(url, html, None)?;
        let fv = extract_features(&page, &self.lexicons)?;
        let votes: Vec<TreeVote> = forest
            .trees()
            .iter()
            .map(|tree| {
                let mut path = Vec::new();
                let mut node = tree;
                loop {
                    match node {
                        TreeNode::Internal {
                            attribute,
                            threshold,
                            left,
                            right,
                        } => {
                            let v = fv.get(*attribute);
                            let (op, next) = if v <= *threshold {
                                ("<=", left)
                            } else {
                                (">", right)
                            };
                            path.push(format!("{attribute} = {v} {op} {threshold}"));
                            node = next;
                        }
                        TreeNode::Leaf { label, .. } => {
                            return TreeVote {
                                label: *label,
                                path,
                            }
                        }
                    }
                }
            })
            .collect();
        let adult_votes = votes.iter().filter(|v| v.label == Label::Adult).count();
        Ok(VoteReport {
            label: forest.decide(adult_votes),
            adult_votes,
            trees: votes.len(),
            score: adult_votes as f64 / votes.len() as f64,
            rule: rule.to_string(),
            votes,
        })
    }

    /// Run the staged filter over `url<TAB>html` lines. Blank lines and
    /// lines starting with `#` are ignored; malformed lines are skipped.
    pub fn stream(
        &self,
        lines: &str,
        trigger: usize,
        blacklist: &str,
    ) -> safeidx::Result<StreamReport> {
        let mut state =
            FilterState::new(trigger).with_blacklist(FilterState::parse_blacklist(blacklist));
        let mut filter = Filter::new(&self.forest, &self.lexicons);
        let mut out = StreamReport {
            rows: Vec::new(),
            skips: Vec::new(),
            report: StageReport::default(),
            extractions: 0,
            blacklist: Vec::new(),
            index: Vec::new(),
        };
        for (i, line) in lines.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (url, html) = line.split_once('\t').unwrap_or((line, ""));
            let page = match Page::from_html(url, html, None) {
                Ok(p) => p,
                Err(e) => {
                    out.skips.push(format!("line {line_no}: {e}"));
                    out.report.skipped += 1;
                    continue;
                }
            };
            let domain = page.domain().to_string();
            let before = state.is_blacklisted(&domain);
            let v = filter.filter_page(&page, &mut state)?;
            out.report.record(&v);
            if v.label == Label::Safe {
                out.index.push(page.url.full_url.clone());
            }
            out.rows.push(StreamRow {
                line: line_no,
                url: page.url.full_url.clone(),
                blacklisted: !before && state.is_blacklisted(&domain),
                domain,
                label: v.label,
                reason: v.reason,
                score: v.score,
            });
        }
        out.extractions = filter.extractions();
        out.blacklist = state.blacklist().iter().cloned().collect();
        Ok(out)
    }
}

/// Synthetic pages in the bundled vocabulary, interleaved by site.
pub fn sample_docs(seed: u64, pages: usize) -> Vec<CorpusDoc> {
    let lex = SynthLexicons::generate(LEXICON_SEED);
    let pages = pages.max(2);
    let spec = CorpusSpec {
        n_pages: pages,
        n_adult: pages / 2,
        disclaimer_rate: 0.15,
        xxx_rate: 0.1,
        ..CorpusSpec::training(seed)
    };
    generate_corpus(&lex, &spec)
}

/// `url<TAB>html` lines, one page per line.
pub fn sample_stream(seed: u64, pages: usize) -> String {
    sample_docs(seed, pages)
        .iter()
        .map(|d| format!("{}\t{}\n", d.url, one_line(&d.html)))
        .collect()
}

fn one_line(html: &str) -> String {
    html.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn rule(fraction: f64, min_votes: u32) -> VoteThreshold {
    if min_votes > 0 {
        VoteThreshold::MinVotes(min_votes as usize)
    } else {
        VoteThreshold::Fraction(fraction)
    }
}

fn json<T: Serialize>(r: safeidx::Result<T>) -> Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub struct WebDemo {
    inner: Demo,
}

#[wasm_bindgen]
impl WebDemo {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Result<WebDemo, JsError> {
        let inner = Demo::bundled().map_err(|e| JsError::new(&e.to_string()))?;
        Ok(WebDemo { inner })
    }

    #[wasm_bindgen(getter)]
    pub fn trees(&self) -> usize {
        self.inner.forest.trees().len()
    }

    pub fn features(&self, url: &str, html: &str) -> Result<String, JsError> {
        json(self.inner.features(url, html))
    }

    /// `min_votes` of 0 means use `fraction`.
    pub fn vote(
        &self,
        url: &str,
        html: &str,
        fraction: f64,
        min_votes: u32,
    ) -> Result<String, JsError> {
        json(self.inner.vote(url, html, rule(fraction, min_votes)))
    }

    pub fn stream(&self, lines: &str, trigger: u32, blacklist: &str) -> Result<String, JsError> {
        json(self.inner.stream(lines, trigger as usize, blacklist))
    }

    #[wasm_bindgen(js_name = samplePage)]
    pub fn sample_page(&self, seed: u32, adult: bool) -> Vec<String> {
        let want = if adult { Label::Adult } else { Label::Safe };
        let docs = sample_docs(seed as u64, 8);
        let d = docs
            .iter()
            .find(|d| d.label == Some(want))
            .unwrap_or(&docs[0]);
        vec![d.url.clone(), d.html.clone()]
    }

    #[wasm_bindgen(js_name = sampleStream)]
    pub fn sample_stream(&self, seed: u32, pages: u32) -> String {
        sample_stream(seed as u64, pages as usize)
    }
}
