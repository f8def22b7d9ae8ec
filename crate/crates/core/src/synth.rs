//! Synthetic stand-ins for the term lists and labeled corpora.
//!
//! Lists are filled with pronounceable pseudo-words at the reference
//! cardinalities, seeded with a handful of generic examples ("porn",
//! "sex", "xxx", "cam4", "tube8", "porn gratis", ...). Neutral page text
//! comes from a disjoint pseudo-word vocabulary.
//!
//! Adult pages mix lexicon terms into neutral text at a sizeable rate,
//! use more images, and often carry URL terms. A `noise` fraction of
//! pages of each class is drawn from an overlapping band: adult pages
//! with little explicit text and safe pages that mention a few lexicon
//! terms.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::CorpusDoc;
use crate::error::Result;
use crate::lexicon::{Lexicon, LexiconSet, REFERENCE_SIZES, URL_LEXICON};
use crate::page::{Label, Page};

const ONSETS: &[&str] = &[
    "b", "br", "c", "ch", "d", "dr", "f", "fl", "g", "gr", "j", "k", "l", "m", "n", "p", "pl",
    "qu", "r", "s", "sh", "st", "t", "tr", "v", "w", "z",
];
const NUCLEI: &[&str] = &["a", "e", "i", "o", "u", "ai", "ou", "ie", "ea", "é"];
const CODAS: &[&str] = &["", "", "", "n", "r", "s", "l", "x", "m", "k"];

const SEED_TERMS: &[(&str, &[&str])] = &[
    ("in-url", &["porn", "sex", "xxx", "cam4", "tube8"]),
    ("brand-names", &["cam4", "tube8"]),
    ("small-set", &["sex", "xxx", "porn"]),
    ("queries", &["porn gratis", "porn gallery"]),
];

/// Size of the neutral vocabulary.
pub const NEUTRAL_WORDS: usize = 4000;

fn pseudo_word(rng: &mut ChaCha8Rng) -> String {
    let syllables = rng.gen_range(2..=3);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push_str(ONSETS.choose(rng).unwrap());
        w.push_str(NUCLEI.choose(rng).unwrap());
    }
    w.push_str(CODAS.choose(rng).unwrap());
    w
}

/// Draw a pseudo-word not yet in `used`.
fn fresh_word(rng: &mut ChaCha8Rng, used: &mut BTreeSet<String>) -> String {
    loop {
        let w = pseudo_word(rng);
        if used.insert(w.clone()) {
            return w;
        }
    }
}

/// Synthetic lists plus the neutral vocabulary used to write pages.
#[derive(Debug, Clone)]
pub struct SynthLexicons {
    pub set: LexiconSet,
    pub neutral: Vec<String>,
}

impl SynthLexicons {
    pub fn generate(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut used: BTreeSet<String> = SEED_TERMS
            .iter()
            .flat_map(|(_, terms)| terms.iter().flat_map(|t| t.split(' ')))
            .map(str::to_string)
            .collect();

        let first_names: Vec<String> = (0..300).map(|_| fresh_word(&mut rng, &mut used)).collect();
        let last_names: Vec<String> = (0..400).map(|_| fresh_word(&mut rng, &mut used)).collect();

        let mut lists = Vec::new();
        for (name, size) in REFERENCE_SIZES {
            let mut terms: BTreeSet<String> = SEED_TERMS
                .iter()
                .filter(|(n, _)| *n == name)
                .flat_map(|(_, t)| t.iter().map(|s| s.to_string()))
                .collect();
            while terms.len() < size {
                let term = match name {
                    "pornstars" => format!(
                        "{} {}",
                        first_names.choose(&mut rng).unwrap(),
                        last_names.choose(&mut rng).unwrap()
                    ),
                    "queries" => {
                        let head = ["porn", "sex", "xxx"].choose(&mut rng).unwrap().to_string();
                        if rng.gen_bool(0.5) {
                            format!("{head} {}", fresh_word(&mut rng, &mut used))
                        } else {
                            format!(
                                "{} {}",
                                fresh_word(&mut rng, &mut used),
                                fresh_word(&mut rng, &mut used)
                            )
                        }
                    }
                    "in-url" => format!(
                        "{}{}",
                        fresh_word(&mut rng, &mut used),
                        rng.gen_range(0..10)
                    ),
                    _ => fresh_word(&mut rng, &mut used),
                };
                terms.insert(term);
            }
            lists.push(Lexicon::from_terms(name, &terms).expect("non-empty"));
        }
        let url = lists.remove(0);
        debug_assert_eq!(url.name(), URL_LEXICON);
        let set = LexiconSet::complete(url, lists).expect("all lists generated");

        let neutral = (0..NEUTRAL_WORDS)
            .map(|_| fresh_word(&mut rng, &mut used))
            .collect();
        SynthLexicons { set, neutral }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub n_pages: usize,
    pub n_adult: usize,
    /// Fraction of each class drawn from the overlapping band.
    pub noise: f64,
    /// Probability that an adult page carries an age-gate disclaimer.
    pub disclaimer_rate: f64,
    /// Probability that an adult page is hosted under `.xxx`.
    pub xxx_rate: f64,
    pub seed: u64,
}

impl CorpusSpec {
    /// 226 pages, 120 adult.
    pub fn training(seed: u64) -> Self {
        CorpusSpec {
            n_pages: 226,
            n_adult: 120,
            noise: 0.10,
            disclaimer_rate: 0.0,
            xxx_rate: 0.0,
            seed,
        }
    }

    /// 1153 pages, 839 adult.
    pub fn test(seed: u64) -> Self {
        CorpusSpec {
            n_pages: 1153,
            n_adult: 839,
            ..Self::training(seed)
        }
    }
}

type Mix = &'static [(&'static str, u32)];

/// Adult page genres and the lists (with relative frequency) their text
/// draws from.
const ADULT_GENRES: [Mix; 5] = [
    // video tube
    &[
        ("tags-en", 8),
        ("pornstars", 3),
        ("brand-names", 2),
        ("small-set", 3),
        ("categories-en", 4),
        ("queries", 2),
    ],
    // french tube and listings
    &[
        ("tags-fr", 3),
        ("categories-fr", 6),
        ("categories-gen", 3),
        ("small-set", 2),
        ("pornstars", 2),
    ],
    // erotic fiction
    &[("french-words", 6), ("categories-gen", 2), ("small-set", 1)],
    // forum
    &[
        ("small-set", 4),
        ("categories-en", 3),
        ("queries", 2),
        ("en-words", 1),
        ("tags-en", 2),
    ],
    // catch-all directory
    &[
        ("brand-names", 2),
        ("categories-en", 6),
        ("categories-fr", 5),
        ("categories-gen", 3),
        ("en-words", 1),
        ("french-words", 3),
        ("pornstars", 3),
        ("queries", 3),
        ("small-set", 4),
        ("tags-en", 8),
        ("tags-fr", 2),
    ],
];

/// Lists that safe pages touching on sexuality mention.
const SAFE_NOISE_MIX: Mix = &[
    ("small-set", 3),
    ("categories-en", 2),
    ("french-words", 1),
    ("en-words", 1),
];

struct PageWriter<'a> {
    lex: &'a SynthLexicons,
    rng: ChaCha8Rng,
    adult_domains: Vec<String>,
    safe_domains: Vec<String>,
}

impl<'a> PageWriter<'a> {
    fn lexicon_term(&mut self, mix: Mix) -> String {
        let (name, _) = mix.choose_weighted(&mut self.rng, |(_, w)| *w).unwrap();
        let lexicon = self.lex.set.get(name).expect("complete set");
        let i = self.rng.gen_range(0..lexicon.term_count());
        lexicon.terms().nth(i).unwrap().to_string()
    }

    fn neutral_word(&mut self) -> String {
        self.lex.neutral.choose(&mut self.rng).unwrap().clone()
    }

    /// Body text with roughly `rate` of its slots taken by lexicon terms.
    fn text(&mut self, len: usize, rate: f64, mix: Mix) -> Vec<String> {
        let mut words = Vec::with_capacity(len);
        while words.len() < len {
            if self.rng.gen_bool(rate) {
                words.push(self.lexicon_term(mix));
            } else {
                words.push(self.neutral_word());
            }
        }
        words
    }

    fn url(&mut self, label: Label, id: usize, url_term_rate: f64, xxx: bool) -> String {
        let domains = match label {
            Label::Adult => &self.adult_domains,
            Label::Safe => &self.safe_domains,
        };
        let mut domain = domains.choose(&mut self.rng).unwrap().clone();
        if xxx {
            domain = format!("{}.xxx", domain.split('.').next().unwrap());
        }
        let mut path = self.neutral_word();
        if self.rng.gen_bool(url_term_rate) {
            let terms: Vec<&str> = self.lex.set.url_terms().terms().collect();
            path = format!("{}-{path}", terms.choose(&mut self.rng).unwrap());
        }
        format!("http://www.{domain}/{path}/{id}.html")
    }
}

fn html(title: &[String], body: &[String], images: usize, disclaimer: bool) -> String {
    let mut out = format!(
        "<!DOCTYPE html>\n<html><head><title>{}</title>\n<script>var track = \"sex porn\";</script>\n\
         <style>.x {{ color: red }}</style></head>\n<body>\n",
        title.join(" ")
    );
    if disclaimer {
        out.push_str("<div class=\"gate\">You must be 18 years or older to enter.</div>\n");
    }
    for (i, chunk) in body.chunks(40).enumerate() {
        out.push_str(&format!("<p>{}</p>\n", chunk.join(" ")));
        if i == 0 {
            for k in 0..images {
                out.push_str(&format!("<img src=\"/i/{k}.jpg\" alt=\"\">"));
            }
            out.push('\n');
        }
    }
    out.push_str("</body></html>\n");
    out
}

/// Generate a labeled corpus. Adult pages come first in the returned
/// order only by chance; classes are interleaved.
pub fn generate_corpus(lex: &SynthLexicons, spec: &CorpusSpec) -> Vec<CorpusDoc> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut used = BTreeSet::new();
    let mut site = |rng: &mut ChaCha8Rng, tld: &str| {
        let w = fresh_word(rng, &mut used);
        format!("{w}.{tld}")
    };
    let adult_sites = (spec.n_adult / 4).max(1);
    let safe_sites = ((spec.n_pages - spec.n_adult) / 4).max(1);
    let tlds = ["com", "net", "org", "fr", "co.uk"];
    let adult_domains: Vec<String> = (0..adult_sites)
        .map(|_| {
            let tld = *tlds.choose(&mut rng).unwrap();
            site(&mut rng, tld)
        })
        .collect();
    let safe_domains: Vec<String> = (0..safe_sites)
        .map(|_| {
            let tld = *tlds.choose(&mut rng).unwrap();
            site(&mut rng, tld)
        })
        .collect();

    let mut labels: Vec<Label> = (0..spec.n_pages)
        .map(|i| {
            if i < spec.n_adult {
                Label::Adult
            } else {
                Label::Safe
            }
        })
        .collect();
    labels.shuffle(&mut rng);

    let mut w = PageWriter {
        lex,
        rng,
        adult_domains,
        safe_domains,
    };
    let mut docs = Vec::with_capacity(spec.n_pages);
    for (id, label) in labels.into_iter().enumerate() {
        let noisy = w.rng.gen_bool(spec.noise);
        let len = w.rng.gen_range(80..400);
        let (rate, images, url_rate) = match (label, noisy) {
            (Label::Adult, false) => (w.rng.gen_range(0.10..0.40), w.rng.gen_range(8..60), 0.6),
            // Low-text adult pages (streaming, galleries).
            (Label::Adult, true) => (w.rng.gen_range(0.01..0.05), w.rng.gen_range(10..80), 0.3),
            (Label::Safe, false) => (0.0, w.rng.gen_range(0..25), 0.0),
            // Safe pages about sexuality: health, education, forums.
            (Label::Safe, true) => (w.rng.gen_range(0.01..0.06), w.rng.gen_range(0..30), 0.0),
        };
        let mix = match label {
            Label::Adult => *ADULT_GENRES.choose(&mut w.rng).unwrap(),
            Label::Safe => SAFE_NOISE_MIX,
        };
        let title_len = w.rng.gen_range(3..8);
        let title = w.text(title_len, rate, mix);
        let body = w.text(len, rate, mix);
        let disclaimer = label == Label::Adult && w.rng.gen_bool(spec.disclaimer_rate);
        let xxx = label == Label::Adult && w.rng.gen_bool(spec.xxx_rate);
        let url = w.url(label, id, url_rate, xxx);
        docs.push(CorpusDoc {
            file_name: format!("page-{id:05}.html"),
            url,
            html: html(&title, &body, images, disclaimer),
            label: Some(label),
        });
    }
    docs
}

/// Scan generated documents into pages.
pub fn to_pages(docs: &[CorpusDoc]) -> Result<Vec<Page>> {
    docs.iter()
        .map(|d| Page::from_html(&d.url, &d.html, d.label))
        .collect()
}
