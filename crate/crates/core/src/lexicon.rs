//! Named term lists that parameterize every textual attribute.
//!
//! A lexicon file is UTF-8 text with one term per line. Blank lines and
//! lines starting with `#` are ignored; LF and CRLF endings are both
//! accepted. Terms are stored normalized (lowercase, trimmed, internal
//! whitespace collapsed), so matching is case-insensitive.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::page::tokenize;

/// The eleven content lists, in attribute order.
pub const CONTENT_LEXICONS: [&str; 11] = [
    "brand-names",
    "categories-en",
    "categories-fr",
    "categories-gen",
    "en-words",
    "french-words",
    "pornstars",
    "queries",
    "small-set",
    "tags-en",
    "tags-fr",
];

/// Name of the list matched as substrings against the URL and domain.
pub const URL_LEXICON: &str = "in-url";

/// Name of the age-gate phrase list used by the disclaimer stage.
pub const DISCLAIMER_LEXICON: &str = "disclaimer";

/// Cardinalities of the reference lists. The shipped synthetic lists
/// have exactly these sizes.
pub const REFERENCE_SIZES: [(&str, usize); 12] = [
    ("in-url", 27),
    ("brand-names", 34),
    ("categories-en", 222),
    ("categories-fr", 593),
    ("categories-gen", 79),
    ("en-words", 100),
    ("french-words", 163),
    ("pornstars", 8825),
    ("queries", 716),
    ("small-set", 11),
    ("tags-en", 2000),
    ("tags-fr", 69),
];

/// Age-gate phrases used when no disclaimer list is configured.
pub const DEFAULT_DISCLAIMERS: &[&str] = &[
    "you must be 18",
    "you must be at least 18",
    "must be 18 years or older",
    "must be 18 years of age",
    "adults only",
    "this website contains adult content",
    "this site contains sexually explicit material",
    "vous devez avoir 18 ans",
    "réservé aux adultes",
    "interdit aux moins de 18 ans",
];

/// Lowercase, trim, and collapse internal whitespace runs to one space.
pub fn normalize_term(raw: &str) -> Result<String> {
    let joined = raw
        .split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ");
    if joined.is_empty() {
        Err(Error::BlankTerm)
    } else {
        Ok(joined)
    }
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    name: String,
    terms: BTreeSet<String>,
    /// Token sequence of each term, in `terms` order.
    phrases: Vec<Vec<String>>,
    /// First token -> indices into `phrases`.
    by_head: HashMap<String, Vec<usize>>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.terms == other.terms
    }
}

impl Eq for Lexicon {}

impl Lexicon {
    /// Build a lexicon from raw terms. Blank terms are skipped and
    /// duplicates (after normalization) merged.
    pub fn from_terms<I, S>(name: &str, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let terms: BTreeSet<String> = raw
            .into_iter()
            .filter_map(|t| normalize_term(t.as_ref()).ok())
            .collect();
        if terms.is_empty() {
            return Err(Error::EmptyLexicon(name.to_string()));
        }
        let phrases: Vec<Vec<String>> = terms.iter().map(|t| tokenize(t)).collect();
        let mut by_head: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, p) in phrases.iter().enumerate() {
            if let Some(head) = p.first() {
                by_head.entry(head.clone()).or_default().push(i);
            }
        }
        Ok(Lexicon {
            name: name.to_string(),
            terms,
            phrases,
            by_head,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    /// Token sequences of the terms. A term whose tokenization is empty
    /// (pure punctuation) has an empty phrase and never matches page text.
    pub fn phrases(&self) -> &[Vec<String>] {
        &self.phrases
    }

    /// Indices of the phrases starting with `token`.
    pub(crate) fn phrases_starting_with(&self, token: &str) -> &[usize] {
        self.by_head.get(token).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Serialized form, one term per line.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(t);
            out.push('\n');
        }
        out
    }
}

/// Parse a lexicon from line-oriented text.
pub fn load_lexicon(name: &str, source: &str) -> Result<Lexicon> {
    let lines = source
        .lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.trim_start().starts_with('#'));
    Lexicon::from_terms(name, lines)
}

/// Like [`load_lexicon`], for raw bytes that may not be valid UTF-8.
pub fn load_lexicon_bytes(name: &str, bytes: &[u8]) -> Result<Lexicon> {
    let source = std::str::from_utf8(bytes).map_err(|_| Error::LexiconFormat {
        name: name.to_string(),
    })?;
    load_lexicon(name, source)
}

pub fn load_lexicon_file(name: &str, path: &Path) -> Result<Lexicon> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    load_lexicon_bytes(name, &bytes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconSet {
    lexicons: BTreeMap<String, Lexicon>,
    url_terms: Lexicon,
    disclaimers: Lexicon,
}

impl LexiconSet {
    /// Start a set with the URL list and default disclaimer phrases.
    pub fn new(url_terms: Lexicon) -> Self {
        let disclaimers = Lexicon::from_terms(DISCLAIMER_LEXICON, DEFAULT_DISCLAIMERS)
            .expect("default disclaimer list is non-empty");
        LexiconSet {
            lexicons: BTreeMap::new(),
            url_terms,
            disclaimers,
        }
    }

    /// Build a complete set; fails if any content list is missing.
    pub fn complete(url_terms: Lexicon, content: Vec<Lexicon>) -> Result<Self> {
        let mut set = LexiconSet::new(url_terms);
        for lex in content {
            set.insert(lex)?;
        }
        set.check_complete()?;
        Ok(set)
    }

    /// Add a content lexicon. Its name must be one of [`CONTENT_LEXICONS`]
    /// and not already present.
    pub fn insert(&mut self, lexicon: Lexicon) -> Result<()> {
        if !CONTENT_LEXICONS.contains(&lexicon.name()) {
            return Err(Error::UnknownLexicon(lexicon.name().to_string()));
        }
        if self.lexicons.contains_key(lexicon.name()) {
            return Err(Error::DuplicateLexicon(lexicon.name().to_string()));
        }
        self.lexicons.insert(lexicon.name().to_string(), lexicon);
        Ok(())
    }

    pub fn with_disclaimers(mut self, disclaimers: Lexicon) -> Self {
        self.disclaimers = disclaimers;
        self
    }

    pub fn get(&self, name: &str) -> Result<&Lexicon> {
        self.lexicons
            .get(name)
            .ok_or_else(|| Error::MissingLexicon(name.to_string()))
    }

    pub fn url_terms(&self) -> &Lexicon {
        &self.url_terms
    }

    pub fn disclaimers(&self) -> &Lexicon {
        &self.disclaimers
    }

    pub fn check_complete(&self) -> Result<()> {
        for name in CONTENT_LEXICONS {
            self.get(name)?;
        }
        Ok(())
    }

    /// Load from a TOML manifest mapping list names to paths relative to
    /// the manifest, e.g. `small-set = "small-set.txt"`. The `in-url` entry
    /// and all eleven content lists are required; `disclaimer` is optional.
    pub fn from_manifest(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let entries: BTreeMap<String, PathBuf> =
            toml::from_str(&text).map_err(|e| Error::Manifest {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let mut url_terms = None;
        let mut disclaimers = None;
        let mut content = Vec::new();
        for (name, rel) in &entries {
            let lex = load_lexicon_file(name, &base.join(rel))?;
            match name.as_str() {
                URL_LEXICON => url_terms = Some(lex),
                DISCLAIMER_LEXICON => disclaimers = Some(lex),
                _ => content.push(lex),
            }
        }
        let url_terms = url_terms.ok_or_else(|| Error::MissingLexicon(URL_LEXICON.into()))?;
        let mut set = LexiconSet::complete(url_terms, content)?;
        if let Some(d) = disclaimers {
            set = set.with_disclaimers(d);
        }
        Ok(set)
    }

    /// Write every list plus a manifest into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut manifest = String::from("# lexicon name -> file, relative to this manifest\n");
        let all = std::iter::once(&self.url_terms)
            .chain(self.lexicons.values())
            .chain(std::iter::once(&self.disclaimers));
        for lex in all {
            let file = format!("{}.txt", lex.name());
            let p = dir.join(&file);
            fs::write(&p, lex.to_source()).map_err(|e| Error::io(&p, e))?;
            manifest.push_str(&format!("{} = \"{}\"\n", lex.name(), file));
        }
        let p = dir.join("manifest.toml");
        fs::write(&p, manifest).map_err(|e| Error::io(&p, e))
    }
}
