//! Raw web pages to the token representation feature extraction consumes.

mod html;
mod url;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use self::html::extract_text;
pub use self::url::{parse_url, SuffixTable, UrlParts, DEFAULT_TWO_LEVEL_SUFFIXES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Adult,
    Safe,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Adult => "adult",
            Label::Safe => "safe",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "adult" => Ok(Label::Adult),
            "safe" => Ok(Label::Safe),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '’' | '-')
}

/// Split text into lowercase word tokens.
///
/// Words are maximal runs of alphanumeric characters; an apostrophe or
/// hyphen is kept when it sits between two alphanumerics ("l'amour",
/// "hard-core"). Typographic apostrophes are folded to `'`.
pub fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            cur.push(c);
        } else if is_joiner(c)
            && !cur.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric())
        {
            cur.push(if c == '-' { '-' } else { '\'' });
        } else if !cur.is_empty() {
            tokens.push(cur.to_lowercase());
            cur.clear();
        }
    }
    if !cur.is_empty() {
        tokens.push(cur.to_lowercase());
    }
    tokens
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Page {
    pub url: UrlParts,
    pub tokens: Vec<String>,
    pub image_count: usize,
    pub label: Option<Label>,
}

impl Page {
    /// Parse `url` and scan `html` (markup or plain text).
    pub fn from_html(url: &str, html: &str, label: Option<Label>) -> Result<Self> {
        Self::from_html_with(&SuffixTable::default(), url, html, label)
    }

    pub fn from_html_with(
        suffixes: &SuffixTable,
        url: &str,
        html: &str,
        label: Option<Label>,
    ) -> Result<Self> {
        let url = suffixes.parse(url)?;
        let (tokens, image_count) = extract_text(html);
        Ok(Page {
            url,
            tokens,
            image_count,
            label,
        })
    }

    /// Build from already-tokenized text; tokens are re-normalized.
    pub fn from_tokens<I, S>(
        url: &str,
        tokens: I,
        image_count: usize,
        label: Option<Label>,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let tokens = tokens
            .into_iter()
            .flat_map(|t| tokenize(t.as_ref()))
            .collect();
        Ok(Page {
            url: parse_url(url)?,
            tokens,
            image_count,
            label,
        })
    }

    pub fn domain(&self) -> &str {
        &self.url.registrable_domain
    }
}
