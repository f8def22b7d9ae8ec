use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-level public suffixes under which registrable domains take three
/// labels.
pub const DEFAULT_TWO_LEVEL_SUFFIXES: &[&str] = &[
    "ac.uk", "co.uk", "gov.uk", "ltd.uk", "me.uk", "net.uk", "org.uk", "plc.uk", "asn.au",
    "com.au", "edu.au", "gov.au", "net.au", "org.au", "co.nz", "net.nz", "org.nz", "co.jp",
    "ne.jp", "or.jp", "co.kr", "or.kr", "co.in", "net.in", "org.in", "co.za", "org.za", "com.ar",
    "com.br", "com.cn", "com.co", "com.hk", "com.mx", "com.sg", "com.tr", "com.tw", "net.br",
    "org.br", "gouv.fr", "asso.fr",
];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UrlParts {
    pub full_url: String,
    pub host: String,
    pub registrable_domain: String,
    pub tld: String,
}

#[derive(Debug, Clone)]
pub struct SuffixTable {
    two_level: BTreeSet<String>,
}

impl Default for SuffixTable {
    fn default() -> Self {
        SuffixTable {
            two_level: DEFAULT_TWO_LEVEL_SUFFIXES
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

impl SuffixTable {
    pub fn insert(&mut self, suffix: &str) {
        self.two_level
            .insert(suffix.trim().trim_matches('.').to_lowercase());
    }

    pub fn contains(&self, suffix: &str) -> bool {
        self.two_level.contains(suffix)
    }

    pub fn parse(&self, url: &str) -> Result<UrlParts> {
        let malformed = || Error::MalformedUrl(url.to_string());
        let full_url = url.trim().to_lowercase();

        let rest = match full_url.find("://") {
            Some(i) if is_scheme(&full_url[..i]) => &full_url[i + 3..],
            Some(_) => return Err(malformed()),
            None => full_url.strip_prefix("//").unwrap_or(&full_url),
        };
        let authority = rest.split(['/', '?', '#']).next().unwrap_or("");
        let host_port = authority.rsplit('@').next().unwrap_or("");
        let host = if host_port.starts_with('[') {
            // IPv6 literal: keep it whole.
            host_port
                .split(']')
                .next()
                .map(|h| format!("{h}]"))
                .unwrap_or_default()
        } else {
            host_port
                .split(':')
                .next()
                .unwrap_or("")
                .trim_end_matches('.')
                .to_string()
        };
        if host.is_empty() {
            return Err(malformed());
        }
        if !host.starts_with('[') {
            let labels_ok = host.split('.').all(|label| {
                !label.is_empty()
                    && label
                        .chars()
                        .all(|c| c.is_alphanumeric() || c == '-' || c == '_')
            });
            if !labels_ok {
                return Err(malformed());
            }
        }

        let registrable_domain = self.registrable(&host);
        let tld = registrable_domain
            .rsplit('.')
            .next()
            .unwrap_or(&registrable_domain)
            .to_string();
        Ok(UrlParts {
            full_url,
            host,
            registrable_domain,
            tld,
        })
    }

    fn registrable(&self, host: &str) -> String {
        if host.starts_with('[') || is_ipv4(host) {
            return host.to_string();
        }
        let labels: Vec<&str> = host.split('.').collect();
        let n = labels.len();
        let take = if n >= 3 && self.contains(&labels[n - 2..].join(".")) {
            3
        } else {
            2
        };
        labels[n.saturating_sub(take)..].join(".")
    }
}

fn is_scheme(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

fn is_ipv4(host: &str) -> bool {
    let parts: Vec<&str> = host.split('.').collect();
    parts.len() == 4 && parts.iter().all(|p| p.parse::<u8>().is_ok())
}

/// Split a URL using the built-in suffix table.
pub fn parse_url(url: &str) -> Result<UrlParts> {
    SuffixTable::default().parse(url)
}
