//! Run configuration: an optional TOML file overlaid by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use safeidx::page::SuffixTable;
use safeidx::{TrainConfig, VoteThreshold};

/// Everything a command may need. Relative paths in a config file are
/// resolved against the file's directory.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub lexicons: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub blacklist: Option<PathBuf>,
    pub blacklist_out: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub vote_threshold: Option<f64>,
    pub min_votes: Option<usize>,
    pub blacklist_trigger: Option<usize>,
    /// Extra two-level public suffixes such as `"co.id"`.
    pub suffixes: Vec<String>,
    pub train: TrainConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        for p in [
            &mut cfg.lexicons,
            &mut cfg.corpus,
            &mut cfg.model,
            &mut cfg.blacklist,
            &mut cfg.blacklist_out,
            &mut cfg.index,
            &mut cfg.report,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn require<'a>(value: &'a Option<PathBuf>, what: &str) -> Result<&'a Path> {
        match value {
            Some(p) => Ok(p),
            None => bail!("missing {what}: pass --{what} or set `{what}` in the config file"),
        }
    }

    /// The vote rule, if one was configured. A vote count wins over a
    /// fraction when both are given.
    pub fn vote(&self) -> Option<VoteThreshold> {
        match (self.min_votes, self.vote_threshold) {
            (Some(k), _) => Some(VoteThreshold::MinVotes(k)),
            (None, Some(t)) => Some(VoteThreshold::Fraction(t)),
            (None, None) => None,
        }
    }

    pub fn suffix_table(&self) -> SuffixTable {
        let mut table = SuffixTable::default();
        for s in &self.suffixes {
            table.insert(s);
        }
        table
    }
}

/// Overwrite `slot` when the flag was given.
pub fn overlay<T>(slot: &mut T, flag: Option<T>) {
    if let Some(v) = flag {
        *slot = v;
    }
}

pub fn overlay_opt<T>(slot: &mut Option<T>, flag: Option<T>) {
    if flag.is_some() {
        *slot = flag;
    }
}
