use std::fmt;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context};

use safeidx::corpus::{read_manifest, write_corpus, CorpusEntry};
use safeidx::eval::{attribute_usage, score_run, EvalReport};
use safeidx::features::write_feature_dump;
use safeidx::pipeline::{PipelineOptions, StageReport, DEFAULT_BLACKLIST_TRIGGER};
use safeidx::synth::{generate_corpus, CorpusSpec, SynthLexicons};
use safeidx::{
    classify, extract_features, train_forest, FeatureVector, Filter, FilterState, Forest, Label,
    LexiconSet, Page,
};

use crate::config::RunConfig;
use crate::GenerateArgs;

/// Why a command failed. Bad input exits with 1, broken invariants with 2.
#[derive(Debug)]
pub enum Failure {
    Data(anyhow::Error),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Data(_) => ExitCode::from(1),
            Failure::Internal(_) => ExitCode::from(2),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Data(e) => write!(f, "{e:#}"),
            Failure::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<safeidx::Error> for Failure {
    fn from(e: safeidx::Error) -> Self {
        Failure::Data(e.into())
    }
}

type Result<T = ()> = std::result::Result<T, Failure>;

fn lexicons(cfg: &RunConfig) -> Result<LexiconSet> {
    let path = RunConfig::require(&cfg.lexicons, "lexicons")?;
    Ok(LexiconSet::from_manifest(path)?)
}

fn entries(cfg: &RunConfig) -> Result<Vec<CorpusEntry>> {
    let path = RunConfig::require(&cfg.corpus, "corpus")?;
    Ok(read_manifest(path)?)
}

fn model(cfg: &RunConfig) -> Result<Forest> {
    let path = RunConfig::require(&cfg.model, "model")?;
    let mut forest =
        Forest::load(path).with_context(|| format!("loading model {}", path.display()))?;
    if let Some(vote) = cfg.vote() {
        forest.set_vote_threshold(vote)?;
    }
    Ok(forest)
}

/// Load every page; any unreadable page is an error.
fn load_all(cfg: &RunConfig, entries: &[CorpusEntry]) -> Result<Vec<Page>> {
    let suffixes = cfg.suffix_table();
    entries
        .iter()
        .map(|e| {
            e.load(&suffixes)
                .with_context(|| format!("loading {}", e.path.display()))
                .map_err(Failure::from)
        })
        .collect()
}

fn gold_labels(pages: &[Page]) -> Result<Vec<Label>> {
    pages
        .iter()
        .enumerate()
        .map(|(i, p)| {
            p.label.ok_or_else(|| {
                anyhow!("corpus row {} ({}) is unlabeled", i + 1, p.url.full_url).into()
            })
        })
        .collect()
}

fn write_text(path: &Path, text: &str) -> Result {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    text.push('\n');
    write_text(path, &text)
}

pub fn train(cfg: &RunConfig, features_out: Option<&Path>) -> Result {
    let lex = lexicons(cfg)?;
    let model_path = RunConfig::require(&cfg.model, "model")?;
    let pages = load_all(cfg, &entries(cfg)?)?;
    let labels = gold_labels(&pages)?;
    let rows: Vec<(FeatureVector, Label)> = pages
        .iter()
        .zip(&labels)
        .map(|(p, &l)| Ok((extract_features(p, &lex)?, l)))
        .collect::<Result<_>>()?;

    if let Some(out) = features_out {
        let file = fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
        let dump: Vec<_> = pages
            .iter()
            .zip(&rows)
            .map(|(p, (fv, l))| (p.url.full_url.clone(), Some(*l), *fv))
            .collect();
        write_feature_dump(file, &dump)?;
    }

    let (mut forest, report) = train_forest(&rows, &cfg.train)?;
    if let Some(vote) = cfg.vote() {
        forest.set_vote_threshold(vote)?;
    }
    let json = forest.to_json();
    let reloaded = Forest::from_json(&json).map_err(|e| Failure::Internal(e.to_string()))?;
    if rows
        .iter()
        .any(|(fv, _)| classify(&forest, fv) != classify(&reloaded, fv))
    {
        return Err(Failure::Internal(
            "model changed verdicts after serialization".into(),
        ));
    }
    write_text(model_path, &json)?;

    let adult = labels.iter().filter(|&&l| l == Label::Adult).count();
    println!(
        "{} pages ({adult} adult, {} safe)",
        rows.len(),
        rows.len() - adult
    );
    print!("{}", report.render());
    println!("model written to {}", model_path.display());
    Ok(())
}

fn initial_state(cfg: &RunConfig) -> Result<FilterState> {
    let state = FilterState::new(cfg.blacklist_trigger.unwrap_or(DEFAULT_BLACKLIST_TRIGGER));
    match &cfg.blacklist {
        Some(p) if p.exists() => Ok(state.load_blacklist(p)?),
        _ => Ok(state),
    }
}

pub fn filter(cfg: &RunConfig) -> Result {
    let lex = lexicons(cfg)?;
    let forest = model(cfg)?;
    let index_path = RunConfig::require(&cfg.index, "index")?;
    let entries = entries(cfg)?;
    let mut state = initial_state(cfg)?;

    let suffixes = cfg.suffix_table();
    let pages = entries.iter().map(|e| {
        e.load(&suffixes)
            .map_err(|err| format!("{}: {err}", e.path.display()))
    });
    let mut filter = Filter::new(&forest, &lex);
    let out = filter.build_safe_index(pages, &mut state)?;

    let mut index = out.index.join("\n");
    if !index.is_empty() {
        index.push('\n');
    }
    write_text(index_path, &index)?;
    if let Some(p) = cfg.blacklist_out.as_ref().or(cfg.blacklist.as_ref()) {
        state.save_blacklist(p)?;
    }
    if let Some(p) = &cfg.report {
        write_json(p, &out.report)?;
    }

    for skip in &out.skips {
        eprintln!("skipped {skip}");
    }
    let r = &out.report;
    println!(
        "{} pages: {} safe, {} adult (blacklist {}, disclaimer {}, tld .xxx {}, forest {}), {} skipped",
        r.total() + r.skipped,
        r.forest_safe,
        r.total() - r.forest_safe,
        r.blacklist,
        r.disclaimer,
        r.tld_xxx,
        r.forest_adult,
        r.skipped
    );
    println!(
        "{} features extracted; blacklist holds {} domains",
        filter.extractions(),
        state.blacklist().len()
    );
    Ok(())
}

pub fn eval(cfg: &RunConfig, full_pipeline: bool) -> Result {
    let lex = lexicons(cfg)?;
    let forest = model(cfg)?;
    let pages = load_all(cfg, &entries(cfg)?)?;
    if pages.is_empty() {
        return Err(anyhow!("no labeled pages in corpus").into());
    }
    let gold = gold_labels(&pages)?;
    let fvs: Vec<FeatureVector> = pages
        .iter()
        .map(|p| extract_features(p, &lex))
        .collect::<safeidx::Result<_>>()?;

    let (predicted, stages) = if full_pipeline {
        let mut state = initial_state(cfg)?;
        let mut filter = Filter::with_options(&forest, &lex, PipelineOptions::default());
        let mut stages = StageReport::default();
        let mut labels = Vec::with_capacity(pages.len());
        for page in &pages {
            let v = filter.filter_page(page, &mut state)?;
            stages.record(&v);
            labels.push(v.label);
        }
        (labels, Some(stages))
    } else {
        (fvs.iter().map(|fv| classify(&forest, fv)).collect(), None)
    };

    let cm = score_run(gold.iter().map(|&g| Some(g)).zip(predicted))?;
    let usage = attribute_usage(&forest, &fvs);
    let mut report = EvalReport::new(cm, &usage);
    report.stages = stages;

    println!(
        "{} labeled pages, {}",
        cm.total(),
        if full_pipeline {
            "full pipeline"
        } else {
            "forest only"
        }
    );
    print!("{cm}");
    println!("{}", report.metrics);
    let mut used: Vec<_> = report.attribute_usage.iter().collect();
    used.sort_by(|a, b| b.1.total_cmp(a.1).then_with(|| a.0.cmp(b.0)));
    println!("attribute usage ({} of 36 attributes):", used.len());
    for (name, f) in used {
        println!("  {:>6.2}%  {name}", 100.0 * f);
    }
    if let Some(s) = &report.stages {
        println!(
            "stages: blacklist {}, disclaimer {}, tld .xxx {}, forest adult {}, forest safe {}",
            s.blacklist, s.disclaimer, s.tld_xxx, s.forest_adult, s.forest_safe
        );
    }
    if let Some(p) = &cfg.report {
        write_json(p, &report)?;
    }
    Ok(())
}

pub fn inspect(cfg: &RunConfig, only: Option<usize>) -> Result {
    let forest = model(cfg)?;
    let n = forest.trees().len();
    if let Some(i) = only {
        if i >= n {
            return Err(anyhow!("model has {n} trees; no tree {i}").into());
        }
    }
    println!("{n} trees, adult when {}", forest.vote_threshold());
    for (i, tree) in forest.trees().iter().enumerate() {
        if only.is_some_and(|o| o != i) {
            continue;
        }
        println!();
        println!("tree {i}: {} nodes, depth {}", tree.size(), tree.depth());
        print!("{}", tree.render());
    }
    Ok(())
}

pub fn generate(args: &GenerateArgs) -> Result {
    let lex = SynthLexicons::generate(args.lexicon_seed);
    lex.set.write_dir(&args.out.join("lexicons"))?;
    for (dir, spec) in [
        ("train", CorpusSpec::training(args.train_seed)),
        ("test", CorpusSpec::test(args.test_seed)),
    ] {
        let docs = generate_corpus(&lex, &spec);
        let manifest = write_corpus(&args.out.join(dir), &docs)?;
        println!("{} pages -> {}", docs.len(), manifest.display());
    }
    println!(
        "lexicons -> {}",
        args.out.join("lexicons/manifest.toml").display()
    );
    Ok(())
}
