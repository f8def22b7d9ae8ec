//! `safeidx`: train, run, and evaluate the adult-content filter.

mod commands;
mod config;

use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{overlay, overlay_opt, RunConfig};

#[derive(Parser)]
#[command(
    name = "safeidx",
    version,
    about = "Build a search index free of adult content"
)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract features from a labeled corpus and train a forest.
    Train(TrainArgs),
    /// Run the staged filter over a corpus and write the safe index.
    Filter(FilterArgs),
    /// Score a labeled held-out corpus.
    Eval(EvalArgs),
    /// Print the trees of a model as indented text.
    InspectModel(InspectArgs),
    /// Write synthetic lexicons and train/test corpora.
    Generate(GenerateArgs),
}

#[derive(Args, Default)]
struct Common {
    /// Lexicon manifest (TOML: list name -> file).
    #[arg(long)]
    lexicons: Option<PathBuf>,
    /// Corpus manifest (CSV: path,url,label).
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Model file.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Extra two-level public suffix; repeatable.
    #[arg(long = "suffix")]
    suffixes: Vec<String>,
}

#[derive(Args, Default)]
struct VoteArgs {
    /// Adult iff the fraction of adult votes is above this.
    #[arg(long, conflicts_with = "min_votes")]
    vote_threshold: Option<f64>,
    /// Adult iff at least this many trees vote adult.
    #[arg(long)]
    min_votes: Option<usize>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    vote: VoteArgs,
    #[arg(long)]
    trees: Option<usize>,
    /// Cost of an adult page classified safe, relative to the reverse.
    #[arg(long)]
    fn_cost: Option<f64>,
    #[arg(long)]
    min_leaf_weight: Option<f64>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the extracted feature table as CSV.
    #[arg(long)]
    features_out: Option<PathBuf>,
}

#[derive(Args)]
struct FilterArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    vote: VoteArgs,
    /// Blacklist to start from; one domain per line. Missing file = empty.
    #[arg(long)]
    blacklist: Option<PathBuf>,
    /// Where to write the updated blacklist (default: --blacklist).
    #[arg(long)]
    blacklist_out: Option<PathBuf>,
    /// Safe-index output, one URL per line.
    #[arg(long)]
    index: Option<PathBuf>,
    /// Stage report output (JSON).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Adult verdicts on distinct URLs of one domain before it is blacklisted.
    #[arg(long)]
    blacklist_trigger: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    vote: VoteArgs,
    /// Run all stages instead of the forest alone.
    #[arg(long)]
    full_pipeline: bool,
    /// Blacklist to start from when running the full pipeline.
    #[arg(long)]
    blacklist: Option<PathBuf>,
    #[arg(long)]
    blacklist_trigger: Option<usize>,
    /// Metrics report output (JSON).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long)]
    model: Option<PathBuf>,
    /// Show only this tree (0-based).
    #[arg(long)]
    tree: Option<usize>,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Output directory; receives lexicons/, train/ and test/.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 2024)]
    pub lexicon_seed: u64,
    #[arg(long, default_value_t = 1)]
    pub train_seed: u64,
    #[arg(long, default_value_t = 2)]
    pub test_seed: u64,
}

fn merge(cfg: &mut RunConfig, common: Common, vote: VoteArgs) {
    overlay_opt(&mut cfg.lexicons, common.lexicons);
    overlay_opt(&mut cfg.corpus, common.corpus);
    overlay_opt(&mut cfg.model, common.model);
    cfg.suffixes.extend(common.suffixes);
    if vote.min_votes.is_some() || vote.vote_threshold.is_some() {
        cfg.min_votes = vote.min_votes;
        cfg.vote_threshold = vote.vote_threshold;
    }
}

fn run(cli: Cli) -> Result<(), commands::Failure> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Train(a) => {
            merge(&mut cfg, a.common, a.vote);
            overlay(&mut cfg.train.n_trees, a.trees);
            overlay(&mut cfg.train.fn_cost, a.fn_cost);
            overlay(&mut cfg.train.min_leaf_weight, a.min_leaf_weight);
            overlay(&mut cfg.train.max_depth, a.max_depth);
            overlay(&mut cfg.train.rng_seed, a.seed);
            commands::train(&cfg, a.features_out.as_deref())
        }
        Command::Filter(a) => {
            merge(&mut cfg, a.common, a.vote);
            overlay_opt(&mut cfg.blacklist, a.blacklist);
            overlay_opt(&mut cfg.blacklist_out, a.blacklist_out);
            overlay_opt(&mut cfg.index, a.index);
            overlay_opt(&mut cfg.report, a.report);
            overlay_opt(&mut cfg.blacklist_trigger, a.blacklist_trigger);
            commands::filter(&cfg)
        }
        Command::Eval(a) => {
            merge(&mut cfg, a.common, a.vote);
            overlay_opt(&mut cfg.blacklist, a.blacklist);
            overlay_opt(&mut cfg.blacklist_trigger, a.blacklist_trigger);
            overlay_opt(&mut cfg.report, a.report);
            commands::eval(&cfg, a.full_pipeline)
        }
        Command::InspectModel(a) => {
            overlay_opt(&mut cfg.model, a.model);
            commands::inspect(&cfg, a.tree)
        }
        Command::Generate(a) => commands::generate(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(f)) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
        // The panic message has already been printed by the hook.
        Err(_) => ExitCode::from(2),
    }
}
