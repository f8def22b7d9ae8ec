use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn safeidx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_safeidx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    /// Synthetic lexicons and corpora, plus a trained model.
    fn trained() -> Self {
        let ws = Workspace {
            dir: tempfile::tempdir().unwrap(),
        };
        ok(&safeidx(&["generate", "--out", &ws.s("")]));
        ok(&safeidx(&[
            "train",
            "--lexicons",
            &ws.s("lexicons/manifest.toml"),
            "--corpus",
            &ws.s("train/manifest.csv"),
            "--model",
            &ws.s("model.json"),
        ]));
        ws
    }

    fn p(&self, rel: &str) -> PathBuf {
        self.dir.path().join(rel)
    }

    fn s(&self, rel: &str) -> String {
        self.p(rel).to_string_lossy().into_owned()
    }

    /// Write a small corpus of (url, html, label) rows under `name/`.
    fn corpus(&self, name: &str, rows: &[(&str, &str, &str)]) -> String {
        let dir = self.p(name);
        fs::create_dir_all(&dir).unwrap();
        let mut manifest = String::from("path,url,label\n");
        for (i, (url, html, label)) in rows.iter().enumerate() {
            let file = format!("p{i}.html");
            fs::write(dir.join(&file), html).unwrap();
            manifest.push_str(&format!("{file},{url},{label}\n"));
        }
        fs::write(dir.join("manifest.csv"), manifest).unwrap();
        self.s(&format!("{name}/manifest.csv"))
    }

    fn lexicons(&self) -> String {
        self.s("lexicons/manifest.toml")
    }
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn train_prints_report_and_is_reproducible() {
    let ws = Workspace::trained();
    let first = fs::read(ws.p("model.json")).unwrap();
    let out = ok(&safeidx(&[
        "train",
        "--lexicons",
        &ws.lexicons(),
        "--corpus",
        &ws.s("train/manifest.csv"),
        "--model",
        &ws.s("again.json"),
    ]));
    assert!(out.contains("226 pages (120 adult, 106 safe)"), "{out}");
    assert!(out.contains("tree id  size   error"), "{out}");
    assert!(out.contains("global error 0.0%"), "{out}");
    assert_eq!(first, fs::read(ws.p("again.json")).unwrap());
}

#[test]
fn single_class_corpus_is_rejected() {
    let ws = Workspace::trained();
    let corpus = ws.corpus(
        "one",
        &[
            ("http://a.com/", "<p>hello</p>", "safe"),
            ("http://b.com/", "<p>world</p>", "safe"),
        ],
    );
    let out = safeidx(&[
        "train",
        "--lexicons",
        &ws.lexicons(),
        "--corpus",
        &corpus,
        "--model",
        &ws.s("m.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("degenerate class distribution"),
        "{}",
        stderr(&out)
    );
    assert!(!ws.p("m.json").exists());
}

#[test]
fn eval_reports_metrics_forest_only_by_default() {
    let ws = Workspace::trained();
    let out = ok(&safeidx(&[
        "eval",
        "--lexicons",
        &ws.lexicons(),
        "--corpus",
        &ws.s("test/manifest.csv"),
        "--model",
        &ws.s("model.json"),
        "--report",
        &ws.s("eval.json"),
    ]));
    assert!(out.contains("1153 labeled pages, forest only"), "{out}");
    assert!(out.contains("(a): class adult"), "{out}");
    assert!(out.contains("accuracy"), "{out}");
    let report = read_json(&ws.p("eval.json"));
    let cm = &report["confusion"];
    let total: u64 = ["tp", "fn", "fp", "tn"]
        .iter()
        .map(|k| cm[k].as_u64().unwrap())
        .sum();
    assert_eq!(total, 1153);
    assert!(report["metrics"]["accuracy"].as_f64().unwrap() >= 0.95);
    assert!(report.get("stages").is_none());
}

#[test]
fn eval_full_pipeline_includes_stage_report() {
    let ws = Workspace::trained();
    ok(&safeidx(&[
        "eval",
        "--full-pipeline",
        "--lexicons",
        &ws.lexicons(),
        "--corpus",
        &ws.s("test/manifest.csv"),
        "--model",
        &ws.s("model.json"),
        "--report",
        &ws.s("eval.json"),
    ]));
    let stages = &read_json(&ws.p("eval.json"))["stages"];
    let sum: u64 = [
        "blacklist",
        "disclaimer",
        "tld_xxx",
        "forest_adult",
        "forest_safe",
    ]
    .iter()
    .map(|k| stages[k].as_u64().unwrap())
    .sum();
    assert_eq!(sum, 1153);
}

#[test]
fn eval_failures() {
    let ws = Workspace::trained();
    let empty = ws.corpus("empty", &[]);
    let out = safeidx(&[
        "eval",
        "--lexicons",
        &ws.lexicons(),
        "--corpus",
        &empty,
        "--model",
        &ws.s("model.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("no labeled pages"),
        "{}",
        stderr(&out)
    );

    let unlabeled = ws.corpus("unl", &[("http://a.com/", "<p>x</p>", "unlabeled")]);
    let out = safeidx(&[
        "eval",
        "--lexicons",
        &ws.lexicons(),
        "--corpus",
        &unlabeled,
        "--model",
        &ws.s("model.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unlabeled"), "{}", stderr(&out));
}

#[test]
fn filter_counts_xxx_and_writes_outputs() {
    let ws = Workspace::trained();
    let corpus = ws.corpus(
        "mix",
        &[
            ("http://a.example.xxx/p", "<p>hello</p>", "unlabeled"),
            (
                "http://garden.org/tomatoes",
                "<p>tomatoes like sun</p>",
                "unlabeled",
            ),
        ],
    );
    ok(&safeidx(&[
        "filter",
        "--lexicons",
        &ws.lexicons(),
        "--corpus",
        &corpus,
        "--model",
        &ws.s("model.json"),
        "--index",
        &ws.s("index.txt"),
        "--report",
        &ws.s("report.json"),
    ]));
    let report = read_json(&ws.p("report.json"));
    assert_eq!(report["tld_xxx"], 1);
    assert_eq!(report["skipped"], 0);
    let index = fs::read_to_string(ws.p("index.txt")).unwrap();
    assert_eq!(index, "http://garden.org/tomatoes\n");
}

#[test]
fn preseeded_blacklist_skips_extraction() {
    let ws = Workspace::trained();
    fs::write(ws.p("bl.txt"), "# known sites\nbad.com\n").unwrap();
    let corpus = ws.corpus(
        "bl",
        &[
            ("http://www.bad.com/1", "<p>tomatoes</p>", "unlabeled"),
            ("http://bad.com/2", "<p>tomatoes</p>", "unlabeled"),
        ],
    );
    let out = ok(&safeidx(&[
        "filter",
        "--lexicons",
        &ws.lexicons(),
        "--corpus",
        &corpus,
        "--model",
        &ws.s("model.json"),
        "--index",
        &ws.s("index.txt"),
        "--blacklist",
        &ws.s("bl.txt"),
        "--report",
        &ws.s("report.json"),
    ]));
    assert!(out.contains("0 features extracted"), "{out}");
    assert_eq!(read_json(&ws.p("report.json"))["blacklist"], 2);
    assert_eq!(fs::read_to_string(ws.p("index.txt")).unwrap(), "");
}

#[test]
fn trigger_fixture_updates_blacklist_file() {
    let ws = Workspace::trained();
    let corpus = ws.corpus(
        "trig",
        &[
            (
                "http://site.com/a",
                "<p>You must be 18 to enter</p>",
                "unlabeled",
            ),
            ("http://site.com/b", "<p>Adults only</p>", "unlabeled"),
            ("http://site.com/c", "<p>you must be 18</p>", "unlabeled"),
            ("http://site.com/d", "<p>tomatoes</p>", "unlabeled"),
        ],
    );
    ok(&safeidx(&[
        "filter",
        "--lexicons",
        &ws.lexicons(),
        "--corpus",
        &corpus,
        "--model",
        &ws.s("model.json"),
        "--index",
        &ws.s("index.txt"),
        "--blacklist",
        &ws.s("bl.txt"),
        "--blacklist-out",
        &ws.s("bl-new.txt"),
        "--report",
        &ws.s("report.json"),
    ]));
    assert!(
        !ws.p("bl.txt").exists(),
        "input blacklist must not be touched"
    );
    let bl = fs::read_to_string(ws.p("bl-new.txt")).unwrap();
    assert!(bl.lines().any(|l| l == "site.com"), "{bl}");
    let report = read_json(&ws.p("report.json"));
    assert_eq!(report["disclaimer"], 3);
    assert_eq!(report["blacklist"], 1);
}

#[test]
fn unreadable_page_is_skipped_by_filter() {
    let ws = Workspace::trained();
    let corpus = ws.corpus("skip", &[("http://a.org/", "<p>hello</p>", "unlabeled")]);
    let manifest = ws.p("skip/manifest.csv");
    let mut text = fs::read_to_string(&manifest).unwrap();
    text.push_str("missing.html,http://b.org/,unlabeled\n");
    fs::write(&manifest, text).unwrap();
    let out = safeidx(&[
        "filter",
        "--lexicons",
        &ws.lexicons(),
        "--corpus",
        &corpus,
        "--model",
        &ws.s("model.json"),
        "--index",
        &ws.s("index.txt"),
        "--report",
        &ws.s("report.json"),
    ]);
    ok(&out);
    assert!(stderr(&out).contains("missing.html"));
    assert_eq!(read_json(&ws.p("report.json"))["skipped"], 1);
}

#[test]
fn missing_model_fails() {
    let ws = Workspace::trained();
    let out = safeidx(&[
        "filter",
        "--lexicons",
        &ws.lexicons(),
        "--corpus",
        &ws.s("test/manifest.csv"),
        "--model",
        &ws.s("nope.json"),
        "--index",
        &ws.s("index.txt"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("nope.json"), "{}", stderr(&out));
}

#[test]
fn config_file_with_flag_override() {
    let ws = Workspace::trained();
    fs::write(
        ws.p("run.toml"),
        "lexicons = \"lexicons/manifest.toml\"\ncorpus = \"train/manifest.csv\"\nmodel = \"cfg-model.json\"\n\n[train]\nn_trees = 3\n",
    )
    .unwrap();
    let out = ok(&safeidx(&[
        "--config",
        &ws.s("run.toml"),
        "train",
        "--trees",
        "4",
    ]));
    assert!(out.contains("model written"), "{out}");
    let model = read_json(&ws.p("cfg-model.json"));
    assert_eq!(model["trees"].as_array().unwrap().len(), 4);
}

#[test]
fn inspect_model_prints_nested_trees() {
    let ws = Workspace::trained();
    let out = ok(&safeidx(&["inspect-model", "--model", &ws.s("model.json")]));
    assert!(out.starts_with("10 trees, adult when score > 0.5"), "{out}");
    assert_eq!(out.matches("\ntree ").count(), 10);
    assert!(out.contains("|   "), "{out}");

    let one = ok(&safeidx(&[
        "inspect-model",
        "--model",
        &ws.s("model.json"),
        "--tree",
        "2",
    ]));
    assert_eq!(one.matches("\ntree ").count(), 1);
    assert!(one.contains("tree 2:"));

    let out = safeidx(&[
        "inspect-model",
        "--model",
        &ws.s("model.json"),
        "--tree",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn vote_override_is_saved_with_the_model() {
    let ws = Workspace::trained();
    ok(&safeidx(&[
        "train",
        "--lexicons",
        &ws.lexicons(),
        "--corpus",
        &ws.s("train/manifest.csv"),
        "--model",
        &ws.s("m3.json"),
        "--min-votes",
        "3",
    ]));
    let out = ok(&safeidx(&[
        "inspect-model",
        "--model",
        &ws.s("m3.json"),
        "--tree",
        "0",
    ]));
    assert!(
        out.starts_with("10 trees, adult when at least 3 adult votes"),
        "{out}"
    );
}
