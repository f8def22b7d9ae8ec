//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use safeidx::features::{ATTRIBUTE_NAMES, N_ATTRIBUTES};
use safeidx::forest::TreeNode;
use safeidx::lexicon::{load_lexicon, CONTENT_LEXICONS};
use safeidx::{Attribute, FeatureVector, Label, LexiconSet};

// ---------------------------------------------------------------------------
// Split search by brute force.

#[derive(Debug, Clone, Copy)]
pub struct OracleSplit {
    pub attr: usize,
    pub threshold: f64,
    pub gain: f64,
    pub gain_ratio: f64,
}

fn h(p: &[f64]) -> f64 {
    let total: f64 = p.iter().sum();
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| {
            let q = x / total;
            -q * q.log2()
        })
        .sum()
}

/// Attribute values, label, weight.
pub type Row = (Vec<f64>, Label, f64);

/// Enumerate every midpoint between distinct sorted values, partition the
/// rows from scratch for each, and apply the mean-gain guard and tie order.
pub fn oracle_best_split(rows: &[Row], attrs: &[usize], min_leaf: f64) -> Option<OracleSplit> {
    let class = |pred: &dyn Fn(&Vec<f64>) -> bool| {
        let mut a = 0.0;
        let mut s = 0.0;
        for (x, l, w) in rows {
            if pred(x) {
                match l {
                    Label::Adult => a += w,
                    Label::Safe => s += w,
                }
            }
        }
        (a, s)
    };
    let (ta, ts) = class(&|_| true);
    let base = h(&[ta, ts]);
    let total = ta + ts;

    let mut cands = Vec::new();
    for &attr in attrs {
        let mut vals: Vec<f64> = rows.iter().map(|r| r.0[attr]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for pair in vals.windows(2) {
            let mut thr = pair[0] / 2.0 + pair[1] / 2.0;
            if thr >= pair[1] {
                thr = pair[0];
            }
            let (la, ls) = class(&|x| x[attr] <= thr);
            let (ra, rs) = class(&|x| x[attr] > thr);
            let (wl, wr) = (la + ls, ra + rs);
            if wl < min_leaf - 1e-9 || wr < min_leaf - 1e-9 {
                continue;
            }
            let gain = base - wl / total * h(&[la, ls]) - wr / total * h(&[ra, rs]);
            if gain <= 1e-12 {
                continue;
            }
            cands.push(OracleSplit {
                attr,
                threshold: thr,
                gain,
                gain_ratio: gain / h(&[wl, wr]),
            });
        }
    }
    if cands.is_empty() {
        return None;
    }
    let mean = cands.iter().map(|c| c.gain).sum::<f64>() / cands.len() as f64;
    let mut best: Option<OracleSplit> = None;
    for c in cands.into_iter().filter(|c| c.gain >= mean - 1e-12) {
        let better = match best {
            None => true,
            Some(b) => {
                if (c.gain_ratio - b.gain_ratio).abs() > 1e-12 {
                    c.gain_ratio > b.gain_ratio
                } else if (c.gain - b.gain).abs() > 1e-12 {
                    c.gain > b.gain
                } else if ATTRIBUTE_NAMES[c.attr] != ATTRIBUTE_NAMES[b.attr] {
                    ATTRIBUTE_NAMES[c.attr] < ATTRIBUTE_NAMES[b.attr]
                } else {
                    c.threshold < b.threshold
                }
            }
        };
        if better {
            best = Some(c);
        }
    }
    best
}

/// A table of at most 32 rows over 4 attributes, with coarse values so
/// that ties and repeated values are common.
pub fn random_table(rng: &mut ChaCha8Rng) -> (Vec<Row>, Vec<usize>) {
    let attrs: Vec<usize> = {
        let mut set = BTreeSet::new();
        while set.len() < 4 {
            set.insert(rng.gen_range(0..N_ATTRIBUTES));
        }
        set.into_iter().collect()
    };
    let n = rng.gen_range(2..=32);
    let rows = (0..n)
        .map(|_| {
            let mut x = vec![0.0; N_ATTRIBUTES];
            for &a in &attrs {
                x[a] = match rng.gen_range(0..3) {
                    0 => rng.gen_range(0..5) as f64,
                    1 => rng.gen_range(0..8) as f64 / 8.0,
                    _ => rng.gen::<f64>(),
                };
            }
            let label = if rng.gen_bool(0.5) {
                Label::Adult
            } else {
                Label::Safe
            };
            let weight = if rng.gen_bool(0.5) {
                1.0
            } else {
                rng.gen_range(0.1..3.0)
            };
            (x, label, weight)
        })
        .collect();
    (rows, attrs)
}

pub fn to_fv(x: &[f64]) -> FeatureVector {
    let mut v = [0.0; N_ATTRIBUTES];
    v.copy_from_slice(x);
    FeatureVector::from_values(v)
}

// ---------------------------------------------------------------------------
// Tree evaluation over a flattened node table.

pub enum Flat {
    Test {
        attr: usize,
        thr: f64,
        le: usize,
        gt: usize,
    },
    Leaf(Label),
}

pub fn flatten(tree: &TreeNode) -> Vec<Flat> {
    fn go(node: &TreeNode, out: &mut Vec<Flat>) -> usize {
        let at = out.len();
        match node {
            TreeNode::Leaf { label, .. } => out.push(Flat::Leaf(*label)),
            TreeNode::Internal {
                attribute,
                threshold,
                left,
                right,
            } => {
                out.push(Flat::Leaf(Label::Safe));
                let le = go(left, out);
                let gt = go(right, out);
                out[at] = Flat::Test {
                    attr: attribute.index(),
                    thr: *threshold,
                    le,
                    gt,
                };
            }
        }
        at
    }
    let mut out = Vec::new();
    go(tree, &mut out);
    out
}

pub fn naive_eval(table: &[Flat], x: &[f64]) -> (Label, BTreeSet<usize>) {
    let mut seen = BTreeSet::new();
    let mut i = 0;
    loop {
        match table[i] {
            Flat::Leaf(l) => return (l, seen),
            Flat::Test { attr, thr, le, gt } => {
                seen.insert(attr);
                i = if x[attr] <= thr { le } else { gt };
            }
        }
    }
}

pub fn random_tree(rng: &mut ChaCha8Rng, depth: usize) -> TreeNode {
    if depth == 0 || rng.gen_bool(0.25) {
        let label = if rng.gen_bool(0.5) {
            Label::Adult
        } else {
            Label::Safe
        };
        return TreeNode::leaf(label);
    }
    let attr = Attribute::from_index(rng.gen_range(0..N_ATTRIBUTES)).unwrap();
    let thr = rng.gen_range(0..10) as f64 / 4.0;
    TreeNode::split(
        attr,
        thr,
        random_tree(rng, depth - 1),
        random_tree(rng, depth - 1),
    )
}

pub fn random_vector(rng: &mut ChaCha8Rng) -> Vec<f64> {
    // Quarter steps hit thresholds exactly, exercising the `<=` boundary.
    (0..N_ATTRIBUTES)
        .map(|_| rng.gen_range(0..10) as f64 / 4.0)
        .collect()
}

// ---------------------------------------------------------------------------
// Feature-extraction fixture: twenty small documents and small lists whose
// expected vectors were worked out by hand.

pub const FIXTURE_LISTS: [(&str, &str); 12] = [
    ("in-url", "sex\nporn\nxxx\ncam\n"),
    ("brand-names", "pornhub\nyouporn\nredtube\n"),
    ("categories-en", "amateur\nmilf\nbig tits\nteen\n"),
    ("categories-fr", "amateur\nsalope\ngros seins\n"),
    ("categories-gen", "porn\nsex\nxxx\nhardcore\nnude\n"),
    ("en-words", "naked\nhot\ngirls\nfree\n"),
    ("french-words", "chaude\ngratuit\nfemme\nl'amour\n"),
    ("pornstars", "# two names\njenna jameson\nsasha grey\n"),
    ("queries", "free porn\nporn videos\nsex videos\n"),
    ("small-set", "porn\nsex\n"),
    ("tags-en", "anal\nlesbian\nhard-core\nwebcam\n"),
    ("tags-fr", "sodomie\nlesbienne\nwebcam\n"),
];

pub fn fixture_lexicons() -> LexiconSet {
    let url = load_lexicon(FIXTURE_LISTS[0].0, FIXTURE_LISTS[0].1).unwrap();
    let content = FIXTURE_LISTS[1..]
        .iter()
        .map(|(n, s)| load_lexicon(n, s).unwrap())
        .collect();
    let set = LexiconSet::complete(url, content).unwrap();
    assert_eq!(CONTENT_LEXICONS.len(), 11);
    set
}

pub struct FixtureDoc {
    pub url: &'static str,
    pub html: &'static str,
    /// Non-zero attributes as (name, value).
    pub expect: &'static [(&'static str, f64)],
}

pub const FIXTURE_DOCS: [FixtureDoc; 20] = [
    FixtureDoc {
        url: "http://www.example.com/",
        html: "<p>Hello world</p>",
        expect: &[],
    },
    FixtureDoc {
        url: "http://pornhub.com/view",
        html: "<html><body><h1>Free Porn Videos</h1><img src=a.jpg><img src=b.jpg></body></html>",
        expect: &[
            ("in_url", 1.0),
            ("in_ndd", 1.0),
            ("nbr_img", 2.0),
            ("nb_categories-gen", 1.0),
            ("ratio_categories-gen", 1.0 / 5.0),
            ("prop_categories-gen", 1.0 / 3.0),
            ("nb_en-words", 1.0),
            ("ratio_en-words", 1.0 / 4.0),
            ("prop_en-words", 1.0 / 3.0),
            ("nb_queries", 2.0),
            ("ratio_queries", 2.0 / 3.0),
            ("prop_queries", 1.0),
            ("nb_small-set", 1.0),
            ("ratio_small-set", 1.0 / 2.0),
            ("prop_small-set", 1.0 / 3.0),
        ],
    },
    FixtureDoc {
        url: "https://www.youporn.com/watch/123",
        html: "<div>YouPorn: hot girls, hot MILF amateur</div>",
        expect: &[
            ("in_url", 1.0),
            ("in_ndd", 1.0),
            ("nb_brand-names", 1.0),
            ("ratio_brand-names", 1.0 / 3.0),
            ("prop_brand-names", 1.0 / 6.0),
            ("nb_categories-en", 2.0),
            ("ratio_categories-en", 2.0 / 4.0),
            ("prop_categories-en", 2.0 / 6.0),
            ("nb_categories-fr", 1.0),
            ("ratio_categories-fr", 1.0 / 3.0),
            ("prop_categories-fr", 1.0 / 6.0),
            ("nb_en-words", 3.0),
            ("ratio_en-words", 2.0 / 4.0),
            ("prop_en-words", 3.0 / 6.0),
        ],
    },
    FixtureDoc {
        url: "http://sexcams.example.xxx/live",
        html: "<p>Webcam lesbian show</p><img src=x><IMG SRC=y><img/>",
        expect: &[
            ("in_url", 3.0),
            ("in_ndd", 1.0),
            ("nbr_img", 3.0),
            ("nb_tags-en", 2.0),
            ("ratio_tags-en", 2.0 / 4.0),
            ("prop_tags-en", 2.0 / 3.0),
            ("nb_tags-fr", 1.0),
            ("ratio_tags-fr", 1.0 / 3.0),
            ("prop_tags-fr", 1.0 / 3.0),
        ],
    },
    FixtureDoc {
        url: "http://jenna.example.org/",
        html: "Jenna Jameson and Sasha Grey. Jenna Jameson again.",
        expect: &[
            ("nb_pornstars", 3.0),
            ("ratio_pornstars", 1.0),
            ("prop_pornstars", 6.0 / 8.0),
        ],
    },
    FixtureDoc {
        url: "http://example.fr/blog",
        html: "<p>Une femme chaude, l&#39;amour gratuit</p>",
        expect: &[
            ("nb_french-words", 4.0),
            ("ratio_french-words", 1.0),
            ("prop_french-words", 4.0 / 5.0),
        ],
    },
    FixtureDoc {
        url: "http://forum.example.co.uk/t/1",
        html:
            "<p>Gros seins, grosse salope</p><script>var s='porn sex xxx';</script><p>amateur</p>",
        expect: &[
            ("nb_categories-fr", 3.0),
            ("ratio_categories-fr", 1.0),
            ("prop_categories-fr", 4.0 / 5.0),
            ("nb_categories-en", 1.0),
            ("ratio_categories-en", 1.0 / 4.0),
            ("prop_categories-en", 1.0 / 5.0),
        ],
    },
    FixtureDoc {
        url: "http://xxx-videos.net/",
        html: "<p>Big tits big tits BIG TITS</p>",
        expect: &[
            ("in_url", 1.0),
            ("in_ndd", 1.0),
            ("nb_categories-en", 3.0),
            ("ratio_categories-en", 1.0 / 4.0),
            ("prop_categories-en", 1.0),
        ],
    },
    FixtureDoc {
        url: "http://example.com/free-sex",
        html: "<p>Sex videos: sex, sex videos.</p>",
        expect: &[
            ("in_url", 1.0),
            ("nb_categories-gen", 3.0),
            ("ratio_categories-gen", 1.0 / 5.0),
            ("prop_categories-gen", 3.0 / 5.0),
            ("nb_small-set", 3.0),
            ("ratio_small-set", 1.0 / 2.0),
            ("prop_small-set", 3.0 / 5.0),
            ("nb_queries", 2.0),
            ("ratio_queries", 1.0 / 3.0),
            ("prop_queries", 4.0 / 5.0),
        ],
    },
    FixtureDoc {
        url: "http://example.com/",
        html: "<p>Hard-core anal</p><!-- porn porn --> <p>hardcore nude</p>",
        expect: &[
            ("nb_tags-en", 2.0),
            ("ratio_tags-en", 2.0 / 4.0),
            ("prop_tags-en", 2.0 / 4.0),
            ("nb_categories-gen", 2.0),
            ("ratio_categories-gen", 2.0 / 5.0),
            ("prop_categories-gen", 2.0 / 4.0),
        ],
    },
    FixtureDoc {
        url: "http://news.example.com/",
        html: "",
        expect: &[],
    },
    FixtureDoc {
        url: "http://example.com/gallery",
        html: "<img src=1><img src=2><img src=3><img src=4><img src=5>",
        expect: &[("nbr_img", 5.0)],
    },
    FixtureDoc {
        url: "http://camgirls.example.net/",
        html: "<p>Naked girls on webcam, free</p>",
        expect: &[
            ("in_url", 1.0),
            ("nb_en-words", 3.0),
            ("ratio_en-words", 3.0 / 4.0),
            ("prop_en-words", 3.0 / 5.0),
            ("nb_tags-en", 1.0),
            ("ratio_tags-en", 1.0 / 4.0),
            ("prop_tags-en", 1.0 / 5.0),
            ("nb_tags-fr", 1.0),
            ("ratio_tags-fr", 1.0 / 3.0),
            ("prop_tags-fr", 1.0 / 5.0),
        ],
    },
    FixtureDoc {
        url: "http://example.org/",
        html: "<p>Sodomie lesbienne &amp; teen</p>",
        expect: &[
            ("nb_tags-fr", 2.0),
            ("ratio_tags-fr", 2.0 / 3.0),
            ("prop_tags-fr", 2.0 / 3.0),
            ("nb_categories-en", 1.0),
            ("ratio_categories-en", 1.0 / 4.0),
            ("prop_categories-en", 1.0 / 3.0),
        ],
    },
    FixtureDoc {
        url: "http://example.com/porn",
        html: "<p>porn porn porn free porn</p>",
        expect: &[
            ("in_url", 1.0),
            ("nb_categories-gen", 4.0),
            ("ratio_categories-gen", 1.0 / 5.0),
            ("prop_categories-gen", 4.0 / 5.0),
            ("nb_small-set", 4.0),
            ("ratio_small-set", 1.0 / 2.0),
            ("prop_small-set", 4.0 / 5.0),
            ("nb_en-words", 1.0),
            ("ratio_en-words", 1.0 / 4.0),
            ("prop_en-words", 1.0 / 5.0),
            ("nb_queries", 1.0),
            ("ratio_queries", 1.0 / 3.0),
            ("prop_queries", 2.0 / 5.0),
        ],
    },
    FixtureDoc {
        url: "http://www.redtube.com/",
        html: "<title>RedTube</title><p>redtube pornhub youporn</p>",
        expect: &[
            ("nb_brand-names", 4.0),
            ("ratio_brand-names", 1.0),
            ("prop_brand-names", 1.0),
        ],
    },
    FixtureDoc {
        url: "http://example.com/",
        html: "<p>Sasha</p><p>Grey</p>",
        expect: &[
            ("nb_pornstars", 1.0),
            ("ratio_pornstars", 1.0 / 2.0),
            ("prop_pornstars", 1.0),
        ],
    },
    FixtureDoc {
        url: "http://example.com/",
        html: "<p>Jenna, jameson; FREE-PORN</p>",
        expect: &[
            ("nb_pornstars", 1.0),
            ("ratio_pornstars", 1.0 / 2.0),
            ("prop_pornstars", 2.0 / 3.0),
        ],
    },
    FixtureDoc {
        url: "http://sexshop.example.com/xxx/cam",
        html: "<p>Toys &lt;porn&gt;</p>",
        expect: &[
            ("in_url", 3.0),
            ("nb_categories-gen", 1.0),
            ("ratio_categories-gen", 1.0 / 5.0),
            ("prop_categories-gen", 1.0 / 2.0),
            ("nb_small-set", 1.0),
            ("ratio_small-set", 1.0 / 2.0),
            ("prop_small-set", 1.0 / 2.0),
        ],
    },
    FixtureDoc {
        url: "http://192.168.0.1/porn",
        html: "<p>Adults only: naked amateur hot</p><img src=a>",
        expect: &[
            ("in_url", 1.0),
            ("nbr_img", 1.0),
            ("nb_en-words", 2.0),
            ("ratio_en-words", 2.0 / 4.0),
            ("prop_en-words", 2.0 / 5.0),
            ("nb_categories-en", 1.0),
            ("ratio_categories-en", 1.0 / 4.0),
            ("prop_categories-en", 1.0 / 5.0),
            ("nb_categories-fr", 1.0),
            ("ratio_categories-fr", 1.0 / 3.0),
            ("prop_categories-fr", 1.0 / 5.0),
        ],
    },
];

/// Dense expected vector for a fixture document.
pub fn expected_vector(doc: &FixtureDoc) -> [f64; N_ATTRIBUTES] {
    let mut v = [0.0; N_ATTRIBUTES];
    for (name, value) in doc.expect {
        let i = ATTRIBUTE_NAMES
            .iter()
            .position(|n| n == name)
            .expect("known attribute");
        v[i] = *value;
    }
    v
}

/// Mismatches between an extracted and an expected vector: counts must be
/// equal, fractions within 1e-12.
pub fn vector_mismatches(got: &FeatureVector, want: &[f64; N_ATTRIBUTES]) -> Vec<String> {
    let mut out = Vec::new();
    for (i, name) in ATTRIBUTE_NAMES.iter().enumerate() {
        let (g, w) = (got.values()[i], want[i]);
        let exact = i < 3 || name.starts_with("nb_");
        let ok = if exact {
            g == w
        } else {
            (g - w).abs() <= 1e-12
        };
        if !ok {
            out.push(format!("{name}: got {g}, want {w}"));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Blacklist trigger fixture.

/// Three adult pages from one site, then a fourth from the same site with
/// harmless text, then one page from elsewhere.
pub const TRIGGER_FIXTURE: [(&str, &str); 5] = [
    ("http://site.com/a", "<p>you must be 18 to enter</p>"),
    ("http://www.site.com/b", "<p>adults only</p>"),
    ("http://site.com/c", "<p>you must be 18</p>"),
    (
        "http://site.com/d",
        "<p>gardening tips and tomato recipes</p>",
    ),
    ("http://other.org/", "<p>gardening tips</p>"),
];
