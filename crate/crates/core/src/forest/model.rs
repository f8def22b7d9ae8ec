//! Versioned JSON model file.
//!
//! ```json
//! {"version": 1, "vote_threshold": 0.5,
//!  "trees": [{"attr": "ratio_en-words", "thr": 0.05,
//!             "left": {"label": "safe", "weights": [0.1, 3.0]},
//!             "right": {"label": "adult", "weights": [4.0, 0.0]}}]}
//! ```
//!
//! A count threshold is written as `min_votes` alongside the equivalent
//! strict fraction `(min_votes - 1) / trees`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Forest, TreeNode, VoteThreshold};
use crate::error::{Error, Result};
use crate::features::Attribute;
use crate::page::Label;

pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    version: u32,
    vote_threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    min_votes: Option<usize>,
    trees: Vec<Node>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Node {
    Internal {
        attr: Attribute,
        thr: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
    Leaf {
        label: Label,
        #[serde(default)]
        weights: [f64; 2],
    },
}

impl From<&TreeNode> for Node {
    fn from(t: &TreeNode) -> Self {
        match t {
            TreeNode::Internal {
                attribute,
                threshold,
                left,
                right,
            } => Node::Internal {
                attr: *attribute,
                thr: *threshold,
                left: Box::new(left.as_ref().into()),
                right: Box::new(right.as_ref().into()),
            },
            TreeNode::Leaf { label, weights } => Node::Leaf {
                label: *label,
                weights: [weights.0, weights.1],
            },
        }
    }
}

impl Node {
    fn into_tree(self) -> Result<TreeNode> {
        Ok(match self {
            Node::Internal {
                attr,
                thr,
                left,
                right,
            } => {
                if !thr.is_finite() {
                    return Err(Error::InvalidModel(format!(
                        "non-finite threshold on {attr}"
                    )));
                }
                TreeNode::split(attr, thr, left.into_tree()?, right.into_tree()?)
            }
            Node::Leaf { label, weights } => TreeNode::Leaf {
                label,
                weights: (weights[0], weights[1]),
            },
        })
    }
}

impl Forest {
    pub fn to_json(&self) -> String {
        let (vote_threshold, min_votes) = match self.vote {
            VoteThreshold::Fraction(t) => (t, None),
            VoteThreshold::MinVotes(k) => ((k - 1) as f64 / self.trees.len() as f64, Some(k)),
        };
        let file = ModelFile {
            version: MODEL_VERSION,
            vote_threshold,
            min_votes,
            trees: self.trees.iter().map(Node::from).collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.version != MODEL_VERSION {
            return Err(Error::InvalidModel(format!(
                "unsupported model version {} (expected {MODEL_VERSION})",
                file.version
            )));
        }
        let trees = file
            .trees
            .into_iter()
            .map(Node::into_tree)
            .collect::<Result<Vec<_>>>()?;
        let vote = match file.min_votes {
            Some(k) => VoteThreshold::MinVotes(k),
            None => VoteThreshold::Fraction(file.vote_threshold),
        };
        Forest::new(trees, vote)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Forest::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Forest {
        let tree = TreeNode::split(
            Attribute::by_name("ratio_en-words").unwrap(),
            0.05,
            TreeNode::Leaf {
                label: Label::Safe,
                weights: (0.125, 3.0),
            },
            TreeNode::leaf(Label::Adult),
        );
        Forest::new(
            vec![tree, TreeNode::leaf(Label::Safe)],
            VoteThreshold::default(),
        )
        .unwrap()
    }

    #[test]
    fn layout() {
        let json = sample().to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["version"], 1);
        assert_eq!(v["vote_threshold"], 0.5);
        assert!(v.get("min_votes").is_none());
        assert_eq!(v["trees"][0]["attr"], "ratio_en-words");
        assert_eq!(v["trees"][0]["left"]["label"], "safe");
        assert_eq!(v["trees"][1]["label"], "safe");
        // Field order is stable.
        let keys: Vec<_> = ["\"version\"", "\"vote_threshold\"", "\"trees\""]
            .iter()
            .map(|k| json.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn round_trip() {
        let f = sample();
        assert_eq!(Forest::from_json(&f.to_json()).unwrap(), f);
        let f = f.with_vote_threshold(VoteThreshold::MinVotes(2)).unwrap();
        let json = f.to_json();
        assert!(json.contains("\"min_votes\": 2"));
        assert_eq!(Forest::from_json(&json).unwrap(), f);
    }

    #[test]
    fn rejects_bad_models() {
        let bad_version = sample()
            .to_json()
            .replace("\"version\": 1", "\"version\": 9");
        assert!(matches!(
            Forest::from_json(&bad_version),
            Err(Error::InvalidModel(_))
        ));
        let bad_attr = sample().to_json().replace("ratio_en-words", "nb_videos");
        assert!(Forest::from_json(&bad_attr).is_err());
        assert!(Forest::from_json(r#"{"version":1,"vote_threshold":0.5,"trees":[]}"#).is_err());
        assert!(Forest::from_json("not json").is_err());
    }
}
