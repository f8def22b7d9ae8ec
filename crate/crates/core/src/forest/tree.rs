use std::collections::BTreeSet;
use std::fmt::Write;

use crate::features::{Attribute, FeatureVector};
use crate::page::Label;

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Internal {
        attribute: Attribute,
        threshold: f64,
        /// Rows with `value <= threshold`.
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        label: Label,
        /// Training weight (adult, safe) that reached this leaf.
        weights: (f64, f64),
    },
}

impl TreeNode {
    pub fn leaf(label: Label) -> Self {
        TreeNode::Leaf {
            label,
            weights: (0.0, 0.0),
        }
    }

    pub fn split(attribute: Attribute, threshold: f64, left: TreeNode, right: TreeNode) -> Self {
        TreeNode::Internal {
            attribute,
            threshold,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => 1 + left.size() + right.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Attributes tested anywhere in the tree.
    pub fn attributes(&self) -> BTreeSet<Attribute> {
        let mut out = BTreeSet::new();
        self.collect_attributes(&mut out);
        out
    }

    fn collect_attributes(&self, out: &mut BTreeSet<Attribute>) {
        if let TreeNode::Internal {
            attribute,
            left,
            right,
            ..
        } = self
        {
            out.insert(*attribute);
            left.collect_attributes(out);
            right.collect_attributes(out);
        }
    }

    pub fn root_attribute(&self) -> Option<Attribute> {
        match self {
            TreeNode::Internal { attribute, .. } => Some(*attribute),
            TreeNode::Leaf { .. } => None,
        }
    }

    pub fn predict(&self, fv: &FeatureVector) -> Label {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { label, .. } => return *label,
                TreeNode::Internal {
                    attribute,
                    threshold,
                    left,
                    right,
                } => {
                    node = if fv[*attribute] > *threshold {
                        right
                    } else {
                        left
                    };
                }
            }
        }
    }

    /// Indented text rendering, one test per line, deeper levels nested
    /// under `|   ` bars. Leaves show their training weights.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        let bar = "|   ".repeat(indent);
        match self {
            TreeNode::Leaf { label, weights } => {
                let _ = writeln!(out, "{bar}{} {}", label, fmt_weights(*weights));
            }
            TreeNode::Internal {
                attribute,
                threshold,
                left,
                right,
            } => {
                for (op, child) in [("<=", left), (">", right)] {
                    match child.as_ref() {
                        TreeNode::Leaf { label, weights } => {
                            let _ = writeln!(
                                out,
                                "{bar}{attribute} {op} {threshold}: {label} {}",
                                fmt_weights(*weights)
                            );
                        }
                        inner => {
                            let _ = writeln!(out, "{bar}{attribute} {op} {threshold}:");
                            inner.render_into(out, indent + 1);
                        }
                    }
                }
            }
        }
    }
}

fn fmt_weights((adult, safe): (f64, f64)) -> String {
    format!("(adult {adult:.3} / safe {safe:.3})")
}

/// Classify with one tree, also returning the attributes tested on the
/// root-to-leaf path.
pub fn tree_classify(tree: &TreeNode, fv: &FeatureVector) -> (Label, BTreeSet<Attribute>) {
    let mut visited = BTreeSet::new();
    let mut node = tree;
    loop {
        match node {
            TreeNode::Leaf { label, .. } => return (*label, visited),
            TreeNode::Internal {
                attribute,
                threshold,
                left,
                right,
            } => {
                visited.insert(*attribute);
                node = if fv[*attribute] > *threshold {
                    right
                } else {
                    left
                };
            }
        }
    }
}
