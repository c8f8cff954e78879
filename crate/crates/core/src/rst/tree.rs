use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Nuclearity {
    N,
    S,
}

impl Nuclearity {
    pub fn as_str(self) -> &'static str {
        match self {
            Nuclearity::N => "N",
            Nuclearity::S => "S",
        }
    }

    pub fn index(self) -> usize {
        match self {
            Nuclearity::N => 0,
            Nuclearity::S => 1,
        }
    }
}

impl fmt::Display for Nuclearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Relation and nuclearity attached to a child subtree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub relation: String,
    pub nuclearity: Nuclearity,
}

impl Label {
    pub fn new(relation: impl Into<String>, nuclearity: Nuclearity) -> Self {
        Self {
            relation: relation.into(),
            nuclearity,
        }
    }

    /// The `Relation_N` / `Relation_S` key used by the relation vocabulary.
    pub fn combined(&self) -> String {
        format!("{}_{}", self.relation, self.nuclearity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Internal {
    pub left: RstTree,
    pub right: RstTree,
    pub left_label: Label,
    pub right_label: Label,
}

/// Binary discourse tree. Labels hang off the children of each internal
/// node, so the root itself is unlabeled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RstTree {
    Leaf(String),
    Internal(Box<Internal>),
}

impl RstTree {
    pub fn leaf(text: impl Into<String>) -> Self {
        RstTree::Leaf(text.into())
    }

    pub fn internal(left_label: Label, right_label: Label, left: RstTree, right: RstTree) -> Self {
        RstTree::Internal(Box::new(Internal {
            left,
            right,
            left_label,
            right_label,
        }))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, RstTree::Leaf(_))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            RstTree::Leaf(_) => 1,
            RstTree::Internal(n) => n.left.leaf_count() + n.right.leaf_count(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            RstTree::Leaf(_) => 1,
            RstTree::Internal(n) => 1 + n.left.node_count() + n.right.node_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            RstTree::Leaf(_) => 0,
            RstTree::Internal(n) => 1 + n.left.depth().max(n.right.depth()),
        }
    }

    /// EDU texts in left-to-right order.
    pub fn edus(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_edus(&mut out);
        out
    }

    fn collect_edus<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            RstTree::Leaf(t) => out.push(t),
            RstTree::Internal(n) => {
                n.left.collect_edus(out);
                n.right.collect_edus(out);
            }
        }
    }

    /// Every child label in pre-order (left label before right label).
    pub fn labels(&self) -> Vec<&Label> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels<'a>(&'a self, out: &mut Vec<&'a Label>) {
        if let RstTree::Internal(n) = self {
            out.push(&n.left_label);
            out.push(&n.right_label);
            n.left.collect_labels(out);
            n.right.collect_labels(out);
        }
    }

    /// True when both trees have the same branching structure, ignoring
    /// labels and text.
    pub fn same_shape(&self, other: &RstTree) -> bool {
        match (self, other) {
            (RstTree::Leaf(_), RstTree::Leaf(_)) => true,
            (RstTree::Internal(a), RstTree::Internal(b)) => {
                a.left.same_shape(&b.left) && a.right.same_shape(&b.right)
            }
            _ => false,
        }
    }

    /// Applies `f` to every label, keeping structure and text.
    pub fn map_labels(&self, f: &mut impl FnMut(&Label) -> Label) -> RstTree {
        match self {
            RstTree::Leaf(t) => RstTree::Leaf(t.clone()),
            RstTree::Internal(n) => {
                let left_label = f(&n.left_label);
                let right_label = f(&n.right_label);
                let left = n.left.map_labels(f);
                let right = n.right.map_labels(f);
                RstTree::internal(left_label, right_label, left, right)
            }
        }
    }

    /// Applies `f` to every EDU text, keeping structure and labels.
    pub fn map_edus(&self, f: &mut impl FnMut(&str) -> String) -> RstTree {
        match self {
            RstTree::Leaf(t) => RstTree::Leaf(f(t)),
            RstTree::Internal(n) => RstTree::internal(
                n.left_label.clone(),
                n.right_label.clone(),
                n.left.map_edus(f),
                n.right.map_edus(f),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RstTree {
        RstTree::internal(
            Label::new("Elaboration", Nuclearity::N),
            Label::new("Evidence", Nuclearity::S),
            RstTree::leaf("a"),
            RstTree::internal(
                Label::new("Joint", Nuclearity::N),
                Label::new("Joint", Nuclearity::N),
                RstTree::leaf("b"),
                RstTree::leaf("c"),
            ),
        )
    }

    #[test]
    fn counts() {
        let t = sample();
        assert_eq!(t.leaf_count(), 3);
        assert_eq!(t.node_count(), 5);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.edus(), vec!["a", "b", "c"]);
        assert_eq!(t.labels()[1].combined(), "Evidence_S");
    }

    #[test]
    fn shape_ignores_labels_and_text() {
        let t = sample();
        let u = t
            .map_labels(&mut |_| Label::new("X", Nuclearity::S))
            .map_edus(&mut |s| s.repeat(2));
        assert!(t.same_shape(&u));
        assert_ne!(t, u);
        assert!(!t.same_shape(&RstTree::leaf("a")));
    }
}
