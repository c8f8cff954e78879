use std::fmt;

use super::sexpr::is_relation_name;
use super::tree::RstTree;

/// A structural problem that excludes a tree from classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Fewer than two EDUs.
    DegenerateTree,
    EmptyRelation { path: String },
    MalformedRelation { path: String, relation: String },
    EmptyEdu { path: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegenerateTree => f.write_str("degenerate tree (fewer than 2 EDUs)"),
            Violation::EmptyRelation { path } => write!(f, "empty relation at {path}"),
            Violation::MalformedRelation { path, relation } => {
                write!(f, "malformed relation `{relation}` at {path}")
            }
            Violation::EmptyEdu { path } => write!(f, "empty EDU at {path}"),
        }
    }
}

/// Lists every violation; an empty list means the tree is usable.
///
/// Paths are strings of `L`/`R` steps from the root (`""` is the root).
pub fn validate_tree(t: &RstTree) -> Vec<Violation> {
    let mut out = Vec::new();
    if t.leaf_count() < 2 {
        out.push(Violation::DegenerateTree);
    }
    walk(t, &mut String::new(), &mut out);
    out
}

fn walk(t: &RstTree, path: &mut String, out: &mut Vec<Violation>) {
    match t {
        RstTree::Leaf(text) => {
            if text.trim().is_empty() {
                out.push(Violation::EmptyEdu { path: path.clone() });
            }
        }
        RstTree::Internal(n) => {
            for (step, label, child) in [('L', &n.left_label, &n.left), ('R', &n.right_label, &n.right)] {
                path.push(step);
                if label.relation.is_empty() {
                    out.push(Violation::EmptyRelation { path: path.clone() });
                } else if !is_relation_name(&label.relation) {
                    out.push(Violation::MalformedRelation {
                        path: path.clone(),
                        relation: label.relation.clone(),
                    });
                }
                walk(child, path, out);
                path.pop();
            }
        }
    }
}
