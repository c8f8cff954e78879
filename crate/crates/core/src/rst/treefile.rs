use std::path::Path;

use super::sexpr::parse_tree;
use super::tree::RstTree;
use crate::error::{Error, Result};

/// One non-blank line of a tree file: an optional `id<TAB>` prefix followed
/// by a serialized tree.
#[derive(Debug)]
pub struct TreeLine {
    /// 1-based line number.
    pub line: usize,
    pub id: Option<String>,
    pub tree: Result<RstTree>,
}

pub fn parse_tree_file(text: &str) -> Vec<TreeLine> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let (id, body) = match l.split_once('\t') {
                Some((id, body)) if !id.trim_start().starts_with('(') => {
                    (Some(id.trim().to_string()), body)
                }
                _ => (None, l),
            };
            TreeLine {
                line: i + 1,
                id,
                tree: parse_tree(body),
            }
        })
        .collect()
}

pub fn read_tree_file(path: &Path) -> Result<Vec<TreeLine>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_tree_file(&text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_and_bare_lines() {
        let text = "d1\t(rel A/N B/S (edu \"x\") (edu \"y\"))\n\n(edu \"z\")\nd3\t(edu \"\")\n";
        let lines = parse_tree_file(text);
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0].id.as_deref(), Some("d1"));
        assert!(lines[0].tree.is_ok());
        assert_eq!(lines[1].line, 3);
        assert!(lines[1].id.is_none());
        assert!(lines[2].tree.is_err());
    }
}
