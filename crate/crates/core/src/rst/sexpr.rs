//! Canonical s-expression form of [`RstTree`].
//!
//! ```text
//! tree     := leaf | internal
//! leaf     := "(" "edu" quoted-string ")"
//! internal := "(" "rel" label "/" nuc label "/" nuc tree tree ")"
//! nuc      := "N" | "S"
//! label    := [A-Za-z][A-Za-z0-9-]*
//! ```
//!
//! Inside quoted strings only `\"` and `\\` are escapes.

use super::tree::{Label, Nuclearity, RstTree};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        offset,
        message: message.into(),
    })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(got) if got == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(got) => err(self.pos, format!("expected `{c}`, found `{got}`")),
            None => err(self.pos, format!("expected `{c}`, found end of input")),
        }
    }

    /// A bare word: anything up to whitespace, a parenthesis or a quote.
    fn word(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest
            .find(|c: char| c.is_whitespace() || c == '(' || c == ')' || c == '"')
            .unwrap_or(rest.len());
        self.pos += len;
        (start, &rest[..len])
    }

    fn tree(&mut self) -> Result<RstTree> {
        self.expect('(')?;
        let (at, keyword) = self.word();
        match keyword {
            "edu" => {
                let text = self.quoted()?;
                self.expect(')')?;
                Ok(RstTree::Leaf(text))
            }
            "rel" => {
                let left_label = self.label()?;
                let right_label = self.label()?;
                let left = self.tree()?;
                let right = self.tree()?;
                self.expect(')')?;
                Ok(RstTree::internal(left_label, right_label, left, right))
            }
            "" => err(at, "missing node keyword"),
            other => err(at, format!("unknown node keyword `{other}`")),
        }
    }

    fn label(&mut self) -> Result<Label> {
        let (at, token) = self.word();
        let Some(slash) = token.find('/') else {
            return err(at, format!("expected `relation/nuclearity`, found `{token}`"));
        };
        let relation = &token[..slash];
        let nuc_at = at + slash + 1;
        let nuc = &token[slash + 1..];
        if !is_relation_name(relation) {
            return err(at, format!("malformed relation name `{relation}`"));
        }
        let nuclearity = match nuc {
            "N" => Nuclearity::N,
            "S" => Nuclearity::S,
            other => return err(nuc_at, format!("bad nuclearity `{other}`")),
        };
        Ok(Label::new(relation, nuclearity))
    }

    fn quoted(&mut self) -> Result<String> {
        self.skip_ws();
        let open = self.pos;
        if self.peek() != Some('"') {
            return err(open, "expected quoted EDU text");
        }
        self.pos += 1;
        let mut out = String::new();
        let mut chars = self.src[self.pos..].char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 1;
                    if out.is_empty() {
                        return err(open, "empty EDU string");
                    }
                    return Ok(out);
                }
                '\\' => match chars.next() {
                    Some((_, e @ ('"' | '\\'))) => out.push(e),
                    Some((j, e)) => {
                        return err(self.pos + j, format!("unknown escape `\\{e}`"));
                    }
                    None => break,
                },
                _ => out.push(c),
            }
        }
        err(open, "unterminated string")
    }
}

/// `[A-Za-z][A-Za-z0-9-]*`
pub fn is_relation_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '-')
}

pub fn parse_tree(text: &str) -> Result<RstTree> {
    let mut p = Parser { src: text, pos: 0 };
    let tree = p.tree()?;
    p.skip_ws();
    if p.pos != text.len() {
        return err(p.pos, "trailing input after tree");
    }
    Ok(tree)
}

fn escape_into(text: &str, out: &mut String) {
    out.push('"');
    for c in text.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
}

fn write_tree(t: &RstTree, out: &mut String) {
    match t {
        RstTree::Leaf(text) => {
            out.push_str("(edu ");
            escape_into(text, out);
            out.push(')');
        }
        RstTree::Internal(n) => {
            out.push_str("(rel ");
            for l in [&n.left_label, &n.right_label] {
                out.push_str(&l.relation);
                out.push('/');
                out.push_str(l.nuclearity.as_str());
                out.push(' ');
            }
            write_tree(&n.left, out);
            out.push(' ');
            write_tree(&n.right, out);
            out.push(')');
        }
    }
}

pub fn serialize_tree(t: &RstTree) -> String {
    let mut out = String::new();
    write_tree(t, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_EDU: &str = r#"(rel Elaboration/N Evidence/S (edu "A claim.") (edu "Its proof."))"#;

    fn offset(r: Result<RstTree>) -> usize {
        match r {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn reads_two_edu_example() {
        let t = parse_tree(TWO_EDU).unwrap();
        let RstTree::Internal(n) = &t else {
            panic!("not internal")
        };
        assert_eq!(n.left_label, Label::new("Elaboration", Nuclearity::N));
        assert_eq!(n.right_label, Label::new("Evidence", Nuclearity::S));
        assert_eq!(n.left, RstTree::leaf("A claim."));
        assert_eq!(n.right, RstTree::leaf("Its proof."));
        assert_eq!(serialize_tree(&t), TWO_EDU);
    }

    #[test]
    fn whitespace_is_insignificant() {
        let loose = "  (rel\tElaboration/N\n Evidence/S(edu \"A claim.\")\n(edu \"Its proof.\") )  ";
        assert_eq!(parse_tree(loose).unwrap(), parse_tree(TWO_EDU).unwrap());
    }

    #[test]
    fn single_leaf_parses() {
        assert_eq!(
            parse_tree(r#"(edu "only one unit")"#).unwrap(),
            RstTree::leaf("only one unit")
        );
    }

    #[test]
    fn escaped_quote_round_trips() {
        let t = RstTree::leaf(r#"he said "hi" \ bye"#);
        let s = serialize_tree(&t);
        assert_eq!(s, r#"(edu "he said \"hi\" \\ bye")"#);
        assert_eq!(parse_tree(&s).unwrap(), t);
    }

    #[test]
    fn bad_nuclearity_points_at_token() {
        let src = r#"(rel Foo/X Bar/S (edu "a") (edu "b"))"#;
        assert_eq!(offset(parse_tree(src)), src.find('X').unwrap());
    }

    #[test]
    fn grammar_violations() {
        assert_eq!(offset(parse_tree(r#"(edu "")"#)), 5);
        assert_eq!(offset(parse_tree(r#"(node "x")"#)), 1);
        assert_eq!(offset(parse_tree(r#"(edu "a""#)), 8);
        assert_eq!(offset(parse_tree(r#"(edu "a"))"#)), 9);
        assert_eq!(offset(parse_tree(r#"(rel 9x/N B/S (edu "a") (edu "b"))"#)), 5);
        assert_eq!(offset(parse_tree(r#"(rel A B/S (edu "a") (edu "b"))"#)), 5);
        assert_eq!(offset(parse_tree(r#"(edu "a\q")"#)), 8);
        assert_eq!(offset(parse_tree(r#"(edu "abc)"#)), 5);
        assert_eq!(offset(parse_tree("")), 0);
    }

    #[test]
    fn relation_name_grammar() {
        assert!(is_relation_name("Manner-Means"));
        assert!(is_relation_name("a1"));
        assert!(!is_relation_name(""));
        assert!(!is_relation_name("-x"));
        assert!(!is_relation_name("Same_Unit"));
    }
}
