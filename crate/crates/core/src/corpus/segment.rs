use super::document::Paragraphs;
use crate::error::{Error, Result};

/// Lowercased alphanumeric runs; everything else separates tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn split_paragraphs(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                out.push(current.join("\n"));
                current.clear();
            }
        } else {
            current.push(line);
        }
    }
    if !current.is_empty() {
        out.push(current.join("\n"));
    }
    out
}

/// Splits after `.`, `?` or `!` when followed by whitespace and an
/// uppercase letter, or by the end of the paragraph.
fn split_sentences(paragraph: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in paragraph.char_indices() {
        if !matches!(c, '.' | '?' | '!') {
            continue;
        }
        let end = i + c.len_utf8();
        let rest = &paragraph[end..];
        let trimmed = rest.trim_start();
        let boundary = if trimmed.is_empty() {
            true
        } else {
            trimmed.len() < rest.len() && trimmed.chars().next().is_some_and(char::is_uppercase)
        };
        if boundary {
            out.push(&paragraph[start..end]);
            start = end;
        }
    }
    if start < paragraph.len() {
        out.push(&paragraph[start..]);
    }
    out
}

pub fn segment(text: &str) -> Result<Paragraphs> {
    let paragraphs: Paragraphs = split_paragraphs(text)
        .iter()
        .map(|p| {
            split_sentences(p)
                .into_iter()
                .map(tokenize)
                .filter(|s| !s.is_empty())
                .collect::<Vec<_>>()
        })
        .filter(|p| !p.is_empty())
        .collect();
    if paragraphs.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Ok(paragraphs)
}

/// Renders a segmentation back to text that segments to the same structure:
/// each sentence capitalized and closed with a period, paragraphs separated
/// by a blank line.
pub fn join_segments(paragraphs: &Paragraphs) -> String {
    paragraphs
        .iter()
        .map(|p| {
            p.iter()
                .map(|s| {
                    let mut sentence = s.join(" ");
                    if let Some(first) = sentence.chars().next() {
                        let upper: String = first.to_uppercase().collect();
                        sentence.replace_range(..first.len_utf8(), &upper);
                    }
                    sentence.push('.');
                    sentence
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n\n")
}
