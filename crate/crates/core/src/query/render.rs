use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::QueryError;
use crate::constraint::{operand_text, render, Primitive};
use crate::logic::PosExpression;

/// Optional rewrite step applied to template text. Returning `None` keeps
/// the template rendering.
pub trait Paraphraser {
    fn paraphrase(&self, text: &str) -> Option<String>;
}

/// Template rendering: single-literal terms become one sentence, wider
/// terms become an "Either ... or ..." sentence, terms are space-joined.
pub fn render_requirement(
    pos: &PosExpression,
    bindings: &BTreeMap<usize, Primitive>,
) -> Result<String, QueryError> {
    let mut sentences = Vec::with_capacity(pos.terms().len());
    for term in pos.terms() {
        let mut parts = Vec::with_capacity(term.literals().len());
        for lit in term.literals() {
            let p = bindings
                .get(&lit.occurrence_id)
                .ok_or(QueryError::UnboundOccurrence(lit.occurrence_id))?;
            parts.push(render(p)?);
        }
        if parts.len() == 1 {
            sentences.push(parts.pop().unwrap_or_default());
        } else {
            let inline: Vec<String> = parts
                .iter()
                .map(|s| mid_sentence(s.strip_suffix('.').unwrap_or(s)))
                .collect();
            sentences.push(format!("Either {}.", inline.join(" or ")));
        }
    }
    Ok(sentences.join(" "))
}

/// Lowercases sentences that open with a quantifier rather than a slot label.
fn mid_sentence(sentence: &str) -> String {
    match sentence
        .strip_prefix("Every ")
        .map(|rest| ("every ", rest))
        .or_else(|| {
            sentence
                .strip_prefix("Not every ")
                .map(|rest| ("not every ", rest))
        }) {
        Some((head, rest)) => format!("{head}{rest}"),
        None => String::from(sentence),
    }
}

fn is_word_char(c: Option<char>) -> bool {
    c.is_some_and(char::is_alphanumeric)
}

/// Occurrences of `needle` in `text` not embedded in a longer word or number.
pub fn mention_count(text: &str, needle: &str) -> usize {
    if needle.is_empty() {
        return 0;
    }
    text.match_indices(needle)
        .filter(|(at, _)| {
            let before = text[..*at].chars().next_back();
            let after = text[at + needle.len()..].chars().next();
            let starts_word = needle.chars().next().is_some_and(char::is_alphanumeric);
            let ends_word = needle
                .chars()
                .next_back()
                .is_some_and(char::is_alphanumeric);
            !(starts_word && is_word_char(before)) && !(ends_word && is_word_char(after))
        })
        .count()
}

/// Every bound operand must be mentioned. With `exact`, each operand
/// string must appear exactly as often as the bindings account for, so
/// an operand that is a substring of another one is not double counted.
pub fn check_operand_mentions(
    text: &str,
    bindings: &BTreeMap<usize, Primitive>,
    exact: bool,
) -> Result<(), String> {
    let operands: Vec<String> = bindings.values().map(operand_text).collect();
    for needle in &operands {
        let found = mention_count(text, needle);
        if found == 0 {
            return Err(format!("operand `{needle}` missing"));
        }
        if exact {
            let expected: usize = operands.iter().map(|o| mention_count(o, needle)).sum();
            if found != expected {
                return Err(format!(
                    "operand `{needle}` mentioned {found} times, expected {expected}"
                ));
            }
        }
    }
    Ok(())
}

/// Paraphrased text if the hook returns one that keeps every operand,
/// otherwise the template text.
pub fn apply_paraphrase(
    hook: Option<&dyn Paraphraser>,
    template_text: &str,
    bindings: &BTreeMap<usize, Primitive>,
) -> String {
    if let Some(candidate) = hook.and_then(|h| h.paraphrase(template_text)) {
        match check_operand_mentions(&candidate, bindings, false) {
            Ok(()) if !candidate.trim().is_empty() => return candidate,
            Ok(()) => log::warn!("empty paraphrase, keeping template text"),
            Err(reason) => log::warn!("paraphrase rejected: {reason}"),
        }
    }
    String::from(template_text)
}
