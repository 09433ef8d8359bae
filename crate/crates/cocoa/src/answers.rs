//! Answer files: a JSON object `{"sample_id": "A"}` or CSV `sample_id,letter`.

use std::collections::BTreeMap;

use cocoa_core::eval::{AnswerFile, EvalError};

#[derive(Debug, thiserror::Error)]
pub enum AnswerError {
    #[error("answer file is not valid JSON: {0}")]
    Json(String),
    #[error("answer file CSV, record {record}: {reason}")]
    Csv { record: usize, reason: String },
    #[error(transparent)]
    Invalid(#[from] EvalError),
}

/// JSON when the first non-blank character is `{`, CSV otherwise. A CSV
/// header row `sample_id,...` is skipped.
pub fn parse_answers(text: &str) -> Result<AnswerFile, AnswerError> {
    if text.trim_start().starts_with('{') {
        let map: BTreeMap<String, String> =
            serde_json::from_str(text).map_err(|e| AnswerError::Json(e.to_string()))?;
        return Ok(AnswerFile::from_pairs(map)?);
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut pairs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| AnswerError::Csv {
            record: i + 1,
            reason: e.to_string(),
        })?;
        if i == 0 && record.get(0) == Some("sample_id") {
            continue;
        }
        match (record.get(0), record.get(1), record.len()) {
            (Some(id), Some(letter), 2) => pairs.push((id.to_string(), letter.to_string())),
            _ => {
                return Err(AnswerError::Csv {
                    record: i + 1,
                    reason: format!("expected 2 fields, got {}", record.len()),
                })
            }
        }
    }
    Ok(AnswerFile::from_pairs(pairs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_csv_agree() {
        let a = parse_answers(r#"{"s2x2-0-0": "A", "s2x2-0-1": "c"}"#).unwrap();
        let b = parse_answers("sample_id,answer\ns2x2-0-0,A\ns2x2-0-1, C\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get("s2x2-0-1"), Some(2));
    }

    #[test]
    fn rejects_bad_letters_and_shapes() {
        assert!(matches!(
            parse_answers(r#"{"x": "Z"}"#),
            Err(AnswerError::Invalid(EvalError::InvalidLetter { .. }))
        ));
        assert!(matches!(
            parse_answers("x,A,extra\n"),
            Err(AnswerError::Csv { record: 1, .. })
        ));
        assert!(matches!(parse_answers("{"), Err(AnswerError::Json(_))));
    }
}
