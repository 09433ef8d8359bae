use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;

use super::EvalError;
use crate::query::{letter_index, Sample};

/// Chosen letter per sample id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnswerFile {
    answers: BTreeMap<String, usize>,
}

impl AnswerFile {
    /// Letters are accepted case-insensitively with surrounding whitespace.
    pub fn from_pairs<I, S, L>(pairs: I) -> Result<Self, EvalError>
    where
        I: IntoIterator<Item = (S, L)>,
        S: Into<String>,
        L: AsRef<str>,
    {
        let mut answers = BTreeMap::new();
        for (id, letter) in pairs {
            let id = id.into();
            let raw = letter.as_ref().trim();
            let mut chars = raw.chars();
            let index = match (chars.next(), chars.next()) {
                (Some(c), None) => letter_index(c.to_ascii_uppercase()),
                _ => None,
            };
            let Some(index) = index else {
                return Err(EvalError::InvalidLetter {
                    sample_id: id,
                    letter: raw.into(),
                });
            };
            if answers.insert(id.clone(), index).is_some() {
                return Err(EvalError::DuplicateAnswer(id));
            }
        }
        Ok(AnswerFile { answers })
    }

    pub fn get(&self, sample_id: &str) -> Option<usize> {
        self.answers.get(sample_id).copied()
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub correct: usize,
    pub scored: usize,
}

impl Tally {
    /// Percent correct, `None` when nothing was scored.
    pub fn accuracy(&self) -> Option<f64> {
        (self.scored > 0).then(|| 100.0 * self.correct as f64 / self.scored as f64)
    }

    fn add(&mut self, correct: bool) {
        self.scored += 1;
        self.correct += usize::from(correct);
    }
}

/// Accuracy over answered samples. Total is sample-weighted, not a mean of
/// the groups.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScoreReport {
    pub total: Tally,
    pub regular: Tally,
    pub atypical: Tally,
    pub per_config: BTreeMap<(usize, usize), Tally>,
    pub n_scored: usize,
    pub n_missing: usize,
}

impl ScoreReport {
    pub fn accuracy_total(&self) -> Option<f64> {
        self.total.accuracy()
    }

    pub fn accuracy_regular(&self) -> Option<f64> {
        self.regular.accuracy()
    }

    pub fn accuracy_atypical(&self) -> Option<f64> {
        self.atypical.accuracy()
    }
}

pub fn score(samples: &[Sample], answers: &AnswerFile) -> Result<ScoreReport, EvalError> {
    let known: BTreeSet<&str> = samples.iter().map(|s| s.sample_id.as_str()).collect();
    if let Some(unknown) = answers
        .answers
        .keys()
        .find(|id| !known.contains(id.as_str()))
    {
        return Err(EvalError::UnknownSampleId(unknown.clone()));
    }
    let mut report = ScoreReport::default();
    for s in samples {
        let Some(choice) = answers.get(&s.sample_id) else {
            report.n_missing += 1;
            continue;
        };
        let correct = choice == s.gold;
        report.n_scored += 1;
        report.total.add(correct);
        if s.query.atypical {
            report.atypical.add(correct);
        } else {
            report.regular.add(correct);
        }
        report
            .per_config
            .entry(s.query.config_key())
            .or_default()
            .add(correct);
    }
    Ok(report)
}
