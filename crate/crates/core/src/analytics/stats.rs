use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;

use super::AnalyticsError;
use crate::flight::render_option;
use crate::query::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CellStats {
    pub samples: usize,
    pub unique_queries: usize,
    /// Mean whitespace-token count over unique queries.
    pub avg_query_length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetStats {
    /// Keyed by `(slots, minterms)`.
    pub cells: BTreeMap<(usize, usize), CellStats>,
    pub total: CellStats,
    /// Mean tokens per sample over the query plus its five rendered options.
    pub avg_context_length: f64,
    /// Distinct lowercased tokens over query texts and rendered options.
    pub vocab_size: usize,
}

pub fn token_count(text: &str) -> usize {
    text.split_whitespace().count()
}

#[derive(Default)]
struct Acc {
    samples: usize,
    queries: BTreeMap<String, usize>,
}

impl Acc {
    fn finish(&self) -> CellStats {
        let n = self.queries.len();
        let tokens: usize = self.queries.values().sum();
        CellStats {
            samples: self.samples,
            unique_queries: n,
            avg_query_length: if n == 0 {
                0.0
            } else {
                tokens as f64 / n as f64
            },
        }
    }
}

pub fn dataset_stats(samples: &[Sample]) -> Result<DatasetStats, AnalyticsError> {
    if samples.is_empty() {
        return Err(AnalyticsError::EmptyDataset);
    }
    let mut cells: BTreeMap<(usize, usize), Acc> = BTreeMap::new();
    let mut total = Acc::default();
    let mut vocab: BTreeSet<String> = BTreeSet::new();
    let mut context_tokens = 0usize;
    for s in samples {
        let q = &s.query;
        let query_tokens = token_count(q.text());
        for acc in [cells.entry(q.config_key()).or_default(), &mut total] {
            acc.samples += 1;
            acc.queries.insert(s.query_id.clone(), query_tokens);
        }
        context_tokens += query_tokens;
        let mut add_vocab = |text: &str| {
            vocab.extend(text.split_whitespace().map(str::to_lowercase));
        };
        add_vocab(q.text());
        for option in &s.options {
            let rendered = render_option(option);
            context_tokens += token_count(&rendered);
            add_vocab(&rendered);
        }
    }
    Ok(DatasetStats {
        cells: cells.iter().map(|(k, acc)| (*k, acc.finish())).collect(),
        total: total.finish(),
        avg_context_length: context_tokens as f64 / samples.len() as f64,
        vocab_size: vocab.len(),
    })
}

/// Distinct lowercased whitespace tokens across `texts`.
pub fn vocabulary_size<'a>(texts: impl IntoIterator<Item = &'a str>) -> usize {
    texts
        .into_iter()
        .flat_map(str::split_whitespace)
        .map(str::to_lowercase)
        .collect::<BTreeSet<_>>()
        .len()
}
