use std::fmt::Write as _;

use super::LabeledDocument;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatsRow {
    pub tokens: u64,
    pub nsws: u64,
    pub nsw_percent: f64,
    /// Set when `tokens` is zero and the percentage was forced to 0.
    pub zero_tokens: bool,
}

impl StatsRow {
    pub fn new(tokens: u64, nsws: u64) -> Self {
        if tokens == 0 {
            StatsRow {
                tokens,
                nsws,
                nsw_percent: 0.0,
                zero_tokens: true,
            }
        } else {
            StatsRow {
                tokens,
                nsws,
                nsw_percent: 100.0 * nsws as f64 / tokens as f64,
                zero_tokens: false,
            }
        }
    }
}

/// Per-category and overall token / NSW counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub per_class: Vec<(String, StatsRow)>,
    pub overall: StatsRow,
}

impl CorpusStats {
    /// Aggregates `(category, tokens, nsws)` records; categories keep their
    /// first-seen order.
    pub fn from_counts<I, S>(records: I) -> Self
    where
        I: IntoIterator<Item = (S, u64, u64)>,
        S: AsRef<str>,
    {
        let mut sums: Vec<(String, u64, u64)> = Vec::new();
        for (label, tokens, nsws) in records {
            let label = label.as_ref();
            match sums.iter_mut().find(|(l, _, _)| l == label) {
                Some(row) => {
                    row.1 += tokens;
                    row.2 += nsws;
                }
                None => sums.push((label.to_string(), tokens, nsws)),
            }
        }
        let total_tokens = sums.iter().map(|r| r.1).sum();
        let total_nsws = sums.iter().map(|r| r.2).sum();
        CorpusStats {
            per_class: sums
                .into_iter()
                .map(|(l, t, n)| (l, StatsRow::new(t, n)))
                .collect(),
            overall: StatsRow::new(total_tokens, total_nsws),
        }
    }

    pub fn has_warnings(&self) -> bool {
        self.overall.zero_tokens || self.per_class.iter().any(|(_, r)| r.zero_tokens)
    }

    /// Tab-separated table with a header and a closing OVERALL row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("category\ttokens\tnsws\tnsw_percent\n");
        for (label, row) in self.per_class.iter().map(|(l, r)| (l.as_str(), r)).chain([("OVERALL", &self.overall)]) {
            let _ = writeln!(out, "{label}\t{}\t{}\t{:.2}", row.tokens, row.nsws, row.nsw_percent);
        }
        out
    }
}

/// `nsw_counts[i]` is the number of NSW occurrences in `docs[i]`.
pub fn corpus_stats(docs: &[LabeledDocument], nsw_counts: &[usize]) -> Result<CorpusStats> {
    if docs.len() != nsw_counts.len() {
        return Err(Error::Corpus(format!(
            "{} documents but {} NSW counts",
            docs.len(),
            nsw_counts.len()
        )));
    }
    Ok(CorpusStats::from_counts(
        docs.iter()
            .zip(nsw_counts)
            .map(|(d, &n)| (d.label.as_str(), d.token_count as u64, n as u64)),
    ))
}
