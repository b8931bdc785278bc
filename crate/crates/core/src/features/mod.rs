//! Document representations built from NSW counts: the 85-value frequency
//! vector, the 25-value dispersion statistics, and their 110-value union.

mod matrix;
mod stats;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lexer::NswOccurrence;
use crate::taxonomy::{Superclass, Taxonomy, GROUP_COUNT, LEAF_COUNT};

pub use matrix::{build_matrix, featurize_corpus, parse_matrix, read_matrix, write_matrix, FeatureMatrix};
pub use stats::{quartile, statistical_vector, Moments};

pub const DERIVED_WIDTH: usize = 10 + GROUP_COUNT;
pub const FREQ_WIDTH: usize = LEAF_COUNT + DERIVED_WIDTH;
pub const STAT_WIDTH: usize = 7 + 3 * 6;
pub const UNION_WIDTH: usize = FREQ_WIDTH + STAT_WIDTH;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    Freq,
    Stat,
    Union,
}

impl Representation {
    pub const ALL: [Representation; 3] = [Representation::Freq, Representation::Stat, Representation::Union];

    pub fn width(self) -> usize {
        match self {
            Representation::Freq => FREQ_WIDTH,
            Representation::Stat => STAT_WIDTH,
            Representation::Union => UNION_WIDTH,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Representation::Freq => "freq",
            Representation::Stat => "stat",
            Representation::Union => "union",
        }
    }

    pub fn from_width(width: usize) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.width() == width)
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "freq" | "1" => Ok(Representation::Freq),
            "stat" | "2" => Ok(Representation::Stat),
            "union" | "3" => Ok(Representation::Union),
            _ => Err(Error::Config(format!("unknown representation `{s}` (expected freq, stat or union)"))),
        }
    }
}

/// Leaf counts in slots 0..56 followed by the derived block.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector {
    pub doc_id: String,
    pub values: Vec<f64>,
}

impl FrequencyVector {
    pub fn leaf_counts(&self) -> &[f64] {
        &self.values[..LEAF_COUNT]
    }

    pub fn derived(&self) -> &[f64] {
        &self.values[LEAF_COUNT..]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatFeatures {
    pub doc_id: String,
    pub values: Vec<f64>,
}

/// Counts occurrences per leaf and appends the derived block.
pub fn frequency_vector(
    doc_id: &str,
    occurrences: &[NswOccurrence],
    token_count: usize,
    taxonomy: &Taxonomy,
) -> FrequencyVector {
    let mut counts = [0u64; LEAF_COUNT];
    for o in occurrences {
        debug_assert_eq!(o.doc_id, doc_id);
        counts[o.nsw_type.index()] += 1;
    }
    let mut values: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    values.extend(derived_features(&counts, token_count, taxonomy));
    FrequencyVector {
        doc_id: doc_id.to_string(),
        values,
    }
}

/// The 29 derived values, in order: NUMBER, STRING and COMBINED totals,
/// total NSWs, total words, distinct types present, empty types,
/// present/56, present/empty, NSWs per word, then one total per
/// taxonomy group in manifest order.
pub fn derived_features(counts: &[u64; LEAF_COUNT], token_count: usize, taxonomy: &Taxonomy) -> [f64; DERIVED_WIDTH] {
    let total_of = |sc: Superclass| counts[sc.slots()].iter().sum::<u64>();
    let number = total_of(Superclass::Number);
    let string = total_of(Superclass::String);
    let combined = total_of(Superclass::Combined);
    let total = number + string + combined;
    let present = counts.iter().filter(|&&c| c > 0).count();
    let empty = LEAF_COUNT - present;

    let mut out = [0.0; DERIVED_WIDTH];
    out[0] = number as f64;
    out[1] = string as f64;
    out[2] = combined as f64;
    out[3] = total as f64;
    out[4] = token_count as f64;
    out[5] = present as f64;
    out[6] = empty as f64;
    out[7] = present as f64 / LEAF_COUNT as f64;
    out[8] = if empty == 0 { 0.0 } else { present as f64 / empty as f64 };
    out[9] = if token_count == 0 {
        0.0
    } else {
        total as f64 / token_count as f64
    };
    for g in 0..GROUP_COUNT {
        out[10 + g] = taxonomy.group_members(g).map(|id| counts[id.index()]).sum::<u64>() as f64;
    }
    out
}

/// Frequency block followed by the statistics block.
pub fn union_vector(freq: &FrequencyVector, stat: &StatFeatures) -> Result<Vec<f64>> {
    if freq.doc_id != stat.doc_id {
        return Err(Error::Feature(format!(
            "cannot join frequency vector of `{}` with statistics of `{}`",
            freq.doc_id, stat.doc_id
        )));
    }
    let mut v = Vec::with_capacity(UNION_WIDTH);
    v.extend_from_slice(&freq.values);
    v.extend_from_slice(&stat.values);
    Ok(v)
}

/// Row values of `representation` for one document.
pub fn represent(freq: &FrequencyVector, representation: Representation) -> Vec<f64> {
    match representation {
        Representation::Freq => freq.values.clone(),
        Representation::Stat => statistical_vector(freq).values,
        Representation::Union => union_vector(freq, &statistical_vector(freq)).expect("same document"),
    }
}
