//! Dispersion statistics over the leaf-count population. Population
//! moments; quartiles by inclusive linear interpolation.

use super::{FrequencyVector, StatFeatures, STAT_WIDTH};
use crate::taxonomy::{Superclass, LEAF_COUNT};

/// Central-moment summary of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Population variance.
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

impl Moments {
    pub fn of(xs: &[f64]) -> Self {
        assert!(!xs.is_empty(), "moments of an empty slice");
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for &x in xs {
            let d = x - mean;
            let d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
            min = min.min(x);
            max = max.max(x);
        }
        Moments {
            mean,
            min,
            max,
            m2: m2 / n,
            m3: m3 / n,
            m4: m4 / n,
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.m2.sqrt()
    }

    /// Standard deviation over mean; 0 when the mean is 0.
    pub fn coefficient_of_variation(&self) -> f64 {
        if self.mean == 0.0 {
            0.0
        } else {
            self.std_dev() / self.mean
        }
    }

    /// Third standardized moment; 0 for a constant sample.
    pub fn skewness(&self) -> f64 {
        if self.m2 == 0.0 {
            0.0
        } else {
            self.m3 / self.m2.powf(1.5)
        }
    }

    /// Fourth standardized moment (not excess); 0 for a constant sample.
    pub fn kurtosis(&self) -> f64 {
        if self.m2 == 0.0 {
            0.0
        } else {
            self.m4 / (self.m2 * self.m2)
        }
    }
}

/// Quantile `p` of ascending-sorted `sorted`, interpolating linearly
/// between closest ranks at position `(n - 1) * p`.
pub fn quartile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty slice");
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    match sorted.get(lo + 1) {
        Some(&next) if frac > 0.0 => sorted[lo] + frac * (next - sorted[lo]),
        _ => sorted[lo],
    }
}

fn slice_measures(xs: &[f64], out: &mut Vec<f64>) {
    let m = Moments::of(xs);
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quartile(&sorted, 0.25);
    let q3 = quartile(&sorted, 0.75);
    let cqd = if q3 + q1 > 0.0 { (q3 - q1) / (q3 + q1) } else { 0.0 };
    out.extend([m.mean, q3, q1, q3 - q1, cqd, m.coefficient_of_variation()]);
}

/// Whole-population measures over the 56 leaf counts (mean, range,
/// standard deviation, variance, coefficient of variation, kurtosis,
/// skewness), then mean, q3, q1, interquartile range, coefficient of
/// quartile deviation and coefficient of variation for the STRING, NUMBER
/// and STRING+NUMBER slices.
pub fn statistical_vector(freq: &FrequencyVector) -> StatFeatures {
    let leaves = &freq.values[..LEAF_COUNT];
    let m = Moments::of(leaves);
    let mut values = Vec::with_capacity(STAT_WIDTH);
    values.extend([
        m.mean,
        m.max - m.min,
        m.std_dev(),
        m.m2,
        m.coefficient_of_variation(),
        m.kurtosis(),
        m.skewness(),
    ]);
    let string = Superclass::String.slots();
    let number = Superclass::Number.slots();
    slice_measures(&leaves[string.clone()], &mut values);
    slice_measures(&leaves[number.clone()], &mut values);
    slice_measures(&leaves[string.start..number.end], &mut values);
    debug_assert_eq!(values.len(), STAT_WIDTH);
    StatFeatures {
        doc_id: freq.doc_id.clone(),
        values,
    }
}
