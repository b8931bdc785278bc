use super::argmax_first;

/// Per-feature min-max bounds from the training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaling {
    pub mins: Vec<f64>,
    /// `max - min`; features with zero range map to 0.
    pub ranges: Vec<f64>,
}

impl Scaling {
    pub fn fit(rows: &[Vec<f64>], width: usize) -> Self {
        let mut mins = vec![f64::INFINITY; width];
        let mut maxs = vec![f64::NEG_INFINITY; width];
        for r in rows {
            for (j, &v) in r.iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        let ranges = mins.iter().zip(&maxs).map(|(lo, hi)| hi - lo).collect();
        Scaling { mins, ranges }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mins.iter().zip(&self.ranges))
            .map(|(&v, (&lo, &range))| if range > 0.0 { (v - lo) / range } else { 0.0 })
            .collect()
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Majority label among the `k` nearest rows by Euclidean distance.
/// Equal distances keep training order; tied votes go to the lower class.
pub(crate) fn predict(
    k: usize,
    scaling: Option<&Scaling>,
    rows: &[Vec<f64>],
    targets: &[usize],
    classes: usize,
    x: &[f64],
) -> usize {
    let scaled;
    let q = match scaling {
        Some(s) => {
            scaled = s.apply(x);
            &scaled[..]
        }
        None => x,
    };
    let mut dist: Vec<(f64, usize)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (squared_distance(r, q), i))
        .collect();
    dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut votes = vec![0usize; classes];
    for &(_, i) in dist.iter().take(k) {
        votes[targets[i]] += 1;
    }
    argmax_first(&votes)
}
