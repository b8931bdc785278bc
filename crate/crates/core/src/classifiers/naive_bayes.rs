use super::TrainingSet;

/// Gaussian likelihood per class and feature.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayes {
    /// Natural-log class priors; `-inf` for classes with no rows.
    pub log_priors: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    /// Smoothed population variances, all strictly positive.
    pub variances: Vec<Vec<f64>>,
}

/// Smoothing added to every variance: this fraction of the largest
/// feature variance in the whole set.
pub const VAR_SMOOTHING: f64 = 1e-9;

fn mean_var(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var)
}

impl NaiveBayes {
    pub fn fit(set: &TrainingSet) -> Self {
        let width = set.width;
        let max_var = (0..width)
            .map(|j| mean_var(set.rows.iter().map(move |r| r[j])).1)
            .fold(0.0, f64::max);
        // With every feature constant there is nothing to scale by.
        let eps = if max_var > 0.0 { VAR_SMOOTHING * max_var } else { VAR_SMOOTHING };

        let n = set.len() as f64;
        let classes = set.class_names.len();
        let mut log_priors = Vec::with_capacity(classes);
        let mut means = Vec::with_capacity(classes);
        let mut variances = Vec::with_capacity(classes);
        for c in 0..classes {
            let members: Vec<&Vec<f64>> = set
                .rows
                .iter()
                .zip(&set.targets)
                .filter(|(_, &t)| t == c)
                .map(|(r, _)| r)
                .collect();
            if members.is_empty() {
                log_priors.push(f64::NEG_INFINITY);
                means.push(vec![0.0; width]);
                variances.push(vec![1.0; width]);
                continue;
            }
            log_priors.push((members.len() as f64 / n).ln());
            let (m, v): (Vec<f64>, Vec<f64>) = (0..width)
                .map(|j| {
                    let (mean, var) = mean_var(members.iter().map(move |r| r[j]));
                    (mean, var + eps)
                })
                .unzip();
            means.push(m);
            variances.push(v);
        }
        NaiveBayes {
            log_priors,
            means,
            variances,
        }
    }

    pub fn log_posterior(&self, class: usize, x: &[f64]) -> f64 {
        let mut lp = self.log_priors[class];
        if lp == f64::NEG_INFINITY {
            return lp;
        }
        for ((&xi, &m), &v) in x.iter().zip(&self.means[class]).zip(&self.variances[class]) {
            let d = xi - m;
            lp -= 0.5 * ((2.0 * std::f64::consts::PI * v).ln() + d * d / v);
        }
        lp
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let mut best = 0;
        let mut best_lp = f64::NEG_INFINITY;
        for c in 0..self.log_priors.len() {
            let lp = self.log_posterior(c, x);
            if lp > best_lp {
                best = c;
                best_lp = lp;
            }
        }
        best
    }
}
