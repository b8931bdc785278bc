//! Cross-validation and the end-to-end experiment runner.

mod experiment;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classifiers::{train, ClassifierKind, Hyperparameters, TrainingSet};
use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, Representation};

pub use experiment::{run_experiment, run_experiment_on, ExperimentConfig, PerClassTable, ReportBundle};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    pub k: usize,
    pub seed: u64,
    pub stratified: bool,
    /// Fold index of each document.
    pub assignment: Vec<usize>,
}

impl FoldAssignment {
    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }

    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] != fold).collect()
    }
}

/// Assigns each document to one of `k` folds.
///
/// Stratified: each class (in sorted name order) is shuffled and dealt
/// round-robin, continuing the deal where the previous class stopped, so
/// both per-class and total fold sizes differ by at most one. Otherwise
/// all documents are shuffled together and dealt the same way.
pub fn kfold_split(labels: &[impl AsRef<str>], k: usize, seed: u64, stratified: bool) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::Folds(format!("k must be at least 2, got {k}")));
    }
    if labels.len() < k {
        return Err(Error::Folds(format!("{} documents cannot fill {k} folds", labels.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups: Vec<Vec<usize>> = if stratified {
        let mut classes: Vec<&str> = labels.iter().map(AsRef::as_ref).collect();
        classes.sort_unstable();
        classes.dedup();
        let mut groups = Vec::with_capacity(classes.len());
        for c in classes {
            let members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i].as_ref() == c).collect();
            if members.len() < k {
                return Err(Error::Folds(format!(
                    "class `{c}` has {} documents, fewer than {k} folds",
                    members.len()
                )));
            }
            groups.push(members);
        }
        groups
    } else {
        vec![(0..labels.len()).collect()]
    };
    let mut assignment = vec![0; labels.len()];
    let mut dealt = 0;
    for mut members in groups {
        members.shuffle(&mut rng);
        for i in members {
            assignment[i] = dealt % k;
            dealt += 1;
        }
    }
    Ok(FoldAssignment {
        k,
        seed,
        stratified,
        assignment,
    })
}

/// Correct over total.
pub fn accuracy(correct: usize, total: usize) -> Result<f64> {
    if total == 0 {
        return Err(Error::Accuracy("no test cases".into()));
    }
    if correct > total {
        return Err(Error::Accuracy(format!("{correct} correct out of {total}")));
    }
    Ok(correct as f64 / total as f64)
}

/// A value as a percentage with two decimals.
pub fn percent(fraction: f64) -> String {
    format!("{:.2}", fraction * 100.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub kind: ClassifierKind,
    pub representation: Representation,
    pub correct: usize,
    pub total: usize,
    pub accuracy: f64,
    pub class_names: Vec<String>,
    /// Recall per class, in `class_names` order.
    pub per_class_accuracy: Vec<f64>,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    pub folds: usize,
    pub stratified: bool,
    pub seed: u64,
    pub hyperparameters: Hyperparameters,
}

/// Trains on all folds but one and predicts the held-out fold, for every
/// fold; the report pools every out-of-fold prediction.
pub fn cross_validate(
    matrix: &FeatureMatrix,
    kind: ClassifierKind,
    hyper: &Hyperparameters,
    folds: &FoldAssignment,
) -> Result<EvaluationReport> {
    if folds.assignment.len() != matrix.len() {
        return Err(Error::Folds(format!(
            "{} fold entries for {} rows",
            folds.assignment.len(),
            matrix.len()
        )));
    }
    let set = TrainingSet::from_matrix(matrix)?;
    let per_fold: Vec<Vec<(usize, usize)>> = (0..folds.k)
        .into_par_iter()
        .map(|fold| {
            let train_set = set.subset(&folds.train_indices(fold));
            let model = train(kind, &train_set, hyper).map_err(|e| Error::InFold {
                fold,
                source: Box::new(e),
            })?;
            folds
                .test_indices(fold)
                .into_iter()
                .map(|i| Ok((i, model.predict_index(&set.rows[i])?)))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::InFold {
                    fold,
                    source: Box::new(e),
                })
        })
        .collect::<Result<_>>()?;

    let n = set.class_names.len();
    let mut confusion = vec![vec![0usize; n]; n];
    for (i, predicted) in per_fold.into_iter().flatten() {
        confusion[set.targets[i]][predicted] += 1;
    }
    let total: usize = confusion.iter().flatten().sum();
    let correct: usize = (0..n).map(|c| confusion[c][c]).sum();
    let per_class_accuracy = confusion
        .iter()
        .enumerate()
        .map(|(c, row)| {
            let s: usize = row.iter().sum();
            if s == 0 {
                0.0
            } else {
                row[c] as f64 / s as f64
            }
        })
        .collect();
    Ok(EvaluationReport {
        kind,
        representation: matrix.representation,
        correct,
        total,
        accuracy: accuracy(correct, total)?,
        class_names: set.class_names,
        per_class_accuracy,
        confusion,
        folds: folds.k,
        stratified: folds.stratified,
        seed: hyper.rng_seed,
        hyperparameters: hyper.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn balanced(classes: usize, per: usize) -> Vec<String> {
        (0..classes * per).map(|i| format!("c{}", i / per)).collect()
    }

    #[test]
    fn equal_folds() {
        let labels = balanced(6, 65);
        let f = kfold_split(&labels, 5, 1, false).unwrap();
        assert_eq!(f.fold_sizes(), vec![78; 5]);
        let f = kfold_split(&labels, 5, 1, true).unwrap();
        for fold in 0..5 {
            for c in 0..6 {
                let n = f.test_indices(fold).iter().filter(|&&i| i / 65 == c).count();
                assert_eq!(n, 13);
            }
        }
    }

    #[test]
    fn uneven_folds_differ_by_one() {
        let labels: Vec<String> = (0..23).map(|i| format!("c{}", i % 3)).collect();
        for stratified in [false, true] {
            let s = kfold_split(&labels, 4, 9, stratified).unwrap().fold_sizes();
            assert!(s.iter().max().unwrap() - s.iter().min().unwrap() <= 1, "{s:?}");
        }
    }

    #[test]
    fn small_class_is_named() {
        let mut labels = vec!["big"; 7];
        labels.extend(["tiny"; 3]);
        let e = kfold_split(&labels, 5, 0, true).unwrap_err().to_string();
        assert!(e.contains("`tiny`"), "{e}");
        assert!(kfold_split(&labels, 1, 0, false).is_err());
    }

    #[test]
    fn accuracy_is_exact_ratio() {
        assert_eq!(percent(accuracy(263, 390).unwrap()), "67.44");
        assert_eq!(accuracy(390, 390).unwrap(), 1.0);
        assert!(accuracy(0, 0).is_err());
        assert!(accuracy(5, 4).is_err());
    }
}
