//! Multi-class classifiers over feature rows: Gaussian naive Bayes,
//! k-nearest neighbours, an information-gain decision tree and a random
//! forest of such trees.

mod codec;
mod forest;
mod knn;
mod naive_bayes;
mod tree;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;

pub use codec::{deserialize_model, load_model, save_model, serialize_model, FORMAT_VERSION, MAGIC};
pub use knn::Scaling;
pub use naive_bayes::NaiveBayes;
pub use tree::{Node, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassifierKind {
    NaiveBayes,
    Knn,
    Tree,
    Forest,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 4] = [
        ClassifierKind::NaiveBayes,
        ClassifierKind::Knn,
        ClassifierKind::Tree,
        ClassifierKind::Forest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::NaiveBayes => "nb",
            ClassifierKind::Knn => "knn",
            ClassifierKind::Tree => "tree",
            ClassifierKind::Forest => "forest",
        }
    }

    fn tag(self) -> u8 {
        match self {
            ClassifierKind::NaiveBayes => 0,
            ClassifierKind::Knn => 1,
            ClassifierKind::Tree => 2,
            ClassifierKind::Forest => 3,
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nb" | "naive_bayes" | "naivebayes" | "bayes" => Ok(ClassifierKind::NaiveBayes),
            "knn" => Ok(ClassifierKind::Knn),
            "tree" => Ok(ClassifierKind::Tree),
            "forest" | "rf" | "random_forest" => Ok(ClassifierKind::Forest),
            _ => Err(Error::Config(format!(
                "unknown classifier `{s}` (expected nb, knn, tree or forest)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperparameters {
    pub knn_k: usize,
    /// Min-max scale each feature to [0, 1] using training-set bounds.
    pub knn_scale: bool,
    pub tree_min_leaf: usize,
    pub tree_max_depth: Option<usize>,
    pub forest_trees: usize,
    pub rng_seed: u64,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            knn_k: 5,
            knn_scale: false,
            tree_min_leaf: 2,
            tree_max_depth: None,
            forest_trees: 100,
            rng_seed: 0,
        }
    }
}

impl Hyperparameters {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("knn_k", self.knn_k),
            ("tree_min_leaf", self.tree_min_leaf),
            ("forest_trees", self.forest_trees),
            ("tree_max_depth", self.tree_max_depth.unwrap_or(1)),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::Hyperparameter(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Rows with class indices into an ordered list of class names.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pub class_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub targets: Vec<usize>,
    pub width: usize,
}

impl TrainingSet {
    /// Validates widths, finiteness and labels. `class_names` may list
    /// classes with no rows.
    pub fn new(class_names: Vec<String>, rows: Vec<Vec<f64>>, labels: &[impl AsRef<str>]) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::Feature(format!("{} rows but {} labels", rows.len(), labels.len())));
        }
        let width = rows.first().map_or(0, Vec::len);
        let mut targets = Vec::with_capacity(rows.len());
        for (r, (row, label)) in rows.iter().zip(labels).enumerate() {
            if row.len() != width {
                return Err(Error::WidthMismatch {
                    expected: width,
                    found: row.len(),
                });
            }
            if let Some(column) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row: r, column });
            }
            let label = label.as_ref();
            let t = class_names
                .iter()
                .position(|c| c == label)
                .ok_or_else(|| Error::Feature(format!("row {r}: label `{label}` is not a known class")))?;
            targets.push(t);
        }
        Ok(TrainingSet {
            class_names,
            rows,
            targets,
            width,
        })
    }

    /// Classes are the matrix's distinct labels in sorted order.
    pub fn from_matrix(matrix: &FeatureMatrix) -> Result<Self> {
        let mut classes: Vec<String> = matrix.labels.clone();
        classes.sort();
        classes.dedup();
        Self::new(classes, matrix.rows.clone(), &matrix.labels)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The rows at `indices`, keeping the full class list.
    pub fn subset(&self, indices: &[usize]) -> TrainingSet {
        TrainingSet {
            class_names: self.class_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            targets: indices.iter().map(|&i| self.targets[i]).collect(),
            width: self.width,
        }
    }

    pub(crate) fn class_counts(&self, indices: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.class_names.len()];
        for &i in indices {
            counts[self.targets[i]] += 1;
        }
        counts
    }
}

/// Index of the largest count; ties go to the lower class index.
pub(crate) fn argmax_first(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    NaiveBayes(NaiveBayes),
    Knn {
        k: usize,
        scaling: Option<Scaling>,
        rows: Vec<Vec<f64>>,
        targets: Vec<usize>,
    },
    Tree(Tree),
    Forest(Vec<Tree>),
}

/// A trained classifier. Immutable; prediction is pure.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub class_names: Vec<String>,
    pub feature_width: usize,
    pub params: ModelParams,
}

impl Model {
    pub fn kind(&self) -> ClassifierKind {
        match self.params {
            ModelParams::NaiveBayes(_) => ClassifierKind::NaiveBayes,
            ModelParams::Knn { .. } => ClassifierKind::Knn,
            ModelParams::Tree(_) => ClassifierKind::Tree,
            ModelParams::Forest(_) => ClassifierKind::Forest,
        }
    }

    pub fn predict_index(&self, x: &[f64]) -> Result<usize> {
        if x.len() != self.feature_width {
            return Err(Error::WidthMismatch {
                expected: self.feature_width,
                found: x.len(),
            });
        }
        let n = self.class_names.len();
        Ok(match &self.params {
            ModelParams::NaiveBayes(nb) => nb.predict(x),
            ModelParams::Knn {
                k,
                scaling,
                rows,
                targets,
            } => knn::predict(*k, scaling.as_ref(), rows, targets, n, x),
            ModelParams::Tree(t) => t.predict(x),
            ModelParams::Forest(trees) => forest::predict(trees, n, x),
        })
    }

    pub fn predict(&self, x: &[f64]) -> Result<&str> {
        let i = self.predict_index(x)?;
        Ok(&self.class_names[i])
    }
}

/// Trains a model; deterministic in (set, hyperparameters).
pub fn train(kind: ClassifierKind, set: &TrainingSet, hyper: &Hyperparameters) -> Result<Model> {
    hyper.validate()?;
    if set.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if set.class_names.is_empty() {
        return Err(Error::Feature("no classes".into()));
    }
    let params = match kind {
        ClassifierKind::NaiveBayes => ModelParams::NaiveBayes(NaiveBayes::fit(set)),
        ClassifierKind::Knn => {
            let scaling = hyper.knn_scale.then(|| Scaling::fit(&set.rows, set.width));
            let rows = match &scaling {
                Some(s) => set.rows.iter().map(|r| s.apply(r)).collect(),
                None => set.rows.clone(),
            };
            ModelParams::Knn {
                k: hyper.knn_k,
                scaling,
                rows,
                targets: set.targets.clone(),
            }
        }
        ClassifierKind::Tree => {
            let all: Vec<usize> = (0..set.len()).collect();
            ModelParams::Tree(Tree::fit(set, &all, &tree::TreeParams::from(hyper), None))
        }
        ClassifierKind::Forest => ModelParams::Forest(forest::fit(set, hyper)),
    };
    Ok(Model {
        class_names: set.class_names.clone(),
        feature_width: set.width,
        params,
    })
}
