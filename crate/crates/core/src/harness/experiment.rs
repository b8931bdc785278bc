use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{cross_validate, kfold_split, percent, EvaluationReport};
use crate::classifiers::{ClassifierKind, Hyperparameters};
use crate::corpus::{load_corpus_with, Corpus};
use crate::error::{Error, Result};
use crate::features::{build_matrix, Representation};
use crate::lexer::{NswLexer, NswOccurrence};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub k: usize,
    pub seed: u64,
    pub stratified: bool,
    pub representations: Vec<Representation>,
    pub kinds: Vec<ClassifierKind>,
    /// `rng_seed` is replaced by `seed`.
    pub hyperparameters: Hyperparameters,
    /// Classifier whose per-class accuracy fills the comparison table;
    /// defaults to the forest when it runs, else the first kind.
    pub per_class_kind: Option<ClassifierKind>,
    pub taxonomy: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            k: 5,
            seed: 0,
            stratified: true,
            representations: Representation::ALL.to_vec(),
            kinds: ClassifierKind::ALL.to_vec(),
            hyperparameters: Hyperparameters::default(),
            per_class_kind: None,
            taxonomy: None,
            lexicon: None,
            rules: None,
            threads: None,
        }
    }
}

/// Per-class accuracy of one classifier across representations, with
/// averages over categories and over representations.
#[derive(Debug, Clone, PartialEq)]
pub struct PerClassTable {
    pub kind: ClassifierKind,
    pub representations: Vec<Representation>,
    pub categories: Vec<String>,
    /// `values[category][representation]`.
    pub values: Vec<Vec<f64>>,
}

impl PerClassTable {
    pub fn category_average(&self, category: usize) -> f64 {
        mean(&self.values[category])
    }

    pub fn representation_average(&self, rep: usize) -> f64 {
        mean(&self.values.iter().map(|row| row[rep]).collect::<Vec<_>>())
    }

    pub fn overall_average(&self) -> f64 {
        mean(&self.values.iter().flatten().copied().collect::<Vec<_>>())
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("category");
        for r in &self.representations {
            let _ = write!(out, "\t{r}");
        }
        out.push_str("\tAVG\n");
        for (c, name) in self.categories.iter().enumerate() {
            out.push_str(name);
            for v in &self.values[c] {
                let _ = write!(out, "\t{}", percent(*v));
            }
            let _ = writeln!(out, "\t{}", percent(self.category_average(c)));
        }
        out.push_str("AVG");
        for r in 0..self.representations.len() {
            let _ = write!(out, "\t{}", percent(self.representation_average(r)));
        }
        let _ = writeln!(out, "\t{}", percent(self.overall_average()));
        out
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    /// One report per (representation, classifier), representations outer.
    pub reports: Vec<EvaluationReport>,
    /// Mean accuracy of all classifiers, per representation.
    pub means: Vec<(Representation, f64)>,
    pub per_class: PerClassTable,
}

impl ReportBundle {
    pub fn report(&self, rep: Representation, kind: ClassifierKind) -> Option<&EvaluationReport> {
        self.reports.iter().find(|r| r.representation == rep && r.kind == kind)
    }

    /// Key-value lines, then per-class recall, then the confusion matrix
    /// with a header of predicted labels and one row per true label.
    pub fn cell_text(report: &EvaluationReport) -> String {
        let h = &report.hyperparameters;
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{k}\t{v}");
        };
        kv("kind", &report.kind);
        kv("rep", &report.representation);
        kv("correct", &report.correct);
        kv("total", &report.total);
        kv("accuracy", &report.accuracy);
        kv("accuracy_percent", &percent(report.accuracy));
        kv("folds", &report.folds);
        kv("stratified", &report.stratified);
        kv("seed", &report.seed);
        kv("knn_k", &h.knn_k);
        kv("knn_scale", &h.knn_scale);
        kv("tree_min_leaf", &h.tree_min_leaf);
        kv(
            "tree_max_depth",
            &h.tree_max_depth.map_or_else(|| "none".to_string(), |d| d.to_string()),
        );
        kv("forest_trees", &h.forest_trees);
        for (name, acc) in report.class_names.iter().zip(&report.per_class_accuracy) {
            let _ = writeln!(out, "per_class\t{name}\t{acc}");
        }
        out.push_str("confusion");
        for name in &report.class_names {
            let _ = write!(out, "\t{name}");
        }
        out.push('\n');
        for (name, row) in report.class_names.iter().zip(&report.confusion) {
            out.push_str(name);
            for v in row {
                let _ = write!(out, "\t{v}");
            }
            out.push('\n');
        }
        out
    }

    /// Accuracy per classifier, grouped by representation, each group
    /// closed by its MEAN row.
    pub fn summary_tsv(&self) -> String {
        let mut out = String::from("rep\tclassifier\tcorrect\ttotal\taccuracy\taccuracy_percent\n");
        for &(rep, m) in &self.means {
            for r in self.reports.iter().filter(|r| r.representation == rep) {
                let _ = writeln!(
                    out,
                    "{rep}\t{}\t{}\t{}\t{}\t{}",
                    r.kind,
                    r.correct,
                    r.total,
                    r.accuracy,
                    percent(r.accuracy)
                );
            }
            let _ = writeln!(out, "{rep}\tMEAN\t\t\t{m}\t{}", percent(m));
        }
        out
    }

    pub fn cell_file_name(report: &EvaluationReport) -> String {
        format!("{}_{}.txt", report.representation, report.kind)
    }

    /// Writes every cell file plus `summary.tsv` and `per_class.tsv`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let write = |name: &str, text: String| {
            let p = dir.join(name);
            std::fs::write(&p, text).map_err(|e| Error::io(p, e))
        };
        for r in &self.reports {
            write(&Self::cell_file_name(r), Self::cell_text(r))?;
        }
        write("summary.tsv", self.summary_tsv())?;
        write("per_class.tsv", self.per_class.to_tsv())
    }
}

/// Loads the lexer resources and the corpus, then runs the experiment.
pub fn run_experiment(corpus_root: impl AsRef<Path>, config: &ExperimentConfig) -> Result<ReportBundle> {
    let lexer = NswLexer::from_paths(config.taxonomy.as_deref(), config.lexicon.as_deref(), config.rules.as_deref())
        .map_err(|e| e.in_stage("load resources"))?;
    let corpus = load_corpus_with(corpus_root, &lexer.lexicon).map_err(|e| e.in_stage("load corpus"))?;
    run_experiment_on(&corpus, &lexer, config)
}

pub fn run_experiment_on(corpus: &Corpus, lexer: &NswLexer, config: &ExperimentConfig) -> Result<ReportBundle> {
    if config.representations.is_empty() || config.kinds.is_empty() {
        return Err(Error::Config("at least one representation and one classifier are needed".into()));
    }
    let per_class_kind = match config.per_class_kind {
        Some(k) if config.kinds.contains(&k) => k,
        Some(k) => return Err(Error::Config(format!("per-class classifier `{k}` is not among those run"))),
        None if config.kinds.contains(&ClassifierKind::Forest) => ClassifierKind::Forest,
        None => config.kinds[0],
    };
    match config.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| run_inner(corpus, lexer, config, per_class_kind))
        }
        None => run_inner(corpus, lexer, config, per_class_kind),
    }
}

fn run_inner(
    corpus: &Corpus,
    lexer: &NswLexer,
    config: &ExperimentConfig,
    per_class_kind: ClassifierKind,
) -> Result<ReportBundle> {
    let occurrences: Vec<Vec<NswOccurrence>> = corpus.documents.par_iter().map(|d| lexer.extract_document(d)).collect();
    let labels = corpus.labels();
    let folds = kfold_split(&labels, config.k, config.seed, config.stratified).map_err(|e| e.in_stage("split folds"))?;
    let hyper = Hyperparameters {
        rng_seed: config.seed,
        ..config.hyperparameters.clone()
    };

    let matrices = config
        .representations
        .iter()
        .map(|&rep| {
            build_matrix(&corpus.documents, &occurrences, rep, &lexer.taxonomy)
                .map_err(|e| e.in_stage(format!("featurize {rep}")))
        })
        .collect::<Result<Vec<_>>>()?;

    let cells: Vec<(usize, ClassifierKind)> = (0..matrices.len())
        .flat_map(|m| config.kinds.iter().map(move |&k| (m, k)))
        .collect();
    let reports = cells
        .par_iter()
        .map(|&(m, kind)| {
            cross_validate(&matrices[m], kind, &hyper, &folds)
                .map_err(|e| e.in_stage(format!("cross-validate {} {kind}", matrices[m].representation)))
        })
        .collect::<Result<Vec<_>>>()?;

    let means = config
        .representations
        .iter()
        .map(|&rep| {
            let accs: Vec<f64> = reports
                .iter()
                .filter(|r| r.representation == rep)
                .map(|r| r.accuracy)
                .collect();
            (rep, mean(&accs))
        })
        .collect();

    let chosen: Vec<&EvaluationReport> = reports.iter().filter(|r| r.kind == per_class_kind).collect();
    let categories = chosen[0].class_names.clone();
    let values = (0..categories.len())
        .map(|c| chosen.iter().map(|r| r.per_class_accuracy[c]).collect())
        .collect();
    let per_class = PerClassTable {
        kind: per_class_kind,
        representations: config.representations.clone(),
        categories,
        values,
    };
    Ok(ReportBundle {
        reports,
        means,
        per_class,
    })
}
