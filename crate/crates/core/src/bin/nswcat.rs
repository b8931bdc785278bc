use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use nswcat::classifiers::{load_model, save_model, train, ClassifierKind, Hyperparameters, TrainingSet};
use nswcat::corpus::{corpus_stats, load_corpus_with, Corpus};
use nswcat::features::{featurize_corpus, read_matrix, write_matrix, Representation};
use nswcat::harness::{percent, run_experiment_on, ExperimentConfig};
use nswcat::lexer::{write_occurrences, NswLexer};
use nswcat::{Error, Result};

/// Non-standard word extraction and NSW-based text categorization.
#[derive(Parser)]
#[command(name = "nswcat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Resources {
    /// Taxonomy manifest replacing the built-in one.
    #[arg(long, value_name = "FILE")]
    taxonomy: Option<PathBuf>,
    /// Lexicon replacing the built-in one.
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Rule file replacing the built-in one.
    #[arg(long, value_name = "FILE")]
    rules: Option<PathBuf>,
}

impl Resources {
    fn lexer(&self) -> Result<NswLexer> {
        NswLexer::from_paths(self.taxonomy.as_deref(), self.lexicon.as_deref(), self.rules.as_deref())
    }
}

#[derive(Subcommand)]
enum Command {
    /// List every NSW occurrence: doc_id, start, end, type, surface.
    Extract {
        corpus: PathBuf,
        #[command(flatten)]
        resources: Resources,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the feature matrix of a corpus.
    Featurize {
        corpus: PathBuf,
        #[arg(long, value_name = "freq|stat|union")]
        rep: Representation,
        #[command(flatten)]
        resources: Resources,
        #[arg(long)]
        out: PathBuf,
    },
    /// Token and NSW counts per category.
    Stats {
        corpus: PathBuf,
        #[command(flatten)]
        resources: Resources,
    },
    /// Train a classifier on a feature matrix file.
    Train {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_name = "nb|knn|tree|forest")]
        kind: ClassifierKind,
        /// Neighbours for kNN.
        #[arg(long = "k", alias = "knn-k", default_value_t = 5)]
        knn_k: usize,
        #[command(flatten)]
        hyper: HyperArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict a category for every row of a feature matrix file.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Cross-validate classifiers on each representation and write reports.
    Evaluate {
        #[arg(long)]
        corpus: PathBuf,
        /// Number of folds.
        #[arg(long = "k", default_value_t = 5)]
        folds: usize,
        /// Neighbours for kNN.
        #[arg(long, default_value_t = 5)]
        knn_k: usize,
        #[command(flatten)]
        hyper: HyperArgs,
        /// Representations to evaluate (default: all).
        #[arg(long, value_delimiter = ',')]
        reps: Vec<Representation>,
        /// Classifiers to run (default: all).
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<ClassifierKind>,
        /// Classifier reported in per_class.tsv.
        #[arg(long)]
        per_class_kind: Option<ClassifierKind>,
        /// Deal folds from one shuffled list instead of per class.
        #[arg(long)]
        no_stratify: bool,
        /// Worker threads (default: one per core).
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        resources: Resources,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct HyperArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Min-max scale features for kNN.
    #[arg(long)]
    scale: bool,
    /// Trees in the forest.
    #[arg(long, default_value_t = 100)]
    trees: usize,
    #[arg(long, default_value_t = 2)]
    min_leaf: usize,
    #[arg(long)]
    max_depth: Option<usize>,
}

impl HyperArgs {
    fn hyperparameters(&self, knn_k: usize) -> Hyperparameters {
        Hyperparameters {
            knn_k,
            knn_scale: self.scale,
            tree_min_leaf: self.min_leaf,
            tree_max_depth: self.max_depth,
            forest_trees: self.trees,
            rng_seed: self.seed,
        }
    }
}

fn load(corpus: &Path, lexer: &NswLexer) -> Result<Corpus> {
    let c = load_corpus_with(corpus, &lexer.lexicon)?;
    for s in &c.skipped {
        eprintln!("warning: skipped {}: {}", s.path.display(), s.reason);
    }
    Ok(c)
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Extract { corpus, resources, out } => {
            let lexer = resources.lexer()?;
            let c = load(&corpus, &lexer)?;
            let occ: Vec<_> = c.documents.par_iter().flat_map(|d| lexer.extract_document(d)).collect();
            let dump = write_occurrences(&occ, &lexer.taxonomy);
            match out {
                Some(p) => write_out(&p, &dump)?,
                None => print!("{dump}"),
            }
        }
        Command::Featurize {
            corpus,
            rep,
            resources,
            out,
        } => {
            let lexer = resources.lexer()?;
            let c = load(&corpus, &lexer)?;
            let m = featurize_corpus(&c, &lexer, rep)?;
            write_out(&out, &write_matrix(&m)?)?;
            eprintln!("{} rows x {} features -> {}", m.len(), m.width(), out.display());
        }
        Command::Stats { corpus, resources } => {
            let lexer = resources.lexer()?;
            let c = load(&corpus, &lexer)?;
            let counts: Vec<usize> = c.documents.par_iter().map(|d| lexer.extract_document(d).len()).collect();
            let stats = corpus_stats(&c.documents, &counts)?;
            print!("{}", stats.to_tsv());
        }
        Command::Train {
            matrix,
            kind,
            knn_k,
            hyper,
            out,
        } => {
            let m = read_matrix(&matrix)?;
            let set = TrainingSet::from_matrix(&m)?;
            let model = train(kind, &set, &hyper.hyperparameters(knn_k))?;
            save_model(&model, &out)?;
            eprintln!(
                "{kind} on {} rows, {} classes -> {}",
                set.len(),
                set.class_names.len(),
                out.display()
            );
        }
        Command::Predict { model, matrix } => {
            let model = load_model(&model)?;
            let m = read_matrix(&matrix)?;
            for (id, row) in m.doc_ids.iter().zip(&m.rows) {
                println!("{id}\t{}", model.predict(row)?);
            }
        }
        Command::Evaluate {
            corpus,
            folds,
            knn_k,
            hyper,
            reps,
            kinds,
            per_class_kind,
            no_stratify,
            threads,
            resources,
            out_dir,
        } => {
            let config = ExperimentConfig {
                k: folds,
                seed: hyper.seed,
                stratified: !no_stratify,
                representations: if reps.is_empty() { Representation::ALL.to_vec() } else { reps },
                kinds: if kinds.is_empty() { ClassifierKind::ALL.to_vec() } else { kinds },
                hyperparameters: hyper.hyperparameters(knn_k),
                per_class_kind,
                taxonomy: resources.taxonomy.clone(),
                lexicon: resources.lexicon.clone(),
                rules: resources.rules.clone(),
                threads,
            };
            let lexer = resources.lexer()?;
            let c = load(&corpus, &lexer)?;
            let bundle = run_experiment_on(&c, &lexer, &config)?;
            bundle.write_to(&out_dir)?;
            for (rep, mean) in &bundle.means {
                for r in bundle.reports.iter().filter(|r| r.representation == *rep) {
                    println!("{rep}\t{}\t{}/{}\t{}", r.kind, r.correct, r.total, percent(r.accuracy));
                }
                println!("{rep}\tMEAN\t\t{}", percent(*mean));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
