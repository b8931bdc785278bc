//! Labeled corpus ingestion: `<root>/<category>/<file>.txt`, UTF-8 only.

mod stats;
mod tokenize;

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

pub use stats::{corpus_stats, CorpusStats, StatsRow};
pub use tokenize::{tokenize, Token, Tokenizer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDocument {
    /// Path relative to the corpus root, `/`-separated.
    pub id: String,
    pub text: String,
    pub label: String,
    pub token_count: usize,
}

impl LabeledDocument {
    pub fn new(id: impl Into<String>, label: impl Into<String>, text: impl Into<String>, lexicon: &Lexicon) -> Self {
        let text = text.into();
        let token_count = Tokenizer::new(lexicon).tokenize(&text).len();
        LabeledDocument {
            id: id.into(),
            text,
            label: label.into(),
            token_count,
        }
    }
}

/// A file that could not be loaded; the rest of the corpus still loads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub documents: Vec<LabeledDocument>,
    /// Category names, sorted.
    pub categories: Vec<String>,
    pub skipped: Vec<SkippedFile>,
}

impl Corpus {
    pub fn labels(&self) -> Vec<&str> {
        self.documents.iter().map(|d| d.label.as_str()).collect()
    }
}

/// Loads a corpus using the shipped lexicon for tokenization.
pub fn load_corpus(root: impl AsRef<Path>) -> Result<Corpus> {
    load_corpus_with(root, crate::builtin::lexicon())
}

pub fn load_corpus_with(root: impl AsRef<Path>, lexicon: &Lexicon) -> Result<Corpus> {
    let root = root.as_ref();
    if !root.is_dir() {
        return Err(Error::Config(format!(
            "corpus root {} does not exist or is not a directory",
            root.display()
        )));
    }

    let mut files: Vec<(String, String, PathBuf)> = Vec::new();
    let mut categories = Vec::new();
    for entry in read_dir_sorted(root)? {
        if !entry.is_dir() {
            continue;
        }
        let Some(category) = file_name(&entry) else { continue };
        if category.starts_with('.') {
            continue;
        }
        let mut found = false;
        for file in read_dir_sorted(&entry)? {
            let Some(name) = file_name(&file) else { continue };
            if !file.is_file() || name.starts_with('.') || file.extension().is_none_or(|e| e != "txt") {
                continue;
            }
            found = true;
            files.push((format!("{category}/{name}"), category.clone(), file));
        }
        if !found {
            return Err(Error::Corpus(format!("category `{category}` contains no .txt files")));
        }
        categories.push(category);
    }
    if categories.is_empty() {
        return Err(Error::Corpus(format!("no category directories under {}", root.display())));
    }

    let loaded: Vec<std::result::Result<LabeledDocument, SkippedFile>> = files
        .into_par_iter()
        .map(|(id, label, path)| match std::fs::read(&path) {
            Err(e) => Err(SkippedFile {
                path,
                reason: e.to_string(),
            }),
            Ok(bytes) => match String::from_utf8(bytes) {
                Err(e) => Err(SkippedFile {
                    reason: format!("invalid UTF-8 at byte {}", e.utf8_error().valid_up_to()),
                    path,
                }),
                Ok(text) => Ok(LabeledDocument::new(id, label, text, lexicon)),
            },
        })
        .collect();

    let mut documents = Vec::with_capacity(loaded.len());
    let mut skipped = Vec::new();
    for item in loaded {
        match item {
            Ok(doc) => documents.push(doc),
            Err(s) => skipped.push(s),
        }
    }
    documents.sort_by(|a, b| a.id.cmp(&b.id));

    for category in &categories {
        if !documents.iter().any(|d| &d.label == category) {
            return Err(Error::Corpus(format!("category `{category}` has no readable UTF-8 documents")));
        }
    }

    Ok(Corpus {
        documents,
        categories,
        skipped,
    })
}

fn file_name(path: &Path) -> Option<String> {
    path.file_name().and_then(|n| n.to_str()).map(String::from)
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| Error::io(dir, e))?;
    paths.sort();
    Ok(paths)
}
