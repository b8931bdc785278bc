//! Term-by-document matrices and their tab-separated file form.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use super::{frequency_vector, represent, Representation};
use crate::corpus::{Corpus, LabeledDocument};
use crate::error::{Error, Result};
use crate::lexer::{NswLexer, NswOccurrence};
use crate::taxonomy::Taxonomy;

/// One row per document, in corpus order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub representation: Representation,
    pub doc_ids: Vec<String>,
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FeatureMatrix {
    pub fn empty(representation: Representation) -> Self {
        FeatureMatrix {
            representation,
            doc_ids: Vec::new(),
            labels: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// Checks that the three columns line up and every row has the
    /// representation's width.
    pub fn new(
        representation: Representation,
        doc_ids: Vec<String>,
        labels: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if doc_ids.len() != rows.len() || labels.len() != rows.len() {
            return Err(Error::Feature(format!(
                "{} rows, {} doc ids and {} labels",
                rows.len(),
                doc_ids.len(),
                labels.len()
            )));
        }
        let width = representation.width();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
            return Err(Error::Feature(format!(
                "row {i} (`{}`) has {} values, {representation} needs {width}",
                doc_ids[i],
                r.len()
            )));
        }
        Ok(FeatureMatrix {
            representation,
            doc_ids,
            labels,
            rows,
        })
    }

    pub fn width(&self) -> usize {
        self.representation.width()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Builds the matrix from documents and their already-extracted
/// occurrences (`occurrences[i]` belongs to `docs[i]`).
pub fn build_matrix(
    docs: &[LabeledDocument],
    occurrences: &[Vec<NswOccurrence>],
    representation: Representation,
    taxonomy: &Taxonomy,
) -> Result<FeatureMatrix> {
    if docs.len() != occurrences.len() {
        return Err(Error::Feature(format!(
            "{} documents but {} occurrence lists",
            docs.len(),
            occurrences.len()
        )));
    }
    let rows = docs
        .par_iter()
        .zip(occurrences.par_iter())
        .map(|(doc, occ)| {
            if let Some(o) = occ.iter().find(|o| o.doc_id != doc.id) {
                return Err(Error::Feature(format!(
                    "document `{}`: occurrence at byte {} belongs to `{}`",
                    doc.id, o.start, o.doc_id
                )));
            }
            let freq = frequency_vector(&doc.id, occ, doc.token_count, taxonomy);
            Ok(represent(&freq, representation))
        })
        .collect::<Result<Vec<_>>>()?;
    FeatureMatrix::new(
        representation,
        docs.iter().map(|d| d.id.clone()).collect(),
        docs.iter().map(|d| d.label.clone()).collect(),
        rows,
    )
}

/// Extracts NSWs from every document and builds the matrix.
pub fn featurize_corpus(corpus: &Corpus, lexer: &NswLexer, representation: Representation) -> Result<FeatureMatrix> {
    let occurrences: Vec<Vec<NswOccurrence>> = corpus
        .documents
        .par_iter()
        .map(|d| lexer.extract_document(d))
        .collect();
    build_matrix(&corpus.documents, &occurrences, representation, &lexer.taxonomy)
}

fn check_field(what: &str, value: &str) -> Result<()> {
    if value.is_empty() || value.contains(['\t', '\n', '\r']) {
        return Err(Error::Matrix {
            line: None,
            message: format!("{what} `{}` is empty or contains a tab or line break", value.escape_debug()),
        });
    }
    Ok(())
}

/// Header `doc_id<TAB>label<TAB>f0..`, then one row per document. Values
/// use the shortest representation that parses back to the same bits.
pub fn write_matrix(matrix: &FeatureMatrix) -> Result<String> {
    let mut out = String::from("doc_id\tlabel");
    for i in 0..matrix.width() {
        let _ = write!(out, "\tf{i}");
    }
    out.push('\n');
    for ((id, label), row) in matrix.doc_ids.iter().zip(&matrix.labels).zip(&matrix.rows) {
        check_field("doc id", id)?;
        check_field("label", label)?;
        out.push_str(id);
        out.push('\t');
        out.push_str(label);
        for v in row {
            let _ = write!(out, "\t{v}");
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_matrix(source: &str) -> Result<FeatureMatrix> {
    let err = |line: usize, message: String| Error::Matrix {
        line: Some(line),
        message,
    };
    let mut lines = source.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Matrix {
        line: None,
        message: "empty file".into(),
    })?;
    let cols: Vec<&str> = header.split('\t').collect();
    if cols.len() < 2 || cols[0] != "doc_id" || cols[1] != "label" {
        return Err(err(1, "header must start with doc_id<TAB>label".into()));
    }
    let width = cols.len() - 2;
    for (i, c) in cols[2..].iter().enumerate() {
        if *c != format!("f{i}") {
            return Err(err(1, format!("column {} should be `f{i}`, found `{c}`", i + 3)));
        }
    }
    let representation = Representation::from_width(width)
        .ok_or_else(|| err(1, format!("{width} feature columns; expected 85, 25 or 110")))?;

    let mut doc_ids = Vec::new();
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != width + 2 {
            return Err(err(lineno, format!("{} fields, header has {}", fields.len(), width + 2)));
        }
        let row = fields[2..]
            .iter()
            .enumerate()
            .map(|(i, f)| {
                f.parse::<f64>()
                    .map_err(|_| err(lineno, format!("f{i}: `{f}` is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        doc_ids.push(fields[0].to_string());
        labels.push(fields[1].to_string());
        rows.push(row);
    }
    FeatureMatrix::new(representation, doc_ids, labels, rows)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text)
}
