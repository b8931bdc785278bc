//! Text categorization with Non-Standard Words (NSWs) as features.
//!
//! The pipeline:
//!
//! 1. [`corpus`] loads a labeled directory tree and tokenizes it.
//! 2. [`lexer`] finds NSWs with pattern rules plus a lookup dictionary and
//!    assigns each one a leaf of the 56-type [`taxonomy`].
//! 3. [`features`] turns per-document NSW counts into a frequency vector
//!    (85 values), a dispersion-statistics vector (25) or their union (110).
//! 4. [`classifiers`] trains Gaussian naive Bayes, kNN, an information-gain
//!    tree or a random forest on those vectors.
//! 5. [`harness`] cross-validates every classifier on every representation
//!    and writes the reports.
//!
//! ```
//! use nswcat::builtin;
//!
//! let lexer = builtin::lexer();
//! let found = lexer.extract("doc", "Dr. Ivić stiže 15. 10. 2023. u 14:30.");
//! let names: Vec<&str> = found.iter().map(|o| lexer.taxonomy.name(o.nsw_type)).collect();
//! assert_eq!(names, ["abbrev_simple", "date_numeric", "time"]);
//! ```

pub mod builtin;
pub mod classifiers;
pub mod corpus;
pub mod error;
pub mod features;
pub mod harness;
pub mod lexer;
pub mod lexicon;
pub mod taxonomy;

pub use error::{Error, Result};
