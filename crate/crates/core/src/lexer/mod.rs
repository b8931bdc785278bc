//! NSW detection: a left-to-right greedy scan over tokens where, at each
//! position, the highest-priority rule or lexicon entry wins.

mod rules;

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::Path;

use crate::corpus::{LabeledDocument, Token, Tokenizer};
use crate::error::Result;
use crate::lexicon::{load_lexicon, Lexicon};
use crate::taxonomy::{load_taxonomy, NswTypeId, Taxonomy};

pub use rules::{load_rules, Rule, RuleSet, DEFAULT_RULES, MAX_PATTERN_TOKENS};

/// Window examined at each scan position.
pub const WINDOW: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NswOccurrence {
    pub doc_id: String,
    pub nsw_type: NswTypeId,
    /// Byte range in the document text.
    pub start: usize,
    pub end: usize,
    pub surface: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Candidate {
    priority: i32,
    len: usize,
    /// Rule file order; lexicon matches sort after every rule.
    order: usize,
    nsw_type: NswTypeId,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        match self.priority.cmp(&other.priority) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => match self.len.cmp(&other.len) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => self.order < other.order,
            },
        }
    }
}

/// Classifies the token at `position`, returning its NSW type and the
/// number of tokens consumed, or `None` for a standard word.
pub fn classify_token<S: AsRef<str>>(
    tokens: &[S],
    position: usize,
    taxonomy: &Taxonomy,
    lexicon: &Lexicon,
    rules: &RuleSet,
) -> Option<(NswTypeId, usize)> {
    let window = &tokens[position..tokens.len().min(position + WINDOW)];
    let mut best: Option<Candidate> = None;
    let mut offer = |c: Candidate| {
        if best.is_none_or(|b| c.beats(&b)) {
            best = Some(c);
        }
    };
    for (order, rule) in rules.rules().iter().enumerate() {
        if rules.rule_matches(rule, window, lexicon) {
            offer(Candidate {
                priority: rule.priority,
                len: rule.len(),
                order,
                nsw_type: rule.nsw_type,
            });
        }
    }
    if let Some((nsw_type, len)) = lexicon.longest_match(window) {
        offer(Candidate {
            priority: rules.lexicon_priority(taxonomy.get(nsw_type).superclass),
            len,
            order: usize::MAX,
            nsw_type,
        });
    }
    best.map(|c| (c.nsw_type, c.len))
}

/// Taxonomy, lexicon and rules loaded together. Immutable after
/// construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct NswLexer {
    pub taxonomy: Taxonomy,
    pub lexicon: Lexicon,
    pub rules: RuleSet,
}

impl NswLexer {
    /// The shipped Croatian taxonomy, lexicon and rules.
    pub fn builtin() -> Self {
        let taxonomy = Taxonomy::builtin();
        let lexicon = Lexicon::builtin(&taxonomy);
        let rules = RuleSet::builtin(&taxonomy);
        NswLexer {
            taxonomy,
            lexicon,
            rules,
        }
    }

    /// Loads each component from disk, falling back to the shipped data
    /// for any path not given.
    pub fn from_paths(taxonomy: Option<&Path>, lexicon: Option<&Path>, rules: Option<&Path>) -> Result<Self> {
        let taxonomy = match taxonomy {
            Some(p) => load_taxonomy(p)?,
            None => Taxonomy::builtin(),
        };
        let lexicon = match lexicon {
            Some(p) => load_lexicon(p, &taxonomy)?,
            None => Lexicon::parse(crate::lexicon::DEFAULT_LEXICON, &taxonomy)?,
        };
        let rules = match rules {
            Some(p) => load_rules(p, &taxonomy)?,
            None => RuleSet::parse(DEFAULT_RULES, &taxonomy)?,
        };
        Ok(NswLexer {
            taxonomy,
            lexicon,
            rules,
        })
    }

    pub fn tokenizer(&self) -> Tokenizer<'_> {
        Tokenizer::new(&self.lexicon)
    }

    pub fn tokenize<'a>(&self, text: &'a str) -> Vec<Token<'a>> {
        self.tokenizer().tokenize(text)
    }

    pub fn classify<S: AsRef<str>>(&self, tokens: &[S], position: usize) -> Option<(NswTypeId, usize)> {
        classify_token(tokens, position, &self.taxonomy, &self.lexicon, &self.rules)
    }

    /// Detects every NSW in `text`.
    pub fn extract(&self, doc_id: &str, text: &str) -> Vec<NswOccurrence> {
        let tokens = self.tokenize(text);
        self.extract_tokens(doc_id, text, &tokens)
    }

    pub fn extract_tokens(&self, doc_id: &str, text: &str, tokens: &[Token<'_>]) -> Vec<NswOccurrence> {
        let words: Vec<&str> = tokens.iter().map(|t| t.text).collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < words.len() {
            match self.classify(&words, i) {
                Some((nsw_type, consumed)) => {
                    let start = tokens[i].start;
                    let end = tokens[i + consumed - 1].end();
                    out.push(NswOccurrence {
                        doc_id: doc_id.to_string(),
                        nsw_type,
                        start,
                        end,
                        surface: text[start..end].to_string(),
                    });
                    i += consumed;
                }
                None => i += 1,
            }
        }
        out
    }

    pub fn extract_document(&self, doc: &LabeledDocument) -> Vec<NswOccurrence> {
        self.extract(&doc.id, &doc.text)
    }
}

/// Free-function form of [`NswLexer::extract_document`].
pub fn extract_nsws(doc: &LabeledDocument, taxonomy: &Taxonomy, lexicon: &Lexicon, rules: &RuleSet) -> Vec<NswOccurrence> {
    NswLexer {
        taxonomy: taxonomy.clone(),
        lexicon: lexicon.clone(),
        rules: rules.clone(),
    }
    .extract_document(doc)
}

/// Occurrence dump: `doc_id<TAB>start<TAB>end<TAB>type_name<TAB>surface`,
/// sorted by (doc_id, start). Tabs, newlines and backslashes inside a
/// surface are written as `\t`, `\n`, `\r` and `\\`.
pub fn write_occurrences(occurrences: &[NswOccurrence], taxonomy: &Taxonomy) -> String {
    let mut sorted: Vec<&NswOccurrence> = occurrences.iter().collect();
    sorted.sort_by(|a, b| (a.doc_id.as_str(), a.start).cmp(&(b.doc_id.as_str(), b.start)));
    let mut out = String::new();
    for o in sorted {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            o.doc_id,
            o.start,
            o.end,
            taxonomy.name(o.nsw_type),
            escape_surface(&o.surface)
        );
    }
    out
}

fn escape_surface(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}
