//! Lookup dictionary of known NSW surface forms.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::taxonomy::{NswTypeId, Superclass, Taxonomy};

pub const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.tsv");

/// Longest multi-token surface the matcher will consider.
pub const MAX_ENTRY_TOKENS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub surface: String,
    pub nsw_type: NswTypeId,
    pub case_insensitive: bool,
    parts: Vec<String>,
}

impl LexiconEntry {
    /// Whitespace-separated parts of the surface, one per token.
    pub fn parts(&self) -> &[String] {
        &self.parts
    }

    fn part_matches(&self, i: usize, token: &str) -> bool {
        if self.case_insensitive {
            self.parts[i] == token.to_lowercase()
        } else {
            self.parts[i] == token
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    /// Lowercased first part -> entry indices.
    by_first: HashMap<String, Vec<usize>>,
    parts_exact: HashSet<String>,
    parts_folded: HashSet<String>,
}

impl Lexicon {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn builtin(taxonomy: &Taxonomy) -> Self {
        Self::parse(DEFAULT_LEXICON, taxonomy).expect("shipped lexicon is valid")
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when `token` is any part of any entry. The tokenizer uses this
    /// to keep abbreviation-final periods attached.
    pub fn contains_part(&self, token: &str) -> bool {
        self.parts_exact.contains(token) || self.parts_folded.contains(&token.to_lowercase())
    }

    /// Longest entry starting at `tokens[0]`, as (type, consumed tokens).
    /// Among equally long entries the earliest in file order wins.
    pub fn longest_match<S: AsRef<str>>(&self, tokens: &[S]) -> Option<(NswTypeId, usize)> {
        let first = tokens.first()?.as_ref().to_lowercase();
        let candidates = self.by_first.get(&first)?;
        let mut best: Option<(NswTypeId, usize)> = None;
        for &i in candidates {
            let e = &self.entries[i];
            let n = e.parts.len();
            if n > tokens.len() {
                continue;
            }
            if (0..n).all(|k| e.part_matches(k, tokens[k].as_ref())) && best.is_none_or(|(_, len)| n > len) {
                best = Some((e.nsw_type, n));
            }
        }
        best
    }

    /// Whether any entry of `nsw_type` matches the single token.
    pub fn matches_type(&self, token: &str, nsw_type: Option<NswTypeId>) -> bool {
        let Some(candidates) = self.by_first.get(&token.to_lowercase()) else {
            return false;
        };
        candidates.iter().any(|&i| {
            let e = &self.entries[i];
            e.parts.len() == 1 && e.part_matches(0, token) && nsw_type.is_none_or(|t| t == e.nsw_type)
        })
    }

    pub fn parse(source: &str, taxonomy: &Taxonomy) -> Result<Self> {
        let err = |line: usize, message: String| Error::Lexicon {
            line: Some(line),
            message,
        };
        let mut lex = Lexicon::default();
        let mut seen: HashMap<String, usize> = HashMap::new();
        let mut seen_lower: HashMap<String, Vec<(usize, bool)>> = HashMap::new();

        for (idx, line) in source.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(err(lineno, "expected surface<TAB>type_name[<TAB>ci]".into()));
            }
            let surface = fields[0].trim();
            if surface.is_empty() {
                return Err(err(lineno, "empty surface".into()));
            }
            let type_name = fields[1].trim();
            let nsw_type = taxonomy
                .by_name(type_name)
                .ok_or_else(|| err(lineno, format!("unknown NSW type `{type_name}`")))?;
            let superclass = taxonomy.get(nsw_type).superclass;
            if superclass == Superclass::Number {
                return Err(err(
                    lineno,
                    format!("`{type_name}` is a NUMBER leaf; lexicon entries must be STRING or COMBINED"),
                ));
            }
            let case_insensitive = match fields.get(2).map(|s| s.trim()) {
                None | Some("") => false,
                Some("ci") => true,
                Some(other) => return Err(err(lineno, format!("unknown flag `{other}`"))),
            };

            let parts: Vec<String> = surface
                .split_whitespace()
                .map(|p| {
                    if case_insensitive {
                        p.to_lowercase()
                    } else {
                        p.to_string()
                    }
                })
                .collect();
            if parts.len() > MAX_ENTRY_TOKENS {
                return Err(err(
                    lineno,
                    format!("surface spans {} tokens, at most {MAX_ENTRY_TOKENS} allowed", parts.len()),
                ));
            }

            // Case-insensitive entries collide with anything equal after lowering.
            let key = surface.split_whitespace().collect::<Vec<_>>().join(" ");
            let lowered = key.to_lowercase();
            if let Some(prev) = seen.get(&key) {
                return Err(err(lineno, format!("duplicate surface `{surface}` (first on line {prev})")));
            }
            if let Some(clash) = seen_lower
                .get(&lowered)
                .and_then(|v| v.iter().find(|(_, ci)| case_insensitive || *ci))
            {
                return Err(err(
                    lineno,
                    format!(
                        "duplicate surface `{surface}` (collides case-insensitively with line {})",
                        clash.0
                    ),
                ));
            }
            seen.insert(key.clone(), lineno);
            seen_lower.entry(lowered).or_default().push((lineno, case_insensitive));

            let part_set = if case_insensitive {
                &mut lex.parts_folded
            } else {
                &mut lex.parts_exact
            };
            part_set.extend(parts.iter().cloned());
            let index = lex.entries.len();
            lex.by_first.entry(parts[0].to_lowercase()).or_default().push(index);
            lex.entries.push(LexiconEntry {
                surface: key,
                nsw_type,
                case_insensitive,
                parts,
            });
        }
        Ok(lex)
    }
}

/// Reads a lexicon file, validating every entry against `taxonomy`.
pub fn load_lexicon(path: impl AsRef<Path>, taxonomy: &Taxonomy) -> Result<Lexicon> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Lexicon::parse(&text, taxonomy)
}
