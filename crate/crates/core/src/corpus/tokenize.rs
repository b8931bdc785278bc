//! Word/punctuation tokenizer.
//!
//! Text is split at whitespace; each chunk then loses leading openers and
//! trailing punctuation as separate tokens. A final period stays attached
//! when the chunk is a lexicon form (`dr.`), a digit or roman-numeral group
//! sequence (`15.`, `15.10.2023.`, `XX.`), an ordinal range (`5.-10.`) or a
//! single letter (`J.`).

use std::sync::LazyLock;

use regex::Regex;

use crate::lexicon::Lexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    /// Byte offset into the source text.
    pub start: usize,
}

impl Token<'_> {
    pub fn end(&self) -> usize {
        self.start + self.text.len()
    }
}

const LEADING: &[char] = &['(', '[', '{', '"', '\'', '«', '„', '“', '‘', '¿', '¡', '€', '$', '£'];
const TRAILING: &[char] = &[
    ',', ';', ':', '!', '?', '"', '\'', '»', '”', '’', '“', '…', '%', '€', '$', '£',
];
const CLOSING: &[(char, char)] = &[(')', '('), (']', '['), ('}', '{')];
/// Punctuation-only chunks starting with one of these stay whole (`:-)`,
/// `^_^`, `--`); any other is split into runs of one repeated character.
const KEEP_PUNCT_START: &[char] = &[':', ';', '=', '^', '<', '>', '\\', '_', '-', '–', '—', '(', '*', '~', '|'];

static NUMERIC_GROUPS: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:[0-9]+|[IVXLCDM]+)(?:\.(?:[0-9]+|[IVXLCDM]+))*$").expect("valid regex"));
static ORDINAL_RANGE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[0-9]+\.[-–][0-9]+$").expect("valid regex"));

/// Tokenizer bound to the lexicon that decides which periods are part of
/// an abbreviation.
#[derive(Debug, Clone, Copy)]
pub struct Tokenizer<'l> {
    lexicon: &'l Lexicon,
}

impl<'l> Tokenizer<'l> {
    pub fn new(lexicon: &'l Lexicon) -> Self {
        Tokenizer { lexicon }
    }

    pub fn tokenize<'a>(&self, text: &'a str) -> Vec<Token<'a>> {
        let mut out = Vec::new();
        let mut chunk_start: Option<usize> = None;
        for (i, c) in text.char_indices() {
            if c.is_whitespace() {
                if let Some(s) = chunk_start.take() {
                    self.split_chunk(&text[s..i], s, &mut out);
                }
            } else if chunk_start.is_none() {
                chunk_start = Some(i);
            }
        }
        if let Some(s) = chunk_start {
            self.split_chunk(&text[s..], s, &mut out);
        }
        out
    }

    fn split_chunk<'a>(&self, chunk: &'a str, offset: usize, out: &mut Vec<Token<'a>>) {
        if !chunk.chars().any(char::is_alphanumeric) {
            let first = chunk.chars().next().expect("chunks are non-empty");
            if !KEEP_PUNCT_START.contains(&first) && !self.lexicon.contains_part(chunk) {
                push_runs(chunk, offset, out);
            } else {
                out.push(Token {
                    text: chunk,
                    start: offset,
                });
            }
            return;
        }
        if self.lexicon.contains_part(chunk) {
            out.push(Token {
                text: chunk,
                start: offset,
            });
            return;
        }

        let mut s = 0;
        let mut e = chunk.len();
        while let Some(c) = chunk[s..e].chars().next() {
            if !LEADING.contains(&c) || self.lexicon.contains_part(&chunk[s..e]) {
                break;
            }
            out.push(Token {
                text: &chunk[s..s + c.len_utf8()],
                start: offset + s,
            });
            s += c.len_utf8();
        }

        let mut tail: Vec<Token<'a>> = Vec::new();
        while s < e {
            let rest = &chunk[s..e];
            if self.lexicon.contains_part(rest) {
                break;
            }
            let c = rest.chars().next_back().expect("non-empty");
            let peel = if c == '.' {
                let dots = rest.chars().rev().take_while(|&ch| ch == '.').count();
                if dots >= 2 {
                    dots
                } else if keeps_period(&rest[..rest.len() - 1]) {
                    0
                } else {
                    1
                }
            } else if TRAILING.contains(&c) {
                rest.chars().rev().take_while(|&ch| ch == c).count() * c.len_utf8()
            } else if let Some(&(_, open)) = CLOSING.iter().find(|(close, _)| *close == c) {
                let opens = rest.chars().filter(|&ch| ch == open).count();
                let closes = rest.chars().filter(|&ch| ch == c).count();
                if closes > opens {
                    c.len_utf8()
                } else {
                    0
                }
            } else {
                0
            };
            if peel == 0 || peel >= rest.len() {
                break;
            }
            tail.push(Token {
                text: &chunk[e - peel..e],
                start: offset + e - peel,
            });
            e -= peel;
        }
        if s < e {
            out.push(Token {
                text: &chunk[s..e],
                start: offset + s,
            });
        }
        out.extend(tail.into_iter().rev());
    }
}

fn keeps_period(stem: &str) -> bool {
    if stem.is_empty() {
        return false;
    }
    let mut chars = stem.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        if c.is_alphabetic() {
            return true;
        }
    }
    NUMERIC_GROUPS.is_match(stem) || ORDINAL_RANGE.is_match(stem)
}

fn push_runs<'a>(chunk: &'a str, offset: usize, out: &mut Vec<Token<'a>>) {
    let mut run_start = 0;
    let mut prev: Option<char> = None;
    for (i, c) in chunk.char_indices() {
        if prev.is_some_and(|p| p != c) {
            out.push(Token {
                text: &chunk[run_start..i],
                start: offset + run_start,
            });
            run_start = i;
        }
        prev = Some(c);
    }
    out.push(Token {
        text: &chunk[run_start..],
        start: offset + run_start,
    });
}

/// Tokenizes with the shipped lexicon.
pub fn tokenize(text: &str) -> Vec<Token<'_>> {
    Tokenizer::new(crate::builtin::lexicon()).tokenize(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn texts(s: &str) -> Vec<&str> {
        tokenize(s).into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn empty() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  \n\t ").is_empty());
    }

    #[test]
    fn abbreviation_keeps_period() {
        assert_eq!(texts("dr. Ivić"), ["dr.", "Ivić"]);
        assert_eq!(texts("Došao je dr."), ["Došao", "je", "dr."]);
    }

    #[test]
    fn decimal_and_punctuation() {
        assert_eq!(texts("15,5 kg!"), ["15,5", "kg", "!"]);
        assert_eq!(texts("(oko 20%)."), ["(", "oko", "20", "%", ")", "."]);
    }

    #[test]
    fn sentence_period_is_split() {
        assert_eq!(texts("Kiša pada."), ["Kiša", "pada", "."]);
        assert_eq!(texts("u 14:30."), ["u", "14:30", "."]);
        assert_eq!(texts("Čekaj..."), ["Čekaj", "..."]);
    }

    #[test]
    fn numeric_periods_stay() {
        assert_eq!(texts("15. 10. 2023."), ["15.", "10.", "2023."]);
        assert_eq!(texts("15.10.2023.,"), ["15.10.2023.", ","]);
        assert_eq!(texts("XX. stoljeće"), ["XX.", "stoljeće"]);
        assert_eq!(texts("5.-10. razred"), ["5.-10.", "razred"]);
        assert_eq!(texts("1. 3. 2024."), ["1.", "3.", "2024."]);
        assert_eq!(texts("3.V.2021."), ["3.V.2021."]);
        assert_eq!(texts("na D8."), ["na", "D8", "."]);
    }

    #[test]
    fn brackets_and_emoticons() {
        assert_eq!(texts("[12]."), ["[", "12", "]", "."]);
        assert_eq!(texts("printf()"), ["printf()"]);
        assert_eq!(texts("(R)"), ["(", "R", ")"]);
        assert_eq!(texts("super :-) ^_^ :D"), ["super", ":-)", "^_^", ":D"]);
        assert_eq!(texts("kraj).\""), ["kraj", ")", ".", "\""]);
        assert_eq!(texts("10 %. ?!"), ["10", "%", ".", "?", "!"]);
    }

    #[test]
    fn offsets_point_into_source() {
        let text = "Cijena: 15,5 €.";
        for t in tokenize(text) {
            assert_eq!(&text[t.start..t.end()], t.text);
        }
    }

    proptest! {
        #[test]
        fn covers_all_non_whitespace(s in "[ a-zA-Z0-9čćžšđ.,;:!?()\\[\\]\"'%€+\\-/_^<>=\n\t]{0,80}") {
            let toks = tokenize(&s);
            let joined: String = toks.iter().map(|t| t.text).collect();
            let stripped: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            prop_assert_eq!(joined, stripped);
            for t in &toks {
                prop_assert!(!t.text.is_empty());
                prop_assert!(!t.text.chars().any(char::is_whitespace));
                prop_assert_eq!(&s[t.start..t.end()], t.text);
            }
            for w in toks.windows(2) {
                prop_assert!(w[0].end() <= w[1].start);
            }
        }

        #[test]
        fn deterministic(s in "\\PC{0,60}") {
            prop_assert_eq!(tokenize(&s), tokenize(&s));
        }
    }
}
