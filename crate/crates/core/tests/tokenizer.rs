mod common;

use nswcat::builtin;
use nswcat::corpus::Tokenizer;
use proptest::prelude::*;

fn oracle() -> Vec<(String, Vec<String>)> {
    let text = std::fs::read_to_string(common::fixtures().join("tokenizer_oracle.txt")).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).collect();
    lines
        .chunks(2)
        .map(|pair| {
            let s = pair[0].strip_prefix("S: ").expect("S: line");
            let t = pair[1].strip_prefix("T: ").expect("T: line");
            (s.to_string(), t.split(' ').map(String::from).collect())
        })
        .collect()
}

fn tokens(s: &str) -> Vec<String> {
    Tokenizer::new(&builtin::lexer().lexicon)
        .tokenize(s)
        .into_iter()
        .map(|t| t.text.to_string())
        .collect()
}

#[test]
fn matches_hand_tokenized_sentences() {
    let cases = oracle();
    assert_eq!(cases.len(), 50);
    let failures: Vec<String> = cases
        .iter()
        .filter(|(s, want)| &tokens(s) != want)
        .map(|(s, want)| format!("{s}\n  want {want:?}\n  got  {:?}", tokens(s)))
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

proptest! {
    #[test]
    fn tokens_cover_all_non_whitespace(s in "[a-zA-Z0-9čćšžđ.,:;!?()\\[\\]\"'%€$ -]{0,60}") {
        let toks = Tokenizer::new(&builtin::lexer().lexicon).tokenize(&s);
        let joined: String = toks.iter().map(|t| t.text).collect();
        let stripped: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(joined, stripped);
        for t in &toks {
            prop_assert!(!t.text.is_empty());
            prop_assert!(!t.text.contains(char::is_whitespace));
            prop_assert_eq!(&s[t.start..t.end()], t.text);
        }
        for w in toks.windows(2) {
            prop_assert!(w[0].end() <= w[1].start);
        }
    }
}
