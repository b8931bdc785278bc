//! Token-shape pattern rules, compiled once at load time.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use regex::Regex;

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::taxonomy::{NswTypeId, Superclass, Taxonomy};

pub const DEFAULT_RULES: &str = include_str!("../../data/rules.tsv");

/// Longest window a rule may span.
pub const MAX_PATTERN_TOKENS: usize = 6;

const DEFAULT_LEXICON_PRIORITY: i32 = 100;

#[derive(Debug, Clone)]
enum Condition {
    Regex(Regex),
    Literal(String),
    Class(usize),
    /// `None` accepts an entry of any type.
    Lexicon(Option<NswTypeId>),
    Not(Box<Condition>),
}

impl Condition {
    fn matches(&self, token: &str, classes: &[HashSet<String>], lexicon: &Lexicon) -> bool {
        match self {
            Condition::Regex(re) => re.is_match(token),
            Condition::Literal(lit) => lit == token,
            Condition::Class(i) => classes[*i].contains(token),
            Condition::Lexicon(ty) => lexicon.matches_type(token, *ty),
            Condition::Not(inner) => !inner.matches(token, classes, lexicon),
        }
    }
}

/// Conjunction of conditions on one token.
#[derive(Debug, Clone)]
struct Element(Vec<Condition>);

#[derive(Debug, Clone)]
pub struct Rule {
    pub priority: i32,
    pub nsw_type: NswTypeId,
    /// Line in the source file, for diagnostics.
    pub line: usize,
    pub pattern: String,
    elements: Vec<Element>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct RuleSet {
    rules: Vec<Rule>,
    classes: Vec<HashSet<String>>,
    lexicon_priority: [i32; 3],
}

impl RuleSet {
    pub fn builtin(taxonomy: &Taxonomy) -> Self {
        Self::parse(DEFAULT_RULES, taxonomy).expect("shipped rule file is valid")
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn lexicon_priority(&self, superclass: Superclass) -> i32 {
        self.lexicon_priority[superclass as usize]
    }

    /// Whether `rule` matches the tokens at the start of `window`.
    pub fn rule_matches<S: AsRef<str>>(&self, rule: &Rule, window: &[S], lexicon: &Lexicon) -> bool {
        rule.elements.len() <= window.len()
            && rule.elements.iter().zip(window).all(|(el, tok)| {
                el.0.iter()
                    .all(|c| c.matches(tok.as_ref(), &self.classes, lexicon))
            })
    }

    /// NUMBER and COMBINED leaves that no rule or lexicon entry can produce.
    pub fn uncovered<'t>(&self, taxonomy: &'t Taxonomy, lexicon: &Lexicon) -> Vec<&'t str> {
        let mut covered: HashSet<NswTypeId> = self.rules.iter().map(|r| r.nsw_type).collect();
        covered.extend(lexicon.entries().iter().map(|e| e.nsw_type));
        taxonomy
            .types()
            .iter()
            .filter(|t| t.superclass != Superclass::String && !covered.contains(&t.id))
            .map(|t| t.name.as_str())
            .collect()
    }

    pub fn parse(source: &str, taxonomy: &Taxonomy) -> Result<Self> {
        let err = |line: usize, message: String| Error::Rules {
            line: Some(line),
            message,
        };

        let mut defines: HashMap<String, String> = HashMap::new();
        let mut class_index: HashMap<String, usize> = HashMap::new();
        let mut classes: Vec<HashSet<String>> = Vec::new();
        let mut lexicon_priority = [DEFAULT_LEXICON_PRIORITY; 3];
        let mut pending: Vec<(usize, i32, NswTypeId, String)> = Vec::new();

        for (idx, line) in source.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields[0] {
                "@define" => {
                    let [_, name, body] = fields[..] else {
                        return Err(err(lineno, "expected @define<TAB>NAME<TAB>regex".into()));
                    };
                    if !is_macro_name(name) {
                        return Err(err(lineno, format!("invalid macro name `{name}`")));
                    }
                    let body = expand(body, &defines).map_err(|m| err(lineno, m))?;
                    defines.insert(name.to_string(), body);
                }
                "@class" => {
                    let [_, name, words] = fields[..] else {
                        return Err(err(lineno, "expected @class<TAB>name<TAB>word word ...".into()));
                    };
                    if class_index.contains_key(name) {
                        return Err(err(lineno, format!("class `{name}` defined twice")));
                    }
                    class_index.insert(name.to_string(), classes.len());
                    classes.push(words.split_whitespace().map(String::from).collect());
                }
                "@lexicon_priority" => {
                    let [_, sc, prio] = fields[..] else {
                        return Err(err(lineno, "expected @lexicon_priority<TAB>SUPERCLASS<TAB>n".into()));
                    };
                    let sc: Superclass = sc.parse().map_err(|m: String| err(lineno, m))?;
                    lexicon_priority[sc as usize] = prio
                        .trim()
                        .parse()
                        .map_err(|_| err(lineno, format!("invalid priority `{prio}`")))?;
                }
                directive if directive.starts_with('@') => {
                    return Err(err(lineno, format!("unknown directive `{directive}`")));
                }
                _ => {
                    let [prio, type_name, pattern] = fields[..] else {
                        return Err(err(lineno, "expected priority<TAB>type_name<TAB>pattern".into()));
                    };
                    let priority: i32 = prio
                        .trim()
                        .parse()
                        .map_err(|_| err(lineno, format!("invalid priority `{prio}`")))?;
                    let nsw_type = taxonomy
                        .by_name(type_name.trim())
                        .ok_or_else(|| err(lineno, format!("unknown NSW type `{type_name}`")))?;
                    let pattern = expand(pattern, &defines).map_err(|m| err(lineno, m))?;
                    pending.push((lineno, priority, nsw_type, pattern));
                }
            }
        }

        // Rules are compiled after all classes are known.
        let mut rules = Vec::with_capacity(pending.len());
        for (lineno, priority, nsw_type, pattern) in pending {
            let elements = pattern
                .split(' ')
                .filter(|s| !s.is_empty())
                .map(|el| compile_element(el, taxonomy, &class_index))
                .collect::<std::result::Result<Vec<_>, String>>()
                .map_err(|m| err(lineno, m))?;
            if elements.is_empty() || elements.len() > MAX_PATTERN_TOKENS {
                return Err(err(
                    lineno,
                    format!("pattern must span 1..={MAX_PATTERN_TOKENS} tokens, found {}", elements.len()),
                ));
            }
            rules.push(Rule {
                priority,
                nsw_type,
                line: lineno,
                pattern,
                elements,
            });
        }

        Ok(RuleSet {
            rules,
            classes,
            lexicon_priority,
        })
    }
}

fn is_macro_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_uppercase() || c == '_')
}

/// Replaces `{NAME}` with earlier @define bodies. Braces holding anything
/// other than a macro name (regex repetition such as `{2,4}`) and Unicode
/// classes (`\p{L}`) pass through.
fn expand(text: &str, defines: &HashMap<String, String>) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        match after.find('}') {
            Some(close) if is_macro_name(&after[..close]) && !out.ends_with("\\p") && !out.ends_with("\\P") => {
                let name = &after[..close];
                let body = defines.get(name).ok_or_else(|| format!("undefined macro `{{{name}}}`"))?;
                out.push_str(body);
                rest = &after[close + 1..];
            }
            _ => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    Ok(out)
}

fn compile_element(
    text: &str,
    taxonomy: &Taxonomy,
    classes: &HashMap<String, usize>,
) -> std::result::Result<Element, String> {
    text.split("&&").map(|c| compile_condition(c, taxonomy, classes)).collect::<std::result::Result<Vec<_>, _>>().map(Element)
}

fn compile_condition(
    text: &str,
    taxonomy: &Taxonomy,
    classes: &HashMap<String, usize>,
) -> std::result::Result<Condition, String> {
    if let Some(inner) = text.strip_prefix('!') {
        return Ok(Condition::Not(Box::new(compile_condition(inner, taxonomy, classes)?)));
    }
    let (kind, arg) = text
        .split_once(':')
        .ok_or_else(|| format!("element `{text}` lacks a kind prefix (re:, lit:, class:, lex:)"))?;
    match kind {
        "re" => Regex::new(&format!("^(?:{arg})$"))
            .map(Condition::Regex)
            .map_err(|e| format!("bad regex `{arg}`: {e}")),
        "lit" if !arg.is_empty() => Ok(Condition::Literal(arg.to_string())),
        "class" => classes
            .get(arg)
            .map(|&i| Condition::Class(i))
            .ok_or_else(|| format!("unknown class `{arg}`")),
        "lex" if arg == "*" => Ok(Condition::Lexicon(None)),
        "lex" => taxonomy
            .by_name(arg)
            .map(|t| Condition::Lexicon(Some(t)))
            .ok_or_else(|| format!("unknown NSW type `{arg}`")),
        _ => Err(format!("invalid element `{text}`")),
    }
}

/// Reads and compiles a rule file.
pub fn load_rules(path: impl AsRef<Path>, taxonomy: &Taxonomy) -> Result<RuleSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    RuleSet::parse(&text, taxonomy)
}
