//! Process-wide instances of the shipped data files.

use std::sync::LazyLock;

use crate::lexer::NswLexer;
use crate::lexicon::Lexicon;
use crate::taxonomy::Taxonomy;

static LEXER: LazyLock<NswLexer> = LazyLock::new(NswLexer::builtin);

pub fn lexer() -> &'static NswLexer {
    &LEXER
}

pub fn taxonomy() -> &'static Taxonomy {
    &LEXER.taxonomy
}

pub fn lexicon() -> &'static Lexicon {
    &LEXER.lexicon
}
