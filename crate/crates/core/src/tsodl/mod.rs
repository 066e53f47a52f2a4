//! A small language for writing orders down.
//!
//! ```text
//! node    := finite | builtin | inv | seqop | sum
//! finite  := "finite" "(" INT [ "," "collation" "=" collation ] ")"
//! builtin := ("uint8" | ... | "int64" | "float32" | "float64" | "bool" | "rational"
//!            | "bytes" [ "(" "collation" "=" collation ")" ]) [ "desc" ]
//! inv     := "inv" "(" node ")"
//! seqop   := OPNAME "(" INT "," (INT | "omega") "," "(" [ nodes ] [ [","] "[" nodes "]" ] ")" ")"
//! sum     := "sum" "(" finite "," "(" nodes ")" ")"
//! collation := "identity" | "reverse" | "ascii" | HEX
//! ```
//!
//! Keywords are case-insensitive, `//` starts a comment, `HEX` is `0x`
//! followed by one pair of hex digits per symbol (the position of symbol `r`
//! is byte `r`).

mod lexer;
mod parser;
mod serialize;

use std::fmt;

use thiserror::Error;

use crate::model::ModelError;

pub use parser::parse;
pub use serialize::serialize;

/// A position in the source text; line and column are 1-based, column counts
/// characters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub line: u32,
    pub column: u32,
    pub offset: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{span}: syntax error: expected {expected}, found {found}")]
    Syntax {
        span: SourceSpan,
        expected: String,
        found: String,
    },
    #[error("{span}: {source}")]
    Validation {
        span: SourceSpan,
        #[source]
        source: ModelError,
    },
}

impl ParseError {
    pub(crate) fn syntax(
        span: SourceSpan,
        expected: impl Into<String>,
        found: impl Into<String>,
    ) -> Self {
        ParseError::Syntax {
            span,
            expected: expected.into(),
            found: found.into(),
        }
    }

    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Syntax { span, .. } | ParseError::Validation { span, .. } => *span,
        }
    }
}
