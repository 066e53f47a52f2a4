use super::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum TokenKind {
    /// Lowercased identifier or keyword.
    Ident(String),
    Int(String),
    Hex(Vec<u8>),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Equals,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("`{name}`"),
            TokenKind::Int(digits) => format!("`{digits}`"),
            TokenKind::Hex(_) => "hex list".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Equals => "`=`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut cursor = Cursor {
        text,
        offset: 0,
        line: 1,
        column: 1,
    };
    loop {
        cursor.skip_trivia();
        let span = cursor.span();
        let Some(c) = cursor.peek() else {
            tokens.push(Token {
                kind: TokenKind::Eof,
                span,
            });
            return Ok(tokens);
        };
        let kind = match c {
            '(' => cursor.single(TokenKind::LParen),
            ')' => cursor.single(TokenKind::RParen),
            '[' => cursor.single(TokenKind::LBracket),
            ']' => cursor.single(TokenKind::RBracket),
            ',' => cursor.single(TokenKind::Comma),
            '=' => cursor.single(TokenKind::Equals),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let word = cursor.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                TokenKind::Ident(word.to_ascii_lowercase())
            }
            '0' if matches!(cursor.peek_second(), Some('x' | 'X')) => {
                cursor.bump();
                cursor.bump();
                let digits = cursor.take_while(|c| c.is_ascii_alphanumeric());
                TokenKind::Hex(parse_hex(digits, span)?)
            }
            c if c.is_ascii_digit() => {
                let digits = cursor.take_while(|c| c.is_ascii_alphanumeric());
                if !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(ParseError::syntax(
                        span,
                        "an integer",
                        format!("`{digits}`"),
                    ));
                }
                TokenKind::Int(digits.to_string())
            }
            other => {
                return Err(ParseError::syntax(
                    span,
                    "a keyword, number or punctuation",
                    format!("`{other}`"),
                ))
            }
        };
        tokens.push(Token { kind, span });
    }
}

fn parse_hex(digits: &str, span: SourceSpan) -> Result<Vec<u8>, ParseError> {
    let bad = || {
        ParseError::syntax(
            span,
            "an even number of hex digits",
            format!("`0x{digits}`"),
        )
    };
    if digits.is_empty() || digits.len() % 2 != 0 || !digits.bytes().all(|b| b.is_ascii_hexdigit())
    {
        return Err(bad());
    }
    (0..digits.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&digits[i..i + 2], 16).map_err(|_| bad()))
        .collect()
}

struct Cursor<'a> {
    text: &'a str,
    offset: usize,
    line: u32,
    column: u32,
}

impl<'a> Cursor<'a> {
    fn span(&self) -> SourceSpan {
        SourceSpan {
            line: self.line,
            column: self.column,
            offset: self.offset,
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.offset..].chars().next()
    }

    fn peek_second(&self) -> Option<char> {
        self.text[self.offset..].chars().nth(1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn single(&mut self, kind: TokenKind) -> TokenKind {
        self.bump();
        kind
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.offset;
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
        &self.text[start..self.offset]
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.peek_second() == Some('/') => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }
}
