use std::collections::HashMap;
use std::sync::Arc;

use super::lexer::{tokenize, Token, TokenKind};
use super::{ParseError, SourceSpan};
use crate::model::{
    collation, validate, Builtin, Enumeration, FiniteOrder, MaxLen, NodePath, Operator, OrderNode,
};

/// Deepest bracket nesting accepted; far above what validation admits.
const MAX_NESTING: usize = 256;

/// Parses and validates an order.
pub fn parse(text: &str) -> Result<OrderNode, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        spans: HashMap::new(),
        nesting: 0,
    };
    let tree = parser.node(NodePath::default())?;
    parser.expect(TokenKind::Eof, "end of input")?;
    if let Err(err) = validate(&tree) {
        let span = err
            .path()
            .and_then(|path| parser.spans.get(path))
            .copied()
            .unwrap_or_else(|| parser.tokens[0].span);
        return Err(ParseError::Validation { span, source: err });
    }
    Ok(tree)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    spans: HashMap<NodePath, SourceSpan>,
    nesting: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let token = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        token
    }

    fn error(&self, expected: &str) -> ParseError {
        let token = self.peek();
        ParseError::syntax(token.span, expected, token.kind.describe())
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.next())
        } else {
            Err(self.error(expected))
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.next();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        match &self.peek().kind {
            TokenKind::Ident(name) if name == word => {
                self.next();
                Ok(())
            }
            _ => Err(self.error(&format!("`{word}`"))),
        }
    }

    fn int(&mut self) -> Result<u64, ParseError> {
        let token = self.peek().clone();
        match &token.kind {
            TokenKind::Int(digits) => {
                let value = digits.parse::<u64>().map_err(|_| {
                    ParseError::syntax(token.span, "an integer below 2^64", format!("`{digits}`"))
                })?;
                self.next();
                Ok(value)
            }
            _ => Err(self.error("an integer")),
        }
    }

    fn open(&mut self) -> Result<(), ParseError> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            return Err(self.error("less deeply nested input"));
        }
        self.expect(TokenKind::LParen, "`(`").map(drop)
    }

    fn close(&mut self) -> Result<(), ParseError> {
        self.nesting -= 1;
        self.expect(TokenKind::RParen, "`)`").map(drop)
    }

    fn node(&mut self, path: NodePath) -> Result<OrderNode, ParseError> {
        let start = self.peek().clone();
        let TokenKind::Ident(name) = &start.kind else {
            return Err(self.error("an order"));
        };
        self.spans.insert(path.clone(), start.span);
        let name = name.clone();
        if let Some(op) = Operator::from_name(&name) {
            self.next();
            return self.seqop(op, path);
        }
        match name.as_str() {
            "finite" => Ok(OrderNode::Finite(self.finite()?)),
            "inv" => {
                self.next();
                self.open()?;
                let child = self.node(path.child(0))?;
                self.close()?;
                Ok(child.inv())
            }
            "sum" => {
                self.next();
                self.open()?;
                let master = self.finite()?;
                self.expect(TokenKind::Comma, "`,`")?;
                self.open()?;
                let cases = self.nodes(&path, 0, &TokenKind::RParen)?;
                self.close()?;
                self.close()?;
                Ok(OrderNode::sum(master, cases))
            }
            _ => self.builtin(),
        }
    }

    fn builtin(&mut self) -> Result<OrderNode, ParseError> {
        let token = self.peek().clone();
        let TokenKind::Ident(name) = &token.kind else {
            return Err(self.error("an order"));
        };
        let kind = match name.as_str() {
            "uint8" => Builtin::UInt8,
            "uint16" => Builtin::UInt16,
            "uint32" => Builtin::UInt32,
            "uint64" => Builtin::UInt64,
            "int8" => Builtin::Int8,
            "int16" => Builtin::Int16,
            "int32" => Builtin::Int32,
            "int64" => Builtin::Int64,
            "float32" => Builtin::Float32,
            "float64" => Builtin::Float64,
            "bool" => Builtin::Bool,
            "rational" => Builtin::Rational,
            "bytes" => Builtin::Bytes(Enumeration::Natural),
            _ => return Err(self.error("an order")),
        };
        self.next();
        let kind = match kind {
            Builtin::Bytes(_) if self.peek().kind == TokenKind::LParen => {
                self.open()?;
                let enumeration = self.collation(256)?;
                self.close()?;
                Builtin::Bytes(enumeration)
            }
            kind => kind,
        };
        let node = OrderNode::Builtin(kind);
        if matches!(&self.peek().kind, TokenKind::Ident(w) if w == "desc") {
            self.next();
            return Ok(node.inv());
        }
        Ok(node)
    }

    /// `collation = name-or-hex`, for an order of `k` symbols.
    fn collation(&mut self, k: u64) -> Result<Enumeration, ParseError> {
        self.keyword("collation")?;
        self.expect(TokenKind::Equals, "`=`")?;
        let token = self.next();
        match token.kind {
            TokenKind::Ident(name) => match name.as_str() {
                "identity" => Ok(Enumeration::Natural),
                "reverse" => Ok(Enumeration::Reversed),
                "ascii" if k == 256 => Ok(Enumeration::Table(collation::ascii())),
                _ => Err(ParseError::syntax(
                    token.span,
                    if k == 256 {
                        "`identity`, `reverse`, `ascii` or a hex list"
                    } else {
                        "`identity`, `reverse` or a hex list"
                    },
                    format!("`{name}`"),
                )),
            },
            TokenKind::Hex(bytes) => Ok(Enumeration::Table(Arc::from(bytes))),
            other => Err(ParseError::syntax(
                token.span,
                "a collation",
                other.describe(),
            )),
        }
    }

    fn finite(&mut self) -> Result<FiniteOrder, ParseError> {
        self.keyword("finite")?;
        self.open()?;
        let cardinality = self.int()?;
        let enumeration = if self.eat(&TokenKind::Comma) {
            self.collation(cardinality)?
        } else {
            Enumeration::Natural
        };
        self.close()?;
        Ok(FiniteOrder {
            cardinality,
            enumeration,
        })
    }

    fn seqop(&mut self, op: Operator, path: NodePath) -> Result<OrderNode, ParseError> {
        self.open()?;
        let min_len = self.int()?;
        self.expect(TokenKind::Comma, "`,`")?;
        let max_len = if matches!(&self.peek().kind, TokenKind::Ident(w) if w == "omega") {
            self.next();
            MaxLen::Omega
        } else {
            MaxLen::Finite(
                self.int()
                    .map_err(|_| self.error("an integer or `omega`"))?,
            )
        };
        self.expect(TokenKind::Comma, "`,`")?;
        self.open()?;
        let mut prelude = Vec::new();
        if !matches!(self.peek().kind, TokenKind::LBracket | TokenKind::RParen) {
            prelude.push(self.node(path.child(0))?);
            loop {
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
                if self.peek().kind == TokenKind::LBracket {
                    break;
                }
                prelude.push(self.node(path.child(prelude.len()))?);
            }
        }
        let mut period = Vec::new();
        if self.peek().kind == TokenKind::LBracket {
            self.nesting += 1;
            if self.nesting > MAX_NESTING {
                return Err(self.error("less deeply nested input"));
            }
            self.next();
            period = self.nodes(&path, prelude.len(), &TokenKind::RBracket)?;
            self.nesting -= 1;
            self.expect(TokenKind::RBracket, "`]`")?;
        }
        self.close()?;
        self.close()?;
        Ok(OrderNode::seq(op, min_len, max_len, prelude, period))
    }

    /// Comma-separated nodes up to `end` (not consumed), numbered from `first`.
    fn nodes(
        &mut self,
        parent: &NodePath,
        first: usize,
        end: &TokenKind,
    ) -> Result<Vec<OrderNode>, ParseError> {
        let mut nodes = Vec::new();
        if &self.peek().kind == end {
            return Ok(nodes);
        }
        loop {
            nodes.push(self.node(parent.child(first + nodes.len()))?);
            if !self.eat(&TokenKind::Comma) {
                return Ok(nodes);
            }
        }
    }
}
