//! Reference orderings of short binary strings, checked both with the
//! comparator and by sorting encoded keys.
//!
//! File format, one directive per line (`#` starts a comment):
//!
//! ```text
//! table <name>
//! order <order text>      one or more per column
//! expect <string> ...     closes the column; ε is the empty string
//! ```

use std::cmp::Ordering;

use thiserror::Error;

use crate::comparator::compare;
use crate::encoder::{encode, Mode};
use crate::model::{ElementValue, OrderNode};
use crate::tsodl::{parse, ParseError};

/// The built-in tables.
pub const BINARY_STRING_TABLES: &str = include_str!("../golden/binary_strings.txt");

#[derive(Clone, Debug, PartialEq)]
pub struct GoldenColumn {
    pub table: String,
    /// 1-based within the table.
    pub column: usize,
    pub orders: Vec<(String, OrderNode)>,
    pub expected: Vec<String>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GoldenError {
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Order {
        line: usize,
        #[source]
        source: ParseError,
    },
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenColumn>, GoldenError> {
    let mut columns = Vec::new();
    let mut table: Option<String> = None;
    let mut column = 0;
    let mut orders = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (directive, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let rest = rest.trim();
        let format = |reason: &str| GoldenError::Format {
            line,
            reason: reason.into(),
        };
        match directive {
            "table" => {
                if !orders.is_empty() {
                    return Err(format("orders without an `expect` line"));
                }
                if rest.is_empty() {
                    return Err(format("table needs a name"));
                }
                table = Some(rest.to_string());
                column = 0;
            }
            "order" => {
                if table.is_none() {
                    return Err(format("`order` before any `table`"));
                }
                let tree = parse(rest).map_err(|source| GoldenError::Order { line, source })?;
                orders.push((rest.to_string(), tree));
            }
            "expect" => {
                let Some(table) = &table else {
                    return Err(format("`expect` before any `table`"));
                };
                if orders.is_empty() {
                    return Err(format("`expect` without an `order`"));
                }
                let expected: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if expected
                    .iter()
                    .any(|s| s != "ε" && !s.bytes().all(|b| b == b'0' || b == b'1'))
                {
                    return Err(format("expected strings are binary digits or ε"));
                }
                column += 1;
                columns.push(GoldenColumn {
                    table: table.clone(),
                    column,
                    orders: std::mem::take(&mut orders),
                    expected,
                });
            }
            other => return Err(format(&format!("unknown directive `{other}`"))),
        }
    }
    if !orders.is_empty() {
        return Err(GoldenError::Format {
            line: text.lines().count(),
            reason: "orders without an `expect` line".into(),
        });
    }
    Ok(columns)
}

/// `"0110"` as a sequence of two-symbol ranks; `"ε"` is empty.
pub fn binary_string(s: &str) -> ElementValue {
    let digits = if s == "ε" { "" } else { s };
    ElementValue::sequence(
        digits
            .bytes()
            .map(|c| ElementValue::Rank(u64::from(c - b'0'))),
    )
}

/// Outcome for one order of one column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnCheck {
    pub table: String,
    pub column: usize,
    pub order: String,
    pub oracle: Vec<String>,
    pub pipeline: Vec<String>,
    /// Positions where the oracle ordering differs from the expected one.
    pub oracle_mismatches: usize,
    pub pipeline_mismatches: usize,
    /// Encoding failures, if any.
    pub error: Option<String>,
}

impl ColumnCheck {
    pub fn passed(&self) -> bool {
        self.oracle_mismatches == 0 && self.pipeline_mismatches == 0 && self.error.is_none()
    }
}

fn mismatches(got: &[String], expected: &[String]) -> usize {
    let differing = got.iter().zip(expected).filter(|(a, b)| a != b).count();
    differing + got.len().abs_diff(expected.len())
}

/// Sorts the column's strings under every listed order, once with the
/// comparator and once by encoded keys.
pub fn check_column(column: &GoldenColumn) -> Vec<ColumnCheck> {
    column
        .orders
        .iter()
        .map(|(text, tree)| {
            let mut error = None;
            let mut oracle = column.expected.clone();
            oracle.sort_by(|a, b| {
                compare(tree, &binary_string(a), &binary_string(b)).unwrap_or_else(|e| {
                    error.get_or_insert_with(|| e.to_string());
                    Ordering::Equal
                })
            });
            let mut keyed = Vec::new();
            for s in &column.expected {
                match encode(tree, &binary_string(s), Mode::Padded) {
                    Ok(key) => keyed.push((key, s.clone())),
                    Err(e) => {
                        error.get_or_insert_with(|| e.to_string());
                    }
                }
            }
            keyed.sort();
            let pipeline: Vec<String> = keyed.into_iter().map(|(_, s)| s).collect();
            ColumnCheck {
                table: column.table.clone(),
                column: column.column,
                order: text.clone(),
                oracle_mismatches: mismatches(&oracle, &column.expected),
                pipeline_mismatches: mismatches(&pipeline, &column.expected),
                oracle,
                pipeline,
                error,
            }
        })
        .collect()
}
