//! A tree with every `Inv` pushed to the leaves, annotated with the padding
//! values each node writes.
//!
//! The final padding of a leaf records which of its lex/contrelex ancestors
//! end at the same byte. With ancestors `t1..tm` (nearest first), `L` of them
//! lex, the value once `t1..th` have ended is
//!
//! ```text
//! hi = 14 - L + [t(h+1) is lex] * (lex nodes among t(h+1)..tm)
//! lo = contrelex nodes among t1..th
//! ```
//!
//! Whenever `x` ends at `th'` and `y` only at `th` (`h < h'`), `t(h+1)` is
//! where `x` is a proper prefix of `y`, and this ranking puts `x` first
//! exactly when `t(h+1)` is lex. Going from `h - 1` to `h` depends only on
//! `th` and its ancestors, so each node stores a fixed nibble shift.
//! Without a lex node above a contrelex node this is plain
//! "lex decrements, contrelex increments".

use std::sync::Arc;

use super::padding::{empty_sequence_pattern, EmptyKind};
use super::EncodeError;
use crate::model::{Builtin, EndKind, FiniteOrder, MaxLen, Operator, OrderNode, SeqOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Lex,
    ContreLex,
}

#[derive(Clone, Debug)]
pub(crate) enum Plan {
    Finite {
        order: FiniteOrder,
        width: usize,
        final_padding: u8,
    },
    Builtin {
        kind: Builtin,
        inverted: bool,
        final_padding: u8,
    },
    Seq(Arc<SeqPlan>),
    Sum {
        master: FiniteOrder,
        width: usize,
        final_padding: u8,
        cases: Vec<Plan>,
    },
}

#[derive(Debug)]
pub(crate) struct SeqPlan {
    pub op: Operator,
    pub min_len: u64,
    pub max_len: MaxLen,
    pub prelude: Vec<Plan>,
    pub period: Vec<Plan>,
    /// Marker triple written for an empty lex/contrelex/next sequence.
    pub empty: [u8; 3],
    /// Final padding of the length header of a counted sequence.
    pub header_padding: u8,
    /// Nibble shifts applied to the last byte when a non-empty sequence ends.
    pub end_shift: (i8, i8),
}

impl SeqPlan {
    pub fn item(&self, rank: usize) -> &Plan {
        match self.prelude.get(rank) {
            Some(plan) => plan,
            None => &self.period[(rank - self.prelude.len()) % self.period.len()],
        }
    }
}

/// Compiles a tree whose `Inv` nodes sit only directly above builtins.
pub(crate) fn compile(tree: &OrderNode) -> Result<Plan, EncodeError> {
    build(tree, &[], 0)
}

fn final_padding(ancestors: &[Kind], base: u8) -> u8 {
    let lex = ancestors.iter().filter(|&&k| k == Kind::Lex).count() as u8;
    let hi = if ancestors.first() == Some(&Kind::Lex) {
        base
    } else {
        base - lex
    };
    hi << 4
}

fn end_shift(kind: Kind, ancestors: &[Kind]) -> (i8, i8) {
    let lex_above = ancestors.iter().filter(|&&k| k == Kind::Lex).count() as i8;
    let next_is_lex = ancestors.first() == Some(&Kind::Lex);
    match (kind, next_is_lex) {
        (Kind::Lex, true) => (-1, 0),
        (Kind::Lex, false) => (-1 - lex_above, 0),
        (Kind::ContreLex, true) => (lex_above, 1),
        (Kind::ContreLex, false) => (0, 1),
    }
}

fn build(node: &OrderNode, ancestors: &[Kind], depth: u32) -> Result<Plan, EncodeError> {
    let leaf_padding = final_padding(ancestors, 14);
    match node {
        OrderNode::Finite(order) => Ok(Plan::Finite {
            order: order.clone(),
            width: order.width(),
            final_padding: leaf_padding,
        }),
        OrderNode::Builtin(kind) => Ok(Plan::Builtin {
            kind: kind.clone(),
            inverted: false,
            final_padding: leaf_padding,
        }),
        OrderNode::Inv(child) => match child.as_ref() {
            OrderNode::Builtin(kind) => Ok(Plan::Builtin {
                kind: kind.clone(),
                inverted: true,
                final_padding: leaf_padding,
            }),
            _ => Err(EncodeError::Internal(
                "Inv above a non-builtin after rewriting".into(),
            )),
        },
        OrderNode::Seq(seq) => build_seq(seq, ancestors, depth),
        OrderNode::Sum(sum) => Ok(Plan::Sum {
            master: sum.master.clone(),
            width: sum.master.width(),
            final_padding: leaf_padding,
            cases: sum
                .cases
                .iter()
                .map(|case| build(case, ancestors, depth + 1))
                .collect::<Result<_, _>>()?,
        }),
    }
}

fn build_seq(seq: &SeqOp, ancestors: &[Kind], depth: u32) -> Result<Plan, EncodeError> {
    let kind = match seq.op.end_kind() {
        EndKind::Lex => Some(Kind::Lex),
        EndKind::ContreLex => Some(Kind::ContreLex),
        EndKind::Counted | EndKind::Fixed => None,
    };
    let mut empty = empty_sequence_pattern(
        if kind == Some(Kind::ContreLex) {
            EmptyKind::ContreLex
        } else {
            EmptyKind::Lex
        },
        depth,
    )?;
    empty[2] = final_padding(ancestors, 15);

    let inner: Vec<Kind>;
    let (child_ancestors, end_shift) = match kind {
        Some(kind) => {
            inner = std::iter::once(kind)
                .chain(ancestors.iter().copied())
                .collect();
            (inner.as_slice(), end_shift(kind, ancestors))
        }
        None => (ancestors, (0, 0)),
    };
    let children = |nodes: &[OrderNode]| -> Result<Vec<Plan>, EncodeError> {
        nodes
            .iter()
            .map(|child| build(child, child_ancestors, depth + 1))
            .collect()
    };
    Ok(Plan::Seq(Arc::new(SeqPlan {
        op: seq.op,
        min_len: seq.min_len,
        max_len: seq.max_len,
        prelude: children(&seq.prelude)?,
        period: children(&seq.period)?,
        empty,
        header_padding: final_padding(ancestors, 14),
        end_shift,
    })))
}

/// Longest packed key of a fixed-length tree.
pub(crate) fn packed_width(plan: &Plan) -> Option<usize> {
    match plan {
        Plan::Finite { width, .. } => Some(*width),
        Plan::Builtin { kind, .. } => kind.fixed_width(),
        Plan::Seq(seq) => {
            if seq.max_len != MaxLen::Finite(seq.min_len + 1) {
                return None;
            }
            let mut total = 0usize;
            for rank in 0..seq.min_len as usize {
                total += packed_width(seq.item(rank))?;
            }
            Some(total)
        }
        Plan::Sum { width, cases, .. } => {
            let mut widest = 0;
            for case in cases {
                widest = widest.max(packed_width(case)?);
            }
            Some(width + widest)
        }
    }
}
