use super::{Builtin, FiniteOrder, Operator, OrderNode, SeqOp, SumOrder};

/// Moves every `Inv` down to the leaves using the contre identities.
///
/// `Inv` over a finite order becomes a reversed enumeration; `Inv` over a
/// builtin stays in place as a leaf flag for the encoder. Idempotent.
pub fn push_inv_to_leaves(tree: &OrderNode) -> OrderNode {
    push(tree, false)
}

fn push(node: &OrderNode, inverted: bool) -> OrderNode {
    match node {
        OrderNode::Inv(child) => push(child, !inverted),
        OrderNode::Finite(order) if inverted => OrderNode::Finite(order.reversed()),
        OrderNode::Finite(_) => node.clone(),
        OrderNode::Builtin(_) if inverted => node.clone().inv(),
        OrderNode::Builtin(_) => node.clone(),
        OrderNode::Seq(seq) => OrderNode::Seq(SeqOp {
            op: if inverted { seq.op.contre() } else { seq.op },
            min_len: seq.min_len,
            max_len: seq.max_len,
            prelude: seq.prelude.iter().map(|c| push(c, inverted)).collect(),
            period: seq.period.iter().map(|c| push(c, inverted)).collect(),
        }),
        OrderNode::Sum(sum) => OrderNode::Sum(SumOrder {
            master: if inverted {
                sum.master.reversed()
            } else {
                sum.master.clone()
            },
            cases: sum.cases.iter().map(|c| push(c, inverted)).collect(),
        }),
    }
}

/// Rewrites `bytes` into a lex sequence of 256-symbol finite orders and
/// `bool` into a two-symbol finite order. Idempotent.
pub fn expand_builtins(tree: &OrderNode) -> OrderNode {
    match tree {
        OrderNode::Builtin(Builtin::Bytes(enumeration)) => OrderNode::uniform(
            Operator::Lex,
            0,
            OrderNode::Finite(FiniteOrder {
                cardinality: 256,
                enumeration: enumeration.clone(),
            }),
        ),
        OrderNode::Builtin(Builtin::Bool) => OrderNode::finite(2),
        OrderNode::Builtin(_) | OrderNode::Finite(_) => tree.clone(),
        OrderNode::Inv(child) => expand_builtins(child).inv(),
        OrderNode::Seq(seq) => OrderNode::Seq(SeqOp {
            prelude: seq.prelude.iter().map(expand_builtins).collect(),
            period: seq.period.iter().map(expand_builtins).collect(),
            ..seq.clone()
        }),
        OrderNode::Sum(sum) => OrderNode::Sum(SumOrder {
            master: sum.master.clone(),
            cases: sum.cases.iter().map(expand_builtins).collect(),
        }),
    }
}
