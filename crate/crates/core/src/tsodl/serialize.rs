use std::fmt::Write;

use crate::model::{collation, Builtin, Enumeration, MaxLen, OrderNode};

/// Canonical text: lowercase keywords, `", "` separators, no comments.
/// `parse(serialize(t)) == t` for every valid tree.
pub fn serialize(tree: &OrderNode) -> String {
    let mut out = String::new();
    write_node(&mut out, tree);
    out
}

fn write_collation(out: &mut String, k: u64, enumeration: &Enumeration) {
    match enumeration {
        Enumeration::Natural => out.push_str("identity"),
        Enumeration::Reversed => out.push_str("reverse"),
        Enumeration::Table(table) if k == 256 && *table == collation::ascii() => {
            out.push_str("ascii")
        }
        Enumeration::Table(table) => {
            out.push_str("0x");
            for b in table.iter() {
                let _ = write!(out, "{b:02x}");
            }
        }
    }
}

fn write_list(out: &mut String, nodes: &[OrderNode]) {
    for (i, node) in nodes.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_node(out, node);
    }
}

fn write_node(out: &mut String, node: &OrderNode) {
    match node {
        OrderNode::Finite(order) => {
            let _ = write!(out, "finite({}", order.cardinality);
            if order.enumeration != Enumeration::Natural {
                out.push_str(", collation=");
                write_collation(out, order.cardinality, &order.enumeration);
            }
            out.push(')');
        }
        OrderNode::Builtin(kind) => {
            out.push_str(kind.name());
            if let Builtin::Bytes(enumeration) = kind {
                if *enumeration != Enumeration::Natural {
                    out.push_str("(collation=");
                    write_collation(out, 256, enumeration);
                    out.push(')');
                }
            }
        }
        OrderNode::Inv(child) => match child.as_ref() {
            OrderNode::Builtin(_) => {
                write_node(out, child);
                out.push_str(" desc");
            }
            _ => {
                out.push_str("inv(");
                write_node(out, child);
                out.push(')');
            }
        },
        OrderNode::Seq(seq) => {
            let _ = write!(out, "{}({}, ", seq.op.name(), seq.min_len);
            match seq.max_len {
                MaxLen::Finite(j) => {
                    let _ = write!(out, "{j}");
                }
                MaxLen::Omega => out.push_str("omega"),
            }
            out.push_str(", (");
            write_list(out, &seq.prelude);
            if !seq.period.is_empty() {
                if !seq.prelude.is_empty() {
                    out.push_str(", ");
                }
                out.push('[');
                write_list(out, &seq.period);
                out.push(']');
            }
            out.push_str("))");
        }
        OrderNode::Sum(sum) => {
            out.push_str("sum(");
            write_node(out, &OrderNode::Finite(sum.master.clone()));
            out.push_str(", (");
            write_list(out, &sum.cases);
            out.push_str("))");
        }
    }
}
