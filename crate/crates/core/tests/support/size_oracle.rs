//! Independent count of the data bytes an element encodes to; a padded key
//! is three times as long.

use nextify::model::Items;
use nextify::{Builtin, ElementValue, Operator, OrderNode, Primitive};

/// Data bytes an element must produce, counted from the definitions.
pub fn data_bytes(node: &OrderNode, value: &ElementValue) -> usize {
    // Bytes needed for n, at least one.
    fn value_bytes(n: u64) -> usize {
        let mut b = 1;
        while b < 8 && n >> (8 * b) != 0 {
            b += 1;
        }
        b
    }
    fn width(k: u64) -> usize {
        value_bytes(k - 1)
    }
    fn header(n: u64) -> usize {
        2 + value_bytes(n)
    }
    fn items_of(value: &ElementValue) -> Vec<ElementValue> {
        match value.items().expect("sequence") {
            Items::Values(v) => v.to_vec(),
            Items::Bytes(b) => b.iter().map(|&x| ElementValue::Rank(x.into())).collect(),
        }
    }
    match node {
        OrderNode::Finite(order) => width(order.cardinality),
        OrderNode::Inv(child) => data_bytes(child, value),
        OrderNode::Builtin(Builtin::Bytes(_)) => {
            let n = value.items().expect("bytes").len();
            n.max(1)
        }
        OrderNode::Builtin(Builtin::Rational) => {
            let ElementValue::Primitive(Primitive::Rational(r)) = value else {
                panic!("rational expected")
            };
            let (mut a, mut b) = (r.num.unsigned_abs(), r.den);
            let mut total = 2; // sign byte and the +inf terminator
            loop {
                total += 1 + header(a / b);
                if a % b == 0 {
                    break total;
                }
                (a, b) = (b, a % b);
            }
        }
        OrderNode::Builtin(kind) => kind.fixed_width().expect("fixed width"),
        OrderNode::Seq(seq) => {
            let items = items_of(value);
            let body: usize = items
                .iter()
                .enumerate()
                .map(|(r, v)| data_bytes(seq.item_order_at(r as u64).unwrap(), v))
                .sum();
            match seq.op {
                Operator::Hierar
                | Operator::ContreHierar
                | Operator::AntiHierar
                | Operator::AntiContreHierar => header(items.len() as u64) + body,
                _ if items.is_empty() => 1,
                _ => body,
            }
        }
        OrderNode::Sum(sum) => {
            let ElementValue::SumPair(m, sub) = value else {
                panic!("sum pair expected")
            };
            width(sum.master.cardinality) + data_bytes(&sum.cases[*m as usize], sub)
        }
    }
}
