//! Experimental encoder that keeps `Inv` nodes in the tree.
//!
//! An `Inv` node encodes its child, flips every bit and swaps the nibbles of
//! the final padding, instead of rewriting the tree first. Counters use the
//! plain arithmetic (a lex end lowers the lex nibble by one, a contrelex end
//! raises the contrelex nibble by one), which is only sound when no lex node
//! sits above a contrelex node. Not used by [`super::Encoder`].

use super::header::write_count_header;
use super::padding::{
    adjust_final_padding, empty_sequence_pattern, flip_bits, swap_final_nibbles, wrap_into,
    EmptyKind, PaddingAdjust, LEAF_FINAL_PADDING,
};
use super::primitive::write_primitive;
use super::EncodeError;
use crate::comparator::NanPolicy;
use crate::model::{
    check_element, expand_builtins, validate, ElementValue, EndKind, ItemRef, OrderNode, Primitive,
};

pub fn encode_direct(tree: &OrderNode, value: &ElementValue) -> Result<Vec<u8>, EncodeError> {
    validate(tree)?;
    check_element(tree, value)?;
    let tree = expand_builtins(tree);
    let mut out = Vec::new();
    write(&tree, value, 0, &mut out)?;
    Ok(out)
}

fn write(
    node: &OrderNode,
    value: &ElementValue,
    depth: u32,
    out: &mut Vec<u8>,
) -> Result<(), EncodeError> {
    match node {
        OrderNode::Finite(order) => {
            let raw = match value {
                ElementValue::Rank(r) => *r,
                ElementValue::Primitive(Primitive::Bool(b)) => u64::from(*b),
                _ => return Err(EncodeError::Internal("expected a rank".into())),
            };
            let bytes = order.position(raw).to_be_bytes();
            wrap_into(out, &bytes[8 - order.width()..], LEAF_FINAL_PADDING);
        }
        OrderNode::Builtin(kind) => {
            let ElementValue::Primitive(p) = value else {
                return Err(EncodeError::Internal("expected a primitive".into()));
            };
            let mut raw = Vec::new();
            write_primitive(&mut raw, kind, p, false, NanPolicy::Reject)?;
            wrap_into(out, &raw, LEAF_FINAL_PADDING);
        }
        OrderNode::Inv(child) => {
            let start = out.len();
            write(child, value, depth, out)?;
            flip_bits(&mut out[start..]);
            swap_final_nibbles(&mut out[start..]);
        }
        OrderNode::Sum(sum) => {
            let ElementValue::SumPair(m, sub) = value else {
                return Err(EncodeError::Internal("expected a sum pair".into()));
            };
            let bytes = sum.master.position(*m).to_be_bytes();
            wrap_into(out, &bytes[8 - sum.master.width()..], LEAF_FINAL_PADDING);
            write(&sum.cases[*m as usize], sub, depth + 1, out)?;
        }
        OrderNode::Seq(seq) => {
            let items = value
                .items()
                .ok_or_else(|| EncodeError::Internal("expected a sequence".into()))?;
            let n = items.len();
            let kind = seq.op.end_kind();
            if kind == EndKind::Counted {
                let mut header = Vec::new();
                write_count_header(&mut header, n as u64);
                if seq.op.is_contre() {
                    flip_bits(&mut header);
                }
                wrap_into(out, &header, LEAF_FINAL_PADDING);
            } else if n == 0 {
                let empty = if kind == EndKind::ContreLex {
                    EmptyKind::ContreLex
                } else {
                    EmptyKind::Lex
                };
                out.extend_from_slice(&empty_sequence_pattern(empty, depth)?);
                return Ok(());
            }
            for k in 0..n {
                let rank = if seq.op.is_anti() { n - 1 - k } else { k };
                let order = seq.item_order_at(rank as u64)?;
                let item = match items.get(rank) {
                    ItemRef::Value(v) => v.clone(),
                    ItemRef::Byte(b) => ElementValue::Rank(u64::from(b)),
                };
                write(order, &item, depth + 1, out)?;
            }
            match kind {
                EndKind::Lex => adjust_final_padding(out, PaddingAdjust::DecLex)?,
                EndKind::ContreLex => adjust_final_padding(out, PaddingAdjust::IncContreLex)?,
                EndKind::Counted | EndKind::Fixed => {}
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparator::compare;
    use crate::encoder::{encode, Mode};
    use crate::model::Operator;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::cmp::Ordering;

    fn random_bytes(rng: &mut ChaCha8Rng) -> ElementValue {
        let len = rng.random_range(0..4);
        ElementValue::bytes(
            (0..len)
                .map(|_| rng.random_range(b'a'..b'd'))
                .collect::<Vec<u8>>(),
        )
    }

    #[test]
    fn inverted_leaf_under_lex_agrees_with_rewrite() {
        let tree = OrderNode::uniform(Operator::Lex, 0, OrderNode::finite(256).inv());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2_000 {
            let (x, y) = (random_bytes(&mut rng), random_bytes(&mut rng));
            let direct = encode_direct(&tree, &x)
                .unwrap()
                .cmp(&encode_direct(&tree, &y).unwrap());
            let rewritten = encode(&tree, &x, Mode::Padded)
                .unwrap()
                .cmp(&encode(&tree, &y, Mode::Padded).unwrap());
            assert_eq!(direct, rewritten, "{x:?} {y:?}");
            assert_eq!(direct, compare(&tree, &x, &y).unwrap());
        }
    }

    /// Plain counter arithmetic breaks with a lex node above a contrelex node.
    #[test]
    fn plain_counters_fail_under_lex_over_contrelex() {
        let tree = OrderNode::uniform(
            Operator::Lex,
            0,
            OrderNode::uniform(Operator::ContreLex, 0, OrderNode::finite(256)),
        );
        let x = ElementValue::sequence([ElementValue::bytes(*b"a")]);
        let y = ElementValue::sequence([ElementValue::bytes(*b"ab")]);
        assert_eq!(compare(&tree, &x, &y).unwrap(), Ordering::Greater);

        let (px, py) = (
            encode_direct(&tree, &x).unwrap(),
            encode_direct(&tree, &y).unwrap(),
        );
        assert_eq!(px, [0xF0, 0x61, 0xD1]);
        assert_eq!(px.cmp(&py), Ordering::Less);

        let (kx, ky) = (
            encode(&tree, &x, Mode::Padded).unwrap(),
            encode(&tree, &y, Mode::Padded).unwrap(),
        );
        assert_eq!(kx.cmp(&ky), Ordering::Greater);
    }
}
