//! Reference semantics: compares elements by executing the operator
//! definitions directly. Slow and simple on purpose; it is the oracle every
//! encoder test is checked against.

use std::cmp::Ordering;

use thiserror::Error;

use crate::model::{
    check_element, Builtin, ElementError, ElementValue, Enumeration, ItemRef, Items, Operator,
    OrderNode, Primitive, Rational, SeqOp,
};

/// What to do with NaN floats.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum NanPolicy {
    /// NaN is not an element of any float order.
    #[default]
    Reject,
    /// Every NaN is one value, above `+inf`.
    High,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CompareError {
    #[error("incompatible elements: {0}")]
    IncompatibleElements(#[from] ElementError),
    #[error("NaN is rejected by the current policy")]
    NanRejected,
}

/// First rank at which two sequences differ.
#[derive(Clone, Debug, PartialEq)]
pub struct Question {
    pub rank: u64,
    pub x: ElementValue,
    pub y: ElementValue,
}

pub fn compare(
    tree: &OrderNode,
    x: &ElementValue,
    y: &ElementValue,
) -> Result<Ordering, CompareError> {
    compare_with(tree, x, y, NanPolicy::Reject)
}

pub fn compare_with(
    tree: &OrderNode,
    x: &ElementValue,
    y: &ElementValue,
    nan: NanPolicy,
) -> Result<Ordering, CompareError> {
    check_element(tree, x)?;
    check_element(tree, y)?;
    cmp_node(tree, x, y, nan)
}

/// The question of `x` and `y` under the sequence node `seq`: the smallest
/// rank where their items differ, or `None` when one is a prefix of the other.
pub fn find_question(
    seq: &SeqOp,
    x: &ElementValue,
    y: &ElementValue,
) -> Result<Option<Question>, CompareError> {
    let node = OrderNode::Seq(seq.clone());
    check_element(&node, x)?;
    check_element(&node, y)?;
    let (a, b) = (items(x), items(y));
    Ok(
        question(seq, a, b, false, NanPolicy::High)?.map(|(rank, _)| Question {
            rank: rank as u64,
            x: a.get(rank).to_value(),
            y: b.get(rank).to_value(),
        }),
    )
}

fn items(value: &ElementValue) -> Items<'_> {
    // Shapes were checked by check_element.
    value.items().unwrap_or(Items::Values(&[]))
}

fn cmp_node(
    node: &OrderNode,
    x: &ElementValue,
    y: &ElementValue,
    nan: NanPolicy,
) -> Result<Ordering, CompareError> {
    match node {
        OrderNode::Finite(order) => Ok(order.position(rank(x)).cmp(&order.position(rank(y)))),
        OrderNode::Builtin(kind) => cmp_builtin(kind, x, y, nan),
        OrderNode::Inv(child) => Ok(cmp_node(child, x, y, nan)?.reverse()),
        OrderNode::Seq(seq) => cmp_seq(seq, items(x), items(y), nan),
        OrderNode::Sum(sum) => {
            let (ElementValue::SumPair(mx, sx), ElementValue::SumPair(my, sy)) = (x, y) else {
                unreachable!("shape checked")
            };
            match sum.master.position(*mx).cmp(&sum.master.position(*my)) {
                Ordering::Equal => cmp_node(&sum.cases[*mx as usize], sx, sy, nan),
                other => Ok(other),
            }
        }
    }
}

fn rank(value: &ElementValue) -> u64 {
    match value {
        ElementValue::Rank(r) => *r,
        ElementValue::Primitive(Primitive::Bool(b)) => u64::from(*b),
        _ => unreachable!("shape checked"),
    }
}

fn cmp_item(
    order: &OrderNode,
    a: ItemRef<'_>,
    b: ItemRef<'_>,
    nan: NanPolicy,
) -> Result<Ordering, CompareError> {
    match (a, b) {
        (ItemRef::Value(x), ItemRef::Value(y)) => cmp_node(order, x, y, nan),
        _ => cmp_node(order, &a.to_value(), &b.to_value(), nan),
    }
}

/// Rank and ordering of the first differing item pair, scanning from the
/// front or, for anti operators, from the back.
fn question(
    seq: &SeqOp,
    a: Items<'_>,
    b: Items<'_>,
    backward: bool,
    nan: NanPolicy,
) -> Result<Option<(usize, Ordering)>, CompareError> {
    let common = a.len().min(b.len());
    for k in 0..common {
        let (ia, ib) = if backward {
            (a.len() - 1 - k, b.len() - 1 - k)
        } else {
            (k, k)
        };
        let order = seq
            .item_order_at(ia as u64)
            .expect("rank admitted by check_element");
        let ord = cmp_item(order, a.get(ia), b.get(ib), nan)?;
        if ord != Ordering::Equal {
            return Ok(Some((k, ord)));
        }
    }
    Ok(None)
}

fn cmp_seq(
    seq: &SeqOp,
    a: Items<'_>,
    b: Items<'_>,
    nan: NanPolicy,
) -> Result<Ordering, CompareError> {
    let by_length = a.len().cmp(&b.len());
    let q = |nan| -> Result<Ordering, CompareError> {
        Ok(question(seq, a, b, seq.op.is_anti(), nan)?
            .map(|(_, ord)| ord)
            .unwrap_or(Ordering::Equal))
    };
    Ok(match seq.op {
        Operator::Next => q(nan)?,
        Operator::Lex | Operator::AntiLex => q(nan)?.then(by_length),
        Operator::ContreLex | Operator::AntiContreLex => q(nan)?.then(by_length.reverse()),
        Operator::Hierar | Operator::AntiHierar => by_length.then(q(nan)?),
        Operator::ContreHierar | Operator::AntiContreHierar => by_length.reverse().then(q(nan)?),
    })
}

fn cmp_float<F: Copy>(
    x: F,
    y: F,
    nan: NanPolicy,
    is_nan: fn(F) -> bool,
    total: fn(&F, &F) -> Ordering,
) -> Result<Ordering, CompareError> {
    match (is_nan(x), is_nan(y)) {
        (false, false) => Ok(total(&x, &y)),
        _ if nan == NanPolicy::Reject => Err(CompareError::NanRejected),
        (true, true) => Ok(Ordering::Equal),
        (true, false) => Ok(Ordering::Greater),
        (false, true) => Ok(Ordering::Less),
    }
}

pub(crate) fn cmp_rational(x: Rational, y: Rational) -> Ordering {
    (i128::from(x.num) * i128::from(y.den)).cmp(&(i128::from(y.num) * i128::from(x.den)))
}

fn byte_positions(enumeration: &Enumeration, value: &ElementValue) -> Vec<u64> {
    match value {
        ElementValue::Primitive(Primitive::Bytes(bytes)) => bytes
            .iter()
            .map(|&b| enumeration.position(256, u64::from(b)))
            .collect(),
        ElementValue::Sequence(items) => items
            .iter()
            .map(|item| enumeration.position(256, rank(item)))
            .collect(),
        _ => unreachable!("shape checked"),
    }
}

fn cmp_builtin(
    kind: &Builtin,
    x: &ElementValue,
    y: &ElementValue,
    nan: NanPolicy,
) -> Result<Ordering, CompareError> {
    if let Builtin::Bytes(enumeration) = kind {
        return Ok(byte_positions(enumeration, x).cmp(&byte_positions(enumeration, y)));
    }
    let (ElementValue::Primitive(px), ElementValue::Primitive(py)) = (x, y) else {
        unreachable!("shape checked")
    };
    Ok(match (px, py) {
        (Primitive::Unsigned(a), Primitive::Unsigned(b)) => a.cmp(b),
        (Primitive::Signed(a), Primitive::Signed(b)) => a.cmp(b),
        (Primitive::Bool(a), Primitive::Bool(b)) => a.cmp(b),
        (Primitive::F32(a), Primitive::F32(b)) => {
            cmp_float(*a, *b, nan, f32::is_nan, f32::total_cmp)?
        }
        (Primitive::F64(a), Primitive::F64(b)) => {
            cmp_float(*a, *b, nan, f64::is_nan, f64::total_cmp)?
        }
        (Primitive::Rational(a), Primitive::Rational(b)) => cmp_rational(*a, *b),
        _ => unreachable!("shape checked"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FiniteOrder, MaxLen};

    fn bits(s: &str) -> ElementValue {
        ElementValue::sequence(s.bytes().map(|c| ElementValue::Rank(u64::from(c - b'0'))))
    }

    fn sorted(op: Operator) -> Vec<&'static str> {
        let tree = OrderNode::seq(op, 0, MaxLen::Finite(3), vec![], vec![OrderNode::finite(2)]);
        let mut all = vec!["", "0", "1", "00", "01", "10", "11"];
        all.sort_by(|a, b| compare(&tree, &bits(a), &bits(b)).unwrap());
        all
    }

    #[test]
    fn binary_string_tables() {
        assert_eq!(
            sorted(Operator::Lex),
            ["", "0", "00", "01", "1", "10", "11"]
        );
        assert_eq!(
            sorted(Operator::ContreLex),
            ["00", "01", "0", "10", "11", "1", ""]
        );
        assert_eq!(
            sorted(Operator::Hierar),
            ["", "0", "1", "00", "01", "10", "11"]
        );
        assert_eq!(
            sorted(Operator::ContreHierar),
            ["00", "01", "10", "11", "0", "1", ""]
        );
        assert_eq!(
            sorted(Operator::AntiLex),
            ["", "0", "00", "10", "1", "01", "11"]
        );
    }

    #[test]
    fn questions() {
        let OrderNode::Seq(seq) = OrderNode::uniform(Operator::Lex, 0, OrderNode::finite(2)) else {
            unreachable!()
        };
        let q = find_question(&seq, &bits("01"), &bits("00"))
            .unwrap()
            .unwrap();
        assert_eq!(
            (q.rank, q.x, q.y),
            (1, ElementValue::Rank(1), ElementValue::Rank(0))
        );
        assert_eq!(find_question(&seq, &bits("0"), &bits("01")).unwrap(), None);
        assert_eq!(find_question(&seq, &bits("10"), &bits("10")).unwrap(), None);
        assert!(find_question(&seq, &bits("2"), &bits("0")).is_err());
    }

    #[test]
    fn signed_integers_as_sum() {
        let magnitude = OrderNode::uniform(Operator::Hierar, 0, OrderNode::finite(2));
        let tree = OrderNode::sum(
            FiniteOrder::new(2),
            vec![magnitude.clone().inv(), magnitude],
        );
        let minus_five = ElementValue::sum(0, bits("101"));
        let plus_zero = ElementValue::sum(1, bits(""));
        assert_eq!(
            compare(&tree, &minus_five, &plus_zero).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn unreduced_rationals_are_equal() {
        let tree = OrderNode::Builtin(Builtin::Rational);
        let r = |n, d| ElementValue::Primitive(Primitive::Rational(Rational::new(n, d)));
        assert_eq!(compare(&tree, &r(1, 2), &r(2, 4)).unwrap(), Ordering::Equal);
        assert_eq!(compare(&tree, &r(-1, 2), &r(0, 7)).unwrap(), Ordering::Less);
    }

    #[test]
    fn nan_policy() {
        let tree = OrderNode::Builtin(Builtin::Float64);
        let f = |v| ElementValue::Primitive(Primitive::F64(v));
        assert_eq!(
            compare(&tree, &f(f64::NAN), &f(1.0)),
            Err(CompareError::NanRejected)
        );
        assert_eq!(
            compare_with(&tree, &f(f64::NAN), &f(f64::INFINITY), NanPolicy::High).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            compare_with(&tree, &f(-f64::NAN), &f(f64::NAN), NanPolicy::High).unwrap(),
            Ordering::Equal
        );
        assert_eq!(compare(&tree, &f(-0.0), &f(0.0)).unwrap(), Ordering::Less);
    }

    #[test]
    fn bytes_and_expanded_bytes_agree() {
        let bytes = OrderNode::Builtin(Builtin::Bytes(Enumeration::Reversed));
        let expanded = crate::model::expand_builtins(&bytes);
        let (a, b) = (ElementValue::bytes(*b"ab"), ElementValue::bytes(*b"b"));
        assert_eq!(compare(&bytes, &a, &b).unwrap(), Ordering::Greater);
        assert_eq!(compare(&expanded, &a, &b).unwrap(), Ordering::Greater);
    }
}
