//! Seeded generators of random orders and elements for tests, self-tests and
//! benchmarks. Domains are kept small so that random pairs often share
//! prefixes or are equal.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::model::{
    collation, Builtin, ElementValue, Enumeration, FiniteOrder, MaxLen, Operator, OrderNode,
    Primitive, Rational, SeqOp,
};

#[derive(Clone, Copy, Debug)]
pub struct TreeConfig {
    /// Maximum number of nested sequence/sum nodes.
    pub max_depth: u32,
    /// Whether `Inv` nodes may appear anywhere in the tree.
    pub allow_inv: bool,
    /// Whether builtin leaves (numbers, bytes, rationals) may appear.
    pub allow_builtins: bool,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            max_depth: 5,
            allow_inv: true,
            allow_builtins: true,
        }
    }
}

fn random_enumeration<R: Rng>(rng: &mut R, k: u64) -> Enumeration {
    match rng.random_range(0..4) {
        0 => Enumeration::Reversed,
        1 if k <= 256 => {
            let mut table: Vec<u8> = (0..k).map(|p| p as u8).collect();
            for i in (1..table.len()).rev() {
                table.swap(i, rng.random_range(0..=i));
            }
            Enumeration::Table(table.into())
        }
        _ => Enumeration::Natural,
    }
}

fn random_finite<R: Rng>(rng: &mut R) -> FiniteOrder {
    let k = *[1u64, 2, 2, 3, 4, 256, 300].choose(rng).expect("non-empty");
    FiniteOrder {
        cardinality: k,
        enumeration: random_enumeration(rng, k),
    }
}

fn random_builtin<R: Rng>(rng: &mut R) -> Builtin {
    match rng.random_range(0..12) {
        0 => Builtin::UInt8,
        1 => Builtin::UInt16,
        2 => Builtin::UInt64,
        3 => Builtin::Int8,
        4 => Builtin::Int32,
        5 => Builtin::Int64,
        6 => Builtin::Float32,
        7 => Builtin::Float64,
        8 => Builtin::Bool,
        9 => Builtin::Rational,
        10 => Builtin::Bytes(if rng.random_bool(0.5) {
            Enumeration::Natural
        } else {
            Enumeration::Table(collation::ascii())
        }),
        _ => Builtin::Bytes(Enumeration::Reversed),
    }
}

pub fn random_leaf<R: Rng>(rng: &mut R, config: &TreeConfig) -> OrderNode {
    if config.allow_builtins && rng.random_bool(0.3) {
        OrderNode::Builtin(random_builtin(rng))
    } else {
        OrderNode::Finite(random_finite(rng))
    }
}

/// A valid order of nesting depth at most `config.max_depth`.
pub fn random_tree<R: Rng>(rng: &mut R, config: &TreeConfig) -> OrderNode {
    tree(rng, config, config.max_depth)
}

fn tree<R: Rng>(rng: &mut R, config: &TreeConfig, depth_left: u32) -> OrderNode {
    // Bytes leaves count as a sequence level, so they need depth to spare.
    if depth_left == 0 {
        return OrderNode::Finite(random_finite(rng));
    }
    if rng.random_bool(0.3) {
        return random_leaf(rng, config);
    }
    if config.allow_inv && rng.random_bool(0.12) {
        return tree(rng, config, depth_left).inv();
    }
    if rng.random_bool(0.15) {
        let k = rng.random_range(1..=3);
        let master = FiniteOrder {
            cardinality: k,
            enumeration: random_enumeration(rng, k),
        };
        let cases = (0..master.cardinality)
            .map(|_| tree(rng, config, depth_left - 1))
            .collect();
        return OrderNode::sum(master, cases);
    }
    OrderNode::Seq(random_seq(rng, config, depth_left))
}

fn random_seq<R: Rng>(rng: &mut R, config: &TreeConfig, depth_left: u32) -> SeqOp {
    let op = *Operator::ALL.choose(rng).expect("non-empty");
    let child = |rng: &mut R| tree(rng, config, depth_left - 1);
    if op == Operator::Next {
        let n = rng.random_range(0..=3);
        let items: Vec<OrderNode> = (0..n).map(|_| child(rng)).collect();
        return SeqOp {
            op,
            min_len: n,
            max_len: MaxLen::Finite(n + 1),
            prelude: items,
            period: Vec::new(),
        };
    }
    if op.is_anti() {
        let item = child(rng);
        let j = rng.random_range(1..=5);
        return SeqOp {
            op,
            min_len: rng.random_range(0..j),
            max_len: MaxLen::Finite(j),
            prelude: Vec::new(),
            period: vec![item],
        };
    }
    let max_len = if rng.random_bool(0.5) {
        MaxLen::Omega
    } else {
        MaxLen::Finite(rng.random_range(1..=5))
    };
    let min_len = match max_len {
        MaxLen::Omega => rng.random_range(0..=2),
        MaxLen::Finite(j) => rng.random_range(0..j.min(3)),
    };
    let longest = match max_len {
        MaxLen::Omega => u64::MAX,
        MaxLen::Finite(j) => j - 1,
    };
    let prelude_len = rng.random_range(0..=2u64).min(longest);
    let prelude: Vec<OrderNode> = (0..prelude_len).map(|_| child(rng)).collect();
    let needs_period = max_len == MaxLen::Omega || prelude_len < longest;
    let period_len = if needs_period {
        rng.random_range(1..=2)
    } else {
        0
    };
    let period = (0..period_len).map(|_| child(rng)).collect();
    SeqOp {
        op,
        min_len,
        max_len,
        prelude,
        period,
    }
}

const FLOATS: [f64; 9] = [
    f64::NEG_INFINITY,
    -2.5,
    -1.0,
    -0.0,
    0.0,
    5e-324,
    1.0,
    1.5,
    f64::INFINITY,
];

fn random_primitive<R: Rng>(rng: &mut R, kind: &Builtin) -> ElementValue {
    let p = match kind {
        Builtin::UInt8 => Primitive::Unsigned(rng.random_range(0..4) * 85),
        Builtin::UInt16 => Primitive::Unsigned(*[0, 1, 255, 256, 65535].choose(rng).expect("")),
        Builtin::UInt32 => Primitive::Unsigned(rng.random_range(0..3) << 24),
        Builtin::UInt64 => Primitive::Unsigned(*[0, 1, 1 << 40, u64::MAX].choose(rng).expect("")),
        Builtin::Int8 => Primitive::Signed(*[-128, -1, 0, 1, 127].choose(rng).expect("")),
        Builtin::Int16 => Primitive::Signed(rng.random_range(-2..=2) * 300),
        Builtin::Int32 => Primitive::Signed(
            *[i64::from(i32::MIN), -1, 0, 7, i64::from(i32::MAX)]
                .choose(rng)
                .expect(""),
        ),
        Builtin::Int64 => Primitive::Signed(*[i64::MIN, -1, 0, 1, i64::MAX].choose(rng).expect("")),
        Builtin::Float32 => Primitive::F32(*FLOATS.choose(rng).expect("") as f32),
        Builtin::Float64 => Primitive::F64(*FLOATS.choose(rng).expect("")),
        Builtin::Bool => Primitive::Bool(rng.random_bool(0.5)),
        Builtin::Rational => Primitive::Rational(Rational::new(
            rng.random_range(-6..=6),
            rng.random_range(1..=6),
        )),
        Builtin::Bytes(_) => {
            let len = rng.random_range(0..4);
            Primitive::Bytes(
                (0..len)
                    .map(|_| *b"aAb\x00\xff".choose(rng).expect(""))
                    .collect(),
            )
        }
    };
    ElementValue::Primitive(p)
}

/// A random element of `tree`; sequences get at most three items beyond
/// their minimum length.
pub fn random_element<R: Rng>(rng: &mut R, tree: &OrderNode) -> ElementValue {
    element(rng, tree, 3)
}

fn random_rank<R: Rng>(rng: &mut R, k: u64) -> u64 {
    if k > 4 && rng.random_bool(0.7) {
        // Stay in a few symbols so equal items are common.
        *[0, 1, k / 2, k - 1].choose(rng).expect("")
    } else {
        rng.random_range(0..k)
    }
}

fn element<R: Rng>(rng: &mut R, node: &OrderNode, extra: u64) -> ElementValue {
    match node {
        OrderNode::Finite(order) => ElementValue::Rank(random_rank(rng, order.cardinality)),
        OrderNode::Builtin(kind) => random_primitive(rng, kind),
        OrderNode::Inv(child) => element(rng, child, extra),
        OrderNode::Seq(seq) => {
            let longest = match seq.max_len {
                MaxLen::Omega => seq.min_len + extra,
                MaxLen::Finite(j) => (j - 1).min(seq.min_len + extra),
            };
            let len = rng.random_range(seq.min_len..=longest);
            ElementValue::Sequence(
                (0..len)
                    .map(|r| element(rng, seq.item_order_at(r).expect("rank in range"), extra))
                    .collect(),
            )
        }
        OrderNode::Sum(sum) => {
            let m = rng.random_range(0..sum.master.cardinality);
            ElementValue::sum(m, element(rng, &sum.cases[m as usize], extra))
        }
    }
}

/// A random element close to `value`: one leaf changed, or one sequence
/// shortened or lengthened by an item.
pub fn mutate<R: Rng>(rng: &mut R, tree: &OrderNode, value: &ElementValue) -> ElementValue {
    if rng.random_bool(0.1) {
        return random_element(rng, tree);
    }
    match (tree, value) {
        (OrderNode::Inv(child), _) => mutate(rng, child, value),
        (OrderNode::Seq(seq), _) => {
            let Some(items) = value.items() else {
                return random_element(rng, tree);
            };
            let mut items: Vec<ElementValue> =
                (0..items.len()).map(|i| items.get(i).to_value()).collect();
            let len = items.len() as u64;
            match rng.random_range(0..3) {
                0 if len > seq.min_len => {
                    items.pop();
                }
                1 if seq.max_len.admits(len + 1) => {
                    let order = seq.item_order_at(len).expect("rank admitted");
                    items.push(element(rng, order, 2));
                }
                _ if !items.is_empty() => {
                    let i = rng.random_range(0..items.len());
                    let order = seq.item_order_at(i as u64).expect("rank admitted");
                    items[i] = mutate(rng, order, &items[i]);
                }
                _ => return random_element(rng, tree),
            }
            // Keep byte strings in their compact form.
            if let ElementValue::Primitive(Primitive::Bytes(_)) = value {
                if let Some(bytes) = items
                    .iter()
                    .map(|v| match v {
                        ElementValue::Rank(r) => u8::try_from(*r).ok(),
                        _ => None,
                    })
                    .collect::<Option<Vec<u8>>>()
                {
                    return ElementValue::bytes(bytes);
                }
            }
            ElementValue::Sequence(items)
        }
        (OrderNode::Sum(sum), ElementValue::SumPair(m, sub)) if rng.random_bool(0.7) => {
            ElementValue::sum(*m, mutate(rng, &sum.cases[*m as usize], sub))
        }
        (
            OrderNode::Builtin(Builtin::Bytes(_)),
            ElementValue::Primitive(Primitive::Bytes(bytes)),
        ) => {
            let mut bytes = bytes.clone();
            match rng.random_range(0..3) {
                0 if !bytes.is_empty() => {
                    bytes.pop();
                }
                1 => bytes.push(*b"aAb\x00\xff".choose(rng).expect("")),
                _ if !bytes.is_empty() => {
                    let i = rng.random_range(0..bytes.len());
                    bytes[i] = bytes[i].wrapping_add(1);
                }
                _ => bytes.push(b'a'),
            }
            ElementValue::bytes(bytes)
        }
        _ => random_element(rng, tree),
    }
}

/// An element of `tree` and another that is either equal, a small
/// mutation of it, or independent.
pub fn random_pair<R: Rng>(rng: &mut R, tree: &OrderNode) -> (ElementValue, ElementValue) {
    let x = random_element(rng, tree);
    let y = match rng.random_range(0..10) {
        0 => x.clone(),
        1..=6 => mutate(rng, tree, &x),
        _ => random_element(rng, tree),
    };
    (x, y)
}
