use super::{
    Builtin, ElementValue, Enumeration, FiniteOrder, ItemRef, MaxLen, ModelError, NodePath,
    Operator, OrderNode, Primitive, SeqOp, COUNTER_LIMIT, MAX_DEPTH,
};
use std::fmt;
use thiserror::Error;

/// Facts about a validated tree that the encoder relies on.
///
/// Counts are taken after `Inv` nodes are accounted for: a `lex` under an odd
/// number of `Inv` behaves as a `contrelex` and is counted as one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PathStats {
    /// Largest number of sequence/sum nodes on a root-leaf path.
    pub depth: u32,
    pub max_lex_path: u32,
    pub max_contrelex_path: u32,
    pub has_variable_length: bool,
}

impl fmt::Display for PathStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "depth={} max_lex_path={} max_contrelex_path={} has_variable_length={}",
            self.depth, self.max_lex_path, self.max_contrelex_path, self.has_variable_length
        )
    }
}

/// Checks every structural invariant and the padding budgets.
pub fn validate(tree: &OrderNode) -> Result<PathStats, ModelError> {
    let mut stats = PathStats::default();
    walk(
        tree,
        &NodePath::default(),
        false,
        Counts::default(),
        &mut stats,
    )?;
    Ok(stats)
}

#[derive(Clone, Copy, Default)]
struct Counts {
    depth: u32,
    lex: u32,
    contrelex: u32,
}

fn malformed(path: &NodePath, reason: impl Into<String>) -> ModelError {
    ModelError::MalformedNode {
        path: path.clone(),
        reason: reason.into(),
    }
}

fn check_enumeration(path: &NodePath, k: u64, enumeration: &Enumeration) -> Result<(), ModelError> {
    let Enumeration::Table(table) = enumeration else {
        return Ok(());
    };
    if table.len() as u64 != k {
        return Err(malformed(
            path,
            format!("collation has {} entries, expected {k}", table.len()),
        ));
    }
    let mut seen = [false; 256];
    for &p in table.iter() {
        if u64::from(p) >= k || std::mem::replace(&mut seen[p as usize], true) {
            return Err(malformed(path, "collation is not a bijection"));
        }
    }
    Ok(())
}

fn check_finite(path: &NodePath, order: &FiniteOrder) -> Result<(), ModelError> {
    if order.cardinality == 0 {
        return Err(malformed(path, "finite order needs at least one symbol"));
    }
    check_enumeration(path, order.cardinality, &order.enumeration)
}

/// Accounts for one sequence node of the given effective operator.
fn enter(
    path: &NodePath,
    counts: Counts,
    op: Operator,
    stats: &mut PathStats,
) -> Result<Counts, ModelError> {
    let mut next = counts;
    next.depth += 1;
    match op.end_kind() {
        super::EndKind::Lex => next.lex += 1,
        super::EndKind::ContreLex => next.contrelex += 1,
        _ => {}
    }
    if next.depth > MAX_DEPTH {
        return Err(ModelError::OrderTooDeep {
            path: path.clone(),
            reason: format!("nesting depth {} exceeds {MAX_DEPTH}", next.depth),
        });
    }
    // One lex step is reserved for the final padding of a leaf.
    if next.lex + 1 > COUNTER_LIMIT {
        return Err(ModelError::OrderTooDeep {
            path: path.clone(),
            reason: format!(
                "{} lex nodes on one path exceed the counter budget",
                next.lex
            ),
        });
    }
    if next.contrelex > COUNTER_LIMIT {
        return Err(ModelError::OrderTooDeep {
            path: path.clone(),
            reason: format!(
                "{} contrelex nodes on one path exceed the counter budget",
                next.contrelex
            ),
        });
    }
    stats.depth = stats.depth.max(next.depth);
    stats.max_lex_path = stats.max_lex_path.max(next.lex);
    stats.max_contrelex_path = stats.max_contrelex_path.max(next.contrelex);
    Ok(next)
}

fn walk(
    node: &OrderNode,
    path: &NodePath,
    inverted: bool,
    counts: Counts,
    stats: &mut PathStats,
) -> Result<(), ModelError> {
    match node {
        OrderNode::Finite(order) => check_finite(path, order),
        OrderNode::Builtin(kind) => {
            match kind {
                Builtin::Bytes(enumeration) => {
                    check_enumeration(path, 256, enumeration)?;
                    let op = if inverted {
                        Operator::ContreLex
                    } else {
                        Operator::Lex
                    };
                    enter(path, counts, op, stats)?;
                    stats.has_variable_length = true;
                }
                Builtin::Rational => stats.has_variable_length = true,
                _ => {}
            }
            Ok(())
        }
        OrderNode::Inv(child) => walk(child, &path.child(0), !inverted, counts, stats),
        OrderNode::Seq(seq) => {
            check_seq(path, seq)?;
            let op = if inverted { seq.op.contre() } else { seq.op };
            let counts = enter(path, counts, op, stats)?;
            if !seq.is_fixed_length() {
                stats.has_variable_length = true;
            }
            for (index, child) in seq.prelude.iter().chain(&seq.period).enumerate() {
                walk(child, &path.child(index), inverted, counts, stats)?;
            }
            Ok(())
        }
        OrderNode::Sum(sum) => {
            check_finite(path, &sum.master)?;
            if sum.cases.len() as u64 != sum.master.cardinality {
                return Err(malformed(
                    path,
                    format!(
                        "sum has {} cases for a master of cardinality {}",
                        sum.cases.len(),
                        sum.master.cardinality
                    ),
                ));
            }
            let mut counts = counts;
            counts.depth += 1;
            if counts.depth > MAX_DEPTH {
                return Err(ModelError::OrderTooDeep {
                    path: path.clone(),
                    reason: format!("nesting depth {} exceeds {MAX_DEPTH}", counts.depth),
                });
            }
            stats.depth = stats.depth.max(counts.depth);
            for (index, case) in sum.cases.iter().enumerate() {
                walk(case, &path.child(index), inverted, counts, stats)?;
            }
            Ok(())
        }
    }
}

fn check_seq(path: &NodePath, seq: &SeqOp) -> Result<(), ModelError> {
    if let MaxLen::Finite(j) = seq.max_len {
        if seq.min_len >= j {
            return Err(malformed(
                path,
                format!("min_len {} must be below max_len {j}", seq.min_len),
            ));
        }
    }
    if seq.op == Operator::Next && !seq.is_fixed_length() {
        return Err(ModelError::NextNotFixedLength { path: path.clone() });
    }
    if seq.op.is_anti()
        && (seq.max_len == MaxLen::Omega || !seq.prelude.is_empty() || seq.period.len() != 1)
    {
        return Err(ModelError::AntiNotUniform { path: path.clone() });
    }
    match seq.max_len {
        MaxLen::Omega if seq.period.is_empty() => {
            Err(ModelError::PeriodMissing { path: path.clone() })
        }
        MaxLen::Finite(j) if seq.prelude.len() as u64 > j - 1 => Err(malformed(
            path,
            format!(
                "prelude of {} items is longer than the longest element ({})",
                seq.prelude.len(),
                j - 1
            ),
        )),
        MaxLen::Finite(j) if seq.period.is_empty() && (seq.prelude.len() as u64) < j - 1 => {
            Err(malformed(
                path,
                format!(
                    "no item order for ranks {}..{}: prelude too short and period empty",
                    seq.prelude.len(),
                    j - 1
                ),
            ))
        }
        _ => Ok(()),
    }
}

/// A value that does not conform to its order.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("element does not match order at value path {path}: {reason}")]
pub struct ElementError {
    /// Indices into sequences and sum pairs, from the root value.
    pub path: NodePath,
    pub reason: String,
}

impl ElementError {
    pub(crate) fn new(path: &NodePath, reason: impl Into<String>) -> Self {
        ElementError {
            path: path.clone(),
            reason: reason.into(),
        }
    }
}

/// Checks that `value` is an element of the order `tree`.
///
/// NaN floats are accepted here; whether they are admitted is a policy of the
/// comparator and the encoder.
pub fn check_element(tree: &OrderNode, value: &ElementValue) -> Result<(), ElementError> {
    check_value(tree, value, &NodePath::default())
}

fn check_value(
    node: &OrderNode,
    value: &ElementValue,
    path: &NodePath,
) -> Result<(), ElementError> {
    match node {
        OrderNode::Finite(order) => check_rank(order, value, path),
        OrderNode::Builtin(kind) => check_builtin(kind, value, path),
        OrderNode::Inv(child) => check_value(child, value, path),
        OrderNode::Seq(seq) => {
            let items = value
                .items()
                .ok_or_else(|| ElementError::new(path, "expected a sequence"))?;
            let len = items.len() as u64;
            if len < seq.min_len || !seq.max_len.admits(len) {
                return Err(ElementError::new(
                    path,
                    format!("sequence length {len} outside the node's bounds"),
                ));
            }
            for index in 0..items.len() {
                let order = seq
                    .item_order_at(index as u64)
                    .map_err(|e| ElementError::new(path, e.to_string()))?;
                let item_path = path.child(index);
                match items.get(index) {
                    ItemRef::Value(v) => check_value(order, v, &item_path)?,
                    ItemRef::Byte(b) => check_byte(order, b, &item_path)?,
                }
            }
            Ok(())
        }
        OrderNode::Sum(sum) => {
            let ElementValue::SumPair(master, sub) = value else {
                return Err(ElementError::new(path, "expected a sum pair"));
            };
            if *master >= sum.master.cardinality {
                return Err(ElementError::new(
                    path,
                    format!("master symbol {master} out of range"),
                ));
            }
            check_value(&sum.cases[*master as usize], sub, &path.child(1))
        }
    }
}

/// A raw byte stands for a symbol of a 256-symbol finite order.
pub(crate) fn byte_item_order(node: &OrderNode) -> Option<&FiniteOrder> {
    match node {
        OrderNode::Finite(order) if order.cardinality == 256 => Some(order),
        OrderNode::Inv(child) => byte_item_order(child),
        _ => None,
    }
}

fn check_byte(node: &OrderNode, _byte: u8, path: &NodePath) -> Result<(), ElementError> {
    match byte_item_order(node) {
        Some(_) => Ok(()),
        None => Err(ElementError::new(
            path,
            "byte string items need a 256-symbol finite item order",
        )),
    }
}

fn check_rank(
    order: &FiniteOrder,
    value: &ElementValue,
    path: &NodePath,
) -> Result<(), ElementError> {
    match value {
        ElementValue::Rank(r) if *r < order.cardinality => Ok(()),
        ElementValue::Rank(r) => Err(ElementError::new(
            path,
            format!("rank {r} not below cardinality {}", order.cardinality),
        )),
        ElementValue::Primitive(Primitive::Bool(_)) if order.cardinality == 2 => Ok(()),
        _ => Err(ElementError::new(path, "expected a rank")),
    }
}

fn check_builtin(
    kind: &Builtin,
    value: &ElementValue,
    path: &NodePath,
) -> Result<(), ElementError> {
    let ok = match (kind, value) {
        (Builtin::UInt8, ElementValue::Primitive(Primitive::Unsigned(v))) => {
            *v <= u64::from(u8::MAX)
        }
        (Builtin::UInt16, ElementValue::Primitive(Primitive::Unsigned(v))) => {
            *v <= u64::from(u16::MAX)
        }
        (Builtin::UInt32, ElementValue::Primitive(Primitive::Unsigned(v))) => {
            *v <= u64::from(u32::MAX)
        }
        (Builtin::UInt64, ElementValue::Primitive(Primitive::Unsigned(_))) => true,
        (Builtin::Int8, ElementValue::Primitive(Primitive::Signed(v))) => i8::try_from(*v).is_ok(),
        (Builtin::Int16, ElementValue::Primitive(Primitive::Signed(v))) => {
            i16::try_from(*v).is_ok()
        }
        (Builtin::Int32, ElementValue::Primitive(Primitive::Signed(v))) => {
            i32::try_from(*v).is_ok()
        }
        (Builtin::Int64, ElementValue::Primitive(Primitive::Signed(_))) => true,
        (Builtin::Float32, ElementValue::Primitive(Primitive::F32(_))) => true,
        (Builtin::Float64, ElementValue::Primitive(Primitive::F64(_))) => true,
        (Builtin::Bool, ElementValue::Primitive(Primitive::Bool(_))) => true,
        (Builtin::Bytes(_), ElementValue::Primitive(Primitive::Bytes(_))) => true,
        (Builtin::Bytes(_), ElementValue::Sequence(items)) => items
            .iter()
            .all(|item| matches!(item, ElementValue::Rank(r) if *r < 256)),
        (Builtin::Rational, ElementValue::Primitive(Primitive::Rational(r))) => {
            if r.den == 0 {
                return Err(ElementError::new(path, "zero denominator"));
            }
            true
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(ElementError::new(
            path,
            format!("value out of the domain of {}", kind.name()),
        ))
    }
}
