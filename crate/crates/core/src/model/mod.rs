//! Labelled trees describing finite width tree structured orders, and the
//! element values that live in them.
//!
//! An [`OrderNode`] is the definition of an order: leaves are finite or
//! builtin orders, internal nodes are `Inv`, one of the nine sequence
//! operators, or a generalized sum over a finite master order. An
//! [`ElementValue`] is a value tree conforming to an `OrderNode`.

mod rewrite;
mod validate;

use std::fmt;
use std::sync::Arc;

pub use rewrite::{expand_builtins, push_inv_to_leaves};
pub(crate) use validate::byte_item_order;
pub use validate::{check_element, validate, ElementError, PathStats};

use thiserror::Error;

/// Upper bound on lexicographic nesting: one nibble per counter.
pub const COUNTER_LIMIT: u32 = 15;
/// Deepest operator nesting that can be recorded in an empty-sequence marker.
pub const MAX_DEPTH: u32 = 14;

/// How the raw symbols of a finite order map to their order positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Enumeration {
    /// Symbol `r` sits at position `r`.
    Natural,
    /// Symbol `r` sits at position `k - 1 - r`.
    Reversed,
    /// Symbol `r` sits at position `table[r]`; the table is a bijection on `0..k`.
    Table(Arc<[u8]>),
}

impl Enumeration {
    pub fn position(&self, cardinality: u64, raw: u64) -> u64 {
        match self {
            Enumeration::Natural => raw,
            Enumeration::Reversed => cardinality - 1 - raw,
            Enumeration::Table(table) => u64::from(table[raw as usize]),
        }
    }

    /// The enumeration of the inverse order.
    pub fn reversed(&self, cardinality: u64) -> Enumeration {
        match self {
            Enumeration::Natural => Enumeration::Reversed,
            Enumeration::Reversed => Enumeration::Natural,
            Enumeration::Table(table) => {
                let top = (cardinality - 1) as u8;
                Enumeration::Table(table.iter().map(|&p| top - p).collect())
            }
        }
    }
}

/// A finite order of `cardinality` symbols `0..cardinality`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteOrder {
    pub cardinality: u64,
    pub enumeration: Enumeration,
}

impl FiniteOrder {
    pub fn new(cardinality: u64) -> Self {
        FiniteOrder {
            cardinality,
            enumeration: Enumeration::Natural,
        }
    }

    pub fn with_table(table: impl Into<Arc<[u8]>>) -> Self {
        let table = table.into();
        FiniteOrder {
            cardinality: table.len() as u64,
            enumeration: Enumeration::Table(table),
        }
    }

    pub fn position(&self, raw: u64) -> u64 {
        self.enumeration.position(self.cardinality, raw)
    }

    pub fn reversed(&self) -> Self {
        FiniteOrder {
            cardinality: self.cardinality,
            enumeration: self.enumeration.reversed(self.cardinality),
        }
    }

    /// Bytes used by the big-endian position of a symbol; at least one.
    pub fn width(&self) -> usize {
        let top = self.cardinality.saturating_sub(1);
        let bits = 64 - top.leading_zeros() as usize;
        bits.div_ceil(8).max(1)
    }
}

/// Orders with dedicated key encoders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    UInt8,
    UInt16,
    UInt32,
    UInt64,
    Int8,
    Int16,
    Int32,
    Int64,
    Float32,
    Float64,
    Bool,
    /// Byte strings in lexicographic order over a 256-symbol alphabet.
    Bytes(Enumeration),
    /// Exact fractions `num/den`.
    Rational,
}

impl Builtin {
    pub fn name(&self) -> &'static str {
        match self {
            Builtin::UInt8 => "uint8",
            Builtin::UInt16 => "uint16",
            Builtin::UInt32 => "uint32",
            Builtin::UInt64 => "uint64",
            Builtin::Int8 => "int8",
            Builtin::Int16 => "int16",
            Builtin::Int32 => "int32",
            Builtin::Int64 => "int64",
            Builtin::Float32 => "float32",
            Builtin::Float64 => "float64",
            Builtin::Bool => "bool",
            Builtin::Bytes(_) => "bytes",
            Builtin::Rational => "rational",
        }
    }

    /// Key width in bytes for the fixed-width kinds.
    pub fn fixed_width(&self) -> Option<usize> {
        match self {
            Builtin::UInt8 | Builtin::Int8 | Builtin::Bool => Some(1),
            Builtin::UInt16 | Builtin::Int16 => Some(2),
            Builtin::UInt32 | Builtin::Int32 | Builtin::Float32 => Some(4),
            Builtin::UInt64 | Builtin::Int64 | Builtin::Float64 => Some(8),
            Builtin::Bytes(_) | Builtin::Rational => None,
        }
    }
}

/// The order-sequence operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    Next,
    Lex,
    ContreLex,
    Hierar,
    ContreHierar,
    AntiLex,
    AntiContreLex,
    AntiHierar,
    AntiContreHierar,
}

/// What an operator records when one of its elements ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndKind {
    /// Shorter elements first: a counter is decremented.
    Lex,
    /// Shorter elements last: a counter is incremented.
    ContreLex,
    /// Length is written up front; the end needs no marker.
    Counted,
    /// Fixed length.
    Fixed,
}

impl Operator {
    pub const ALL: [Operator; 9] = [
        Operator::Next,
        Operator::Lex,
        Operator::ContreLex,
        Operator::Hierar,
        Operator::ContreHierar,
        Operator::AntiLex,
        Operator::AntiContreLex,
        Operator::AntiHierar,
        Operator::AntiContreHierar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::Next => "next",
            Operator::Lex => "lex",
            Operator::ContreLex => "contrelex",
            Operator::Hierar => "hierar",
            Operator::ContreHierar => "contrehierar",
            Operator::AntiLex => "antilex",
            Operator::AntiContreLex => "anticontrelex",
            Operator::AntiHierar => "antihierar",
            Operator::AntiContreHierar => "anticontrehierar",
        }
    }

    pub fn from_name(name: &str) -> Option<Operator> {
        Operator::ALL
            .into_iter()
            .find(|op| op.name().eq_ignore_ascii_case(name))
    }

    /// `Inv(op(S)) = contre(op)(Inv(S))`.
    pub fn contre(self) -> Operator {
        match self {
            Operator::Next => Operator::Next,
            Operator::Lex => Operator::ContreLex,
            Operator::ContreLex => Operator::Lex,
            Operator::Hierar => Operator::ContreHierar,
            Operator::ContreHierar => Operator::Hierar,
            Operator::AntiLex => Operator::AntiContreLex,
            Operator::AntiContreLex => Operator::AntiLex,
            Operator::AntiHierar => Operator::AntiContreHierar,
            Operator::AntiContreHierar => Operator::AntiHierar,
        }
    }

    /// Anti operators compare items from the last one backward.
    pub fn is_anti(self) -> bool {
        matches!(
            self,
            Operator::AntiLex
                | Operator::AntiContreLex
                | Operator::AntiHierar
                | Operator::AntiContreHierar
        )
    }

    pub fn end_kind(self) -> EndKind {
        match self {
            Operator::Next => EndKind::Fixed,
            Operator::Lex | Operator::AntiLex => EndKind::Lex,
            Operator::ContreLex | Operator::AntiContreLex => EndKind::ContreLex,
            Operator::Hierar
            | Operator::ContreHierar
            | Operator::AntiHierar
            | Operator::AntiContreHierar => EndKind::Counted,
        }
    }

    /// True for the operators that put longer elements first.
    pub fn is_contre(self) -> bool {
        matches!(
            self,
            Operator::ContreLex
                | Operator::ContreHierar
                | Operator::AntiContreLex
                | Operator::AntiContreHierar
        )
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exclusive upper bound on sequence length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MaxLen {
    Finite(u64),
    Omega,
}

impl MaxLen {
    /// `len < self`
    pub fn admits(self, len: u64) -> bool {
        match self {
            MaxLen::Finite(j) => len < j,
            MaxLen::Omega => true,
        }
    }
}

/// A sequence operator applied to an ultimately periodic sequence of orders.
#[derive(Clone, Debug, PartialEq)]
pub struct SeqOp {
    pub op: Operator,
    pub min_len: u64,
    pub max_len: MaxLen,
    pub prelude: Vec<OrderNode>,
    pub period: Vec<OrderNode>,
}

impl SeqOp {
    /// Order of the item at `rank`: the prelude first, then the period cycled.
    pub fn item_order_at(&self, rank: u64) -> Result<&OrderNode, ModelError> {
        if !self.max_len.admits(rank) {
            return Err(ModelError::RankOutOfRange {
                rank,
                max_len: self.max_len,
            });
        }
        if let Some(node) = usize::try_from(rank).ok().and_then(|r| self.prelude.get(r)) {
            return Ok(node);
        }
        if self.period.is_empty() {
            return Err(ModelError::RankOutOfRange {
                rank,
                max_len: self.max_len,
            });
        }
        let offset = rank - self.prelude.len() as u64;
        Ok(&self.period[(offset % self.period.len() as u64) as usize])
    }

    /// Same operator and bounds, contre operator, every item order inverted.
    pub fn contre(&self) -> SeqOp {
        SeqOp {
            op: self.op.contre(),
            min_len: self.min_len,
            max_len: self.max_len,
            prelude: self.prelude.iter().cloned().map(OrderNode::inv).collect(),
            period: self.period.iter().cloned().map(OrderNode::inv).collect(),
        }
    }

    pub fn is_fixed_length(&self) -> bool {
        self.max_len == MaxLen::Finite(self.min_len.saturating_add(1))
    }
}

/// Generalized sum: the master symbol is compared first, then the element of
/// the case order selected by that symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct SumOrder {
    pub master: FiniteOrder,
    /// Indexed by raw master symbol.
    pub cases: Vec<OrderNode>,
}

impl SumOrder {
    pub fn contre(&self) -> SumOrder {
        SumOrder {
            master: self.master.reversed(),
            cases: self.cases.iter().cloned().map(OrderNode::inv).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OrderNode {
    Finite(FiniteOrder),
    Builtin(Builtin),
    Inv(Box<OrderNode>),
    Seq(SeqOp),
    Sum(SumOrder),
}

impl OrderNode {
    pub fn finite(cardinality: u64) -> Self {
        OrderNode::Finite(FiniteOrder::new(cardinality))
    }

    pub fn inv(self) -> Self {
        OrderNode::Inv(Box::new(self))
    }

    pub fn seq(
        op: Operator,
        min_len: u64,
        max_len: MaxLen,
        prelude: Vec<OrderNode>,
        period: Vec<OrderNode>,
    ) -> Self {
        OrderNode::Seq(SeqOp {
            op,
            min_len,
            max_len,
            prelude,
            period,
        })
    }

    /// `op(min_len, omega, ([item]))`: the uniform unbounded sequence.
    pub fn uniform(op: Operator, min_len: u64, item: OrderNode) -> Self {
        OrderNode::seq(op, min_len, MaxLen::Omega, Vec::new(), vec![item])
    }

    pub fn next(items: Vec<OrderNode>) -> Self {
        let n = items.len() as u64;
        OrderNode::seq(Operator::Next, n, MaxLen::Finite(n + 1), items, Vec::new())
    }

    pub fn sum(master: FiniteOrder, cases: Vec<OrderNode>) -> Self {
        OrderNode::Sum(SumOrder { master, cases })
    }

    /// For `Seq` and `Sum` nodes, the contre form: `Inv` of the result is
    /// order-equivalent to `self`.
    pub fn contre_rewrite(&self) -> Option<OrderNode> {
        match self {
            OrderNode::Seq(seq) => Some(OrderNode::Seq(seq.contre())),
            OrderNode::Sum(sum) => Some(OrderNode::Sum(sum.contre())),
            _ => None,
        }
    }
}

/// Child indices from the root: `prelude` and `period` items are numbered
/// consecutively, sum cases follow the master (which is index 0 of nothing),
/// `Inv` has a single child 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn child(&self, index: usize) -> NodePath {
        let mut path = self.0.clone();
        path.push(index);
        NodePath(path)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for index in &self.0 {
            write!(f, "/{index}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("order too deep at {path}: {reason}")]
    OrderTooDeep { path: NodePath, reason: String },
    #[error("malformed node at {path}: {reason}")]
    MalformedNode { path: NodePath, reason: String },
    #[error("unbounded sequence without a period at {path}")]
    PeriodMissing { path: NodePath },
    #[error("anti operator over a non-uniform sequence at {path}")]
    AntiNotUniform { path: NodePath },
    #[error("next operator must have max_len = min_len + 1 at {path}")]
    NextNotFixedLength { path: NodePath },
    #[error("rank {rank} out of range (max_len {max_len:?})")]
    RankOutOfRange { rank: u64, max_len: MaxLen },
}

impl ModelError {
    /// Node the error refers to, when it refers to one.
    pub fn path(&self) -> Option<&NodePath> {
        match self {
            ModelError::OrderTooDeep { path, .. }
            | ModelError::MalformedNode { path, .. }
            | ModelError::PeriodMissing { path }
            | ModelError::AntiNotUniform { path }
            | ModelError::NextNotFixedLength { path } => Some(path),
            ModelError::RankOutOfRange { .. } => None,
        }
    }
}

/// An exact fraction; not necessarily reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    pub num: i64,
    pub den: u64,
}

impl Rational {
    pub fn new(num: i64, den: u64) -> Self {
        Rational { num, den }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Primitive {
    Unsigned(u64),
    Signed(i64),
    F32(f32),
    F64(f64),
    Bool(bool),
    Bytes(Vec<u8>),
    Rational(Rational),
}

/// A value tree conforming to an [`OrderNode`].
///
/// A few shapes are accepted by more than one kind of node so that the same
/// value stays valid across [`expand_builtins`] and [`push_inv_to_leaves`]:
/// `Primitive::Bool` conforms to `finite(2)`, and `Primitive::Bytes` conforms
/// to any sequence node whose item orders are 256-symbol finite orders.
#[derive(Clone, Debug, PartialEq)]
pub enum ElementValue {
    /// Raw symbol of a finite order.
    Rank(u64),
    Primitive(Primitive),
    Sequence(Vec<ElementValue>),
    /// Master symbol and the value of the selected case.
    SumPair(u64, Box<ElementValue>),
}

impl ElementValue {
    pub fn sequence(items: impl IntoIterator<Item = ElementValue>) -> Self {
        ElementValue::Sequence(items.into_iter().collect())
    }

    pub fn bytes(bytes: impl Into<Vec<u8>>) -> Self {
        ElementValue::Primitive(Primitive::Bytes(bytes.into()))
    }

    pub fn sum(master: u64, sub: ElementValue) -> Self {
        ElementValue::SumPair(master, Box::new(sub))
    }

    /// Item view for sequence-shaped values.
    pub fn items(&self) -> Option<Items<'_>> {
        match self {
            ElementValue::Sequence(items) => Some(Items::Values(items)),
            ElementValue::Primitive(Primitive::Bytes(bytes)) => Some(Items::Bytes(bytes)),
            _ => None,
        }
    }
}

/// Items of a sequence-shaped value.
#[derive(Clone, Copy, Debug)]
pub enum Items<'a> {
    Values(&'a [ElementValue]),
    Bytes(&'a [u8]),
}

#[derive(Clone, Copy, Debug)]
pub enum ItemRef<'a> {
    Value(&'a ElementValue),
    Byte(u8),
}

impl<'a> Items<'a> {
    pub fn len(&self) -> usize {
        match self {
            Items::Values(v) => v.len(),
            Items::Bytes(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, index: usize) -> ItemRef<'a> {
        match *self {
            Items::Values(v) => ItemRef::Value(&v[index]),
            Items::Bytes(b) => ItemRef::Byte(b[index]),
        }
    }
}

impl ItemRef<'_> {
    pub fn to_value(self) -> ElementValue {
        match self {
            ItemRef::Value(v) => v.clone(),
            ItemRef::Byte(b) => ElementValue::Rank(u64::from(b)),
        }
    }
}

/// Named 256-entry collations accepted by the definition language.
pub mod collation {
    use std::sync::{Arc, OnceLock};

    /// `A < a < B < b < ... < Z < z`, every other byte in numeric order around them.
    pub fn ascii() -> Arc<[u8]> {
        static TABLE: OnceLock<Arc<[u8]>> = OnceLock::new();
        TABLE
            .get_or_init(|| {
                let key = |b: u8| -> u16 {
                    if b.is_ascii_alphabetic() {
                        u16::from(b.to_ascii_uppercase()) * 2 + u16::from(b.is_ascii_lowercase())
                    } else {
                        u16::from(b) * 2
                    }
                };
                let mut order: Vec<u8> = (0..=255).collect();
                order.sort_by_key(|&b| key(b));
                let mut table = vec![0u8; 256];
                for (position, &b) in order.iter().enumerate() {
                    table[b as usize] = position as u8;
                }
                table.into()
            })
            .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alternating() -> SeqOp {
        SeqOp {
            op: Operator::Lex,
            min_len: 0,
            max_len: MaxLen::Omega,
            prelude: vec![OrderNode::finite(2)],
            period: vec![OrderNode::finite(2), OrderNode::finite(2).inv()],
        }
    }

    #[test]
    fn item_order_at_walks_prelude_then_period() {
        let seq = alternating();
        assert_eq!(seq.item_order_at(0).unwrap(), &OrderNode::finite(2));
        assert_eq!(seq.item_order_at(1).unwrap(), &OrderNode::finite(2));
        assert_eq!(seq.item_order_at(2).unwrap(), &OrderNode::finite(2).inv());
        assert_eq!(seq.item_order_at(3).unwrap(), &OrderNode::finite(2));
        assert_eq!(seq.item_order_at(4).unwrap(), &OrderNode::finite(2).inv());
    }

    #[test]
    fn item_order_at_uniform_and_out_of_range() {
        let seq = SeqOp {
            op: Operator::Lex,
            min_len: 0,
            max_len: MaxLen::Finite(9),
            prelude: vec![],
            period: vec![OrderNode::finite(7)],
        };
        assert_eq!(seq.item_order_at(7).unwrap(), &OrderNode::finite(7));
        assert!(matches!(
            seq.item_order_at(9),
            Err(ModelError::RankOutOfRange { rank: 9, .. })
        ));
    }

    #[test]
    fn finite_width() {
        assert_eq!(FiniteOrder::new(1).width(), 1);
        assert_eq!(FiniteOrder::new(256).width(), 1);
        assert_eq!(FiniteOrder::new(257).width(), 2);
        assert_eq!(FiniteOrder::new(u64::MAX).width(), 8);
    }

    #[test]
    fn reversed_table_is_an_involution() {
        let order = FiniteOrder::with_table(vec![2u8, 0, 1]);
        let rev = order.reversed();
        assert_eq!(rev.enumeration, Enumeration::Table(vec![0u8, 2, 1].into()));
        assert_eq!(rev.reversed(), order);
    }

    #[test]
    fn ascii_collation_interleaves_case() {
        let t = collation::ascii();
        assert!(t[b'A' as usize] < t[b'a' as usize]);
        assert!(t[b'a' as usize] < t[b'B' as usize]);
        assert!(t[b'z' as usize] > t[b'Z' as usize]);
        let mut seen = [false; 256];
        for &p in t.iter() {
            seen[p as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
