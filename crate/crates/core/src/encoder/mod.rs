//! Nextification: byte strings whose bytewise order is the order of the
//! elements they encode.
//!
//! In padded mode every data byte is wrapped as `(padding0, data, padding2)`;
//! see [`padding`] for the counters and [`plan`] for how they are chosen. In
//! packed mode, available only for fixed-length trees, raw data bytes are
//! concatenated.

pub mod direct_inv;
pub mod header;
pub mod padding;
mod plan;
pub mod primitive;
pub mod rational;

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::comparator::NanPolicy;
use crate::model::{
    check_element, expand_builtins, push_inv_to_leaves, validate, ElementError, ElementValue,
    EndKind, FiniteOrder, ItemRef, Items, ModelError, OrderNode, PathStats, Primitive,
};
use padding::{shift_final_padding, wrap_into};
use plan::{Plan, SeqPlan};

pub use header::{count_header_be, hierar_count_header};
pub use padding::{
    adjust_final_padding, empty_sequence_pattern, flip_bits, swap_final_nibbles, wrap_finite_leaf,
    EmptyKind, PaddingAdjust,
};
pub use primitive::primitive_key;
pub use rational::{continued_fraction, rational_key};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("element mismatch: {0}")]
    ElementMismatch(#[from] ElementError),
    #[error("NaN is rejected by the current policy")]
    NanRejected,
    #[error("value outside its domain: {0}")]
    DomainError(String),
    #[error("padding counter underflow")]
    CounterUnderflow,
    #[error("padding counter overflow")]
    CounterOverflow,
    #[error("depth {0} does not fit an empty-sequence marker")]
    DepthOverflow(u32),
    #[error("count does not fit in 64 bits")]
    CountTooLarge,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("packed mode needs a fixed-length order")]
    PackedModeUnavailable,
    #[error("one key is a strict prefix of the other")]
    PrefixAnomaly,
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    #[default]
    Padded,
    Packed,
}

/// Encoded element; `Ord` is bytewise.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EncodedKey(Vec<u8>);

impl EncodedKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02X}")).collect()
    }
}

impl From<Vec<u8>> for EncodedKey {
    fn from(bytes: Vec<u8>) -> Self {
        EncodedKey(bytes)
    }
}

impl AsRef<[u8]> for EncodedKey {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for EncodedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EncodedKey({})", self.to_hex())
    }
}

/// Bytewise comparison. Keys of distinct elements of one order always differ
/// at some byte, so in debug builds a strict prefix is reported.
pub fn compare_keys(a: &[u8], b: &[u8]) -> Result<Ordering, EncodeError> {
    let ord = a.cmp(b);
    if cfg!(debug_assertions) && ord != Ordering::Equal {
        let common = a.len().min(b.len());
        if a[..common] == b[..common] {
            return Err(EncodeError::PrefixAnomaly);
        }
    }
    Ok(ord)
}

/// A validated, compiled order ready to encode elements.
#[derive(Clone, Debug)]
pub struct Encoder {
    tree: OrderNode,
    plan: Plan,
    stats: PathStats,
    mode: Mode,
    nan: NanPolicy,
}

impl Encoder {
    pub fn new(tree: &OrderNode, mode: Mode) -> Result<Self, EncodeError> {
        let stats = validate(tree)?;
        if mode == Mode::Packed && stats.has_variable_length {
            return Err(EncodeError::PackedModeUnavailable);
        }
        let plan = plan::compile(&push_inv_to_leaves(&expand_builtins(tree)))?;
        Ok(Encoder {
            tree: tree.clone(),
            plan,
            stats,
            mode,
            nan: NanPolicy::default(),
        })
    }

    pub fn with_nan_policy(mut self, nan: NanPolicy) -> Self {
        self.nan = nan;
        self
    }

    pub fn stats(&self) -> PathStats {
        self.stats
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn tree(&self) -> &OrderNode {
        &self.tree
    }

    /// Longest key in packed mode. Keys of one sum case share a width, and
    /// keys of different cases differ in the master bytes, so zero-filling
    /// to this width keeps the order.
    pub fn packed_width(&self) -> Option<usize> {
        match self.mode {
            Mode::Packed => plan::packed_width(&self.plan),
            Mode::Padded => None,
        }
    }

    pub fn encode(&self, value: &ElementValue) -> Result<EncodedKey, EncodeError> {
        let mut out = Vec::new();
        self.encode_into(value, &mut out)?;
        Ok(EncodedKey(out))
    }

    /// Appends the key of `value` to `out`; on error `out` is left as it was.
    pub fn encode_into(&self, value: &ElementValue, out: &mut Vec<u8>) -> Result<(), EncodeError> {
        check_element(&self.tree, value)?;
        let start = out.len();
        let mut writer = Writer { out, nan: self.nan };
        let result = match self.mode {
            Mode::Padded => writer.padded(&self.plan, value),
            Mode::Packed => writer.packed(&self.plan, value),
        };
        if result.is_err() {
            out.truncate(start);
        }
        result
    }

    /// Encodes in parallel; results keep the input order.
    pub fn encode_batch(&self, values: &[ElementValue]) -> Vec<Result<EncodedKey, EncodeError>> {
        values.par_iter().map(|v| self.encode(v)).collect()
    }
}

/// One-shot convenience around [`Encoder`].
pub fn encode(
    tree: &OrderNode,
    value: &ElementValue,
    mode: Mode,
) -> Result<EncodedKey, EncodeError> {
    Encoder::new(tree, mode)?.encode(value)
}

struct Writer<'a> {
    out: &'a mut Vec<u8>,
    nan: NanPolicy,
}

/// Element value or a raw byte of a byte string.
#[derive(Clone, Copy)]
enum Val<'a> {
    Value(&'a ElementValue),
    Byte(u8),
}

impl<'a> From<ItemRef<'a>> for Val<'a> {
    fn from(item: ItemRef<'a>) -> Self {
        match item {
            ItemRef::Value(v) => Val::Value(v),
            ItemRef::Byte(b) => Val::Byte(b),
        }
    }
}

fn raw_symbol(value: Val<'_>) -> Result<u64, EncodeError> {
    match value {
        Val::Byte(b) => Ok(u64::from(b)),
        Val::Value(ElementValue::Rank(r)) => Ok(*r),
        Val::Value(ElementValue::Primitive(Primitive::Bool(b))) => Ok(u64::from(*b)),
        Val::Value(other) => Err(EncodeError::Internal(format!("{other:?} is not a rank"))),
    }
}

fn symbol_bytes(order: &FiniteOrder, raw: u64) -> [u8; 8] {
    order.position(raw).to_be_bytes()
}

fn seq_items<'v>(value: Val<'v>) -> Result<Items<'v>, EncodeError> {
    match value {
        Val::Value(v) => v
            .items()
            .ok_or_else(|| EncodeError::Internal("expected a sequence".into())),
        Val::Byte(_) => Err(EncodeError::Internal("byte used as a sequence".into())),
    }
}

impl Writer<'_> {
    fn padded(&mut self, plan: &Plan, value: &ElementValue) -> Result<(), EncodeError> {
        self.padded_val(plan, Val::Value(value))
    }

    fn padded_val(&mut self, plan: &Plan, value: Val<'_>) -> Result<(), EncodeError> {
        match plan {
            Plan::Finite {
                order,
                width,
                final_padding,
            } => {
                let bytes = symbol_bytes(order, raw_symbol(value)?);
                wrap_into(self.out, &bytes[8 - width..], *final_padding);
                Ok(())
            }
            Plan::Builtin {
                kind,
                inverted,
                final_padding,
            } => {
                let Val::Value(ElementValue::Primitive(p)) = value else {
                    return Err(EncodeError::Internal("expected a primitive".into()));
                };
                let mut raw = Vec::with_capacity(8);
                primitive::write_primitive(&mut raw, kind, p, *inverted, self.nan)?;
                wrap_into(self.out, &raw, *final_padding);
                Ok(())
            }
            Plan::Sum {
                master,
                width,
                final_padding,
                cases,
            } => {
                let Val::Value(ElementValue::SumPair(m, sub)) = value else {
                    return Err(EncodeError::Internal("expected a sum pair".into()));
                };
                let bytes = symbol_bytes(master, *m);
                wrap_into(self.out, &bytes[8 - width..], *final_padding);
                self.padded(&cases[*m as usize], sub)
            }
            Plan::Seq(seq) => self.padded_seq(seq, seq_items(value)?),
        }
    }

    fn padded_seq(&mut self, seq: &SeqPlan, items: Items<'_>) -> Result<(), EncodeError> {
        let n = items.len();
        match seq.op.end_kind() {
            EndKind::Counted => {
                let mut header = Vec::with_capacity(10);
                header::write_count_header(&mut header, n as u64);
                if seq.op.is_contre() {
                    flip_bits(&mut header);
                }
                wrap_into(self.out, &header, seq.header_padding);
                self.padded_items(seq, items)
            }
            _ if n == 0 => {
                self.out.extend_from_slice(&seq.empty);
                Ok(())
            }
            _ => {
                self.padded_items(seq, items)?;
                let (lex, contrelex) = seq.end_shift;
                if (lex, contrelex) != (0, 0) {
                    shift_final_padding(self.out, lex, contrelex)?;
                }
                Ok(())
            }
        }
    }

    fn padded_items(&mut self, seq: &SeqPlan, items: Items<'_>) -> Result<(), EncodeError> {
        let n = items.len();
        for k in 0..n {
            let rank = if seq.op.is_anti() { n - 1 - k } else { k };
            self.padded_val(seq.item(rank), items.get(rank).into())?;
        }
        Ok(())
    }

    fn packed(&mut self, plan: &Plan, value: &ElementValue) -> Result<(), EncodeError> {
        self.packed_val(plan, Val::Value(value))
    }

    fn packed_val(&mut self, plan: &Plan, value: Val<'_>) -> Result<(), EncodeError> {
        match plan {
            Plan::Finite { order, width, .. } => {
                let bytes = symbol_bytes(order, raw_symbol(value)?);
                self.out.extend_from_slice(&bytes[8 - width..]);
                Ok(())
            }
            Plan::Builtin { kind, inverted, .. } => {
                let Val::Value(ElementValue::Primitive(p)) = value else {
                    return Err(EncodeError::Internal("expected a primitive".into()));
                };
                primitive::write_primitive(self.out, kind, p, *inverted, self.nan)
            }
            Plan::Sum {
                master,
                width,
                cases,
                ..
            } => {
                let Val::Value(ElementValue::SumPair(m, sub)) = value else {
                    return Err(EncodeError::Internal("expected a sum pair".into()));
                };
                let bytes = symbol_bytes(master, *m);
                self.out.extend_from_slice(&bytes[8 - width..]);
                self.packed(&cases[*m as usize], sub)
            }
            Plan::Seq(seq) => {
                let items = seq_items(value)?;
                let n = items.len();
                for k in 0..n {
                    let rank = if seq.op.is_anti() { n - 1 - k } else { k };
                    self.packed_val(seq.item(rank), items.get(rank).into())?;
                }
                Ok(())
            }
        }
    }
}
