//! Order-preserving byte keys for tree structured orders.
//!
//! An order is described by an [`OrderNode`] tree, either built in code or
//! parsed from the definition language in [`tsodl`]. [`comparator`] executes
//! the order definitions directly; [`encoder`] turns elements into keys whose
//! bytewise order matches it, and [`sorter`] sorts such keys with an MSD radix
//! sort.

pub mod comparator;
pub mod dataset;
pub mod encoder;
pub mod gen;
pub mod golden;
pub mod model;
pub mod selftest;
pub mod sorter;
pub mod tsodl;

pub use comparator::{compare, compare_with, find_question, CompareError, NanPolicy, Question};
pub use encoder::{compare_keys, encode, EncodeError, EncodedKey, Encoder, Mode};
pub use model::{
    validate, Builtin, ElementValue, Enumeration, FiniteOrder, MaxLen, ModelError, Operator,
    OrderNode, PathStats, Primitive, Rational, SeqOp, SumOrder,
};
pub use sorter::{sort_cells, LongCell, ShortCell, SortPolicy};
