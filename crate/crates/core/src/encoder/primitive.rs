//! Raw keys of the builtin leaves: big-endian bytes whose unsigned order is
//! the value order.

use super::rational::write_rational_key;
use super::EncodeError;
use crate::comparator::NanPolicy;
use crate::model::{Builtin, Primitive};

pub fn primitive_key(
    kind: &Builtin,
    value: &Primitive,
    inverted: bool,
    nan: NanPolicy,
) -> Result<Vec<u8>, EncodeError> {
    let mut out = Vec::with_capacity(8);
    write_primitive(&mut out, kind, value, inverted, nan)?;
    Ok(out)
}

pub(crate) fn write_primitive(
    out: &mut Vec<u8>,
    kind: &Builtin,
    value: &Primitive,
    inverted: bool,
    nan: NanPolicy,
) -> Result<(), EncodeError> {
    let start = out.len();
    let domain = || EncodeError::DomainError(format!("{value:?} is not a {}", kind.name()));
    match (kind, value) {
        (Builtin::UInt8, Primitive::Unsigned(v)) => {
            out.push(u8::try_from(*v).map_err(|_| domain())?)
        }
        (Builtin::UInt16, Primitive::Unsigned(v)) => {
            out.extend_from_slice(&u16::try_from(*v).map_err(|_| domain())?.to_be_bytes())
        }
        (Builtin::UInt32, Primitive::Unsigned(v)) => {
            out.extend_from_slice(&u32::try_from(*v).map_err(|_| domain())?.to_be_bytes())
        }
        (Builtin::UInt64, Primitive::Unsigned(v)) => out.extend_from_slice(&v.to_be_bytes()),
        (Builtin::Int8, Primitive::Signed(v)) => {
            out.push(i8::try_from(*v).map_err(|_| domain())?.to_be_bytes()[0] ^ 0x80)
        }
        (Builtin::Int16, Primitive::Signed(v)) => {
            let bits = i16::try_from(*v).map_err(|_| domain())? as u16 ^ 0x8000;
            out.extend_from_slice(&bits.to_be_bytes())
        }
        (Builtin::Int32, Primitive::Signed(v)) => {
            let bits = i32::try_from(*v).map_err(|_| domain())? as u32 ^ 0x8000_0000;
            out.extend_from_slice(&bits.to_be_bytes())
        }
        (Builtin::Int64, Primitive::Signed(v)) => {
            out.extend_from_slice(&((*v as u64) ^ (1 << 63)).to_be_bytes())
        }
        (Builtin::Float32, Primitive::F32(v)) => {
            let bits = if v.is_nan() {
                check_nan(nan)?;
                0xFFC0_0000
            } else {
                float_bits32(v.to_bits())
            };
            out.extend_from_slice(&bits.to_be_bytes())
        }
        (Builtin::Float64, Primitive::F64(v)) => {
            let bits = if v.is_nan() {
                check_nan(nan)?;
                0xFFF8_0000_0000_0000
            } else {
                float_bits64(v.to_bits())
            };
            out.extend_from_slice(&bits.to_be_bytes())
        }
        (Builtin::Bool, Primitive::Bool(b)) => out.push(u8::from(*b)),
        (Builtin::Rational, Primitive::Rational(r)) => write_rational_key(out, r.num, r.den)?,
        _ => return Err(domain()),
    }
    if inverted {
        for byte in &mut out[start..] {
            *byte = !*byte;
        }
    }
    Ok(())
}

fn check_nan(nan: NanPolicy) -> Result<(), EncodeError> {
    match nan {
        NanPolicy::Reject => Err(EncodeError::NanRejected),
        NanPolicy::High => Ok(()),
    }
}

fn float_bits32(bits: u32) -> u32 {
    if bits & (1 << 31) == 0 {
        bits | (1 << 31)
    } else {
        !bits
    }
}

fn float_bits64(bits: u64) -> u64 {
    if bits & (1 << 63) == 0 {
        bits | (1 << 63)
    } else {
        !bits
    }
}
