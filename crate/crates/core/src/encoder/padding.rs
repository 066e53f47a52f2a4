//! The `(padding0, data1, padding2)` byte pattern and its counters.
//!
//! A padding byte holds the lex counter in its high nibble and the contrelex
//! counter in its low nibble, so bytewise comparison ranks the lex counter
//! first. The untouched value is `0xF0`.

use super::EncodeError;

pub const DEFAULT_PADDING: u8 = 0xF0;
/// Final padding of a leaf that ends nothing but itself.
pub const LEAF_FINAL_PADDING: u8 = 0xE0;

/// Which counter a sequence node bumps when it ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaddingAdjust {
    DecLex,
    IncContreLex,
}

/// Kinds of sequence that have a dedicated empty marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmptyKind {
    Lex,
    ContreLex,
}

/// `data` wrapped byte by byte, the last padding lowered to `0xE0`.
pub fn wrap_finite_leaf(data: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(3 * data.len());
    wrap_into(&mut out, data, LEAF_FINAL_PADDING);
    out
}

pub(crate) fn wrap_into(out: &mut Vec<u8>, data: &[u8], final_padding: u8) {
    for &byte in data {
        out.extend_from_slice(&[DEFAULT_PADDING, byte, DEFAULT_PADDING]);
    }
    if !data.is_empty() {
        *out.last_mut().expect("non-empty") = final_padding;
    }
}

/// Lex-empty sorts before every non-empty sibling, contrelex-empty after.
pub fn empty_sequence_pattern(kind: EmptyKind, depth: u32) -> Result<[u8; 3], EncodeError> {
    if depth > crate::model::MAX_DEPTH {
        return Err(EncodeError::DepthOverflow(depth));
    }
    let d = depth as u8;
    Ok(match kind {
        EmptyKind::Lex => [d << 4, 0x00, DEFAULT_PADDING],
        EmptyKind::ContreLex => [0xF0 | (15 - d), 0x00, DEFAULT_PADDING],
    })
}

/// Moves both counters of the final byte at once.
pub(crate) fn shift_final_padding(
    key: &mut [u8],
    lex: i8,
    contrelex: i8,
) -> Result<(), EncodeError> {
    let last = key.last_mut().ok_or(EncodeError::CounterUnderflow)?;
    let hi = i16::from(*last >> 4) + i16::from(lex);
    let lo = i16::from(*last & 0x0F) + i16::from(contrelex);
    if hi < 0 || lo < 0 {
        return Err(EncodeError::CounterUnderflow);
    }
    if hi > 15 || lo > 15 {
        return Err(EncodeError::CounterOverflow);
    }
    *last = ((hi as u8) << 4) | lo as u8;
    Ok(())
}

pub fn adjust_final_padding(key: &mut [u8], adjust: PaddingAdjust) -> Result<(), EncodeError> {
    match adjust {
        PaddingAdjust::DecLex => shift_final_padding(key, -1, 0),
        PaddingAdjust::IncContreLex => shift_final_padding(key, 0, 1),
    }
}

pub fn flip_bits(key: &mut [u8]) {
    for byte in key {
        *byte = !*byte;
    }
}

pub fn swap_final_nibbles(key: &mut [u8]) {
    if let Some(last) = key.last_mut() {
        *last = last.rotate_left(4);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap() {
        assert_eq!(wrap_finite_leaf(&[0x05]), [0xF0, 0x05, 0xE0]);
        assert_eq!(wrap_finite_leaf(&[0x00]), [0xF0, 0x00, 0xE0]);
        assert_eq!(
            wrap_finite_leaf(&[0x01, 0x02]),
            [0xF0, 0x01, 0xF0, 0xF0, 0x02, 0xE0]
        );
    }

    #[test]
    fn empty_patterns() {
        assert_eq!(
            empty_sequence_pattern(EmptyKind::Lex, 0).unwrap(),
            [0x00, 0x00, 0xF0]
        );
        assert_eq!(
            empty_sequence_pattern(EmptyKind::Lex, 3).unwrap(),
            [0x30, 0x00, 0xF0]
        );
        assert_eq!(
            empty_sequence_pattern(EmptyKind::ContreLex, 0).unwrap(),
            [0xFF, 0x00, 0xF0]
        );
        assert_eq!(
            empty_sequence_pattern(EmptyKind::ContreLex, 2).unwrap(),
            [0xFD, 0x00, 0xF0]
        );
        assert!(matches!(
            empty_sequence_pattern(EmptyKind::Lex, 15),
            Err(EncodeError::DepthOverflow(15))
        ));
    }

    #[test]
    fn adjust() {
        let mut key = [0xF0, 0x61, 0xE0];
        adjust_final_padding(&mut key, PaddingAdjust::DecLex).unwrap();
        assert_eq!(key[2], 0xD0);
        let mut key = [0xE0];
        adjust_final_padding(&mut key, PaddingAdjust::IncContreLex).unwrap();
        assert_eq!(key[0], 0xE1);
        let mut key = [0x00];
        assert!(matches!(
            adjust_final_padding(&mut key, PaddingAdjust::DecLex),
            Err(EncodeError::CounterUnderflow)
        ));
        let mut key = [0x0F];
        assert!(matches!(
            adjust_final_padding(&mut key, PaddingAdjust::IncContreLex),
            Err(EncodeError::CounterOverflow)
        ));
    }

    #[test]
    fn flips() {
        let mut key = [0xF0, 0x05, 0xE0];
        flip_bits(&mut key);
        assert_eq!(key, [0x0F, 0xFA, 0x1F]);
        swap_final_nibbles(&mut key);
        assert_eq!(key, [0x0F, 0xFA, 0xF1]);
        swap_final_nibbles(&mut key);
        flip_bits(&mut key);
        assert_eq!(key, [0xF0, 0x05, 0xE0]);
    }
}
