//! Length headers for hierarchic sequences and continued-fraction terms.
//!
//! `unary(U) ‖ B as U bytes ‖ n as B bytes`, where `B` is the byte length of
//! `n` (at least one) and `U` the byte length of `B`. Every field is
//! big-endian, so headers compare bytewise like the numbers they hold and no
//! header is a prefix of another.

use super::EncodeError;

/// Header of a count. Counts above `u64::MAX` are refused.
pub fn hierar_count_header(n: u128) -> Result<Vec<u8>, EncodeError> {
    let n = u64::try_from(n).map_err(|_| EncodeError::CountTooLarge)?;
    let mut out = Vec::with_capacity(10);
    write_count_header(&mut out, n);
    Ok(out)
}

pub(crate) fn write_count_header(out: &mut Vec<u8>, n: u64) {
    let width = (8 - n.leading_zeros() as usize / 8).max(1);
    out.push(0x80);
    out.push(width as u8);
    out.extend_from_slice(&n.to_be_bytes()[8 - width..]);
}

/// Header of an arbitrarily wide big-endian number.
pub fn count_header_be(value: &[u8]) -> Vec<u8> {
    let start = value.iter().position(|&b| b != 0).unwrap_or(value.len());
    let digits: &[u8] = if start == value.len() {
        &[0]
    } else {
        &value[start..]
    };
    let width = digits.len() as u64;
    let width_bytes = (8 - width.leading_zeros() as usize / 8).max(1);

    // `width_bytes` ones, then a zero, padded to whole bytes.
    let unary_bytes = width_bytes / 8 + 1;
    let mut out = vec![0u8; unary_bytes];
    for bit in 0..width_bytes {
        out[bit / 8] |= 0x80 >> (bit % 8);
    }
    out.extend_from_slice(&width.to_be_bytes()[8 - width_bytes..]);
    out.extend_from_slice(digits);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(hierar_count_header(0).unwrap(), [0x80, 0x01, 0x00]);
        assert_eq!(hierar_count_header(51).unwrap(), [0x80, 0x01, 0x33]);
        assert_eq!(hierar_count_header(256).unwrap(), [0x80, 0x02, 0x01, 0x00]);
        assert_eq!(
            hierar_count_header(u128::from(u64::MAX)).unwrap(),
            [0x80, 0x08, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF]
        );
        assert!(matches!(
            hierar_count_header(1 << 64),
            Err(EncodeError::CountTooLarge)
        ));
    }

    #[test]
    fn wide_agrees_with_narrow() {
        for n in [0u64, 1, 255, 256, 65_535, 1 << 40, u64::MAX] {
            assert_eq!(
                count_header_be(&n.to_be_bytes()),
                hierar_count_header(n.into()).unwrap()
            );
        }
    }

    #[test]
    fn very_wide_uses_two_length_bytes() {
        let value = vec![1u8; 300];
        let header = count_header_be(&value);
        assert_eq!(&header[..3], &[0xC0, 0x01, 0x2C]);
        assert!(count_header_be(&[0xFF; 255]) < header);
    }
}
