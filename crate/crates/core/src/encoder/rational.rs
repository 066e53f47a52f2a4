//! Rational keys through continued fractions.
//!
//! `p/q ≥ 0` has a unique expansion `[n0; n1, ..., nk]` with `nk ≥ 2` when
//! `k > 0`. Terms at odd ranks compare in reverse, and a shorter expansion
//! behaves as if followed by `+inf`, so each term is written as an extended
//! integer (`00 ‖ header(n)` for finite `n`, `01` for `+inf`) and odd-rank
//! terms are bit-flipped. A terminating `+inf` makes the key prefix-free.

use super::header::write_count_header;
use super::EncodeError;

pub fn continued_fraction(p: u64, q: u64) -> Result<Vec<u64>, EncodeError> {
    if q == 0 {
        return Err(EncodeError::ZeroDenominator);
    }
    let (mut a, mut b) = (p, q);
    let mut terms = Vec::new();
    loop {
        terms.push(a / b);
        let r = a % b;
        if r == 0 {
            return Ok(terms);
        }
        (a, b) = (b, r);
    }
}

pub fn rational_key(p: i64, q: u64) -> Result<Vec<u8>, EncodeError> {
    let mut out = Vec::new();
    write_rational_key(&mut out, p, q)?;
    Ok(out)
}

pub(crate) fn write_rational_key(out: &mut Vec<u8>, p: i64, q: u64) -> Result<(), EncodeError> {
    let terms = continued_fraction(p.unsigned_abs(), q)?;
    out.push(if p < 0 { 0x00 } else { 0x01 });
    let payload = out.len();
    for (rank, &term) in terms.iter().enumerate() {
        let start = out.len();
        out.push(0x00);
        write_count_header(out, term);
        if rank % 2 == 1 {
            flip(&mut out[start..]);
        }
    }
    out.push(if terms.len() % 2 == 1 { !0x01 } else { 0x01 });
    if p < 0 {
        flip(&mut out[payload..]);
    }
    Ok(())
}

fn flip(bytes: &mut [u8]) {
    for b in bytes {
        *b = !*b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansions() {
        assert_eq!(continued_fraction(7, 3).unwrap(), [2, 3]);
        assert_eq!(continued_fraction(0, 1).unwrap(), [0]);
        assert_eq!(continued_fraction(355, 113).unwrap(), [3, 7, 16]);
        assert_eq!(continued_fraction(14, 6).unwrap(), [2, 3]);
        assert_eq!(continued_fraction(1, 2).unwrap(), [0, 2]);
        assert!(matches!(
            continued_fraction(1, 0),
            Err(EncodeError::ZeroDenominator)
        ));
    }

    #[test]
    fn zero() {
        assert_eq!(
            rational_key(0, 1).unwrap(),
            [0x01, 0x00, 0x80, 0x01, 0x00, 0xFE]
        );
    }

    #[test]
    fn small_orders() {
        let k = |p, q| rational_key(p, q).unwrap();
        assert!(k(7, 3) < k(5, 2));
        assert!(k(-1, 2) < k(0, 1));
        assert!(k(0, 1) < k(1, 2));
        assert!(k(2, 1) < k(7, 3));
        assert!(k(-3, 1) < k(-5, 2));
        assert_eq!(k(2, 4), k(1, 2));
        assert!(k(i64::MIN, 1) < k(i64::MIN + 1, 1));
        assert!(k(i64::MAX, 1) > k(i64::MAX - 1, 1));
    }
}
