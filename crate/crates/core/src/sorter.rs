//! Stable MSD radix sort over byte keys: one counting-sort pass per byte
//! position, 257 classes per pass (keys already exhausted first, then byte
//! values), insertion sort for small buckets and a plain comparison sort for
//! small inputs.

use std::cmp::Ordering;

use rayon::prelude::*;
use thiserror::Error;

/// Number of classes of one pass: exhausted keys, then 256 byte values.
pub const CLASSES: usize = 257;

/// Class boundaries of a pass: class `c` occupies `bounds[c]..bounds[c + 1]`.
pub type Buckets = [usize; CLASSES + 1];

/// Key inline as one big-endian `u64`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ShortCell {
    pub key: u64,
    pub reference: u64,
}

impl ShortCell {
    /// Up to eight key bytes, zero-filled on the right.
    pub fn from_key_bytes(bytes: &[u8], reference: u64) -> Self {
        let mut buf = [0u8; 8];
        buf[..bytes.len()].copy_from_slice(bytes);
        ShortCell {
            key: u64::from_be_bytes(buf),
            reference,
        }
    }
}

/// Key borrowed from elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LongCell<'a> {
    pub key: &'a [u8],
    pub reference: u64,
}

/// What the sorter needs from a cell.
pub trait SortKey {
    /// Byte at `index`, `None` once the key is exhausted.
    fn byte_at(&self, index: usize) -> Option<u8>;
    /// Bytewise comparison of the keys from `depth` on; earlier bytes are
    /// known to be equal.
    fn cmp_from(&self, other: &Self, depth: usize) -> Ordering;
    /// First index from `depth` on where the keys differ or one of them ends.
    fn mismatch_from(&self, other: &Self, depth: usize) -> usize;
    fn reference(&self) -> u64;
}

impl SortKey for ShortCell {
    fn byte_at(&self, index: usize) -> Option<u8> {
        (index < 8).then(|| (self.key >> (56 - 8 * index)) as u8)
    }

    fn cmp_from(&self, other: &Self, _depth: usize) -> Ordering {
        self.key.cmp(&other.key)
    }

    fn mismatch_from(&self, other: &Self, depth: usize) -> usize {
        ((self.key ^ other.key).leading_zeros() as usize / 8).max(depth)
    }

    fn reference(&self) -> u64 {
        self.reference
    }
}

impl SortKey for LongCell<'_> {
    fn byte_at(&self, index: usize) -> Option<u8> {
        self.key.get(index).copied()
    }

    fn cmp_from(&self, other: &Self, depth: usize) -> Ordering {
        let depth = depth.min(self.key.len()).min(other.key.len());
        self.key[depth..].cmp(&other.key[depth..])
    }

    fn mismatch_from(&self, other: &Self, depth: usize) -> usize {
        let end = self.key.len().min(other.key.len());
        let depth = depth.min(end);
        let same = self.key[depth..end]
            .iter()
            .zip(&other.key[depth..end])
            .position(|(a, b)| a != b);
        same.map_or(end, |i| depth + i)
    }

    fn reference(&self) -> u64 {
        self.reference
    }
}

/// Either kind of cell, for callers that decide per batch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell<'a> {
    Short(ShortCell),
    Long(LongCell<'a>),
}

impl SortKey for Cell<'_> {
    fn byte_at(&self, index: usize) -> Option<u8> {
        match self {
            Cell::Short(c) => c.byte_at(index),
            Cell::Long(c) => c.byte_at(index),
        }
    }

    fn cmp_from(&self, other: &Self, depth: usize) -> Ordering {
        match (self, other) {
            (Cell::Short(a), Cell::Short(b)) => a.cmp_from(b, depth),
            (Cell::Long(a), Cell::Long(b)) => a.cmp_from(b, depth),
            _ => unreachable!("mixed cell kinds are rejected before sorting"),
        }
    }

    fn mismatch_from(&self, other: &Self, depth: usize) -> usize {
        match (self, other) {
            (Cell::Short(a), Cell::Short(b)) => a.mismatch_from(b, depth),
            (Cell::Long(a), Cell::Long(b)) => a.mismatch_from(b, depth),
            _ => unreachable!("mixed cell kinds are rejected before sorting"),
        }
    }

    fn reference(&self) -> u64 {
        match self {
            Cell::Short(c) => c.reference,
            Cell::Long(c) => c.reference,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SortError {
    #[error("a batch mixes short and long cells")]
    MixedCellKinds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SortPolicy {
    /// Below this many cells the comparison sort is used.
    pub switch_threshold: usize,
    /// Buckets below this size are finished by insertion sort.
    pub insertion_threshold: usize,
    /// Sort the top-level buckets concurrently.
    pub parallel: bool,
}

impl Default for SortPolicy {
    fn default() -> Self {
        SortPolicy {
            switch_threshold: 64,
            insertion_threshold: 32,
            parallel: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Comparison,
    Radix,
}

pub fn choose_algorithm(n: usize, policy: &SortPolicy) -> Strategy {
    if n < policy.switch_threshold {
        Strategy::Comparison
    } else {
        Strategy::Radix
    }
}

fn class_of<T: SortKey>(cell: &T, byte_index: usize) -> usize {
    cell.byte_at(byte_index).map_or(0, |b| usize::from(b) + 1)
}

/// Class boundaries of `cells` at `byte_index`.
fn count_classes<T: SortKey>(cells: &[T], byte_index: usize) -> Buckets {
    let mut bounds = [0usize; CLASSES + 1];
    for cell in cells {
        bounds[class_of(cell, byte_index) + 1] += 1;
    }
    for c in 0..CLASSES {
        bounds[c + 1] += bounds[c];
    }
    bounds
}

/// Stable scatter of `src` into `dst` by class.
fn scatter<T: SortKey + Copy>(src: &[T], dst: &mut [T], bounds: &Buckets, byte_index: usize) {
    let mut next = *bounds;
    for cell in src {
        let c = class_of(cell, byte_index);
        dst[next[c]] = *cell;
        next[c] += 1;
    }
}

/// Stable partition of `cells` by the byte at `byte_index`, through `aux`
/// (same length). Returns the class boundaries.
pub fn counting_sort_pass<T: SortKey + Copy>(
    cells: &mut [T],
    aux: &mut [T],
    byte_index: usize,
) -> Buckets {
    assert_eq!(cells.len(), aux.len(), "auxiliary buffer must match");
    let bounds = count_classes(cells, byte_index);
    scatter(cells, aux, &bounds, byte_index);
    cells.copy_from_slice(aux);
    bounds
}

fn insertion_sort<T: SortKey + Copy>(cells: &mut [T], depth: usize) {
    for i in 1..cells.len() {
        let current = cells[i];
        let mut j = i;
        while j > 0 && cells[j - 1].cmp_from(&current, depth) == Ordering::Greater {
            cells[j] = cells[j - 1];
            j -= 1;
        }
        cells[j] = current;
    }
}

/// Stable merge sort on whole keys; the small-input path, and the baseline
/// the benchmark compares against.
pub fn comparison_sort<T: SortKey>(cells: &mut [T]) {
    cells.sort_by(|a, b| a.cmp_from(b, 0));
}

/// Sorts `cells` by key, bytewise ascending; equal keys keep their order.
pub fn sort_cells<T: SortKey + Copy + Send>(cells: &mut [T], policy: &SortPolicy) {
    match choose_algorithm(cells.len(), policy) {
        Strategy::Comparison => comparison_sort(cells),
        Strategy::Radix => {
            let mut aux = cells.to_vec();
            if policy.parallel {
                radix_parallel(cells, &mut aux, policy);
            } else {
                radix(cells, &mut aux, 0, policy);
            }
        }
    }
}

/// Like [`sort_cells`], for batches whose cell kind is only known at run time.
pub fn sort_cell_batch(cells: &mut [Cell<'_>], policy: &SortPolicy) -> Result<(), SortError> {
    let short = matches!(cells.first(), Some(Cell::Short(_)));
    if cells.iter().any(|c| matches!(c, Cell::Short(_)) != short) {
        return Err(SortError::MixedCellKinds);
    }
    sort_cells(cells, policy);
    Ok(())
}

/// MSD passes with an explicit work list of buckets. Each pass moves a
/// bucket from one buffer to the other, so a bucket records which buffer
/// holds it; finished buckets are copied back to `cells`.
fn radix<T: SortKey + Copy>(cells: &mut [T], aux: &mut [T], depth: usize, policy: &SortPolicy) {
    let mut pending = vec![(0, cells.len(), depth, false)];
    while let Some((start, end, depth, in_aux)) = pending.pop() {
        let (src, dst) = if in_aux {
            (&mut aux[start..end], &mut cells[start..end])
        } else {
            (&mut cells[start..end], &mut aux[start..end])
        };
        if src.len() < policy.insertion_threshold.max(2) {
            insertion_sort(src, depth);
            if in_aux {
                dst.copy_from_slice(src);
            }
            continue;
        }
        let bounds = count_classes(src, depth);
        if (1..CLASSES).any(|c| bounds[c + 1] - bounds[c] == src.len()) {
            // One shared byte: skip the whole common prefix at once instead
            // of one pass per byte.
            let first = src[0];
            let common = src[1..].iter().fold(usize::MAX, |lcp, cell| {
                lcp.min(first.mismatch_from(cell, depth + 1))
            });
            pending.push((start, end, common, in_aux));
            continue;
        }
        scatter(src, dst, &bounds, depth);
        for c in 0..CLASSES {
            let (lo, hi) = (start + bounds[c], start + bounds[c + 1]);
            // Class 0 holds keys that ended here; they are all equal.
            if c == 0 || hi - lo == 1 {
                if !in_aux {
                    cells[lo..hi].copy_from_slice(&aux[lo..hi]);
                }
            } else if hi > lo {
                pending.push((lo, hi, depth + 1, !in_aux));
            }
        }
    }
}

fn radix_parallel<T: SortKey + Copy + Send>(cells: &mut [T], aux: &mut [T], policy: &SortPolicy) {
    let bounds = counting_sort_pass(cells, aux, 0);
    let mut parts = Vec::with_capacity(CLASSES);
    let (mut rest, mut rest_aux) = (cells, aux);
    for c in 0..CLASSES {
        let len = bounds[c + 1] - bounds[c];
        let (part, tail) = rest.split_at_mut(len);
        let (part_aux, tail_aux) = rest_aux.split_at_mut(len);
        if c > 0 && len > 1 {
            parts.push((part, part_aux));
        }
        (rest, rest_aux) = (tail, tail_aux);
    }
    parts
        .into_par_iter()
        .for_each(|(part, part_aux)| radix(part, part_aux, 1, policy));
}
