//! Multi-index bookkeeping for dense k-form storage.
//!
//! A multi-index `i_1 < ... < i_k` is stored as a bitmask over `0..n`.
//! Within a grade, masks are ordered lexicographically on the increasing
//! tuples; that order is normative for serialization.

use std::sync::OnceLock;

pub const MAX_DIM: usize = 8;

pub(crate) struct GradeTable {
    /// Masks in lexicographic tuple order.
    pub masks: Vec<u16>,
}

pub(crate) struct DimTable {
    pub grades: Vec<GradeTable>,
    /// Position of a mask inside its grade table.
    pub index_of: Vec<u16>,
}

static TABLES: OnceLock<Vec<DimTable>> = OnceLock::new();

fn build(n: usize) -> DimTable {
    let mut grades: Vec<GradeTable> = (0..=n).map(|_| GradeTable { masks: Vec::new() }).collect();
    // Enumerate tuples lexicographically by recursive extension.
    fn rec(n: usize, start: usize, mask: u16, len: usize, grades: &mut [GradeTable]) {
        grades[len].masks.push(mask);
        for i in start..n {
            rec(n, i + 1, mask | (1 << i), len + 1, grades);
        }
    }
    rec(n, 0, 0, 0, &mut grades);
    // The recursion visits prefixes before extensions, which is lexicographic
    // within each fixed length.
    let mut index_of = vec![0u16; 1 << n];
    for g in &grades {
        for (pos, &m) in g.masks.iter().enumerate() {
            index_of[m as usize] = pos as u16;
        }
    }
    DimTable { grades, index_of }
}

pub(crate) fn table(n: usize) -> &'static DimTable {
    assert!(n <= MAX_DIM, "dimension {n} exceeds the supported maximum {MAX_DIM}");
    &TABLES.get_or_init(|| (0..=MAX_DIM).map(build).collect())[n]
}

pub(crate) fn masks(n: usize, k: usize) -> &'static [u16] {
    &table(n).grades[k].masks
}

pub(crate) fn index_of(n: usize, mask: u16) -> usize {
    table(n).index_of[mask as usize] as usize
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Sign of the permutation that sorts the concatenation `a ++ b`,
/// assuming the masks are disjoint.
#[inline]
pub(crate) fn merge_sign(a: u16, b: u16) -> f64 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        // Elements of `a` above `j` have to move past it.
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Ascending list of indices in a mask.
pub(crate) fn indices(mask: u16) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(j)
        }
    })
}

pub(crate) fn mask_from(indices: &[usize]) -> u16 {
    indices.iter().fold(0u16, |m, &i| m | (1 << i))
}
