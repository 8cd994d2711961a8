//! Vertex sets as 128-bit masks. Vertex `v` (1-based) lives in bit `v - 1`.

use itertools::Itertools;
use std::sync::OnceLock;

pub type Mask = u128;

/// Largest ground set a mask can hold.
pub const MAX_VERTICES: u32 = 128;

#[inline]
pub fn bit(v: u32) -> Mask {
    1u128 << (v - 1)
}

pub fn mask_of(vertices: &[u32]) -> Mask {
    vertices.iter().fold(0, |m, &v| m | bit(v))
}

/// Ascending 1-based vertex list of a mask.
pub fn vertices_of(mut mask: Mask) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() + 1);
        mask &= mask - 1;
    }
    out
}

#[inline]
pub fn size(mask: Mask) -> u32 {
    mask.count_ones()
}

/// Mask of `[n]`.
pub fn full(n: u32) -> Mask {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// All `k`-subsets of `universe` (ascending input gives lexicographic output).
pub fn subsets_of(universe: &[u32], k: usize) -> Vec<Vec<u32>> {
    universe.iter().copied().combinations(k).collect()
}

/// All `k`-subsets of `[n]` as masks, in lexicographic order of their vertex lists.
pub fn k_subset_masks(n: u32, k: u32) -> Vec<Mask> {
    (1..=n)
        .combinations(k as usize)
        .map(|c| mask_of(&c))
        .collect()
}

/// Lexicographic comparison of two masks viewed as ascending vertex lists.
pub fn lex_cmp(a: Mask, b: Mask) -> std::cmp::Ordering {
    vertices_of(a).cmp(&vertices_of(b))
}

const TABLE_ROWS: usize = 257;

fn pascal() -> &'static Vec<Vec<u128>> {
    static TABLE: OnceLock<Vec<Vec<u128>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(TABLE_ROWS);
        for n in 0..TABLE_ROWS {
            let mut row = vec![1u128; n + 1];
            for k in 1..n {
                row[k] = rows[n - 1][k - 1].saturating_add(rows[n - 1][k]);
            }
            rows.push(row);
        }
        rows
    })
}

/// `C(n, k)`, zero whenever `k < 0`, `n < 0` or `k > n`.
///
/// Saturates at `u128::MAX`; only reachable for `n` well past 128.
pub fn binom(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let (n, k) = (n as usize, k as usize);
    if n < TABLE_ROWS {
        return pascal()[n][k];
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    c
}
