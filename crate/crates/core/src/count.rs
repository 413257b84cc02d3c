//! Exact counts and a shared Pascal-triangle memo.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::sync::{OnceLock, RwLock};

/// Exact, unbounded non-negative count.
pub type Count = BigUint;

/// Columns kept in the memo. Larger `k` are reduced by symmetry or computed directly.
const MEMO_COLS: usize = 65;

fn table() -> &'static RwLock<Vec<Vec<BigUint>>> {
    static TABLE: OnceLock<RwLock<Vec<Vec<BigUint>>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![vec![BigUint::one()]]))
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Count {
    if k > n {
        return Count::zero();
    }
    let k = k.min(n - k);
    if k as usize >= MEMO_COLS {
        return binomial_direct(n, k);
    }
    let (n, k) = (n as usize, k as usize);
    {
        let rows = table().read().expect("binomial memo poisoned");
        if let Some(row) = rows.get(n) {
            return row[k].clone();
        }
    }
    let mut rows = table().write().expect("binomial memo poisoned");
    while rows.len() <= n {
        let prev = rows.last().expect("row 0 present");
        let m = rows.len();
        let width = (m + 1).min(MEMO_COLS);
        let mut row = Vec::with_capacity(width);
        for j in 0..width {
            let left = if j == 0 { Count::zero() } else { prev[j - 1].clone() };
            let up = prev.get(j).cloned().unwrap_or_default();
            row.push(left + up);
        }
        rows.push(row);
    }
    rows[n][k].clone()
}

/// `C(n, k)` for signed arguments; zero outside `0 <= k <= n`.
pub fn binomial_i(n: i64, k: i64) -> Count {
    if n < 0 || k < 0 || k > n {
        Count::zero()
    } else {
        binomial(n as u64, k as u64)
    }
}

fn binomial_direct(n: u64, k: u64) -> Count {
    let mut acc = Count::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn count(v: u64) -> Count {
    Count::from(v)
}

/// Serde helper writing a count as a decimal string, so JSON readers never
/// round large values.
pub fn serialize_count<S: serde::Serializer>(c: &Count, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}
