//! Helpers for subsets of `[1, 64]` packed into a `u64`; element `i` lives in bit `i - 1`.

use std::fmt::Write as _;

#[inline]
pub fn bit(i: u32) -> u64 {
    debug_assert!((1..=64).contains(&i));
    1u64 << (i - 1)
}

/// The interval `[a, b]`; empty when `a > b`.
pub fn interval(a: u32, b: u32) -> u64 {
    if a > b || b == 0 {
        return 0;
    }
    let a = a.max(1);
    let hi = if b >= 64 { u64::MAX } else { (1u64 << b) - 1 };
    let lo = (1u64 << (a - 1)) - 1;
    hi & !lo
}

pub fn mask_of(elems: &[u32]) -> u64 {
    elems.iter().fold(0, |m, &e| m | bit(e))
}

/// Elements in increasing order.
pub fn elements(mask: u64) -> impl Iterator<Item = u32> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let e = rest.trailing_zeros() + 1;
            rest &= rest - 1;
            Some(e)
        }
    })
}

pub fn max_element(mask: u64) -> Option<u32> {
    (mask != 0).then(|| 64 - mask.leading_zeros())
}

pub fn format_set(mask: u64) -> String {
    let mut s = String::from("{");
    for (k, e) in elements(mask).enumerate() {
        if k > 0 {
            s.push(',');
        }
        let _ = write!(s, "{e}");
    }
    s.push('}');
    s
}

/// Comma-separated element list, as used by the text grammars.
pub fn format_list(mask: u64) -> String {
    elements(mask).map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

/// All `k`-subsets of `[n]` in increasing mask order (Gosper's hack).
pub fn k_subsets(n: u32, k: u32) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << n;
    let mut cur: Option<u64> = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(interval(1, k))
    };
    std::iter::from_fn(move || {
        let out = cur?;
        cur = if out == 0 {
            None
        } else {
            let c = out & out.wrapping_neg();
            let (r, overflow) = out.overflowing_add(c);
            if overflow {
                None
            } else {
                let next = (((r ^ out) >> 2) / c) | r;
                ((next as u128) < limit).then_some(next)
            }
        };
        Some(out)
    })
}

/// All submasks of `mask`, including `0` and `mask` itself, in increasing order.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut cur = Some(0u64);
    std::iter::from_fn(move || {
        let out = cur?;
        cur = if out == mask {
            None
        } else {
            Some(((out | !mask).wrapping_add(1)) & mask)
        };
        Some(out)
    })
}

/// Lexicographic comparison key: the sorted element list.
pub fn lex_key(mask: u64) -> Vec<u32> {
    elements(mask).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_edges() {
        assert_eq!(interval(2, 4), 0b1110);
        assert_eq!(interval(3, 2), 0);
        assert_eq!(interval(1, 64), u64::MAX);
        assert_eq!(interval(64, 64), 1u64 << 63);
    }

    #[test]
    fn k_subsets_counts() {
        assert_eq!(k_subsets(4, 2).count(), 6);
        assert_eq!(k_subsets(5, 5).count(), 1);
        assert_eq!(k_subsets(10, 3).count(), 120);
        assert_eq!(k_subsets(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(k_subsets(3, 4).count(), 0);
        assert_eq!(k_subsets(64, 64).collect::<Vec<_>>(), vec![u64::MAX]);
        assert_eq!(k_subsets(64, 1).count(), 64);
        let v: Vec<_> = k_subsets(6, 3).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn submask_walk() {
        let all: Vec<_> = submasks(0b1011).collect();
        assert_eq!(all, vec![0, 1, 2, 3, 8, 9, 10, 11]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn element_listing() {
        assert_eq!(elements(mask_of(&[5, 1, 3])).collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(format_set(mask_of(&[2, 3])), "{2,3}");
        assert_eq!(max_element(mask_of(&[2, 9])), Some(9));
        assert_eq!(max_element(0), None);
    }
}
