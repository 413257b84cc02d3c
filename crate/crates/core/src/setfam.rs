//! Ground-level machinery: r-sets as bitmasks, families, the domination
//! order, ij-shifts and the intersecting / left-compressed predicates.

use crate::bits::{self, bit};
use crate::count::{binomial, count, Count};
use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

/// Default ceiling on `C(n, r)` for anything that materializes `binom([n], r)`.
pub const DEFAULT_CAP: u64 = 10_000_000;

static CAP: AtomicU64 = AtomicU64::new(DEFAULT_CAP);

/// Current enumeration cap.
pub fn enumeration_cap() -> u64 {
    CAP.load(Ordering::Relaxed)
}

/// Overrides the enumeration cap for the whole process.
pub fn set_enumeration_cap(cap: u64) {
    CAP.store(cap, Ordering::Relaxed);
}

/// Largest ground set for which sets are materialized as machine words.
pub const MAX_EXPLICIT_N: u32 = 64;

/// The pair `(n, r)`.
///
/// `n` may exceed 64 for closed-form (trace) computations; anything that
/// builds explicit sets checks [`Params::require_explicit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Params {
    n: u32,
    r: u32,
}

impl Params {
    pub fn new(n: u32, r: u32) -> Result<Self> {
        if r == 0 || r > n {
            return Err(Error::InvalidParams(format!("need 1 <= r <= n, got n={n}, r={r}")));
        }
        if r > 32 {
            return Err(Error::InvalidParams(format!("r={r} exceeds 32")));
        }
        Ok(Params { n, r })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `n - 2r`, the number of elements above `[2r]`; `None` when `n < 2r`.
    pub fn n_high(&self) -> Option<u32> {
        self.n.checked_sub(2 * self.r)
    }

    pub fn is_explicit(&self) -> bool {
        self.n <= MAX_EXPLICIT_N
    }

    pub fn require_explicit(&self) -> Result<()> {
        if self.is_explicit() {
            Ok(())
        } else {
            Err(Error::ResourceLimit(format!(
                "n={} exceeds {MAX_EXPLICIT_N}; explicit sets unavailable (use trace mode)",
                self.n
            )))
        }
    }

    /// Mask of `[n]`; requires `n <= 64`.
    pub fn ground_mask(&self) -> u64 {
        bits::interval(1, self.n.min(64))
    }

    /// Mask of `[2r]` (capped at `[n]` when `n < 2r`).
    pub fn low_mask(&self) -> u64 {
        bits::interval(1, (2 * self.r).min(self.n).min(64))
    }

    /// `C(n, r)`.
    pub fn universe_size(&self) -> Count {
        binomial(self.n as u64, self.r as u64)
    }

    /// Fails when `C(n, r)` exceeds the enumeration cap or `n > 64`.
    pub fn check_cap(&self) -> Result<()> {
        self.require_explicit()?;
        let size = self.universe_size();
        let cap = enumeration_cap();
        if size > count(cap) {
            return Err(Error::ResourceLimit(format!(
                "C({}, {}) = {size} exceeds the cap {cap}",
                self.n, self.r
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, r={}", self.n, self.r)
    }
}

fn check_same(a: Params, b: Params) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ParamMismatch(a.to_string(), b.to_string()))
    }
}

/// An `r`-element subset of `[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RSet {
    mask: u64,
    params: Params,
}

impl RSet {
    pub fn new(params: Params, mask: u64) -> Result<Self> {
        params.require_explicit()?;
        if mask & !params.ground_mask() != 0 {
            return Err(Error::InvalidSet(format!(
                "{} not within [{}]",
                bits::format_set(mask),
                params.n
            )));
        }
        if mask.count_ones() != params.r {
            return Err(Error::InvalidSet(format!(
                "{} does not have {} elements",
                bits::format_set(mask),
                params.r
            )));
        }
        Ok(RSet { mask, params })
    }

    pub fn from_elements(params: Params, elems: &[u32]) -> Result<Self> {
        if elems.iter().any(|&e| e == 0 || e > params.n.min(64)) {
            return Err(Error::InvalidSet(format!("{elems:?} not within [{}]", params.n)));
        }
        Self::new(params, bits::mask_of(elems))
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn elements(&self) -> Vec<u32> {
        bits::elements(self.mask).collect()
    }
}

impl fmt::Display for RSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits::format_set(self.mask))
    }
}

/// A duplicate-free family of r-sets, stored in ascending mask order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    params: Params,
    members: Vec<u64>,
}

impl Family {
    pub fn empty(params: Params) -> Result<Self> {
        params.require_explicit()?;
        Ok(Family {
            params,
            members: Vec::new(),
        })
    }

    pub fn new(params: Params, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut members = Vec::new();
        for m in masks {
            members.push(RSet::new(params, m)?.mask);
        }
        Ok(Self::from_sorted_unchecked(params, members))
    }

    pub fn from_sets(params: Params, sets: &[&[u32]]) -> Result<Self> {
        let mut members = Vec::with_capacity(sets.len());
        for s in sets {
            members.push(RSet::from_elements(params, s)?.mask);
        }
        Ok(Self::from_sorted_unchecked(params, members))
    }

    /// Caller guarantees every mask is a valid r-set.
    pub(crate) fn from_sorted_unchecked(params: Params, mut members: Vec<u64>) -> Self {
        members.sort_unstable();
        members.dedup();
        Family { params, members }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.members
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    pub fn contains(&self, set: &RSet) -> bool {
        set.params == self.params && self.contains_mask(set.mask)
    }

    pub fn iter(&self) -> impl Iterator<Item = RSet> + '_ {
        let params = self.params;
        self.members.iter().map(move |&mask| RSet { mask, params })
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.params == other.params && self.members.iter().all(|&m| other.contains_mask(m))
    }

    /// Members of `self` not in `other`.
    pub fn difference(&self, other: &Family) -> Family {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&m| !other.contains_mask(m))
            .collect();
        Family {
            params: self.params,
            members,
        }
    }

    pub fn with_member(&self, mask: u64) -> Family {
        let mut members = self.members.clone();
        if let Err(pos) = members.binary_search(&mask) {
            members.insert(pos, mask);
        }
        Family {
            params: self.params,
            members,
        }
    }

    pub fn without_member(&self, mask: u64) -> Family {
        let members = self.members.iter().copied().filter(|&m| m != mask).collect();
        Family {
            params: self.params,
            members,
        }
    }

    /// Members that no other member dominates from above.
    pub fn dominance_maximal(&self) -> Vec<RSet> {
        self.iter()
            .filter(|a| !self.members.iter().any(|&b| b != a.mask && dominates_mask(a.mask, b)))
            .collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, &m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&bits::format_set(m))?;
        }
        f.write_str("}")
    }
}

/// A possibly empty subset of `[n]` against which hittings are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct XQuery {
    mask: u64,
    params: Params,
}

impl XQuery {
    pub fn new(params: Params, mask: u64) -> Result<Self> {
        params.require_explicit()?;
        if mask & !params.ground_mask() != 0 {
            return Err(Error::InvalidSet(format!(
                "{} not within [{}]",
                bits::format_set(mask),
                params.n
            )));
        }
        Ok(XQuery { mask, params })
    }

    pub fn from_elements(params: Params, elems: &[u32]) -> Result<Self> {
        if elems.iter().any(|&e| e == 0 || e > params.n.min(64)) {
            return Err(Error::InvalidSet(format!("{elems:?} not within [{}]", params.n)));
        }
        Self::new(params, bits::mask_of(elems))
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn params(&self) -> Params {
        self.params
    }
}

/// `A <= B` coordinatewise on sorted elements, for masks of equal size.
///
/// Equivalent prefix form: every initial segment `[k]` holds at least as
/// many elements of `a` as of `b`.
pub(crate) fn dominates_mask(a: u64, b: u64) -> bool {
    let (mut ea, mut eb) = (bits::elements(a), bits::elements(b));
    loop {
        match (ea.next(), eb.next()) {
            (Some(x), Some(y)) if x <= y => continue,
            (None, None) => return true,
            _ => return false,
        }
    }
}

/// Whether `a <= b` in the domination order.
pub fn dominates(a: &RSet, b: &RSet) -> Result<bool> {
    check_same(a.params, b.params)?;
    Ok(dominates_mask(a.mask, b.mask))
}

/// The ij-shift `S_ij`: replace `i` by `j` wherever `i` is present, `j` is
/// absent and the replacement is not already a member.
pub fn shift(family: &Family, i: u32, j: u32) -> Result<Family> {
    let n = family.params.n;
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::InvalidShift { i, j, n });
    }
    Ok(shift_unchecked(family, i, j))
}

fn shift_unchecked(family: &Family, i: u32, j: u32) -> Family {
    let (bi, bj) = (bit(i), bit(j));
    let members = family
        .members
        .iter()
        .map(|&a| {
            if a & bi != 0 && a & bj == 0 {
                let b = (a & !bi) | bj;
                if family.contains_mask(b) {
                    a
                } else {
                    b
                }
            } else {
                a
            }
        })
        .collect();
    Family::from_sorted_unchecked(family.params, members)
}

/// No two members are disjoint.
pub fn is_intersecting(family: &Family) -> bool {
    let m = &family.members;
    m.iter().enumerate().all(|(k, &a)| m[k..].iter().all(|&b| a & b != 0))
}

/// Downward closure under the domination order.
///
/// The order on r-sets is generated by its covering moves (lower one
/// element by one when the slot below is free), so it suffices to check
/// those for each member.
pub fn is_left_compressed(family: &Family) -> bool {
    family.members.iter().all(|&a| {
        bits::elements(a).all(|e| e == 1 || a & bit(e - 1) != 0 || family.contains_mask((a & !bit(e)) | bit(e - 1)))
    })
}

/// `S_ij(F) = F` for every `i > j`; the literal shift-stability form of
/// left-compression.
pub fn is_shift_stable(family: &Family) -> bool {
    let n = family.params.n;
    (1..=n).all(|j| ((j + 1)..=n).all(|i| shift_unchecked(family, i, j) == *family))
}

/// Fixpoint of all shifts `S_ij` with `i > j`, scanned in lexicographic
/// `(j, i)` order until a full pass changes nothing.
pub fn left_compress(family: &Family) -> Family {
    let n = family.params.n;
    let mut cur = family.clone();
    loop {
        let mut changed = false;
        for j in 1..=n {
            for i in (j + 1)..=n {
                let next = shift_unchecked(&cur, i, j);
                if next != cur {
                    cur = next;
                    changed = true;
                }
            }
        }
        if !changed {
            return cur;
        }
    }
}

/// Number of members meeting `x`.
pub fn hit_brute(family: &Family, x: &XQuery) -> Count {
    count(hit_count(family, x.mask) as u64)
}

pub(crate) fn hit_count(family: &Family, x: u64) -> usize {
    family.members.iter().filter(|&&a| a & x != 0).count()
}

/// Every r-subset of `[n]`.
pub fn all_rsets(params: Params) -> Result<Family> {
    params.check_cap()?;
    let members = bits::k_subsets(params.n, params.r).collect();
    Ok(Family { params, members })
}
