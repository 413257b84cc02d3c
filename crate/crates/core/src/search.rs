//! Exhaustive search for maximal independent down-sets.
//!
//! A universe of at most [`Bits::CAPACITY`] points carries a conflict
//! relation and a closure preorder. A solution is a set `P` that is closed
//! under the preorder (`t in P` implies `down(t) ⊆ P`), contains no
//! conflicting pair, and leaves every excluded point in conflict with some
//! member of `P`. Instantiated on traces or on explicit r-sets, these are
//! exactly the maximal left-compressed intersecting families.

use std::ops::{BitAnd, BitOr, BitOrAssign};

const WORDS: usize = 16;

/// Fixed-width bitset over `0..1024`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Bits([u64; WORDS]);

impl Default for Bits {
    fn default() -> Self {
        Bits([0; WORDS])
    }
}

impl Bits {
    pub const CAPACITY: usize = WORDS * 64;

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(len: usize) -> Self {
        let mut b = Self::empty();
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersects(&self, other: &Bits) -> bool {
        self.0.iter().zip(other.0.iter()).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn and_not(&self, other: &Bits) -> Bits {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= !b;
        }
        out
    }

    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let i = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(k * 64 + i)
                }
            })
        })
    }
}

impl BitOr for Bits {
    type Output = Bits;
    fn bitor(mut self, rhs: Bits) -> Bits {
        self |= rhs;
        self
    }
}

impl BitOrAssign for Bits {
    fn bitor_assign(&mut self, rhs: Bits) {
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a |= b;
        }
    }
}

impl BitAnd for Bits {
    type Output = Bits;
    fn bitand(mut self, rhs: Bits) -> Bits {
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a &= b;
        }
        self
    }
}

/// Conflict graph plus closure preorder over `len` points.
#[derive(Clone, Debug)]
pub struct DownsetProblem {
    len: usize,
    conflicts: Vec<Bits>,
    /// Reflexive-transitive: everything forced in by including the point.
    down: Vec<Bits>,
    /// Transpose of `down`: everything forced out by excluding the point.
    up: Vec<Bits>,
}

#[derive(Clone, Copy)]
struct State {
    inn: Bits,
    out: Bits,
}

impl DownsetProblem {
    /// `conflicts` must be symmetric; `step[t]` lists the points directly
    /// below `t` and must describe an acyclic relation.
    pub fn new(conflicts: Vec<Bits>, step: &[Vec<usize>]) -> Self {
        let len = conflicts.len();
        assert!(len <= Bits::CAPACITY, "universe of {len} points exceeds capacity");
        assert_eq!(step.len(), len);
        let mut down: Vec<Option<Bits>> = vec![None; len];
        fn close(t: usize, step: &[Vec<usize>], down: &mut Vec<Option<Bits>>) -> Bits {
            if let Some(b) = down[t] {
                return b;
            }
            let mut b = Bits::empty();
            b.insert(t);
            for &s in &step[t] {
                b |= close(s, step, down);
            }
            down[t] = Some(b);
            b
        }
        for t in 0..len {
            close(t, step, &mut down);
        }
        let down: Vec<Bits> = down.into_iter().map(|b| b.expect("closed")).collect();
        let mut up = vec![Bits::empty(); len];
        for (t, d) in down.iter().enumerate() {
            for s in d.iter() {
                up[s].insert(t);
            }
        }
        DownsetProblem {
            len,
            conflicts,
            down,
            up,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn down(&self, t: usize) -> &Bits {
        &self.down[t]
    }

    pub fn conflicts(&self, t: usize) -> &Bits {
        &self.conflicts[t]
    }

    /// Closed under the preorder.
    pub fn is_closed(&self, set: &Bits) -> bool {
        set.iter().all(|t| self.down[t].is_subset(set))
    }

    /// No conflicting pair (a self-conflicting point counts as a pair).
    pub fn is_independent(&self, set: &Bits) -> bool {
        set.iter().all(|t| !self.conflicts[t].intersects(set))
    }

    /// Every point outside `set` conflicts with a member.
    pub fn is_dominating(&self, set: &Bits) -> bool {
        (0..self.len).all(|t| set.contains(t) || self.conflicts[t].intersects(set))
    }

    /// All solutions, in no particular order and without repetition.
    pub fn solve(&self) -> Vec<Bits> {
        let mut out = Vec::new();
        let st = State {
            inn: Bits::empty(),
            out: Bits::empty(),
        };
        self.branch(st, &mut out);
        out
    }

    fn include(&self, st: &mut State, t: usize) -> bool {
        let add = self.down[t].and_not(&st.inn);
        if add.intersects(&st.out) {
            return false;
        }
        st.inn |= add;
        let mut conf = Bits::empty();
        for e in add.iter() {
            conf |= self.conflicts[e];
        }
        if conf.intersects(&st.inn) {
            return false;
        }
        self.exclude_all(st, conf)
    }

    fn exclude_all(&self, st: &mut State, set: Bits) -> bool {
        let add = set.and_not(&st.out);
        let mut closure = Bits::empty();
        for e in add.iter() {
            closure |= self.up[e];
        }
        if closure.intersects(&st.inn) {
            return false;
        }
        st.out |= closure;
        true
    }

    /// Unit propagation on the domination requirement. Returns `None` on a
    /// dead end, otherwise the candidate set of the tightest open
    /// requirement, if any remains.
    fn propagate(&self, st: &mut State) -> Option<Option<Bits>> {
        loop {
            let mut changed = false;
            let mut tightest: Option<(usize, Bits)> = None;
            let excluded = st.out;
            for t in excluded.iter() {
                if self.conflicts[t].intersects(&st.inn) {
                    continue;
                }
                let cand = self.conflicts[t].and_not(&st.out);
                match cand.len() {
                    0 => return None,
                    1 => {
                        let c = cand.first().expect("one candidate");
                        if !self.include(st, c) {
                            return None;
                        }
                        changed = true;
                        break;
                    }
                    k => {
                        if tightest.is_none_or(|(best, _)| k < best) {
                            tightest = Some((k, cand));
                        }
                    }
                }
            }
            if !changed {
                return Some(tightest.map(|(_, c)| c));
            }
        }
    }

    fn branch(&self, mut st: State, sink: &mut Vec<Bits>) {
        let open = match self.propagate(&mut st) {
            None => return,
            Some(open) => open,
        };
        if let Some(cands) = open {
            // Some excluded point still needs a witness: pick which candidate
            // is the first one included. The branches partition the space.
            let mut base = st;
            for c in cands.iter() {
                let mut next = base;
                if self.include(&mut next, c) {
                    self.branch(next, sink);
                }
                let mut single = Bits::empty();
                single.insert(c);
                if !self.exclude_all(&mut base, single) {
                    return;
                }
            }
            return;
        }
        let decided = st.inn | st.out;
        match Bits::full(self.len).and_not(&decided).first() {
            None => sink.push(st.inn),
            Some(t) => {
                let mut with = st;
                if self.include(&mut with, t) {
                    self.branch(with, sink);
                }
                let mut without = st;
                let mut single = Bits::empty();
                single.insert(t);
                if self.exclude_all(&mut without, single) {
                    self.branch(without, sink);
                }
            }
        }
    }
}
