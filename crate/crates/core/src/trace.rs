//! Families whose membership depends only on the trace `A ∩ [2r]`.
//!
//! Every MLCIF is generated inside `[2r]`, so for `n >= 2r` it is fully
//! described by the set of admissible traces it accepts. A trace `T` is
//! admissible when a member can actually have it: `|T| <= r` and the tail
//! `A \ [2r]` of size `r - |T|` fits among the `N = n - 2r` high elements.
//! Two traces `S`, `T` carry disjoint members iff `S ∩ T = ∅` and both
//! tails fit side by side, i.e. `(r - |S|) + (r - |T|) <= N`.
//!
//! Left shifts act on traces in two ways: inside `[2r]`, and by pulling a
//! tail element down into `[2r]` (which adds an element to the trace).

use crate::bits::{self, bit};
use crate::count::{binomial, Count};
use crate::error::{Error, Result};
use crate::search::{Bits, DownsetProblem};
use crate::setfam::{Family, Params};
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type SpaceCache = HashMap<(u32, u32), Arc<TraceSpace>>;

/// Largest `r` whose admissible traces fit the search bitset.
pub const MAX_TRACE_R: u32 = 5;

/// The admissible traces for one `(r, N)` together with the search problem
/// they induce. Shared across every `n` with the same effective `N`.
#[derive(Debug)]
pub struct TraceSpace {
    r: u32,
    /// `min(N, 2r)`; larger `N` changes neither admissibility nor conflicts.
    n_high: u32,
    traces: Vec<u64>,
    /// Dense index over all masks of `[2r]`; `u32::MAX` for inadmissible ones.
    index: Vec<u32>,
    problem: DownsetProblem,
}

impl TraceSpace {
    /// The space for `params`, cached per `(r, min(N, 2r))`.
    pub fn for_params(params: Params) -> Result<Arc<TraceSpace>> {
        let n_high = params
            .n_high()
            .ok_or_else(|| Error::InvalidParams(format!("trace methods need n >= 2r ({params})")))?;
        let r = params.r();
        if r > MAX_TRACE_R {
            return Err(Error::ResourceLimit(format!(
                "trace space for r={r} exceeds r <= {MAX_TRACE_R}"
            )));
        }
        let key = (r, n_high.min(2 * r));
        static CACHE: OnceLock<Mutex<SpaceCache>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().expect("trace cache poisoned");
        Ok(guard
            .entry(key)
            .or_insert_with(|| Arc::new(TraceSpace::build(key.0, key.1)))
            .clone())
    }

    fn build(r: u32, n_high: u32) -> TraceSpace {
        let two_r = 2 * r;
        let min_size = r.saturating_sub(n_high);
        let mut traces: Vec<u64> = (0..(1u64 << two_r))
            .filter(|t| (min_size..=r).contains(&t.count_ones()))
            .collect();
        // Smaller traces first, so the search branches on strong sets early.
        traces.sort_by_key(|&t| (t.count_ones(), bits::lex_key(t)));
        let mut index = vec![u32::MAX; 1usize << two_r];
        for (k, &t) in traces.iter().enumerate() {
            index[t as usize] = k as u32;
        }
        let conflicts = traces
            .iter()
            .map(|&s| {
                let mut b = Bits::empty();
                for (k, &t) in traces.iter().enumerate() {
                    let tails = (r - s.count_ones()) + (r - t.count_ones());
                    if s & t == 0 && tails <= n_high {
                        b.insert(k);
                    }
                }
                b
            })
            .collect();
        let step: Vec<Vec<usize>> = traces
            .iter()
            .map(|&t| {
                let mut below = Vec::new();
                for i in bits::elements(t) {
                    for j in 1..i {
                        if t & bit(j) == 0 {
                            below.push(index[((t & !bit(i)) | bit(j)) as usize] as usize);
                        }
                    }
                }
                if t.count_ones() < r {
                    for j in 1..=two_r {
                        if t & bit(j) == 0 {
                            below.push(index[(t | bit(j)) as usize] as usize);
                        }
                    }
                }
                below
            })
            .collect();
        let problem = DownsetProblem::new(conflicts, &step);
        TraceSpace {
            r,
            n_high,
            traces,
            index,
            problem,
        }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn traces(&self) -> &[u64] {
        &self.traces
    }

    pub fn index_of(&self, trace: u64) -> Option<usize> {
        self.index
            .get(trace as usize)
            .copied()
            .filter(|&k| k != u32::MAX)
            .map(|k| k as usize)
    }

    pub(crate) fn problem(&self) -> &DownsetProblem {
        &self.problem
    }

    #[allow(dead_code)]
    pub(crate) fn effective_n_high(&self) -> u32 {
        self.n_high
    }
}

/// A trace-determined family on `binom([n], r)`, `n >= 2r`.
#[derive(Clone, Debug)]
pub struct TraceFamily {
    params: Params,
    space: Arc<TraceSpace>,
    members: Bits,
}

impl PartialEq for TraceFamily {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.members == other.members
    }
}

impl Eq for TraceFamily {}

impl TraceFamily {
    pub(crate) fn from_bits(params: Params, space: Arc<TraceSpace>, members: Bits) -> Self {
        TraceFamily { params, space, members }
    }

    /// `⟨G⟩` for generators inside `[2r]`; generators larger than `r`
    /// contribute nothing.
    pub fn from_generators(params: Params, generators: &[u64]) -> Result<Self> {
        let space = TraceSpace::for_params(params)?;
        let low = params.low_mask();
        if let Some(g) = generators.iter().find(|&&g| g & !low != 0) {
            return Err(Error::UnsupportedGenerator(bits::format_set(*g)));
        }
        let mut members = Bits::empty();
        for (k, &t) in space.traces.iter().enumerate() {
            if generators.iter().any(|&g| g & t == g) {
                members.insert(k);
            }
        }
        Ok(TraceFamily { params, space, members })
    }

    /// Reads the trace predicate off an explicit family, failing when some
    /// trace class is only partly present.
    pub fn from_family(family: &Family) -> Result<Self> {
        let params = family.params();
        let space = TraceSpace::for_params(params)?;
        let low = params.low_mask();
        let mut seen: HashMap<u64, usize> = HashMap::new();
        for &a in family.masks() {
            *seen.entry(a & low).or_default() += 1;
        }
        let n_high = params.n_high().expect("checked by for_params") as u64;
        let mut members = Bits::empty();
        for (t, k) in seen {
            let expected = binomial(n_high, (params.r() - t.count_ones()) as u64);
            if Count::from(k as u64) != expected {
                return Err(Error::InvalidInput(format!(
                    "family is not trace-determined at trace {}",
                    bits::format_set(t)
                )));
            }
            let idx = space.index_of(t).expect("every member trace is admissible");
            members.insert(idx);
        }
        Ok(TraceFamily { params, space, members })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn space(&self) -> &Arc<TraceSpace> {
        &self.space
    }

    pub fn member_traces(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().map(|k| self.space.traces[k])
    }

    pub fn contains_trace(&self, trace: u64) -> bool {
        self.space.index_of(trace).is_some_and(|k| self.members.contains(k))
    }

    pub fn is_intersecting(&self) -> bool {
        self.space.problem.is_independent(&self.members)
    }

    pub fn is_left_compressed(&self) -> bool {
        self.space.problem.is_closed(&self.members)
    }

    /// No r-set outside the family meets every member.
    pub fn is_maximal_intersecting(&self) -> bool {
        self.space.problem.is_dominating(&self.members)
    }

    pub fn is_mlcif(&self) -> bool {
        self.is_intersecting() && self.is_left_compressed() && self.is_maximal_intersecting()
    }

    fn n_high(&self) -> u64 {
        self.params.n_high().expect("n >= 2r") as u64
    }

    /// `|F|`.
    pub fn size(&self) -> Count {
        let n_high = self.n_high();
        let r = self.params.r();
        self.member_traces()
            .map(|t| binomial(n_high, (r - t.count_ones()) as u64))
            .sum()
    }

    /// Whether every admissible trace containing `g` is a member.
    pub fn is_potential_generator(&self, g: u64) -> bool {
        g.count_ones() <= self.params.r()
            && self
                .space
                .traces
                .iter()
                .enumerate()
                .all(|(k, &t)| t & g != g || self.members.contains(k))
    }

    /// Inclusion-minimal potential generators inside `[2r]`, ascending mask order.
    pub fn canonical_generators(&self) -> Vec<u64> {
        let two_r = 2 * self.params.r();
        let mut found: Vec<u64> = Vec::new();
        for size in 0..=self.params.r() {
            for g in bits::k_subsets(two_r, size) {
                if found.iter().any(|&f| f & g == f) {
                    continue;
                }
                if self.is_potential_generator(g) {
                    found.push(g);
                }
            }
        }
        found.sort_unstable();
        found
    }

    /// Closed-form `hit_X` for `X ∩ [2r] = trace_x` and `|X \ [2r]| = q`.
    pub fn hit(&self, trace_x: u64, q: u32) -> Count {
        let n_high = self.n_high();
        let r = self.params.r();
        let mut total = Count::zero();
        for t in self.member_traces() {
            let k = (r - t.count_ones()) as u64;
            let all = binomial(n_high, k);
            if t & trace_x != 0 {
                total += all;
            } else {
                total += all - binomial(n_high - q as u64, k);
            }
        }
        total
    }

    /// Explicit members (`n <= 64`, within the cap).
    pub fn materialize(&self) -> Result<Family> {
        self.params.check_cap()?;
        let r = self.params.r();
        let two_r = 2 * r;
        let n_high = self.params.n_high().expect("n >= 2r");
        let mut members = Vec::new();
        for t in self.member_traces() {
            for tail in bits::k_subsets(n_high, r - t.count_ones()) {
                members.push(t | (tail << two_r));
            }
        }
        Ok(Family::from_sorted_unchecked(self.params, members))
    }

    /// Counts of member traces by tail size and disjointness pattern, for
    /// fast repeated hitting evaluation.
    pub fn profile(&self) -> HitProfile {
        let r = self.params.r() as usize;
        let two_r = 2 * self.params.r();
        let width = r + 1;
        let traces: Vec<u64> = self.member_traces().collect();
        let mut disjoint = vec![0u32; (1usize << two_r) * width];
        for y in 0..(1u64 << two_r) {
            let row = &mut disjoint[y as usize * width..(y as usize + 1) * width];
            for &t in &traces {
                if t & y == 0 {
                    row[r - t.count_ones() as usize] += 1;
                }
            }
        }
        HitProfile {
            r: self.params.r(),
            disjoint,
        }
    }
}

/// `c_k(Y)`: member traces with tail size `k` avoiding `Y`, for every `Y ⊆ [2r]`.
#[derive(Clone, Debug)]
pub struct HitProfile {
    r: u32,
    disjoint: Vec<u32>,
}

impl HitProfile {
    fn row(&self, y: u64) -> &[u32] {
        let width = self.r as usize + 1;
        &self.disjoint[y as usize * width..(y as usize + 1) * width]
    }

    /// `hit_X = Σ_k c_k(∅) C(N, k) - Σ_k c_k(Y) C(N - q, k)` where
    /// `binom_full[k] = C(N, k)` and `binom_rest[k] = C(N - q, k)`.
    pub fn hit(&self, trace_x: u64, binom_full: &[Count], binom_rest: &[Count]) -> Count {
        let total: Count = self.row(0).iter().zip(binom_full).map(|(&c, b)| b * c).sum();
        let missed: Count = self.row(trace_x).iter().zip(binom_rest).map(|(&c, b)| b * c).sum();
        total - missed
    }

    /// Member traces of the given size meeting `trace_x`.
    pub fn traces_hitting(&self, size: u32, trace_x: u64) -> u32 {
        let k = (self.r - size) as usize;
        self.row(0)[k] - self.row(trace_x)[k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::mask_of;
    use crate::setfam::{hit_brute, is_intersecting, is_left_compressed, XQuery};

    fn p(n: u32, r: u32) -> Params {
        Params::new(n, r).unwrap()
    }

    #[test]
    fn admissible_trace_counts() {
        // r = 3, N >= 3: all subsets of [6] of size <= 3.
        assert_eq!(TraceSpace::for_params(p(10, 3)).unwrap().traces().len(), 42);
        // N = 0: exactly the 3-subsets of [6].
        assert_eq!(TraceSpace::for_params(p(6, 3)).unwrap().traces().len(), 20);
        assert_eq!(TraceSpace::for_params(p(100, 4)).unwrap().traces().len(), 163);
        assert_eq!(TraceSpace::for_params(p(100, 5)).unwrap().traces().len(), 638);
        assert!(TraceSpace::for_params(p(5, 3)).is_err());
        assert!(TraceSpace::for_params(p(100, 6)).unwrap_err().is_resource_limit());
    }

    #[test]
    fn star_size_and_hits() {
        let star = TraceFamily::from_generators(p(10, 3), &[1]).unwrap();
        assert_eq!(star.size(), binomial(9, 2));
        assert_eq!(star.hit(mask_of(&[2, 3]), 0), Count::from(15u32));
        assert!(star.is_mlcif());
        assert_eq!(star.canonical_generators(), vec![1]);
    }

    #[test]
    fn materialized_agrees_with_brute_predicates() {
        let gens = [mask_of(&[1, 2]), mask_of(&[1, 3]), mask_of(&[2, 3])];
        for n in 6..=11 {
            let tf = TraceFamily::from_generators(p(n, 3), &gens).unwrap();
            let fam = tf.materialize().unwrap();
            assert_eq!(Count::from(fam.len() as u64), tf.size());
            assert_eq!(is_intersecting(&fam), tf.is_intersecting());
            assert_eq!(is_left_compressed(&fam), tf.is_left_compressed());
            assert_eq!(TraceFamily::from_family(&fam).unwrap(), tf);
            let x = XQuery::from_elements(p(n, 3), &[2, 3]).unwrap();
            assert_eq!(hit_brute(&fam, &x), tf.hit(mask_of(&[2, 3]), 0));
        }
    }

    #[test]
    fn generator_outside_low_part_is_rejected() {
        let err = TraceFamily::from_generators(p(10, 3), &[mask_of(&[1, 7])]).unwrap_err();
        assert!(matches!(err, Error::UnsupportedGenerator(_)));
    }

    #[test]
    fn profile_matches_direct_formula() {
        let gens = [
            mask_of(&[1, 2]),
            mask_of(&[1, 3]),
            mask_of(&[1, 4]),
            mask_of(&[2, 3, 4]),
        ];
        let params = p(17, 4);
        let tf = TraceFamily::from_generators(params, &gens).unwrap();
        let prof = tf.profile();
        let n_high = 9u64;
        for q in 0..=9u64 {
            let full: Vec<Count> = (0..=4).map(|k| binomial(n_high, k)).collect();
            let rest: Vec<Count> = (0..=4).map(|k| binomial(n_high - q, k)).collect();
            for y in [0u64, 1, 2, 6, 0b1010_1010, 0xff] {
                assert_eq!(prof.hit(y, &full, &rest), tf.hit(y, q as u32), "y={y:b}, q={q}");
            }
        }
    }
}
