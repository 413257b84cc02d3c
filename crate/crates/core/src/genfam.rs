//! Generating families: `⟨G⟩`, potential and canonical generators, rank,
//! the named families and closed-form hitting through `[2r]`-traces.

use crate::bits::{self, bit};
use crate::count::{binomial, Count};
use crate::enumerator;
use crate::error::{Error, Result};
use crate::setfam::{all_rsets, enumeration_cap, Family, Params};
use crate::trace::TraceFamily;
use crate::xclass::XClass;
use num_traits::Zero;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// An antichain of generator sets (bitmasks), in lexicographic order of
/// their sorted element lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenFamily {
    params: Params,
    generators: Vec<u64>,
    oversized: bool,
}

impl GenFamily {
    /// Every generator must lie in `[min(n, 64)]`, have at most `r`
    /// elements, and no generator may contain another.
    pub fn new(params: Params, generators: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::build(params, generators.into_iter().collect(), false)
    }

    /// Like [`GenFamily::new`] but admits generators with more than `r`
    /// elements (they generate nothing).
    pub fn new_oversized(params: Params, generators: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::build(params, generators.into_iter().collect(), true)
    }

    pub fn from_lists(params: Params, lists: &[&[u32]]) -> Result<Self> {
        let mut gens = Vec::with_capacity(lists.len());
        for l in lists {
            if l.iter().any(|&e| e == 0 || e > params.n().min(64)) {
                return Err(Error::InvalidSet(format!("{l:?} not within [{}]", params.n())));
            }
            gens.push(bits::mask_of(l));
        }
        Self::new(params, gens)
    }

    fn build(params: Params, mut generators: Vec<u64>, allow_oversized: bool) -> Result<Self> {
        let ground = bits::interval(1, params.n().min(64));
        generators.sort_by_key(|&g| bits::lex_key(g));
        generators.dedup();
        let mut oversized = false;
        for &g in &generators {
            if g & !ground != 0 {
                return Err(Error::InvalidSet(format!(
                    "generator {} not within [{}]",
                    bits::format_set(g),
                    params.n()
                )));
            }
            if g.count_ones() > params.r() {
                if !allow_oversized {
                    return Err(Error::InvalidSet(format!(
                        "generator {} has more than r={} elements",
                        bits::format_set(g),
                        params.r()
                    )));
                }
                oversized = true;
            }
        }
        for &a in &generators {
            if let Some(&b) = generators.iter().find(|&&b| b != a && a & b == a) {
                return Err(Error::InvalidInput(format!(
                    "not an antichain: {} ⊂ {}",
                    bits::format_set(a),
                    bits::format_set(b)
                )));
            }
        }
        Ok(GenFamily {
            params,
            generators,
            oversized,
        })
    }

    /// Keeps only the inclusion-minimal sets of `sets`.
    pub fn minimal(params: Params, sets: impl IntoIterator<Item = u64>, allow_oversized: bool) -> Result<Self> {
        let sets: Vec<u64> = sets.into_iter().collect();
        let minimal = sets
            .iter()
            .copied()
            .filter(|&a| !sets.iter().any(|&b| b != a && a & b == b))
            .collect();
        Self::build(params, minimal, allow_oversized)
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_oversized(&self) -> bool {
        self.oversized
    }

    /// Smallest generator size.
    pub fn min_size(&self) -> Option<u32> {
        self.generators.iter().map(|g| g.count_ones()).min()
    }

    /// Generators with exactly `size` elements.
    pub fn layer(&self, size: u32) -> Vec<u64> {
        self.generators
            .iter()
            .copied()
            .filter(|g| g.count_ones() == size)
            .collect()
    }

    pub fn contains(&self, g: u64) -> bool {
        self.generators.contains(&g)
    }

    /// All generators lie inside `[2r]`.
    pub fn within_low(&self) -> bool {
        let low = bits::interval(1, 2 * self.params.r());
        self.generators.iter().all(|&g| g & !low == 0)
    }

    /// Pairwise intersecting as a collection of sets.
    pub fn is_intersecting(&self) -> bool {
        let g = &self.generators;
        g.iter().enumerate().all(|(k, &a)| g[k..].iter().all(|&b| a & b != 0))
    }

    /// Sort key used for catalog order.
    pub fn lex_key(&self) -> Vec<Vec<u32>> {
        self.generators.iter().map(|&g| bits::lex_key(g)).collect()
    }

    /// `gen:<s1>;<s2>;...`, with `{}` for an empty generator.
    pub fn to_gen_string(&self) -> String {
        let parts: Vec<String> = self
            .generators
            .iter()
            .map(|&g| if g == 0 { "{}".to_string() } else { bits::format_list(g) })
            .collect();
        format!("gen:{}", parts.join(";"))
    }

    pub fn trace_family(&self) -> Result<TraceFamily> {
        TraceFamily::from_generators(self.params, &self.generators)
    }
}

impl fmt::Display for GenFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_gen_string())
    }
}

/// Parses the body of a `gen:` list into masks.
pub fn parse_generator_list(body: &str) -> Result<Vec<u64>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(';')
        .map(|part| {
            let part = part.trim();
            if part == "{}" {
                return Ok(0);
            }
            part.split(',').try_fold(0u64, |m, tok| {
                let e: u32 = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element `{tok}` in `{part}`")))?;
                if !(1..=64).contains(&e) {
                    return Err(Error::Parse(format!("element {e} out of range")));
                }
                Ok(m | bit(e))
            })
        })
        .collect()
}

/// Minimum generator size of an MLCIF. Zero only for the complete family
/// `binom([n], r)` with `n < 2r`, whose sole generator is the empty set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Rank(pub u32);

impl Rank {
    pub fn value(&self) -> u32 {
        self.0
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which named family a [`FamilySpec`] denotes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    Star,
    /// The t-adjusted Hilton-Milner family.
    Ahm(u32),
    /// `⟨binom([5], 3)⟩`, only for `r = 3`.
    A345,
    Custom(Vec<u64>),
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::Star => f.write_str("star"),
            FamilyTag::Ahm(t) => write!(f, "ahm:{t}"),
            FamilyTag::A345 => f.write_str("a345"),
            FamilyTag::Custom(gens) => {
                let parts: Vec<String> = gens
                    .iter()
                    .map(|&g| if g == 0 { "{}".to_string() } else { bits::format_list(g) })
                    .collect();
                write!(f, "gen:{}", parts.join(";"))
            }
        }
    }
}

impl FromStr for FamilyTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "star" {
            Ok(FamilyTag::Star)
        } else if s == "a345" {
            Ok(FamilyTag::A345)
        } else if let Some(t) = s.strip_prefix("ahm:") {
            t.parse()
                .map(FamilyTag::Ahm)
                .map_err(|_| Error::Parse(format!("bad ahm parameter `{t}`")))
        } else if let Some(body) = s.strip_prefix("gen:") {
            Ok(FamilyTag::Custom(parse_generator_list(body)?))
        } else {
            Err(Error::Parse(format!(
                "unknown family `{s}` (star | ahm:<t> | a345 | gen:...)"
            )))
        }
    }
}

/// A named family over fixed `(n, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    tag: FamilyTag,
    params: Params,
}

impl FamilySpec {
    pub fn new(tag: FamilyTag, params: Params) -> Result<Self> {
        match &tag {
            FamilyTag::Ahm(t) if *t < 2 || *t > params.n() => {
                return Err(Error::InvalidSpec(format!("ahm:{t} needs 2 <= t <= n={}", params.n())))
            }
            FamilyTag::A345 if params.r() != 3 || params.n() < 5 => {
                return Err(Error::InvalidSpec(format!("a345 needs r = 3 and n >= 5 ({params})")))
            }
            FamilyTag::Custom(gens) => {
                GenFamily::minimal(params, gens.iter().copied(), true)
                    .map_err(|e| Error::InvalidSpec(e.to_string()))?;
            }
            _ => {}
        }
        Ok(FamilySpec { tag, params })
    }

    pub fn parse(text: &str, params: Params) -> Result<Self> {
        let tag: FamilyTag = text.parse().map_err(|e: Error| Error::InvalidSpec(e.to_string()))?;
        Self::new(tag, params)
    }

    pub fn star(params: Params) -> Self {
        FamilySpec {
            tag: FamilyTag::Star,
            params,
        }
    }

    pub fn ahm(t: u32, params: Params) -> Result<Self> {
        Self::new(FamilyTag::Ahm(t), params)
    }

    pub fn tag(&self) -> &FamilyTag {
        &self.tag
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn label(&self) -> String {
        self.tag.to_string()
    }

    /// The generating sets that define the family, reduced to an antichain.
    /// For `ahm:t` this is `{1,i} (2 <= i <= t)` plus `[2, t]`.
    pub fn declared_generators(&self) -> Result<GenFamily> {
        let sets: Vec<u64> = match &self.tag {
            FamilyTag::Star => vec![1],
            FamilyTag::Ahm(t) => (2..=*t)
                .map(|i| 1 | bit(i))
                .chain(std::iter::once(bits::interval(2, *t)))
                .collect(),
            FamilyTag::A345 => bits::k_subsets(5, 3).collect(),
            FamilyTag::Custom(gens) => gens.clone(),
        };
        GenFamily::minimal(self.params, sets, true)
    }

    /// Trace form of the family; fails when a generator leaves `[2r]`.
    pub fn trace_family(&self) -> Result<TraceFamily> {
        self.declared_generators()?.trace_family()
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag)
    }
}

/// `⟨G⟩_{n,r}`: the r-sets containing some generator.
pub fn generate(generators: &GenFamily) -> Result<Family> {
    let all = all_rsets(generators.params)?;
    let gens = &generators.generators;
    let members = all
        .masks()
        .iter()
        .copied()
        .filter(|&a| gens.iter().any(|&g| a & g == g))
        .collect();
    Ok(Family::from_sorted_unchecked(generators.params, members))
}

/// The r-supersets of `g` within `[n]`.
fn r_supersets(params: Params, g: u64) -> impl Iterator<Item = u64> {
    let free: Vec<u32> = bits::elements(params.ground_mask() & !g).collect();
    let need = params.r().saturating_sub(g.count_ones());
    let valid = g.count_ones() <= params.r();
    let len = free.len() as u32;
    bits::k_subsets(len, need)
        .filter(move |_| valid)
        .map(move |pick| bits::elements(pick).fold(g, |m, k| m | bit(free[(k - 1) as usize])))
}

/// Every r-set containing `g` belongs to `family`.
pub fn is_potential_generator(family: &Family, g: u64) -> Result<bool> {
    let params = family.params();
    if g.count_ones() > params.r() {
        return Err(Error::InvalidInput(format!(
            "{} has more than r={} elements",
            bits::format_set(g),
            params.r()
        )));
    }
    if g & !params.ground_mask() != 0 {
        return Err(Error::InvalidSet(format!(
            "{} not within [{}]",
            bits::format_set(g),
            params.n()
        )));
    }
    Ok(r_supersets(params, g).all(|a| family.contains_mask(a)))
}

/// Minimal potential generators together with whether the input was an MLCIF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub generators: GenFamily,
    /// When false the `[2r]` and uniqueness guarantees do not apply.
    pub is_mlcif: bool,
}

/// All inclusion-minimal potential generators, found by brute force over
/// subsets of `[n]` of size at most `r`.
pub fn canonical_generators(family: &Family) -> Result<Canonical> {
    let params = family.params();
    params.require_explicit()?;
    let candidates: Count = (0..=params.r()).map(|k| binomial(params.n() as u64, k as u64)).sum();
    if candidates > Count::from(enumeration_cap()) {
        return Err(Error::ResourceLimit(format!(
            "{candidates} candidate generators exceed the cap {}",
            enumeration_cap()
        )));
    }
    let mut found: Vec<u64> = Vec::new();
    for size in 0..=params.r() {
        for g in bits::k_subsets(params.n(), size) {
            if found.iter().any(|&f| f & g == f) {
                continue;
            }
            if r_supersets(params, g).all(|a| family.contains_mask(a)) {
                found.push(g);
            }
        }
    }
    let generators = GenFamily::new(params, found)?;
    Ok(Canonical {
        generators,
        is_mlcif: enumerator::is_mlcif(family),
    })
}

/// Smallest generator size; the family must be an MLCIF.
pub fn rank(family: &Family) -> Result<Rank> {
    let canon = canonical_generators(family)?;
    if !canon.is_mlcif {
        return Err(Error::NotMlcif("rank is defined for MLCIFs only".into()));
    }
    Ok(Rank(canon.generators.min_size().unwrap_or(0)))
}

/// Materializes a named family.
pub fn make_named(spec: &FamilySpec) -> Result<Family> {
    let params = spec.params;
    let all = all_rsets(params)?;
    let keep: Box<dyn Fn(u64) -> bool> = match &spec.tag {
        FamilyTag::Star => Box::new(|a| a & 1 != 0),
        FamilyTag::Ahm(t) => {
            let mid = bits::interval(2, *t);
            Box::new(move |a| (a & 1 != 0 && a & mid != 0) || a & mid == mid)
        }
        FamilyTag::A345 => Box::new(|a| a & !0b11111 == 0),
        FamilyTag::Custom(_) => return generate(&spec.declared_generators()?),
    };
    let members = all.masks().iter().copied().filter(|&a| keep(a)).collect();
    Ok(Family::from_sorted_unchecked(params, members))
}

/// Largest `r` accepted by [`hit_trace`] (it walks all subsets of `[2r]`).
pub const MAX_HIT_TRACE_R: u32 = 12;

/// `hit_X(⟨G⟩)` summed over traces `T ⊆ [2r]` with `|T| <= r` containing a
/// generator: `C(N, r-|T|)` when `T` meets `X`, otherwise
/// `C(N, r-|T|) - C(N-q, r-|T|)`, with `N = n - 2r` and `q = |X \ [2r]|`.
pub fn hit_trace(generators: &GenFamily, xc: &XClass) -> Result<Count> {
    let params = generators.params;
    if params != xc.params() {
        return Err(Error::ParamMismatch(params.to_string(), xc.params().to_string()));
    }
    let r = params.r();
    if r > MAX_HIT_TRACE_R {
        return Err(Error::ResourceLimit(format!(
            "hit_trace walks 4^r traces; r={r} is too large"
        )));
    }
    let low = bits::interval(1, 2 * r);
    if let Some(&g) = generators.generators.iter().find(|&&g| g & !low != 0) {
        return Err(Error::UnsupportedGenerator(bits::format_set(g)));
    }
    let n_high = params.n_high().expect("x-class guarantees n >= 2r") as u64;
    let q = xc.q() as u64;
    let x = xc.trace_mask();
    let mut total = Count::zero();
    for t in 0..(1u64 << (2 * r)) {
        let size = t.count_ones();
        if size > r || !generators.generators.iter().any(|&g| t & g == g) {
            continue;
        }
        let k = (r - size) as u64;
        total += binomial(n_high, k);
        if t & x == 0 {
            total -= binomial(n_high - q, k);
        }
    }
    Ok(total)
}
