//! Enumeration of all MLCIFs on `(n, r)`, maximality tests and the rank-2
//! structure classes.

use crate::bits::{self, bit};
use crate::count::{binomial, Count};
use crate::error::{Error, Result};
use crate::genfam::{FamilySpec, FamilyTag, GenFamily, Rank};
use crate::search::{Bits, DownsetProblem};
use crate::setfam::{all_rsets, is_intersecting, is_left_compressed, left_compress, Family, Params};
use crate::trace::{HitProfile, TraceFamily, TraceSpace, MAX_TRACE_R};
use crate::xclass::XClass;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

/// Structure of a rank-2 MLCIF: `AHM_3`, or size-2 generators exactly
/// `{1,2}, ..., {1,j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rank2Kind {
    Ahm3,
    I(u32),
}

impl fmt::Display for Rank2Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank2Kind::Ahm3 => f.write_str("AHM3"),
            Rank2Kind::I(j) => write!(f, "I({j})"),
        }
    }
}

impl FromStr for Rank2Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "AHM3" {
            return Ok(Rank2Kind::Ahm3);
        }
        s.strip_prefix("I(")
            .and_then(|t| t.strip_suffix(')'))
            .and_then(|t| t.parse().ok())
            .map(Rank2Kind::I)
            .ok_or_else(|| Error::Parse(format!("bad rank-2 kind `{s}`")))
    }
}

/// All r-sets meeting every member of `family`. No cap check: the caller
/// already holds an explicit family over the same ground set.
fn closure_masks(family: &Family) -> Vec<u64> {
    let p = family.params();
    bits::k_subsets(p.n(), p.r())
        .filter(|&b| family.masks().iter().all(|&a| a & b != 0))
        .collect()
}

/// `D(F)`: every r-set meeting all members of `family`.
pub fn closure_set(family: &Family) -> Result<Family> {
    family.params().check_cap()?;
    Ok(Family::from_sorted_unchecked(family.params(), closure_masks(family)))
}

/// Intersecting, left-compressed and equal to its own closure set.
pub fn is_mlcif(family: &Family) -> bool {
    is_intersecting(family) && is_left_compressed(family) && closure_masks(family) == family.masks()
}

/// Grows a left-compressed intersecting family into an MLCIF by adding the
/// smallest addable set and compressing again, until nothing is addable.
pub fn mlcif_complete(family: &Family) -> Result<Family> {
    if !is_intersecting(family) || !is_left_compressed(family) {
        return Err(Error::InvalidInput(
            "completion needs a left-compressed intersecting family".into(),
        ));
    }
    family.params().check_cap()?;
    let mut current = family.clone();
    loop {
        let addable = closure_masks(&current).into_iter().find(|&b| !current.contains_mask(b));
        match addable {
            None => return Ok(current),
            Some(b) => current = left_compress(&current.with_member(b)),
        }
    }
}

/// Rank-2 kind from a canonical generator family.
pub fn classify_rank2_generators(generators: &GenFamily) -> Result<Rank2Kind> {
    if generators.min_size() != Some(2) {
        return Err(Error::InvalidInput(format!("{generators} does not have rank 2")));
    }
    let pairs = generators.layer(2);
    if pairs.contains(&bits::mask_of(&[2, 3])) {
        return Ok(Rank2Kind::Ahm3);
    }
    let j = pairs.len() as u32 + 1;
    let expected: Vec<u64> = (2..=j).map(|i| 1 | bit(i)).collect();
    let mut sorted = pairs.clone();
    sorted.sort_unstable();
    if sorted != expected {
        return Err(Error::ClassificationViolation(format!(
            "size-2 generators of {generators} are not {{1,2}},...,{{1,j}}"
        )));
    }
    if j > generators.params().r() + 1 {
        return Err(Error::ClassificationViolation(format!(
            "{generators} is in I({j}) with j > r+1"
        )));
    }
    Ok(Rank2Kind::I(j))
}

/// Rank-2 kind of an explicit MLCIF.
pub fn classify_rank2(family: &Family) -> Result<Rank2Kind> {
    let canon = crate::genfam::canonical_generators(family)?;
    if !canon.is_mlcif {
        return Err(Error::NotMlcif("classification applies to MLCIFs".into()));
    }
    classify_rank2_generators(&canon.generators)
}

/// One MLCIF of a catalog.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    generators: GenFamily,
    rank: Rank,
    kind: Option<Rank2Kind>,
    label: String,
    /// `None` only for the complete family when `n < 2r`.
    trace: Option<TraceFamily>,
    family: OnceLock<Family>,
    profile: OnceLock<HitProfile>,
}

impl CatalogEntry {
    pub(crate) fn from_trace(trace: TraceFamily, labels: &[(GenFamily, String)]) -> Result<Self> {
        let params = trace.params();
        let generators = GenFamily::new(params, trace.canonical_generators())?;
        let rank = Rank(generators.min_size().unwrap_or(0));
        let kind = if rank.0 == 2 {
            classify_rank2_generators(&generators).ok()
        } else {
            None
        };
        let label = labels
            .iter()
            .find(|(g, _)| *g == generators)
            .map(|(_, l)| l.clone())
            .unwrap_or_else(|| generators.to_gen_string());
        Ok(CatalogEntry {
            generators,
            rank,
            kind,
            label,
            trace: Some(trace),
            family: OnceLock::new(),
            profile: OnceLock::new(),
        })
    }

    pub(crate) fn complete(params: Params) -> Result<Self> {
        Ok(CatalogEntry {
            generators: GenFamily::new(params, [0])?,
            rank: Rank(0),
            kind: None,
            label: "gen:{}".into(),
            trace: None,
            family: OnceLock::new(),
            profile: OnceLock::new(),
        })
    }

    pub fn generators(&self) -> &GenFamily {
        &self.generators
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn kind(&self) -> Option<Rank2Kind> {
        self.kind
    }

    /// `star`, `ahm:<t>`, `a345`, or the `gen:` form.
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn trace(&self) -> Option<&TraceFamily> {
        self.trace.as_ref()
    }

    pub fn params(&self) -> Params {
        self.generators.params()
    }

    pub fn size(&self) -> Count {
        match &self.trace {
            Some(t) => t.size(),
            None => binomial(self.params().n() as u64, self.params().r() as u64),
        }
    }

    /// Explicit members, built on first use.
    pub fn family(&self) -> Result<&Family> {
        if let Some(f) = self.family.get() {
            return Ok(f);
        }
        let built = match &self.trace {
            Some(t) => t.materialize()?,
            None => all_rsets(self.params())?,
        };
        Ok(self.family.get_or_init(|| built))
    }

    pub fn profile(&self) -> Option<&HitProfile> {
        self.trace.as_ref().map(|t| self.profile.get_or_init(|| t.profile()))
    }

    /// Closed-form hitting number for an X-class.
    pub fn hit(&self, xc: &XClass) -> Count {
        self.trace
            .as_ref()
            .expect("x-classes exist only for n >= 2r")
            .hit(xc.trace_mask(), xc.q())
    }
}

/// Every MLCIF on `(n, r)` in canonical order: lexicographic by canonical
/// generator lists.
#[derive(Clone, Debug)]
pub struct MlcifCatalog {
    params: Params,
    entries: Vec<CatalogEntry>,
}

impl MlcifCatalog {
    pub(crate) fn from_entries(params: Params, mut entries: Vec<CatalogEntry>) -> Self {
        entries.sort_by_key(|e| e.generators.lex_key());
        entries.dedup_by(|a, b| a.generators == b.generators);
        MlcifCatalog { params, entries }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of_generators(&self, generators: &GenFamily) -> Option<usize> {
        self.entries.iter().position(|e| e.generators == *generators)
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.label == label)
    }

    /// Entry matching a named family, compared through canonical generators.
    pub fn index_of_spec(&self, spec: &FamilySpec) -> Option<usize> {
        let trace = spec.trace_family().ok()?;
        let gens = GenFamily::new(self.params, trace.canonical_generators()).ok()?;
        self.index_of_generators(&gens)
    }

    pub fn star_index(&self) -> Option<usize> {
        self.index_of_label("star")
    }
}

/// Options for [`enumerate_mlcifs_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerateOptions {
    /// Permit `r = 5`, which is slow.
    pub allow_r5: bool,
}

/// Labels for the named MLCIFs that may occur at these parameters.
pub(crate) fn named_labels(params: Params) -> Vec<(GenFamily, String)> {
    let mut tags = vec![FamilyTag::Star];
    tags.extend((3..=params.r() + 1).map(FamilyTag::Ahm));
    if params.r() == 3 {
        tags.push(FamilyTag::A345);
    }
    tags.into_iter()
        .filter_map(|tag| {
            let spec = FamilySpec::new(tag, params).ok()?;
            let trace = spec.trace_family().ok()?;
            let gens = GenFamily::new(params, trace.canonical_generators()).ok()?;
            Some((gens, spec.label()))
        })
        .collect()
}

pub fn enumerate_mlcifs(params: Params) -> Result<MlcifCatalog> {
    enumerate_mlcifs_with(params, EnumerateOptions::default())
}

/// All MLCIFs, found by a down-set search over the admissible `[2r]`-traces.
pub fn enumerate_mlcifs_with(params: Params, options: EnumerateOptions) -> Result<MlcifCatalog> {
    if params.n() < 2 * params.r() {
        return Ok(MlcifCatalog::from_entries(
            params,
            vec![CatalogEntry::complete(params)?],
        ));
    }
    let limit = if options.allow_r5 { MAX_TRACE_R } else { 4 };
    if params.r() > limit {
        return Err(Error::ResourceLimit(format!(
            "enumeration supports r <= {limit} (r = {})",
            params.r()
        )));
    }
    let space = TraceSpace::for_params(params)?;
    let solutions = space.problem().solve();
    let labels = named_labels(params);
    let entries = solutions
        .into_par_iter()
        .map(|bits| CatalogEntry::from_trace(TraceFamily::from_bits(params, space.clone(), bits), &labels))
        .collect::<Result<Vec<_>>>()?;
    Ok(MlcifCatalog::from_entries(params, entries))
}

/// Largest `C(n, r)` accepted by [`enumerate_mlcifs_direct`].
pub const MAX_DIRECT_UNIVERSE: usize = Bits::CAPACITY;

/// All MLCIFs found by searching explicit r-sets rather than traces. Works
/// for any `n`, including `n < 2r`; meant as an independent cross-check.
pub fn enumerate_mlcifs_direct(params: Params) -> Result<Vec<Family>> {
    params.require_explicit()?;
    if params.universe_size() > Count::from(MAX_DIRECT_UNIVERSE) {
        return Err(Error::ResourceLimit(format!(
            "direct search needs C(n, r) <= {MAX_DIRECT_UNIVERSE} ({params})"
        )));
    }
    let sets: Vec<u64> = bits::k_subsets(params.n(), params.r()).collect();
    let index: BTreeMap<u64, usize> = sets.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let conflicts = sets
        .iter()
        .map(|&a| {
            let mut b = Bits::empty();
            for (k, &c) in sets.iter().enumerate() {
                if a & c == 0 {
                    b.insert(k);
                }
            }
            b
        })
        .collect();
    let step: Vec<Vec<usize>> = sets
        .iter()
        .map(|&a| {
            let mut below = Vec::new();
            for i in bits::elements(a) {
                for j in 1..i {
                    if a & bit(j) == 0 {
                        below.push(index[&((a & !bit(i)) | bit(j))]);
                    }
                }
            }
            below
        })
        .collect();
    let problem = DownsetProblem::new(conflicts, &step);
    let mut families: Vec<Family> = problem
        .solve()
        .into_iter()
        .map(|b| Family::from_sorted_unchecked(params, b.iter().map(|k| sets[k]).collect()))
        .collect();
    families.sort_by(|a, b| a.masks().cmp(b.masks()));
    Ok(families)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfam::{canonical_generators, make_named};

    fn p(n: u32, r: u32) -> Params {
        Params::new(n, r).unwrap()
    }

    fn named(text: &str, params: Params) -> Family {
        make_named(&FamilySpec::parse(text, params).unwrap()).unwrap()
    }

    fn labels(c: &MlcifCatalog) -> Vec<&str> {
        c.entries().iter().map(|e| e.label()).collect()
    }

    #[test]
    fn closure_set_examples() {
        let q = p(5, 3);
        let all = all_rsets(q).unwrap();
        assert_eq!(closure_set(&all).unwrap(), all);
        assert_eq!(closure_set(&Family::empty(q).unwrap()).unwrap(), all);
        let hm = named("ahm:4", p(8, 3));
        assert_eq!(closure_set(&hm).unwrap(), hm);
    }

    #[test]
    fn is_mlcif_examples() {
        let q = p(10, 3);
        for t in 3..=4 {
            assert!(is_mlcif(&named(&format!("ahm:{t}"), q)));
        }
        for m in 5..=8 {
            assert!(!is_mlcif(&named(&format!("ahm:{m}"), q)), "m={m}");
        }
        let star = named("star", q);
        let first = star.masks()[0];
        assert!(!is_mlcif(&star.without_member(first)));
    }

    #[test]
    fn completion() {
        let q = p(7, 3);
        let hm = named("ahm:4", q);
        assert_eq!(mlcif_complete(&hm).unwrap(), hm);
        let done = mlcif_complete(&Family::empty(q).unwrap()).unwrap();
        assert!(is_mlcif(&done));
        let seed = Family::from_sets(q, &[&[1, 2, 3]]).unwrap();
        let done = mlcif_complete(&seed).unwrap();
        assert!(is_mlcif(&done) && seed.is_subfamily_of(&done));
        let bad = Family::from_sets(q, &[&[1, 2, 3], &[4, 5, 6]]).unwrap();
        assert!(matches!(mlcif_complete(&bad), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn enumeration_examples() {
        let c = enumerate_mlcifs(p(5, 2)).unwrap();
        assert_eq!(labels(&c), vec!["star", "ahm:3"]);
        for n in 1..=6 {
            let c = enumerate_mlcifs(p(n.max(2), 1)).unwrap();
            assert_eq!(c.len(), 1);
            assert_eq!(c.entries()[0].family().unwrap().masks(), &[1]);
        }
        let c = enumerate_mlcifs(p(5, 3)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.entries()[0].family().unwrap(), &all_rsets(p(5, 3)).unwrap());
        assert_eq!(c.entries()[0].rank(), Rank(0));
    }

    #[test]
    fn catalog_entries_are_mlcifs_with_matching_generators() {
        for (n, r) in [(6, 3), (7, 3), (9, 3), (8, 4)] {
            let c = enumerate_mlcifs(p(n, r)).unwrap();
            for e in c.entries() {
                let f = e.family().unwrap();
                assert!(is_mlcif(f), "{} at n={n} r={r}", e.label());
                let canon = canonical_generators(f).unwrap();
                assert_eq!(&canon.generators, e.generators());
                assert_eq!(Count::from(f.len()), e.size());
            }
        }
    }

    #[test]
    fn direct_search_agrees() {
        for (n, r) in [
            (4, 2),
            (5, 2),
            (6, 2),
            (7, 2),
            (6, 3),
            (7, 3),
            (8, 3),
            (9, 3),
            (8, 4),
            (5, 3),
            (4, 3),
        ] {
            let q = p(n, r);
            let mut traced: Vec<Family> = enumerate_mlcifs(q)
                .unwrap()
                .entries()
                .iter()
                .map(|e| e.family().unwrap().clone())
                .collect();
            traced.sort_by(|a, b| a.masks().cmp(b.masks()));
            assert_eq!(traced, enumerate_mlcifs_direct(q).unwrap(), "n={n} r={r}");
        }
    }

    #[test]
    fn rank2_examples() {
        let q = p(10, 3);
        assert_eq!(classify_rank2(&named("ahm:3", q)).unwrap(), Rank2Kind::Ahm3);
        assert_eq!(classify_rank2(&named("ahm:4", q)).unwrap(), Rank2Kind::I(4));
        assert_ne!(classify_rank2(&named("ahm:3", q)).unwrap(), Rank2Kind::I(3));
        assert!(matches!(classify_rank2(&named("star", q)), Err(Error::InvalidInput(_))));
        let q4 = p(12, 4);
        assert_eq!(classify_rank2(&named("ahm:5", q4)).unwrap(), Rank2Kind::I(5));
        assert_eq!("I(5)".parse::<Rank2Kind>().unwrap(), Rank2Kind::I(5));
        assert_eq!("AHM3".parse::<Rank2Kind>().unwrap(), Rank2Kind::Ahm3);
    }

    #[test]
    fn r5_needs_override() {
        assert!(enumerate_mlcifs(p(10, 5)).unwrap_err().is_resource_limit());
    }
}
