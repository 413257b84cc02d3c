//! Maximal left-compressed intersecting families (MLCIFs) of r-sets and the
//! sets they hit most often.
//!
//! Explicit families live in [`setfam`]. Families generated inside `[2r]`
//! also have a trace form ([`trace`]) whose sizes and hitting numbers are
//! exact closed-form counts, so large `n` never needs materialization.

pub mod bits;
pub mod catalog;
pub mod classifier;
pub mod count;
pub mod enumerator;
pub mod error;
pub mod genfam;
pub mod search;
pub mod setfam;
pub mod threshold;
pub mod trace;
pub mod verify;
pub mod xclass;

pub use classifier::{
    nonstar_optimal, optimal_mlcifs, predicted_optimal, ClassificationReport, Classifier, EntryHit, Mode, NonstarReport,
};
pub use count::{binomial, Count};
pub use enumerator::{
    classify_rank2, classify_rank2_generators, closure_set, enumerate_mlcifs, enumerate_mlcifs_direct,
    enumerate_mlcifs_with, is_mlcif, mlcif_complete, CatalogEntry, EnumerateOptions, MlcifCatalog, Rank2Kind,
};
pub use error::{Error, Result};
pub use genfam::{
    canonical_generators, generate, hit_trace, is_potential_generator, make_named, rank, Canonical, FamilySpec,
    FamilyTag, GenFamily, Rank,
};
pub use setfam::{
    all_rsets, dominates, enumeration_cap, hit_brute, is_intersecting, is_left_compressed, is_shift_stable,
    left_compress, set_enumeration_cap, shift, Family, Params, RSet, XQuery,
};
pub use threshold::{find_threshold, NAgreement, ThresholdReport};
pub use trace::{HitProfile, TraceFamily, TraceSpace};
pub use verify::{optimal_lcif_check, verify_theorem, verify_with_catalog, TheoremId, VerificationReport};
pub use xclass::{parse_xclass, xclasses, XClass};
