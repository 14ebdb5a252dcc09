//! Fusion rules of finite free products of free unitary quantum groups,
//! computed on path words in the Cayley graph of the free group, together
//! with the classification of their full tensor subcategories by pairs of a
//! subgroup `Γ` and a connected, `Γ`-invariant vertex set `S ⊇ Γ`.
//!
//! * [`words`]: letters, path words (free monoid) and reduced group words.
//! * [`fusion`]: conjugation, tensor products and ball enumeration.
//! * [`stallings`]: folded automata for finitely generated subgroups.
//! * [`pairs`]: pair validation, membership and realization at a radius.
//! * [`closure`]: truncated tensor closure and pair extraction.
//! * [`verify`]: mechanical checks of the classification on finite instances.

pub mod closure;
pub mod error;
pub mod fusion;
pub mod pairs;
pub mod stallings;
pub mod verify;
pub mod words;

pub use closure::{closure, extract_pair, Closure, ClosureOptions, DEFAULT_MAX_SET_SIZE};
pub use error::{Error, Result};
pub use fusion::{enumerate_ball, is_subobject, tensor, tensor_many, FusionTerms};
pub use pairs::{IrrSet, Pair, PairFile, PairSpec, ValidationResult};
pub use stallings::StallingsGraph;
pub use verify::{
    check_final_chain, check_relation_1, check_relation_2, run_property_suite, verify_theorem,
    PropertyConfig, PropertyReport, VerificationReport, VerifyOptions,
};
pub use words::{GroupWord, Letter, PathWord, Sign, Signature};
