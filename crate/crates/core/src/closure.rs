//! Truncated closure of a set of irreducibles under tensor subobjects and
//! conjugation, and extraction of its classifying pair.
//!
//! A summand of `x ⊗ y` is `u·v` whenever `x = u·w` and `y = w̄·v`. Because
//! the set is closed under conjugation, `y` is present exactly when
//! `v̄·w` is, so every summand comes from two members sharing the suffix
//! `w`. The worklist indexes each processed member under all of its
//! suffixes and joins a new member only against members with the same
//! suffix whose combined remainder fits under the cutoff. That enumerates
//! precisely the summands of length at most the cutoff over all ordered
//! pairs, without visiting pairs that cannot contribute.

use std::collections::BTreeSet;

use rustc_hash::{FxHashMap, FxHashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::conjugate_letters;
use crate::pairs::{IrrSet, IrrSetJson, Pair, PairSpec};
use crate::words::{GroupWord, Letter, PathWord, Signature};

pub const DEFAULT_MAX_SET_SIZE: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureOptions {
    /// Summands longer than this are discarded.
    pub cutoff: usize,
    /// Hard cap on the number of words discovered.
    pub max_set_size: usize,
}

impl ClosureOptions {
    pub fn new(cutoff: usize) -> Self {
        Self {
            cutoff,
            max_set_size: DEFAULT_MAX_SET_SIZE,
        }
    }

    pub fn with_max_set_size(mut self, cap: usize) -> Self {
        self.max_set_size = cap;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub set: IrrSet,
    /// No summand was discarded for exceeding the cutoff, so the set is the
    /// untruncated closure.
    pub saturated: bool,
}

impl Closure {
    pub fn cutoff(&self) -> usize {
        self.set.radius()
    }

    pub fn to_json(&self) -> ClosureJson<'_> {
        ClosureJson {
            set: self.set.to_json(),
            cutoff: self.set.radius(),
            size: self.set.len(),
            saturated: self.saturated,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClosureJson<'a> {
    #[serde(flatten)]
    pub set: IrrSetJson<'a>,
    pub cutoff: usize,
    pub size: usize,
    pub saturated: bool,
}

type Letters = Box<[Letter]>;

struct Discovered {
    cap: usize,
    seen: FxHashSet<Letters>,
    pending: Vec<Letters>,
    scratch: Vec<Letter>,
}

impl Discovered {
    fn discover(&mut self, letters: &[Letter]) -> Result<()> {
        if !self.seen.contains(letters) {
            if self.seen.len() >= self.cap {
                return Err(Error::SetCapExceeded { cap: self.cap });
            }
            let owned: Letters = letters.into();
            self.seen.insert(owned.clone());
            self.pending.push(owned);
        }
        Ok(())
    }

    /// Discovers `u · conj(v)`.
    fn discover_product(&mut self, u: &[Letter], v: &[Letter]) -> Result<()> {
        let mut buf = std::mem::take(&mut self.scratch);
        buf.clear();
        buf.extend_from_slice(u);
        buf.extend(v.iter().rev().map(|l| l.inverse()));
        let result = self.discover(&buf);
        self.scratch = buf;
        result
    }
}

struct Worklist {
    cutoff: usize,
    found: Discovered,
    /// suffix `w` -> processed members `u·w`, bucketed by `|u|`.
    by_suffix: FxHashMap<Letters, Vec<Vec<Letters>>>,
    saturated: bool,
}

impl Worklist {
    fn process(&mut self, x: Letters) -> Result<()> {
        self.found.discover(&conjugate_letters(&x))?;
        for split in (0..=x.len()).rev() {
            let (u, w) = x.split_at(split);
            if !self.by_suffix.contains_key(w) {
                self.by_suffix.insert(w.into(), Vec::new());
            }
            let buckets = self.by_suffix.get_mut(w).expect("inserted above");
            if buckets.len() <= u.len() {
                buckets.resize_with(u.len() + 1, Vec::new);
            }
            buckets[u.len()].push(u.into());
            if buckets.len() - 1 + u.len() > self.cutoff {
                self.saturated = false;
            }
            let limit = (self.cutoff - u.len()).min(buckets.len() - 1);
            for v in buckets[..=limit].iter().flatten() {
                self.found.discover_product(u, v)?;
                self.found.discover_product(v, u)?;
            }
        }
        Ok(())
    }
}

/// Least set containing the unit and `generators`, closed under conjugation
/// and under taking summands of length at most `opts.cutoff` of tensor
/// products of its members.
pub fn closure(sig: Signature, generators: &[PathWord], opts: ClosureOptions) -> Result<Closure> {
    for g in generators {
        sig.check(g.letters())?;
        if g.len() > opts.cutoff {
            return Err(Error::GeneratorExceedsCutoff {
                len: g.len(),
                cutoff: opts.cutoff,
            });
        }
    }
    let mut work = Worklist {
        cutoff: opts.cutoff,
        found: Discovered {
            cap: opts.max_set_size.max(1),
            seen: FxHashSet::default(),
            pending: Vec::new(),
            scratch: Vec::new(),
        },
        by_suffix: FxHashMap::default(),
        saturated: true,
    };
    work.found.discover(&[])?;
    for g in generators {
        work.found.discover(g.letters())?;
    }
    while let Some(x) = work.found.pending.pop() {
        work.process(x)?;
    }
    let words: BTreeSet<PathWord> = work.found.seen.into_iter().map(|w| PathWord::new(w.into_vec())).collect();
    Ok(Closure {
        set: IrrSet::new(sig, opts.cutoff, words),
        saturated: work.saturated,
    })
}

/// The pair classifying the subcategory generated by `generators`: `Γ` is
/// generated by their endpoints, `S` is `Γ` times the vertices they visit.
pub fn extract_pair(sig: Signature, generators: &[PathWord]) -> Result<Pair> {
    let mut gamma = BTreeSet::new();
    let mut vertices = BTreeSet::from([GroupWord::empty()]);
    for g in generators {
        sig.check(g.letters())?;
        let end = g.endpoint();
        if !end.is_identity() {
            gamma.insert(end);
        }
        vertices.extend(g.prefix_endpoints());
    }
    let spec = PairSpec::new(sig, gamma.into_iter().collect(), vertices.into_iter().collect())?;
    let pair = Pair::new(spec).expect("the vertices of the generators form a connected set");
    Ok(pair.minimal_transversal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::tensor_terms;

    fn sig(n: u32) -> Signature {
        Signature::new(n).unwrap()
    }

    fn words(n: u32, list: &[&str]) -> Vec<PathWord> {
        list.iter().map(|w| PathWord::parse(sig(n), w).unwrap()).collect()
    }

    /// Rounds of "every summand of every ordered pair, every conjugate"
    /// until nothing changes.
    fn pairwise_fixpoint(gens: &[PathWord], cutoff: usize) -> BTreeSet<PathWord> {
        let mut set: BTreeSet<PathWord> = gens.iter().cloned().collect();
        set.insert(PathWord::empty());
        loop {
            let snapshot: Vec<PathWord> = set.iter().cloned().collect();
            let before = set.len();
            for x in &snapshot {
                set.insert(x.conjugate());
                for y in &snapshot {
                    set.extend(tensor_terms(x, y).filter(|t| t.len() <= cutoff));
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    fn shown(set: &IrrSet) -> Vec<String> {
        set.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn empty_generators_give_the_unit() {
        for cutoff in [0, 3, 7] {
            let c = closure(sig(2), &[], ClosureOptions::new(cutoff)).unwrap();
            assert_eq!(shown(&c.set), ["1"]);
            assert!(c.saturated);
        }
    }

    #[test]
    fn loop_generator() {
        let c = closure(sig(2), &words(2, &["a1.A1"]), ClosureOptions::new(4)).unwrap();
        assert_eq!(shown(&c.set), ["1", "a1.A1", "a1.A1.a1.A1"]);
        assert!(!c.saturated);
    }

    #[test]
    fn fundamental_object_generates_everything() {
        let c = closure(sig(1), &words(1, &["a1"]), ClosureOptions::new(2)).unwrap();
        assert_eq!(
            shown(&c.set),
            ["1", "a1", "A1", "a1.a1", "a1.A1", "A1.a1", "A1.A1"]
        );
    }

    #[test]
    fn agrees_with_pairwise_fixpoint() {
        let cases: &[(&[&str], usize)] = &[
            (&["a1.A1"], 6),
            (&["a2.a1.A2"], 6),
            (&["a1.a2"], 5),
            (&["a1", "a2.A2"], 4),
            (&["a1.a2.A1"], 5),
            (&["A2.a1.a1"], 5),
            (&["a1.A1", "a2.A2"], 5),
        ];
        for &(gens, cutoff) in cases {
            let gens = words(2, gens);
            let fast = closure(sig(2), &gens, ClosureOptions::new(cutoff)).unwrap();
            assert_eq!(fast.set.words(), &pairwise_fixpoint(&gens, cutoff), "{gens:?}");
        }
    }

    #[test]
    fn closed_by_construction() {
        let gens = words(2, &["a2.a1.A2", "a1.a1"]);
        let c = closure(sig(2), &gens, ClosureOptions::new(5)).unwrap();
        assert!(c.set.is_conjugation_closed());
        assert_eq!(c.set.tensor_closure_violation(), None);
    }

    #[test]
    fn generator_order_is_irrelevant() {
        let a = words(2, &["a1.a2", "A2.A2.a1"]);
        let b = words(2, &["A2.A2.a1", "a1.a2"]);
        let opts = ClosureOptions::new(5);
        assert_eq!(closure(sig(2), &a, opts).unwrap(), closure(sig(2), &b, opts).unwrap());
    }

    #[test]
    fn errors() {
        assert_eq!(
            closure(sig(2), &words(2, &["a1.a2.a1"]), ClosureOptions::new(2)),
            Err(Error::GeneratorExceedsCutoff { len: 3, cutoff: 2 })
        );
        assert_eq!(
            closure(sig(2), &words(2, &["a1"]), ClosureOptions::new(6).with_max_set_size(100)),
            Err(Error::SetCapExceeded { cap: 100 })
        );
        let wide = words(3, &["a3"]);
        assert!(matches!(
            closure(sig(2), &wide, ClosureOptions::new(2)),
            Err(Error::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn extract_pair_examples() {
        let show = |gens: &[&str]| {
            let file = extract_pair(sig(2), &words(2, gens)).unwrap().spec().to_file();
            (file.gamma, file.transversal)
        };
        assert_eq!(show(&["a1.A1"]), (vec![], vec!["1".into(), "a1".into()]));
        assert_eq!(show(&["a1"]), (vec!["a1".into()], vec!["1".into()]));
        // a2.a1 lies in the coset Γ·a2, so only 1 and a2 remain.
        assert_eq!(
            show(&["a2.a1.A2"]),
            (vec!["a2.a1.A2".into()], vec!["1".into(), "a2".into()])
        );
        assert_eq!(show(&[]), (vec![], vec!["1".into()]));
    }

    #[test]
    fn extract_pair_is_stable_under_closure() {
        for gens in [&["a1.A1"][..], &["a2.a1.A2"], &["a1.a2"], &["a1.A1", "a2.A2"]] {
            let gens = words(2, gens);
            let pair = extract_pair(sig(2), &gens).unwrap();
            let c = closure(sig(2), &gens, ClosureOptions::new(6)).unwrap();
            let all: Vec<PathWord> = c.set.iter().cloned().collect();
            assert!(extract_pair(sig(2), &all).unwrap().pair_equal(&pair));
        }
    }

    #[test]
    fn closure_json_fields() {
        let c = closure(sig(1), &words(1, &["a1.A1"]), ClosureOptions::new(2)).unwrap();
        let json = serde_json::to_string(&c.to_json()).unwrap();
        assert_eq!(
            json,
            r#"{"rank":1,"radius":2,"words":["1","a1.A1"],"cutoff":2,"size":2,"saturated":false}"#
        );
    }
}
