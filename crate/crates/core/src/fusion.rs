//! Fusion rules on path words.
//!
//! The tensor product of two irreducibles `e` and `f` is multiplicity free:
//! it is the sum of `e_l f_l` where `e_l` drops the last `l` letters of `e`,
//! `f_l` drops the first `l` letters of `f`, and the dropped blocks are
//! mutually inverse. Iterated products do produce multiplicities, so results
//! are kept as multiplicity maps.

use std::collections::{BTreeMap, HashSet};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::{Letter, PathWord, Signature};

/// A finite direct sum of irreducibles with positive multiplicities, kept in
/// canonical word order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FusionTerms {
    terms: BTreeMap<PathWord, u64>,
}

impl FusionTerms {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(word: PathWord) -> Self {
        let mut terms = Self::new();
        terms.add(word, 1);
        terms
    }

    /// Adds `mult` copies of `word`. Zero multiplicities are ignored.
    pub fn add(&mut self, word: PathWord, mult: u64) {
        if mult > 0 {
            *self.terms.entry(word).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, word: &PathWord) -> u64 {
        self.terms.get(word).copied().unwrap_or(0)
    }

    pub fn contains(&self, word: &PathWord) -> bool {
        self.terms.contains_key(word)
    }

    /// Number of distinct irreducible summands.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PathWord, u64)> {
        self.terms.iter().map(|(w, &m)| (w, m))
    }

    pub fn words(&self) -> impl Iterator<Item = &PathWord> {
        self.terms.keys()
    }
}

impl FromIterator<(PathWord, u64)> for FusionTerms {
    fn from_iter<I: IntoIterator<Item = (PathWord, u64)>>(iter: I) -> Self {
        let mut terms = FusionTerms::new();
        for (w, m) in iter {
            terms.add(w, m);
        }
        terms
    }
}

#[derive(Serialize)]
struct TermRecord<'a> {
    word: &'a PathWord,
    mult: u64,
}

impl Serialize for FusionTerms {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (word, mult) in self.iter() {
            seq.serialize_element(&TermRecord { word, mult })?;
        }
        seq.end()
    }
}

impl PathWord {
    /// The dual object: the walk reversed, every letter inverted.
    pub fn conjugate(&self) -> PathWord {
        PathWord::new(conjugate_letters(self.letters()))
    }
}

pub(crate) fn conjugate_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

/// The largest `L` such that the last `L` letters of `e` are the inverse
/// block of the first `L` letters of `f`.
pub fn strip_depth(e: &[Letter], f: &[Letter]) -> usize {
    let max = e.len().min(f.len());
    let mut l = 0;
    while l < max && e[e.len() - 1 - l].is_inverse_of(f[l]) {
        l += 1;
    }
    l
}

/// The summands of `e ⊗ f`, longest first (`l = 0, 1, ..., L`).
pub fn tensor_terms<'a>(e: &'a PathWord, f: &'a PathWord) -> impl Iterator<Item = PathWord> + 'a {
    let depth = strip_depth(e.letters(), f.letters());
    (0..=depth).map(move |l| {
        let head = &e.letters()[..e.len() - l];
        let tail = &f.letters()[l..];
        let mut letters = Vec::with_capacity(head.len() + tail.len());
        letters.extend_from_slice(head);
        letters.extend_from_slice(tail);
        PathWord::new(letters)
    })
}

pub fn tensor(e: &PathWord, f: &PathWord) -> FusionTerms {
    tensor_terms(e, f).map(|t| (t, 1)).collect()
}

/// Whether `z` is a summand of `x ⊗ y`, decided without building the product.
pub fn is_subobject(z: &PathWord, x: &PathWord, y: &PathWord) -> bool {
    let total = x.len() + y.len();
    if z.len() > total || !(total - z.len()).is_multiple_of(2) {
        return false;
    }
    let l = (total - z.len()) / 2;
    if l > x.len().min(y.len()) {
        return false;
    }
    let (xs, ys, zs) = (x.letters(), y.letters(), z.letters());
    let keep = xs.len() - l;
    zs[..keep] == xs[..keep]
        && zs[keep..] == ys[l..]
        && (0..l).all(|i| xs[xs.len() - 1 - i].is_inverse_of(ys[i]))
}

/// Left-associated product `((f_0 ⊗ f_1) ⊗ f_2) ⊗ ...` with multiplicities.
pub fn tensor_many(factors: &[PathWord]) -> Result<FusionTerms> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyFactorList)?;
    let mut acc = FusionTerms::single(first.clone());
    for f in rest {
        let mut next = FusionTerms::new();
        for (t, m) in acc.iter() {
            for term in tensor_terms(t, f) {
                next.add(term, m);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Whether `target` occurs in `tensor_many(factors)`.
///
/// Partial products are tracked as sets and pruned: a later factor `f` can
/// only remove up to `|f|` letters from the end of a partial term, so every
/// kept term must agree with `target` on everything the remaining factors
/// cannot reach.
pub fn chain_contains(factors: &[PathWord], target: &PathWord) -> Result<bool> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyFactorList)?;
    let mut remaining: usize = rest.iter().map(PathWord::len).sum();
    let viable = |t: &PathWord, remaining: usize| {
        let fixed = t.len().saturating_sub(remaining);
        fixed <= target.len()
            && target.len() <= t.len() + remaining
            && t.letters()[..fixed] == target.letters()[..fixed]
    };
    let mut acc: HashSet<PathWord> = HashSet::new();
    if viable(first, remaining) {
        acc.insert(first.clone());
    }
    for f in rest {
        remaining -= f.len();
        let mut next = HashSet::new();
        for t in &acc {
            for term in tensor_terms(t, f) {
                if viable(&term, remaining) {
                    next.insert(term);
                }
            }
        }
        acc = next;
        if acc.is_empty() {
            return Ok(false);
        }
    }
    Ok(acc.contains(target))
}

/// Every path word of length at most `radius`, in canonical order.
pub fn enumerate_ball(sig: Signature, radius: usize) -> Vec<PathWord> {
    let alphabet: Vec<Letter> = sig.alphabet().collect();
    let mut out = vec![PathWord::empty()];
    let mut level_start = 0;
    for _ in 0..radius {
        let level_end = out.len();
        for i in level_start..level_end {
            for &l in &alphabet {
                let mut letters = Vec::with_capacity(out[i].len() + 1);
                letters.extend_from_slice(out[i].letters());
                letters.push(l);
                out.push(PathWord::new(letters));
            }
        }
        level_start = level_end;
    }
    out
}

/// `(2n)^0 + ... + (2n)^radius`.
pub fn ball_size(sig: Signature, radius: usize) -> usize {
    let base = sig.alphabet_len();
    (0..=radius).map(|k| base.pow(k as u32)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(n: u32) -> Signature {
        Signature::new(n).unwrap()
    }

    fn p(text: &str) -> PathWord {
        PathWord::parse(sig(3), text).unwrap()
    }

    fn terms(list: &[(&str, u64)]) -> FusionTerms {
        list.iter().map(|&(w, m)| (p(w), m)).collect()
    }

    #[test]
    fn conjugate_examples() {
        assert!(PathWord::empty().conjugate().is_empty());
        assert_eq!(p("a1.a2").conjugate(), p("A2.A1"));
        assert_eq!(p("a1.A1").conjugate(), p("a1.A1"));
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor(&p("a1"), &p("a1")), terms(&[("a1.a1", 1)]));
        assert_eq!(tensor(&p("a1"), &p("A1")), terms(&[("a1.A1", 1), ("1", 1)]));
        assert_eq!(
            tensor(&p("a1.A1"), &p("a1.A1")),
            terms(&[("a1.A1.a1.A1", 1), ("a1.A1", 1), ("1", 1)])
        );
        assert_eq!(
            tensor(&p("a1.A1"), &p("a1.a2")),
            terms(&[("a1.A1.a1.a2", 1), ("a1.a2", 1)])
        );
    }

    #[test]
    fn stripping_needs_both_letters() {
        // A1 ends the left factor but the right factor starts with a2.
        assert_eq!(tensor(&p("a2.A1"), &p("a2")).len(), 1);
        assert_eq!(tensor(&p("1"), &p("A1")), terms(&[("A1", 1)]));
    }

    #[test]
    fn subobject_examples() {
        assert!(is_subobject(&p("1"), &p("a1"), &p("A1")));
        assert!(!is_subobject(&p("a1"), &p("a1"), &p("a1")));
        assert!(is_subobject(&p("a1.a2"), &p("a1.A1"), &p("a1.a2")));
        assert!(!is_subobject(&p("a1.a3"), &p("a1.A1"), &p("a1.a2")));
    }

    #[test]
    fn tensor_many_examples() {
        let e = p("a2.A1.a3");
        assert_eq!(tensor_many(std::slice::from_ref(&e)).unwrap(), terms(&[("a2.A1.a3", 1)]));
        assert_eq!(
            tensor_many(&[p("a1"), p("A1"), p("a1")]).unwrap(),
            terms(&[("a1.A1.a1", 1), ("a1", 2)])
        );
        assert_eq!(tensor_many(&[p("a1"), p("a1")]).unwrap(), terms(&[("a1.a1", 1)]));
        assert_eq!(tensor_many(&[]), Err(Error::EmptyFactorList));
    }

    #[test]
    fn chain_membership_matches_full_expansion() {
        let s = sig(2);
        let ball = enumerate_ball(s, 2);
        let factors = [
            vec![p("a1.A1"), p("a1.a2.A2.A1"), p("a1.a2")],
            vec![p("a2"), p("A2.a1"), p("A1"), p("a2.a2")],
            vec![p("1"), p("a1")],
        ];
        for fs in &factors {
            let full = tensor_many(fs).unwrap();
            for z in ball.iter().chain(full.words()) {
                assert_eq!(chain_contains(fs, z).unwrap(), full.contains(z), "{fs:?} {z}");
            }
        }
    }

    #[test]
    fn ball_examples() {
        let shown: Vec<String> = enumerate_ball(sig(1), 1).iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["1", "a1", "A1"]);
        assert_eq!(enumerate_ball(sig(2), 2).len(), 1 + 4 + 16);
        assert_eq!(ball_size(sig(2), 8), (4usize.pow(9) - 1) / 3);
        assert_eq!(enumerate_ball(sig(2), 0), vec![PathWord::empty()]);
    }

    #[test]
    fn ball_is_sorted_and_distinct() {
        let ball = enumerate_ball(sig(2), 4);
        assert!(ball.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&tensor(&p("a1"), &p("A1"))).unwrap();
        assert_eq!(json, r#"[{"word":"1","mult":1},{"word":"a1.A1","mult":1}]"#);
    }
}
