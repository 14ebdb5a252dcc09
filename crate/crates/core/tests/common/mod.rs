//! Independent oracles and seeded generators shared by the integration tests.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use pathfusion::{GroupWord, Letter, PairSpec, PathWord, Signature};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rank2() -> Signature {
    Signature::new(2).unwrap()
}

pub fn random_letter(rng: &mut ChaCha8Rng, sig: Signature) -> Letter {
    Letter::from_code(rng.gen_range(0..sig.alphabet_len()))
}

/// A uniformly random path word of exactly `len` letters.
pub fn random_path(rng: &mut ChaCha8Rng, sig: Signature, len: usize) -> PathWord {
    PathWord::new((0..len).map(|_| random_letter(rng, sig)).collect::<Vec<_>>())
}

/// A random reduced word of exactly `len` letters.
pub fn random_reduced(rng: &mut ChaCha8Rng, sig: Signature, len: usize) -> GroupWord {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = random_letter(rng, sig);
        if letters.last().is_some_and(|last| last.is_inverse_of(l)) {
            continue;
        }
        letters.push(l);
    }
    GroupWord::from_letters(&letters)
}

/// Every reduced word of length at most `radius`, shortest first.
pub fn reduced_ball(sig: Signature, radius: usize) -> Vec<GroupWord> {
    let mut out = vec![GroupWord::empty()];
    let mut start = 0;
    for _ in 0..radius {
        let end = out.len();
        for i in start..end {
            for l in sig.alphabet() {
                if out[i].last().is_some_and(|last| last.is_inverse_of(l)) {
                    continue;
                }
                let mut letters = out[i].letters().to_vec();
                letters.push(l);
                out.push(GroupWord::from_letters(&letters));
            }
        }
        start = end;
    }
    out
}

/// Connectivity of `S ∩ ball(radius)` by breadth-first search along Cayley
/// edges.
pub fn bfs_connected(spec: &PairSpec, radius: usize) -> bool {
    let sig = spec.signature();
    let members: HashSet<GroupWord> = reduced_ball(sig, radius)
        .into_iter()
        .filter(|v| spec.in_s(v))
        .collect();
    let Some(start) = members.iter().min().cloned() else {
        return true;
    };
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for l in sig.alphabet() {
            let w = v.multiply(&GroupWord::from_letters(&[l]));
            if members.contains(&w) && seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen.len() == members.len()
}

/// Reduced products of at most `depth` factors from `gens ∪ gens⁻¹`,
/// indexed by the number of factors needed.
pub fn bounded_products(gens: &[GroupWord], depth: usize) -> Vec<HashSet<GroupWord>> {
    let mut factors: Vec<GroupWord> = gens.to_vec();
    factors.extend(gens.iter().map(GroupWord::invert));
    let mut levels = vec![HashSet::from([GroupWord::empty()])];
    let mut frontier = vec![GroupWord::empty()];
    let mut seen: HashSet<GroupWord> = levels[0].clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for f in &factors {
                let p = w.multiply(f);
                if seen.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        let mut level = levels.last().unwrap().clone();
        level.extend(next.iter().cloned());
        levels.push(level);
        frontier = next;
    }
    levels
}

/// Largest `r` such that the last two product levels agree on words of
/// length at most `r`; the oracle treats absence as non-membership only
/// within that radius.
pub fn saturation_radius(levels: &[HashSet<GroupWord>], cap: usize) -> usize {
    let last = &levels[levels.len() - 1];
    let before = &levels[levels.len() - 2];
    let first_new = last
        .difference(before)
        .map(GroupWord::len)
        .min()
        .unwrap_or(usize::MAX);
    first_new.saturating_sub(1).min(cap)
}
