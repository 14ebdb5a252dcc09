//! Mechanical checks of the classification on truncated instances.
//!
//! [`verify_theorem`] computes the generated subcategory twice, once as a
//! tensor closure and once by filtering the ball through the extracted pair,
//! and compares the two. The step checkers restate each subobject relation
//! used to recover the pair from a subcategory, building the factors from
//! the word and its prefix geodesics.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::closure::{closure, extract_pair, ClosureOptions, DEFAULT_MAX_SET_SIZE};
use crate::error::{Error, Result};
use crate::fusion::{
    chain_contains, conjugate_letters, enumerate_ball, is_subobject, tensor, tensor_many, tensor_terms,
    FusionTerms,
};
use crate::pairs::PairFile;
use crate::words::{GroupWord, PathWord, Signature};

fn geodesic_loop(g: &GroupWord) -> PathWord {
    g.shortest_path().concat(&g.invert().shortest_path())
}

fn check_index(word: &PathWord, l: usize) -> Result<()> {
    if l == 0 || l > word.len() {
        return Err(Error::IndexOutOfRange { l, len: word.len() });
    }
    Ok(())
}

/// With `g_l` the vertex after `l` letters, checks
/// `[g_l]·x_{l+1}…x_k ≤ ([g_{l-1}][g_{l-1}⁻¹]) ⊗ ([g_{l-1}]·x_l…x_k)`.
pub fn check_relation_1(word: &PathWord, l: usize) -> Result<bool> {
    check_index(word, l)?;
    let vertices = word.prefix_endpoints();
    let previous = &vertices[l - 1];
    let lhs = vertices[l].shortest_path().concat(&word.suffix_from(l));
    let left = geodesic_loop(previous);
    let right = previous.shortest_path().concat(&word.suffix_from(l - 1));
    Ok(is_subobject(&lhs, &left, &right))
}

/// Checks `[g_l][g_l⁻¹] ≤ ([g_l]·x_{l+1}…x_k) ⊗ (x̄_k…x̄_{l+1}·[g_l⁻¹])`.
pub fn check_relation_2(word: &PathWord, l: usize) -> Result<bool> {
    check_index(word, l)?;
    let vertex = &word.prefix_endpoints()[l];
    let rest = word.suffix_from(l);
    let lhs = geodesic_loop(vertex);
    let left = vertex.shortest_path().concat(&rest);
    let right = PathWord::new(conjugate_letters(rest.letters())).concat(&vertex.invert().shortest_path());
    Ok(is_subobject(&lhs, &left, &right))
}

/// The factors `[g_1][g_1⁻¹], …, [g_k][g_k⁻¹], [g_k]` of the final chain.
pub fn final_chain_factors(word: &PathWord) -> Vec<PathWord> {
    let vertices = word.prefix_endpoints();
    let mut factors: Vec<PathWord> = vertices[1..].iter().map(geodesic_loop).collect();
    factors.push(vertices[word.len()].shortest_path());
    factors
}

/// Checks `word ≤ ([g_1][g_1⁻¹]) ⊗ … ⊗ ([g_k][g_k⁻¹]) ⊗ [g_k]`, associated
/// to the left.
pub fn check_final_chain(word: &PathWord) -> bool {
    chain_contains(&final_chain_factors(word), word).expect("the chain always has a last factor")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub cutoff: usize,
    pub radius: usize,
    pub max_set_size: usize,
}

impl VerifyOptions {
    pub fn new(cutoff: usize, radius: usize) -> Self {
        Self {
            cutoff,
            radius,
            max_set_size: DEFAULT_MAX_SET_SIZE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Only in the tensor closure.
    Closure,
    /// Only in the set realized from the pair.
    Realized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub word: PathWord,
    pub side: Side,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StepTally {
    pub checked: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl StepTally {
    /// Runs `check` on every item; the first failure is the first in input
    /// order, whatever the scheduling.
    fn run<T: Sync>(items: &[T], check: impl Fn(&T) -> Option<String> + Sync) -> StepTally {
        let failures: Vec<(usize, String)> = items
            .par_iter()
            .enumerate()
            .filter_map(|(i, item)| check(item).map(|f| (i, f)))
            .collect();
        StepTally {
            checked: items.len() as u64,
            failed: failures.len() as u64,
            first_failure: failures.into_iter().min_by_key(|(i, _)| *i).map(|(_, f)| f),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub generators: Vec<PathWord>,
    pub pair: PairFile,
    pub cutoff: usize,
    pub radius: usize,
    pub agreement_radius: usize,
    pub witnesses: Vec<Witness>,
    pub closure_size: usize,
    pub closure_saturated: bool,
    pub realized_size: usize,
    pub relation_1: StepTally,
    pub relation_2: StepTally,
    pub final_chain: StepTally,
    pub extract_pair_stable: bool,
    pub passed: bool,
}

/// Compares the tensor closure of `generators` (truncated at the cutoff)
/// with the irreducible set of the extracted pair, up to the radius, and
/// runs the step checkers on every closure word and every realized word.
pub fn verify_theorem(
    sig: Signature,
    generators: &[PathWord],
    opts: VerifyOptions,
) -> Result<VerificationReport> {
    if opts.radius > opts.cutoff {
        return Err(Error::RadiusExceedsCutoff {
            radius: opts.radius,
            cutoff: opts.cutoff,
        });
    }
    let closed = closure(
        sig,
        generators,
        ClosureOptions::new(opts.cutoff).with_max_set_size(opts.max_set_size),
    )?;
    let pair = extract_pair(sig, generators)?;
    let realized = pair.realize(opts.radius);
    let truncated = closed.set.restrict(opts.radius);

    let mut witnesses: Vec<Witness> = truncated
        .words()
        .difference(realized.words())
        .map(|w| Witness {
            word: w.clone(),
            side: Side::Closure,
        })
        .chain(realized.words().difference(truncated.words()).map(|w| Witness {
            word: w.clone(),
            side: Side::Realized,
        }))
        .collect();
    witnesses.sort_by(|a, b| a.word.cmp(&b.word));
    let agreement_radius = witnesses
        .first()
        .map_or(opts.radius, |w| w.word.len().saturating_sub(1));

    let steps: Vec<(PathWord, usize)> = closed
        .set
        .iter()
        .flat_map(|w| (1..=w.len()).map(move |l| (w.clone(), l)))
        .collect();
    let describe = |w: &PathWord, l: usize| format!("{w} at l = {l}");
    let relation_1 = StepTally::run(&steps, |(w, l)| {
        (!check_relation_1(w, *l).expect("index in range")).then(|| describe(w, *l))
    });
    let relation_2 = StepTally::run(&steps, |(w, l)| {
        (!check_relation_2(w, *l).expect("index in range")).then(|| describe(w, *l))
    });
    let realized_words: Vec<PathWord> = realized.iter().cloned().collect();
    let final_chain = StepTally::run(&realized_words, |w| (!check_final_chain(w)).then(|| w.to_string()));

    let closure_words: Vec<PathWord> = closed.set.iter().cloned().collect();
    let extract_pair_stable = extract_pair(sig, &closure_words)?.pair_equal(&pair);

    let passed = witnesses.is_empty()
        && relation_1.passed()
        && relation_2.passed()
        && final_chain.passed()
        && extract_pair_stable;
    Ok(VerificationReport {
        generators: generators.to_vec(),
        pair: pair.spec().to_file(),
        cutoff: opts.cutoff,
        radius: opts.radius,
        agreement_radius,
        witnesses,
        closure_size: closed.set.len(),
        closure_saturated: closed.saturated,
        realized_size: realized.len(),
        relation_1,
        relation_2,
        final_chain,
        extract_pair_stable,
        passed,
    })
}

/// How much of the ball each fusion-rule property is checked on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropertyConfig {
    /// Frobenius reciprocity on every triple of this ball.
    pub frobenius_exhaustive_radius: usize,
    /// Plus this many random triples from the ball of `frobenius_sample_radius`.
    pub frobenius_samples: usize,
    pub frobenius_sample_radius: usize,
    pub associativity_samples: usize,
    pub associativity_radius: usize,
    /// Multiplicity freeness with distinct lengths, on every pair.
    pub multiplicity_free_radius: usize,
    /// Vertex monotonicity, conjugate anti-multiplicativity and endpoint
    /// constancy, on every pair.
    pub pair_radius: usize,
    /// Unit law on every word.
    pub unit_radius: usize,
}

impl PropertyConfig {
    /// Everything drawn from the ball of one radius, with exhaustive triple
    /// checks capped where they would be too slow.
    pub fn uniform(radius: usize) -> Self {
        Self {
            frobenius_exhaustive_radius: radius.min(3),
            frobenius_samples: 10_000,
            frobenius_sample_radius: radius,
            associativity_samples: 1_000,
            associativity_radius: radius,
            multiplicity_free_radius: radius.min(5),
            pair_radius: radius.min(4),
            unit_radius: radius,
        }
    }

    /// The sizes required by the acceptance suite.
    pub fn acceptance() -> Self {
        Self {
            frobenius_exhaustive_radius: 2,
            frobenius_samples: 10_000,
            frobenius_sample_radius: 4,
            associativity_samples: 1_000,
            associativity_radius: 3,
            multiplicity_free_radius: 5,
            pair_radius: 4,
            unit_radius: 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub checked: u64,
    pub counterexample: Option<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub rank: u32,
    pub seed: u64,
    pub outcomes: Vec<PropertyOutcome>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(PropertyOutcome::passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&PropertyOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

fn frobenius(x: &PathWord, y: &PathWord, z: &PathWord) -> bool {
    let direct = is_subobject(z, x, y);
    direct == is_subobject(x, z, &y.conjugate()) && direct == is_subobject(y, &x.conjugate(), z)
}

fn right_associated(x: &PathWord, y: &PathWord, z: &PathWord) -> FusionTerms {
    let mut out = FusionTerms::new();
    for t in tensor_terms(y, z) {
        for s in tensor_terms(x, &t) {
            out.add(s, 1);
        }
    }
    out
}

fn associative(x: &PathWord, y: &PathWord, z: &PathWord) -> bool {
    tensor_many(&[x.clone(), y.clone(), z.clone()]).expect("three factors") == right_associated(x, y, z)
}

fn multiplicity_free(e: &PathWord, f: &PathWord) -> bool {
    let terms: Vec<PathWord> = tensor_terms(e, f).collect();
    let lengths: HashSet<usize> = terms.iter().map(PathWord::len).collect();
    let product = tensor(e, f);
    lengths.len() == terms.len()
        && product.len() == terms.len()
        && product.iter().all(|(_, m)| m == 1)
        && terms
            .iter()
            .enumerate()
            .all(|(l, t)| t.len() + 2 * l == e.len() + f.len())
}

fn vertex_monotone(e: &PathWord, f: &PathWord) -> bool {
    let outer: HashSet<GroupWord> = e.concat(f).prefix_endpoints().into_iter().collect();
    tensor_terms(e, f).all(|t| t.prefix_endpoints().iter().all(|v| outer.contains(v)))
}

fn conjugate_reverses(x: &PathWord, y: &PathWord) -> bool {
    let forward: HashSet<PathWord> = tensor_terms(x, y).map(|z| z.conjugate()).collect();
    let backward: HashSet<PathWord> = tensor_terms(&y.conjugate(), &x.conjugate()).collect();
    forward == backward
}

fn endpoint_constant(e: &PathWord, f: &PathWord) -> bool {
    let expected = e.endpoint().multiply(&f.endpoint());
    tensor_terms(e, f).all(|t| t.endpoint() == expected)
}

fn unit_law(e: &PathWord) -> bool {
    let unit = PathWord::empty();
    let single = FusionTerms::single(e.clone());
    tensor(&unit, e) == single && tensor(e, &unit) == single
}

fn show(words: &[&PathWord]) -> String {
    words.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" , ")
}

fn all_pairs(
    name: &'static str,
    ball: &[PathWord],
    check: impl Fn(&PathWord, &PathWord) -> bool + Sync,
) -> PropertyOutcome {
    let n = ball.len();
    let counterexample = (0..n * n).into_par_iter().find_map_first(|i| {
        let (x, y) = (&ball[i / n], &ball[i % n]);
        (!check(x, y)).then(|| show(&[x, y]))
    });
    PropertyOutcome {
        name,
        checked: (n * n) as u64,
        counterexample,
    }
}

fn first_failing_triple(
    list: &[[&PathWord; 3]],
    check: impl Fn(&PathWord, &PathWord, &PathWord) -> bool + Sync,
) -> Option<String> {
    list.par_iter()
        .find_map_first(|[x, y, z]| (!check(x, y, z)).then(|| show(&[x, y, z])))
}

fn sample_triples<'a>(rng: &mut ChaCha8Rng, ball: &'a [PathWord], count: usize) -> Vec<[&'a PathWord; 3]> {
    (0..count)
        .map(|_| {
            let mut pick = || ball.choose(rng).expect("balls are nonempty");
            [pick(), pick(), pick()]
        })
        .collect()
}

/// Checks the fusion-rule laws on balls of the configured sizes. Sampling
/// is driven by `seed` alone, so reports are reproducible.
pub fn run_properties(sig: Signature, config: &PropertyConfig, seed: u64) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = Vec::new();

    let ball_words = enumerate_ball(sig, config.frobenius_exhaustive_radius);
    let ball = &ball_words;
    let exhaustive: Vec<[&PathWord; 3]> = ball
        .iter()
        .flat_map(|x| ball.iter().flat_map(move |y| ball.iter().map(move |z| [x, y, z])))
        .collect();
    let sample_ball = enumerate_ball(sig, config.frobenius_sample_radius);
    let sampled = sample_triples(&mut rng, &sample_ball, config.frobenius_samples);
    outcomes.push(PropertyOutcome {
        name: "frobenius_reciprocity",
        checked: (exhaustive.len() + sampled.len()) as u64,
        counterexample: first_failing_triple(&exhaustive, frobenius)
            .or_else(|| first_failing_triple(&sampled, frobenius)),
    });

    let assoc_ball = enumerate_ball(sig, config.associativity_radius);
    let assoc = sample_triples(&mut rng, &assoc_ball, config.associativity_samples);
    outcomes.push(PropertyOutcome {
        name: "associativity",
        checked: assoc.len() as u64,
        counterexample: first_failing_triple(&assoc, associative),
    });

    let mf_ball = enumerate_ball(sig, config.multiplicity_free_radius);
    outcomes.push(all_pairs("multiplicity_free", &mf_ball, multiplicity_free));

    let pair_ball = enumerate_ball(sig, config.pair_radius);
    outcomes.push(all_pairs("vertex_monotonicity", &pair_ball, vertex_monotone));
    outcomes.push(all_pairs("conjugate_anti_multiplicative", &pair_ball, conjugate_reverses));
    outcomes.push(all_pairs("endpoint_constancy", &pair_ball, endpoint_constant));

    let unit_ball = enumerate_ball(sig, config.unit_radius);
    outcomes.push(PropertyOutcome {
        name: "unit_law",
        checked: unit_ball.len() as u64,
        counterexample: unit_ball
            .par_iter()
            .find_map_first(|e| (!unit_law(e)).then(|| e.to_string())),
    });

    PropertyReport {
        rank: sig.rank(),
        seed,
        outcomes,
    }
}

/// [`run_properties`] with [`PropertyConfig::uniform`].
pub fn run_property_suite(sig: Signature, radius: usize, seed: u64) -> PropertyReport {
    run_properties(sig, &PropertyConfig::uniform(radius), seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(n: u32) -> Signature {
        Signature::new(n).unwrap()
    }

    fn p(text: &str) -> PathWord {
        PathWord::parse(sig(2), text).unwrap()
    }

    #[test]
    fn relation_1_examples() {
        assert!(check_relation_1(&p("a1.a2"), 2).unwrap());
        assert_eq!(
            tensor(&p("a1.A1"), &p("a1.a2")).words().cloned().collect::<Vec<_>>(),
            vec![p("a1.a2"), p("a1.A1.a1.a2")]
        );
        assert!(check_relation_1(&p("a1.A1"), 1).unwrap());
        assert!(check_relation_1(&p("a1.A1"), 2).unwrap());
        assert_eq!(
            check_relation_1(&p("a1.a2"), 0),
            Err(Error::IndexOutOfRange { l: 0, len: 2 })
        );
    }

    #[test]
    fn relation_2_examples() {
        assert!(check_relation_2(&p("a1.a2"), 2).unwrap());
        assert!(check_relation_2(&p("a1.a2"), 1).unwrap());
        assert!(check_relation_2(&p("a1"), 1).unwrap());
        assert!(is_subobject(&p("a1.A1"), &p("a1"), &p("A1")));
        assert_eq!(
            check_relation_2(&p("a1.a2"), 3),
            Err(Error::IndexOutOfRange { l: 3, len: 2 })
        );
    }

    #[test]
    fn final_chain_examples() {
        assert!(check_final_chain(&PathWord::empty()));
        assert_eq!(final_chain_factors(&PathWord::empty()), vec![PathWord::empty()]);
        assert!(check_final_chain(&p("a1.A1")));
        assert_eq!(
            final_chain_factors(&p("a1.A1")),
            vec![p("a1.A1"), p("1"), p("1")]
        );
        assert!(check_final_chain(&p("a1.a2")));
        assert_eq!(
            final_chain_factors(&p("a1.a2")),
            vec![p("a1.A1"), p("a1.a2.A2.A1"), p("a1.a2")]
        );
        let full = tensor_many(&final_chain_factors(&p("a1.a2"))).unwrap();
        assert!(full.contains(&p("a1.a2")));
    }

    #[test]
    fn steps_hold_on_every_short_word() {
        for w in enumerate_ball(sig(2), 4) {
            for l in 1..=w.len() {
                assert!(check_relation_1(&w, l).unwrap(), "{w} {l}");
                assert!(check_relation_2(&w, l).unwrap(), "{w} {l}");
            }
            assert!(check_final_chain(&w), "{w}");
        }
    }

    #[test]
    fn verify_examples() {
        let report = verify_theorem(sig(2), &[p("a1.A1")], VerifyOptions::new(12, 6)).unwrap();
        assert_eq!(report.agreement_radius, 6);
        assert!(report.witnesses.is_empty());
        assert!(report.passed);

        let report = verify_theorem(sig(2), &[], VerifyOptions::new(4, 4)).unwrap();
        assert_eq!((report.closure_size, report.realized_size), (1, 1));
        assert!(report.passed);

        let report = verify_theorem(sig(2), &[p("a2.a1.A2")], VerifyOptions::new(12, 4)).unwrap();
        assert_eq!(report.agreement_radius, 4);
        assert!(report.passed);

        assert!(matches!(
            verify_theorem(sig(2), &[], VerifyOptions::new(3, 4)),
            Err(Error::RadiusExceedsCutoff { .. })
        ));
    }

    #[test]
    fn short_cutoff_reports_disagreement() {
        // With cutoff 2 the closure of a1.A1.a1.a2-style words cannot reach
        // everything the pair allows; the report must say so, not hide it.
        let report = verify_theorem(sig(2), &[p("a1.a2.A1")], VerifyOptions::new(3, 3)).unwrap();
        assert_eq!(report.witnesses.is_empty(), report.agreement_radius == report.radius);
        assert!(report.agreement_radius <= report.radius);
    }

    #[test]
    fn agreement_is_monotone_in_cutoff() {
        let gens = [p("a1.a2.A1")];
        let radii: Vec<usize> = (4..=9)
            .map(|c| verify_theorem(sig(2), &gens, VerifyOptions::new(c, 4)).unwrap().agreement_radius)
            .collect();
        assert!(radii.windows(2).all(|w| w[0] <= w[1]), "{radii:?}");
    }

    #[test]
    fn property_suite_examples() {
        let report = run_property_suite(sig(2), 3, 0);
        assert!(report.passed(), "{report:?}");
        assert!(run_property_suite(sig(1), 2, 0).passed());
        let zero = run_property_suite(sig(2), 0, 0);
        assert!(zero.passed());
        assert_eq!(zero.outcome("unit_law").unwrap().checked, 1);
        assert_eq!(run_property_suite(sig(2), 2, 7), run_property_suite(sig(2), 2, 7));
    }
}
