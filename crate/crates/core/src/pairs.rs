//! Classifying pairs `(Γ, S)` and the irreducible sets they determine.
//!
//! `S` is presented as a finite union of cosets `Γ·T`, which makes it left
//! `Γ`-invariant by construction. A [`PairSpec`] is any such presentation;
//! a [`Pair`] is one that passed [`PairSpec::validate`] and can be realized.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{enumerate_ball, tensor_terms};
use crate::stallings::StallingsGraph;
use crate::words::{GroupWord, Letter, PathWord, Sign, Signature};

/// JSON pair file: `{"rank": n, "gamma": [...], "transversal": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFile {
    pub rank: u32,
    pub gamma: Vec<String>,
    pub transversal: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct PairSpec {
    sig: Signature,
    gamma: Vec<GroupWord>,
    transversal: Vec<GroupWord>,
    graph: StallingsGraph,
}

impl PairSpec {
    pub fn new(sig: Signature, gamma: Vec<GroupWord>, transversal: Vec<GroupWord>) -> Result<PairSpec> {
        if transversal.is_empty() {
            return Err(Error::EmptyTransversal);
        }
        for t in &transversal {
            sig.check(t.letters())?;
        }
        let graph = StallingsGraph::build(sig, &gamma)?;
        Ok(PairSpec {
            sig,
            gamma,
            transversal,
            graph,
        })
    }

    pub fn from_file(file: &PairFile) -> Result<PairSpec> {
        let sig = Signature::new(file.rank)?;
        let parse = |words: &[String]| {
            words
                .iter()
                .map(|w| GroupWord::parse(sig, w))
                .collect::<Result<Vec<_>>>()
        };
        PairSpec::new(sig, parse(&file.gamma)?, parse(&file.transversal)?)
    }

    pub fn to_file(&self) -> PairFile {
        PairFile {
            rank: self.sig.rank(),
            gamma: self.gamma.iter().map(|g| g.to_string()).collect(),
            transversal: self.transversal.iter().map(|t| t.to_string()).collect(),
        }
    }

    /// Adds the identity to the transversal unless it is already listed.
    pub fn with_identity(mut self) -> PairSpec {
        if !self.transversal.iter().any(GroupWord::is_identity) {
            self.transversal.insert(0, GroupWord::empty());
        }
        self
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn gamma(&self) -> &[GroupWord] {
        &self.gamma
    }

    pub fn transversal(&self) -> &[GroupWord] {
        &self.transversal
    }

    pub fn graph(&self) -> &StallingsGraph {
        &self.graph
    }

    pub fn in_gamma(&self, g: &GroupWord) -> bool {
        self.graph.member(g)
    }

    /// `g ∈ S = Γ·T`.
    pub fn in_s(&self, g: &GroupWord) -> bool {
        self.transversal
            .iter()
            .any(|t| self.graph.member(&g.multiply(&t.invert())))
    }

    /// Whether `S` spans a connected subgraph of the Cayley tree.
    ///
    /// Translated so that a base point `b ∈ S` sits at the identity, `b⁻¹S`
    /// is connected iff it is closed under geodesic prefixes, and since it is
    /// invariant under `b⁻¹Γb` it suffices to check the prefixes of the
    /// conjugated generators `b⁻¹γb` and of the translated transversal `b⁻¹t`.
    pub fn is_connected(&self) -> bool {
        let identity = GroupWord::empty();
        let base = if self.in_s(&identity) {
            identity
        } else {
            self.transversal[0].clone()
        };
        let base_inv = base.invert();
        let words = self
            .gamma
            .iter()
            .map(|g| base_inv.multiply(g).multiply(&base))
            .chain(self.transversal.iter().map(|t| base_inv.multiply(t)));
        for w in words {
            if !w.prefixes().all(|p| self.in_s(&base.multiply(&p))) {
                return false;
            }
        }
        true
    }

    pub fn validate(&self) -> ValidationResult {
        ValidationResult {
            contains_gamma: self.transversal.iter().any(|t| self.graph.member(t)),
            invariant: true,
            connected: self.is_connected(),
        }
    }
}

/// The three hypotheses on a pair, each reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValidationResult {
    /// Some transversal element lies in `Γ`, hence `Γ ⊆ S`.
    pub contains_gamma: bool,
    /// `S` is left `Γ`-invariant; always true for a `Γ·T` presentation.
    pub invariant: bool,
    pub connected: bool,
}

impl ValidationResult {
    pub fn is_valid(&self) -> bool {
        self.contains_gamma && self.invariant && self.connected
    }
}

impl fmt::Display for ValidationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "contains_gamma: {}, invariant: {}, connected: {}",
            self.contains_gamma, self.invariant, self.connected
        )
    }
}

/// A pair that satisfies all three hypotheses.
#[derive(Debug, Clone)]
pub struct Pair {
    spec: PairSpec,
}

impl Pair {
    pub fn new(spec: PairSpec) -> Result<Pair> {
        let report = spec.validate();
        if !report.is_valid() {
            return Err(Error::InvalidPair(report));
        }
        Ok(Pair { spec })
    }

    pub fn spec(&self) -> &PairSpec {
        &self.spec
    }

    pub fn signature(&self) -> Signature {
        self.spec.sig
    }

    /// Membership in the irreducible set of the pair: the walk ends in `Γ`
    /// and never leaves `S`.
    pub fn in_subcategory(&self, e: &PathWord) -> bool {
        self.spec.in_gamma(&e.endpoint()) && e.prefix_endpoints().iter().all(|v| self.spec.in_s(v))
    }

    /// All words of length at most `radius` in the irreducible set.
    ///
    /// Walks the ball depth-first and abandons a branch as soon as its
    /// current vertex leaves `S`; the result equals filtering the whole ball.
    pub fn realize(&self, radius: usize) -> IrrSet {
        let alphabet: Vec<Letter> = self.spec.sig.alphabet().collect();
        let mut words = BTreeSet::new();
        let mut path: Vec<Letter> = Vec::with_capacity(radius);
        let mut vertex: Vec<Letter> = Vec::with_capacity(radius);
        self.realize_from(radius, &alphabet, &mut path, &mut vertex, &mut words);
        IrrSet::new(self.spec.sig, radius, words)
    }

    fn realize_from(
        &self,
        radius: usize,
        alphabet: &[Letter],
        path: &mut Vec<Letter>,
        vertex: &mut Vec<Letter>,
        out: &mut BTreeSet<PathWord>,
    ) {
        if self.spec.in_gamma(&GroupWord::from_letters(vertex)) {
            out.insert(PathWord::new(path.clone()));
        }
        if path.len() == radius {
            return;
        }
        for &l in alphabet {
            let backtrack = vertex.last().is_some_and(|last| last.is_inverse_of(l));
            let popped = if backtrack { vertex.pop() } else {
                vertex.push(l);
                None
            };
            if self.spec.in_s(&GroupWord::from_letters(vertex)) {
                path.push(l);
                self.realize_from(radius, alphabet, path, vertex, out);
                path.pop();
            }
            match popped {
                Some(last) => vertex.push(last),
                None => {
                    vertex.pop();
                }
            }
        }
    }

    /// Same subgroup and same union of cosets.
    pub fn pair_equal(&self, other: &Pair) -> bool {
        self.spec.graph.subgroup_equal(&other.spec.graph)
            && self.spec.transversal.iter().all(|t| other.spec.in_s(t))
            && other.spec.transversal.iter().all(|t| self.spec.in_s(t))
    }

    /// Sorts the transversal canonically and keeps one representative per
    /// coset `Γt`.
    pub fn minimal_transversal(&self) -> Pair {
        let mut sorted = self.spec.transversal.clone();
        sorted.sort();
        sorted.dedup();
        let mut kept: Vec<GroupWord> = Vec::new();
        for t in sorted {
            if !kept
                .iter()
                .any(|k| self.spec.graph.member(&t.multiply(&k.invert())))
            {
                kept.push(t);
            }
        }
        Pair {
            spec: PairSpec {
                transversal: kept,
                ..self.spec.clone()
            },
        }
    }
}

/// A finite set of irreducibles, truncated at `radius`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrrSet {
    sig: Signature,
    radius: usize,
    words: BTreeSet<PathWord>,
}

impl IrrSet {
    pub fn new(sig: Signature, radius: usize, words: BTreeSet<PathWord>) -> IrrSet {
        debug_assert!(words.iter().all(|w| w.len() <= radius));
        IrrSet { sig, radius, words }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn words(&self) -> &BTreeSet<PathWord> {
        &self.words
    }

    pub fn contains(&self, w: &PathWord) -> bool {
        self.words.contains(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PathWord> {
        self.words.iter()
    }

    /// The words of length at most `radius`.
    pub fn restrict(&self, radius: usize) -> IrrSet {
        IrrSet {
            sig: self.sig,
            radius: radius.min(self.radius),
            words: self.words.iter().filter(|w| w.len() <= radius).cloned().collect(),
        }
    }

    pub fn is_conjugation_closed(&self) -> bool {
        self.words.iter().all(|w| self.words.contains(&w.conjugate()))
    }

    /// A triple `(x, y, z)` with `x, y` in the set and `z ∈ x ⊗ y` of length
    /// at most the radius missing from it. Quadratic in the set size.
    pub fn tensor_closure_violation(&self) -> Option<(PathWord, PathWord, PathWord)> {
        for x in &self.words {
            for y in &self.words {
                for z in tensor_terms(x, y) {
                    if z.len() <= self.radius && !self.words.contains(&z) {
                        return Some((x.clone(), y.clone(), z));
                    }
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> IrrSetJson<'_> {
        IrrSetJson {
            rank: self.sig.rank(),
            radius: self.radius,
            words: self.words.iter().collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct IrrSetJson<'a> {
    pub rank: u32,
    pub radius: usize,
    pub words: Vec<&'a PathWord>,
}

/// Graphviz rendering of the Cayley ball of the given radius. With a pair,
/// vertices of `S` are filled and vertices of `Γ` are doubled.
pub fn cayley_ball_dot(sig: Signature, radius: usize, pair: Option<&PairSpec>) -> String {
    let vertices: Vec<GroupWord> = enumerate_ball(sig, radius)
        .into_iter()
        .filter(|w| w.endpoint().len() == w.len())
        .map(|w| w.endpoint())
        .collect();
    let id = |g: &GroupWord| format!("\"{g}\"");
    let mut out = String::from("graph cayley {\n    node [shape=circle];\n");
    for v in &vertices {
        let mut attrs = Vec::new();
        if let Some(p) = pair {
            if p.in_s(v) {
                attrs.push("style=filled, fillcolor=lightblue".to_string());
            }
            if p.in_gamma(v) {
                attrs.push("shape=doublecircle".to_string());
            }
        }
        if attrs.is_empty() {
            writeln!(out, "    {};", id(v)).unwrap();
        } else {
            writeln!(out, "    {} [{}];", id(v), attrs.join(", ")).unwrap();
        }
    }
    // Tree edges point away from the identity; each is labelled by its
    // positive letter, oriented from the source of that letter.
    for v in vertices.iter().filter(|v| v.len() < radius) {
        for l in sig.alphabet() {
            let w = v.multiply(&GroupWord::from_letters(&[l]));
            if w.len() <= v.len() {
                continue;
            }
            match l.sign() {
                Sign::Plus => writeln!(out, "    {} -- {} [label=\"{l}\"];", id(v), id(&w)),
                Sign::Minus => writeln!(out, "    {} -- {} [label=\"{}\"];", id(&w), id(v), l.inverse()),
            }
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}
