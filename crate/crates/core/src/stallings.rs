//! Folded core automata for finitely generated subgroups of the free group.
//!
//! [`StallingsGraph::build`] wedges one loop per generator at the base
//! vertex, folds equally-labelled edges with a union-find worklist, prunes
//! hanging trees away from the base and relabels the vertices breadth-first.
//! The result is canonical: two generating sets give equal graphs exactly
//! when they generate the same subgroup.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::words::{GroupWord, Letter, Signature};

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new() -> Self {
        Self { parent: Vec::new() }
    }

    fn push(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// The smaller root survives, so the base vertex 0 is never renamed.
    /// Returns `(root, absorbed)` if a merge happened.
    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (root, absorbed) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[absorbed] = root;
        Some((root, absorbed))
    }
}

/// Under-construction graph: per-vertex letter slots holding possibly stale
/// vertex ids, resolved through the union-find.
struct Folder {
    width: usize,
    uf: UnionFind,
    slots: Vec<Vec<Option<usize>>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new(sig: Signature) -> Self {
        let mut folder = Folder {
            width: sig.alphabet_len(),
            uf: UnionFind::new(),
            slots: Vec::new(),
            pending: Vec::new(),
        };
        folder.vertex();
        folder
    }

    fn vertex(&mut self) -> usize {
        self.slots.push(vec![None; self.width]);
        self.uf.push()
    }

    fn half_edge(&mut self, from: usize, letter: Letter, to: usize) {
        let from = self.uf.find(from);
        match self.slots[from][letter.code()] {
            Some(existing) => self.pending.push((existing, to)),
            None => self.slots[from][letter.code()] = Some(to),
        }
    }

    fn edge(&mut self, from: usize, letter: Letter, to: usize) {
        self.half_edge(from, letter, to);
        self.half_edge(to, letter.inverse(), from);
    }

    fn add_loop(&mut self, word: &GroupWord) {
        let letters = word.letters();
        let mut current = 0;
        for (i, &l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() { 0 } else { self.vertex() };
            self.edge(current, l, next);
            current = next;
        }
    }

    fn fold(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let Some((root, absorbed)) = self.uf.union(a, b) else {
                continue;
            };
            for code in 0..self.width {
                if let Some(target) = self.slots[absorbed][code].take() {
                    match self.slots[root][code] {
                        Some(existing) => self.pending.push((existing, target)),
                        None => self.slots[root][code] = Some(target),
                    }
                }
            }
        }
    }

    /// Resolved transition table over the surviving representatives.
    fn resolve(mut self) -> (usize, Vec<Option<usize>>) {
        let n = self.slots.len();
        let mut index = vec![usize::MAX; n];
        let mut count = 0;
        for v in 0..n {
            if self.uf.find(v) == v {
                index[v] = count;
                count += 1;
            }
        }
        let mut table = vec![None; count * self.width];
        for v in 0..n {
            if index[v] == usize::MAX {
                continue;
            }
            for code in 0..self.width {
                if let Some(t) = self.slots[v][code] {
                    let t = self.uf.find(t);
                    table[index[v] * self.width + code] = Some(index[t]);
                }
            }
        }
        (count, table)
    }
}

/// Removes non-base vertices with fewer than two edge ends until none remain.
fn prune(width: usize, count: usize, table: &mut [Option<usize>]) -> Vec<bool> {
    let mut alive = vec![true; count];
    let mut degree: Vec<usize> = (0..count)
        .map(|v| table[v * width..(v + 1) * width].iter().flatten().count())
        .collect();
    let mut queue: Vec<usize> = (1..count).filter(|&v| degree[v] < 2).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] || degree[v] >= 2 {
            continue;
        }
        alive[v] = false;
        for code in 0..width {
            if let Some(t) = table[v * width + code].take() {
                table[t * width + (code ^ 1)] = None;
                degree[t] -= 1;
                if t != 0 && alive[t] && degree[t] < 2 {
                    queue.push(t);
                }
            }
        }
        degree[v] = 0;
    }
    alive
}

/// Folded core automaton of a subgroup `Γ`, base vertex `0`, vertices
/// numbered in breadth-first letter order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StallingsGraph {
    sig: Signature,
    vertices: usize,
    table: Vec<Option<u32>>,
}

impl StallingsGraph {
    pub fn build(sig: Signature, generators: &[GroupWord]) -> Result<StallingsGraph> {
        let mut folder = Folder::new(sig);
        for g in generators {
            sig.check(g.letters())?;
            folder.add_loop(g);
            folder.fold();
        }
        let width = folder.width;
        let (count, mut table) = folder.resolve();
        let alive = prune(width, count, &mut table);

        // Breadth-first relabelling from the base.
        let mut label = vec![usize::MAX; count];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        label[0] = 0;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for code in 0..width {
                if let Some(t) = table[v * width + code] {
                    if label[t] == usize::MAX {
                        label[t] = order.len() + queue.len();
                        queue.push_back(t);
                    }
                }
            }
        }
        debug_assert_eq!(order.len(), alive.iter().filter(|&&a| a).count());
        let mut canonical = vec![None; order.len() * width];
        for (new, &old) in order.iter().enumerate() {
            for code in 0..width {
                canonical[new * width + code] = table[old * width + code].map(|t| label[t] as u32);
            }
        }
        Ok(StallingsGraph {
            sig,
            vertices: order.len(),
            table: canonical,
        })
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Number of undirected edges (one per positive-letter transition).
    pub fn edge_count(&self) -> usize {
        self.positive_edges().count()
    }

    /// Rank of the subgroup as a free group: `edges - vertices + 1`.
    pub fn subgroup_rank(&self) -> usize {
        self.edge_count() + 1 - self.vertices
    }

    pub fn transition(&self, vertex: usize, letter: Letter) -> Option<usize> {
        self.table[vertex * self.sig.alphabet_len() + letter.code()].map(|t| t as usize)
    }

    /// `(from, letter, to)` for every positive-letter transition.
    pub fn positive_edges(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        let width = self.sig.alphabet_len();
        (0..self.vertices).flat_map(move |v| {
            (0..width).step_by(2).filter_map(move |code| {
                self.table[v * width + code].map(|t| (v, Letter::from_code(code), t as usize))
            })
        })
    }

    /// Follows `letters` from the base; `None` if a transition is missing.
    pub fn trace(&self, letters: &[Letter]) -> Option<usize> {
        letters
            .iter()
            .try_fold(0usize, |v, &l| self.transition(v, l))
    }

    /// Decides `g ∈ Γ`.
    pub fn member(&self, g: &GroupWord) -> bool {
        self.trace(g.letters()) == Some(0)
    }

    /// Decides `g ∈ Γ·T`.
    pub fn member_coset_union(&self, transversal: &[GroupWord], g: &GroupWord) -> Result<bool> {
        if transversal.is_empty() {
            return Err(Error::EmptyTransversal);
        }
        Ok(transversal
            .iter()
            .any(|t| self.member(&g.multiply(&t.invert()))))
    }

    /// Equality of the generated subgroups.
    pub fn subgroup_equal(&self, other: &StallingsGraph) -> bool {
        self == other
    }

    /// Graphviz rendering: base vertex doubled, one edge per positive letter.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph stallings {\n    node [shape=circle];\n");
        for v in 0..self.vertices {
            if v == 0 {
                writeln!(out, "    v0 [shape=doublecircle, label=\"0\"];").unwrap();
            } else {
                writeln!(out, "    v{v} [label=\"{v}\"];").unwrap();
            }
        }
        for (from, letter, to) in self.positive_edges() {
            writeln!(out, "    v{from} -> v{to} [label=\"{letter}\"];").unwrap();
        }
        out.push_str("}\n");
        out
    }
}
