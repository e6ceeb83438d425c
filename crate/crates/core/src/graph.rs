//! Inverse graphs: connected, deterministic, involutive edge-labeled graphs.
//!
//! Graphs are constructed through [`GraphBuilder`], which checks the three
//! defining invariants (involution closure, determinism, connectivity) before
//! producing an [`InverseGraph`]. Balls of infinite graphs carry *truncated*
//! marks on the vertices whose star may be incomplete; operations that could
//! be falsified by unseen vertices consult those marks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::alphabet::{InvolutiveAlphabet, Letter};
use crate::error::{Error, Result};
use crate::word::{free_reduce, Word};

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One invariant violation found by [`validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// Two edges with the same source and label but different targets.
    Nondeterministic {
        vertex: String,
        letter: String,
        targets: Vec<String>,
        lines: Vec<usize>,
    },
    /// An edge whose inverse edge is absent.
    MissingInverse {
        source: String,
        letter: String,
        target: String,
        line: Option<usize>,
    },
    /// An edge equal to its own inverse.
    SelfInverse {
        vertex: String,
        letter: String,
        line: Option<usize>,
    },
    /// The graph is not connected; carries one vertex per extra component.
    Disconnected { unreachable: Vec<String> },
    /// No vertices at all.
    Empty,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Nondeterministic { vertex, letter, targets, lines } => {
                write!(f, "nondeterministic: `{vertex}` has {letter}-edges to {}", targets.join(", "))?;
                if !lines.is_empty() {
                    let lines: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
                    write!(f, " (lines {})", lines.join(", "))?;
                }
                Ok(())
            }
            Violation::MissingInverse { source, letter, target, line } => {
                write!(f, "missing inverse of edge `{source}` -{letter}-> `{target}`")?;
                if let Some(line) = line {
                    write!(f, " (line {line})")?;
                }
                Ok(())
            }
            Violation::SelfInverse { vertex, letter, line } => {
                write!(f, "edge at `{vertex}` labeled {letter} is its own inverse")?;
                if let Some(line) = line {
                    write!(f, " (line {line})")?;
                }
                Ok(())
            }
            Violation::Disconnected { unreachable } => {
                write!(f, "graph is disconnected; unreachable from the first vertex: {}", unreachable.join(", "))
            }
            Violation::Empty => write!(f, "graph has no vertices"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "- {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct RawEdge {
    src: u32,
    letter: Letter,
    dst: u32,
    line: Option<usize>,
}

/// Accumulates vertices and edges, then checks the inverse-graph invariants.
///
/// `edge` records an edge *pair*: the inverse edge is implied. `edge_oriented`
/// records a single oriented edge and is what lets [`validate`] observe
/// involution violations.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    alphabet: InvolutiveAlphabet,
    keys: Vec<String>,
    key_index: BTreeMap<String, u32>,
    edges: Vec<RawEdge>,
    root: Option<VertexId>,
    truncated: BTreeSet<u32>,
}

impl GraphBuilder {
    pub fn new(alphabet: InvolutiveAlphabet) -> GraphBuilder {
        GraphBuilder {
            alphabet,
            keys: Vec::new(),
            key_index: BTreeMap::new(),
            edges: Vec::new(),
            root: None,
            truncated: BTreeSet::new(),
        }
    }

    pub fn alphabet(&self) -> &InvolutiveAlphabet {
        &self.alphabet
    }

    /// Get or create the vertex with the given key.
    pub fn vertex(&mut self, key: &str) -> VertexId {
        if let Some(&i) = self.key_index.get(key) {
            return VertexId(i);
        }
        let i = self.keys.len() as u32;
        self.keys.push(key.to_owned());
        self.key_index.insert(key.to_owned(), i);
        VertexId(i)
    }

    pub fn lookup(&self, key: &str) -> Option<VertexId> {
        self.key_index.get(key).copied().map(VertexId)
    }

    /// Record the edge and its implied inverse.
    pub fn edge(&mut self, src: VertexId, letter: Letter, dst: VertexId) {
        self.edge_line(src, letter, dst, None);
    }

    pub fn edge_line(&mut self, src: VertexId, letter: Letter, dst: VertexId, line: Option<usize>) {
        self.edge_oriented(src, letter, dst, line);
        self.edge_oriented(dst, letter.inverse(), src, line);
    }

    /// Record a single oriented edge without its inverse.
    pub fn edge_oriented(&mut self, src: VertexId, letter: Letter, dst: VertexId, line: Option<usize>) {
        self.edges.push(RawEdge { src: src.0, letter, dst: dst.0, line });
    }

    pub fn root(&mut self, v: VertexId) {
        self.root = Some(v);
    }

    pub fn truncate(&mut self, v: VertexId) {
        self.truncated.insert(v.0);
    }

    pub fn build(self) -> Result<InverseGraph> {
        let report = validate(&self);
        if !report.is_clean() {
            return Err(Error::InvalidGraph(report));
        }
        let n = self.keys.len();
        let mut stars: Vec<BTreeMap<Letter, VertexId>> = vec![BTreeMap::new(); n];
        for e in &self.edges {
            stars[e.src as usize].insert(e.letter, VertexId(e.dst));
        }
        Ok(InverseGraph {
            alphabet: self.alphabet,
            keys: self.keys,
            key_index: self.key_index,
            stars,
            truncated: self.truncated.into_iter().map(VertexId).collect(),
        })
    }

    pub fn build_rooted(mut self) -> Result<RootedGraph> {
        let root = match self.root.take() {
            Some(r) => r,
            None if !self.keys.is_empty() => VertexId(0),
            None => return Err(Error::InvalidGraph(ValidationReport { violations: vec![Violation::Empty] })),
        };
        let graph = self.build()?;
        Ok(RootedGraph { graph, root })
    }
}

/// Check the inverse-graph invariants on raw edges, reporting every violation.
pub fn validate(b: &GraphBuilder) -> ValidationReport {
    let mut violations = Vec::new();
    if b.keys.is_empty() {
        violations.push(Violation::Empty);
        return ValidationReport { violations };
    }

    // Deduplicate exact repeats; the same pair may be declared twice.
    let mut seen: BTreeMap<(u32, Letter, u32), Option<usize>> = BTreeMap::new();
    for e in &b.edges {
        seen.entry((e.src, e.letter, e.dst)).or_insert(e.line);
    }

    for (&(src, letter, dst), &line) in &seen {
        if src == dst && letter == letter.inverse() {
            violations.push(Violation::SelfInverse {
                vertex: b.keys[src as usize].clone(),
                letter: b.alphabet.display_letter(letter),
                line,
            });
        }
        if !seen.contains_key(&(dst, letter.inverse(), src)) {
            violations.push(Violation::MissingInverse {
                source: b.keys[src as usize].clone(),
                letter: b.alphabet.display_letter(letter),
                target: b.keys[dst as usize].clone(),
                line,
            });
        }
    }

    let mut by_source: BTreeMap<(u32, Letter), BTreeMap<u32, Option<usize>>> = BTreeMap::new();
    for (&(src, letter, dst), &line) in &seen {
        by_source.entry((src, letter)).or_default().insert(dst, line);
    }
    for (&(src, letter), targets) in &by_source {
        if targets.len() > 1 {
            violations.push(Violation::Nondeterministic {
                vertex: b.keys[src as usize].clone(),
                letter: b.alphabet.display_letter(letter),
                targets: targets.keys().map(|&t| b.keys[t as usize].clone()).collect(),
                lines: targets.values().filter_map(|&l| l).collect(),
            });
        }
    }

    // Connectivity over the undirected support, from the first vertex.
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); b.keys.len()];
    for &(src, _, dst) in seen.keys() {
        adj[src as usize].push(dst);
        adj[dst as usize].push(src);
    }
    let mut reached = vec![false; b.keys.len()];
    let mut queue = VecDeque::from([0u32]);
    reached[0] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u as usize] {
            if !reached[v as usize] {
                reached[v as usize] = true;
                queue.push_back(v);
            }
        }
    }
    let unreachable: Vec<String> = reached
        .iter()
        .enumerate()
        .filter(|&(_, &r)| !r)
        .map(|(i, _)| b.keys[i].clone())
        .collect();
    if !unreachable.is_empty() {
        violations.push(Violation::Disconnected { unreachable });
    }

    ValidationReport { violations }
}

/// A finite inverse graph. Stars are letter-indexed maps, so determinism is
/// structural; involution and connectivity were checked at build time.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InverseGraph {
    alphabet: InvolutiveAlphabet,
    keys: Vec<String>,
    key_index: BTreeMap<String, u32>,
    stars: Vec<BTreeMap<Letter, VertexId>>,
    truncated: BTreeSet<VertexId>,
}

impl InverseGraph {
    pub fn alphabet(&self) -> &InvolutiveAlphabet {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.keys.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.keys.len() as u32).map(VertexId)
    }

    pub fn key(&self, v: VertexId) -> &str {
        &self.keys[v.idx()]
    }

    pub fn vertex_by_key(&self, key: &str) -> Option<VertexId> {
        self.key_index.get(key).copied().map(VertexId)
    }

    pub fn require_vertex(&self, key: &str) -> Result<VertexId> {
        self.vertex_by_key(key).ok_or_else(|| Error::UnknownVertex(key.to_owned()))
    }

    pub fn star(&self, v: VertexId) -> &BTreeMap<Letter, VertexId> {
        &self.stars[v.idx()]
    }

    pub fn step(&self, v: VertexId, letter: Letter) -> Option<VertexId> {
        self.stars[v.idx()].get(&letter).copied()
    }

    pub fn is_truncated(&self, v: VertexId) -> bool {
        self.truncated.contains(&v)
    }

    pub fn truncated_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.truncated.iter().copied()
    }

    pub fn has_truncation(&self) -> bool {
        !self.truncated.is_empty()
    }

    /// Oriented edges with positive labels, one per edge pair.
    pub fn positive_edges(&self) -> impl Iterator<Item = (VertexId, Letter, VertexId)> + '_ {
        self.vertices().flat_map(move |u| {
            self.star(u)
                .iter()
                .filter(|(l, _)| l.is_positive())
                .map(move |(&l, &v)| (u, l, v))
        })
    }

    /// All oriented edges.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, Letter, VertexId)> + '_ {
        self.vertices()
            .flat_map(move |u| self.star(u).iter().map(move |(&l, &v)| (u, l, v)))
    }

    pub fn edge_pair_count(&self) -> usize {
        self.stars.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Endpoint of the unique walk labeled `w` from `start`, if every step
    /// has an edge.
    pub fn trace(&self, start: VertexId, w: &Word) -> Option<VertexId> {
        let mut at = start;
        for letter in w.letters() {
            at = self.step(at, letter)?;
        }
        Some(at)
    }

    /// Like [`trace`], but records whether a failure happened at a truncated
    /// vertex (so the walk might exist in the full graph).
    pub fn trace_trusted(&self, start: VertexId, w: &Word) -> TraceOutcome {
        let mut at = start;
        for letter in w.letters() {
            match self.step(at, letter) {
                Some(next) => at = next,
                None if self.is_truncated(at) => return TraceOutcome::LostAtTruncated(at),
                None => return TraceOutcome::Dead(at),
            }
        }
        TraceOutcome::Reached(at)
    }

    /// The full walk labeled `w` from `start`.
    pub fn walk(&self, start: VertexId, w: &Word) -> Option<Walk> {
        let mut walk = Walk { start, steps: Vec::with_capacity(w.len()) };
        let mut at = start;
        for letter in w.letters() {
            at = self.step(at, letter)?;
            walk.steps.push((letter, at));
        }
        Some(walk)
    }

    /// Membership in the symmetric Dyck set at `v`: the word reduces to the
    /// identity and labels a (then automatically closed) walk from `v`.
    pub fn is_dyck_at(&self, v: VertexId, w: &Word) -> bool {
        free_reduce(w).is_empty() && self.trace(v, w).is_some()
    }

    /// Breadth-first distances from `v`.
    pub fn distances_from(&self, v: VertexId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[v.idx()] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u.idx()].unwrap();
            for &t in self.star(u).values() {
                if dist[t.idx()].is_none() {
                    dist[t.idx()] = Some(d + 1);
                    queue.push_back(t);
                }
            }
        }
        dist
    }

    /// Shortest-walk distance, `None` when unreachable.
    pub fn distance(&self, u: VertexId, v: VertexId) -> Option<u32> {
        if u == v {
            return Some(0);
        }
        self.distances_from(u)[v.idx()]
    }

    /// Induced subgraph on `{x : d(center, x) <= n}`; vertices on the outer
    /// layer, and vertices already truncated here, are flagged truncated.
    pub fn disk(&self, center: VertexId, n: u32) -> Result<InverseGraph> {
        let dist = self.distances_from(center);
        let keep: BTreeSet<VertexId> = self
            .vertices()
            .filter(|v| dist[v.idx()].is_some_and(|d| d <= n))
            .collect();
        let boundary: BTreeSet<VertexId> = keep
            .iter()
            .copied()
            .filter(|v| dist[v.idx()] == Some(n) || self.is_truncated(*v))
            .collect();
        self.induced(&keep, &boundary)
    }

    /// Induced subgraph on `keep`, preserving keys; `mark_truncated` become
    /// the truncation marks of the result.
    pub fn induced(&self, keep: &BTreeSet<VertexId>, mark_truncated: &BTreeSet<VertexId>) -> Result<InverseGraph> {
        let mut builder = GraphBuilder::new(self.alphabet.clone());
        for &v in keep {
            builder.vertex(self.key(v));
        }
        for &u in keep {
            for (&letter, &v) in self.star(u) {
                if letter.is_positive() && keep.contains(&v) {
                    let bu = builder.lookup(self.key(u)).unwrap();
                    let bv = builder.lookup(self.key(v)).unwrap();
                    builder.edge(bu, letter, bv);
                }
            }
        }
        for &v in mark_truncated {
            if keep.contains(&v) {
                let bv = builder.lookup(self.key(v)).unwrap();
                builder.truncate(bv);
            }
        }
        builder.build()
    }

    /// Re-run the construction-time invariant checks on this graph.
    pub fn check_invariants(&self) -> ValidationReport {
        let mut builder = GraphBuilder::new(self.alphabet.clone());
        for v in self.vertices() {
            builder.vertex(self.key(v));
        }
        for (u, letter, v) in self.edges() {
            builder.edge_oriented(u, letter, v, None);
        }
        validate(&builder)
    }
}

/// Result of a truncation-aware trace.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum TraceOutcome {
    Reached(VertexId),
    /// No edge, at a vertex with a complete star: the walk does not exist.
    Dead(VertexId),
    /// No edge, at a truncated vertex: unknown in the full graph.
    LostAtTruncated(VertexId),
}

/// A walk: a start vertex and the traversed (letter, target) steps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Walk {
    pub start: VertexId,
    pub steps: Vec<(Letter, VertexId)>,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> VertexId {
        self.steps.last().map_or(self.start, |&(_, v)| v)
    }

    pub fn label(&self) -> Word {
        self.steps.iter().map(|&(l, _)| l).collect()
    }

    /// Vertex at position `i` along the walk, `0 ..= len`.
    pub fn vertex_at(&self, i: usize) -> VertexId {
        if i == 0 {
            self.start
        } else {
            self.steps[i - 1].1
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        std::iter::once(self.start).chain(self.steps.iter().map(|&(_, v)| v))
    }

    pub fn is_circuit(&self) -> bool {
        self.end() == self.start
    }
}

/// An inverse graph with a distinguished root; accepts the labels of circuits
/// based there.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RootedGraph {
    graph: InverseGraph,
    root: VertexId,
}

impl RootedGraph {
    pub fn new(graph: InverseGraph, root: VertexId) -> Result<RootedGraph> {
        if root.idx() >= graph.vertex_count() {
            return Err(Error::UnknownVertex(format!("{root}")));
        }
        Ok(RootedGraph { graph, root })
    }

    pub fn graph(&self) -> &InverseGraph {
        &self.graph
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.graph.trace(self.root, w) == Some(self.root)
    }

    /// Distance of every vertex from the root.
    pub fn norms(&self) -> Vec<u32> {
        self.graph
            .distances_from(self.root)
            .into_iter()
            .map(|d| d.expect("inverse graphs are connected"))
            .collect()
    }

    pub fn norm(&self, v: VertexId) -> u32 {
        self.graph.distances_from(self.root)[v.idx()].expect("inverse graphs are connected")
    }

    /// Smallest norm of a truncated vertex: answers about vertices strictly
    /// inside this radius cannot be falsified by unseen vertices. `None`
    /// means the graph is complete as given.
    pub fn trusted_radius(&self) -> Option<u32> {
        let norms = self.norms();
        self.graph
            .truncated_vertices()
            .map(|v| norms[v.idx()])
            .min()
    }
}
