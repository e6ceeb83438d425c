//! Morphisms of inverse graphs: root-propagated search, cover checks, walk
//! lifting, core extraction, and Stallings folding.
//!
//! Determinism makes a morphism a function of the image of one vertex, so
//! morphism search is plain breadth-first propagation and two morphisms that
//! agree anywhere agree everywhere.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::alphabet::Letter;
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, InverseGraph, RootedGraph, VertexId, Walk};
use crate::word::{free_reduce, Word};

/// A vertex map between inverse graphs; the edge map is induced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphMorphism {
    pub vertex_map: Vec<VertexId>,
}

impl GraphMorphism {
    /// Wrap an explicit vertex map, checking that it is a morphism (every
    /// source edge realized in the target with the same label).
    pub fn new(src: &InverseGraph, tgt: &InverseGraph, vertex_map: Vec<VertexId>) -> Result<GraphMorphism> {
        if vertex_map.len() != src.vertex_count() {
            return Err(Error::Invalid("vertex map has the wrong length".into()));
        }
        for (u, letter, v) in src.edges() {
            let iu = vertex_map[u.idx()];
            let iv = vertex_map[v.idx()];
            if tgt.step(iu, letter) != Some(iv) {
                return Err(Error::Invalid(format!(
                    "edge `{}` -{}-> `{}` has no image",
                    src.key(u),
                    src.alphabet().display_letter(letter),
                    src.key(v)
                )));
            }
        }
        Ok(GraphMorphism { vertex_map })
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.idx()]
    }

    pub fn is_bijective(&self, tgt: &InverseGraph) -> bool {
        if self.vertex_map.len() != tgt.vertex_count() {
            return false;
        }
        let mut seen = vec![false; tgt.vertex_count()];
        for &v in &self.vertex_map {
            if seen[v.idx()] {
                return false;
            }
            seen[v.idx()] = true;
        }
        true
    }

    /// Star maps of inverse-graph morphisms are injective; this re-checks it.
    pub fn is_immersion(&self, src: &InverseGraph) -> bool {
        for u in src.vertices() {
            let mut images = BTreeSet::new();
            for &letter in src.star(u).keys() {
                if !images.insert(letter) {
                    return false;
                }
            }
        }
        true
    }
}

/// Propagate `seed_src -> seed_tgt` across all realized edges. Returns the
/// unique extension, or `None` on any clash or unrealizable edge.
pub(crate) fn propagate(
    src: &InverseGraph,
    tgt: &InverseGraph,
    seed_src: VertexId,
    seed_tgt: VertexId,
) -> Option<Vec<VertexId>> {
    let mut map: Vec<Option<VertexId>> = vec![None; src.vertex_count()];
    map[seed_src.idx()] = Some(seed_tgt);
    let mut queue = VecDeque::from([seed_src]);
    while let Some(u) = queue.pop_front() {
        let iu = map[u.idx()].unwrap();
        for (&letter, &v) in src.star(u) {
            let iv = tgt.step(iu, letter)?;
            match map[v.idx()] {
                None => {
                    map[v.idx()] = Some(iv);
                    queue.push_back(v);
                }
                Some(prev) if prev != iv => return None,
                Some(_) => {}
            }
        }
    }
    map.into_iter().collect()
}

/// The unique root-preserving morphism, if any. On complete graphs this
/// exists exactly when the source language is contained in the target one;
/// on truncated balls only realized edges are required to map.
pub fn find_morphism(src: &RootedGraph, tgt: &RootedGraph) -> Option<GraphMorphism> {
    propagate(src.graph(), tgt.graph(), src.root(), tgt.root())
        .map(|vertex_map| GraphMorphism { vertex_map })
}

/// Rooted isomorphism test: morphisms both ways.
pub fn are_isomorphic(a: &RootedGraph, b: &RootedGraph) -> bool {
    find_morphism(a, b).is_some() && find_morphism(b, a).is_some()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoverCheck {
    pub is_cover: bool,
    /// Truncated source vertices whose stars were not compared.
    pub skipped_truncated: Vec<VertexId>,
    /// Vertices where the star map fails to be onto.
    pub failures: Vec<VertexId>,
}

/// A morphism is a cover when every (non-truncated) source star maps onto the
/// target star. Star injectivity is automatic from determinism.
pub fn is_cover(src: &RootedGraph, tgt: &RootedGraph, m: &GraphMorphism) -> CoverCheck {
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    for u in src.graph().vertices() {
        if src.graph().is_truncated(u) {
            skipped.push(u);
            continue;
        }
        let iu = m.apply(u);
        if src.graph().star(u).len() != tgt.graph().star(iu).len() {
            failures.push(u);
        }
    }
    CoverCheck { is_cover: failures.is_empty(), skipped_truncated: skipped, failures }
}

/// Lift a walk through a cover: the unique walk from `start_fiber` whose
/// image is labeled `w`. Fails if the lift would leave the trusted region.
pub fn lift_walk(
    src: &RootedGraph,
    tgt: &RootedGraph,
    m: &GraphMorphism,
    start_fiber: VertexId,
    w: &Word,
) -> Result<Walk> {
    if tgt.graph().trace(m.apply(start_fiber), w).is_none() {
        return Err(Error::NotAccepted(
            "word does not label a walk in the base".into(),
        ));
    }
    let mut walk = Walk { start: start_fiber, steps: Vec::with_capacity(w.len()) };
    let mut at = start_fiber;
    for letter in w.letters() {
        match src.graph().step(at, letter) {
            Some(next) => {
                at = next;
                walk.steps.push((letter, at));
            }
            None if src.graph().is_truncated(at) => {
                return Err(Error::InsufficientBall(format!(
                    "lift leaves the trusted region at `{}`",
                    src.graph().key(at)
                )))
            }
            None => {
                return Err(Error::NotACover(src.graph().key(at).to_owned()));
            }
        }
    }
    Ok(walk)
}

/// The core: delete non-root vertices of star size one until none remain.
/// This keeps exactly the vertices on reduced circuits through the root.
pub fn core_of(rg: &RootedGraph) -> Result<RootedGraph> {
    let g = rg.graph();
    let mut alive: Vec<bool> = vec![true; g.vertex_count()];
    let mut degree: Vec<usize> = g.vertices().map(|v| g.star(v).len()).collect();
    let mut queue: VecDeque<VertexId> = g
        .vertices()
        .filter(|&v| v != rg.root() && degree[v.idx()] <= 1)
        .collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v.idx()] || v == rg.root() || degree[v.idx()] > 1 {
            continue;
        }
        alive[v.idx()] = false;
        for &t in g.star(v).values() {
            if alive[t.idx()] {
                degree[t.idx()] -= 1;
                if t != rg.root() && degree[t.idx()] <= 1 {
                    queue.push_back(t);
                }
            }
        }
    }
    let keep: BTreeSet<VertexId> = g.vertices().filter(|v| alive[v.idx()]).collect();
    let marks: BTreeSet<VertexId> = keep
        .iter()
        .copied()
        .filter(|&v| g.is_truncated(v))
        .collect();
    let core = g.induced(&keep, &marks)?;
    let root = core.vertex_by_key(g.key(rg.root())).unwrap();
    RootedGraph::new(core, root)
}

/// Fold a wedge of generator-labeled circuits to a deterministic inverse
/// graph and take its core: the subgroup graph of the generated subgroup.
pub fn stallings_fold(alphabet: &crate::alphabet::InvolutiveAlphabet, generators: &[Word]) -> Result<RootedGraph> {
    // Wedge of circuits at a single base point, as a raw edge multiset.
    let mut edges: Vec<(u32, Letter, u32)> = Vec::new();
    let mut next = 1u32;
    for g in generators {
        if g.is_empty() {
            continue;
        }
        let mut at = 0u32;
        for (i, letter) in g.letters().enumerate() {
            let to = if i + 1 == g.len() { 0 } else { next };
            if i + 1 != g.len() {
                next += 1;
            }
            edges.push((at, letter, to));
            edges.push((to, letter.inverse(), at));
            at = to;
        }
    }

    let mut uf = UnionFind::new(next as usize);
    // Fold: merge targets of same-label edges at a shared source, to a
    // fixpoint, in first-discovered order.
    loop {
        let mut star: BTreeMap<(u32, Letter), u32> = BTreeMap::new();
        let mut pending: Option<(u32, u32)> = None;
        'scan: for &(src, letter, dst) in &edges {
            let (src, dst) = (uf.find(src), uf.find(dst));
            match star.get(&(src, letter)) {
                Some(&prev) if prev != dst => {
                    pending = Some((prev, dst));
                    break 'scan;
                }
                _ => {
                    star.insert((src, letter), dst);
                }
            }
        }
        match pending {
            Some((a, b)) => uf.union(a, b),
            None => break,
        }
    }

    let mut builder = GraphBuilder::new(alphabet.clone());
    let root_class = uf.find(0);
    let get = |uf: &mut UnionFind, builder: &mut GraphBuilder, v: u32| {
        let c = uf.find(v);
        let key = if c == root_class { "1".to_owned() } else { format!("v{c}") };
        builder.vertex(&key)
    };
    let root = get(&mut uf, &mut builder, 0);
    builder.root(root);
    let mut seen = BTreeSet::new();
    for &(src, letter, dst) in &edges {
        let (cs, cd) = (uf.find(src), uf.find(dst));
        if seen.insert((cs, letter, cd)) && letter.is_positive() {
            let bs = get(&mut uf, &mut builder, src);
            let bd = get(&mut uf, &mut builder, dst);
            builder.edge(bs, letter, bd);
        }
    }
    if builder.lookup("1").is_none() {
        // No generators with content: the trivial subgroup.
        let v = builder.vertex("1");
        builder.root(v);
    }
    core_of(&builder.build_rooted()?)
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            self.parent[x as usize] = self.parent[self.parent[x as usize] as usize];
            x = self.parent[x as usize];
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Deterministic: smaller id wins, keeping the base point stable.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Subgroup membership against a folded graph: trace the free reduction.
pub fn folded_accepts(folded: &RootedGraph, w: &Word) -> bool {
    folded.accepts(&free_reduce(w))
}

/// One reduced circuit word per chord of a breadth-first spanning tree:
/// root-to-source path, the chord letter, target-to-root path. Together they
/// generate the reduced circuit labels at the root.
pub fn spanning_basis(rg: &RootedGraph) -> Vec<Word> {
    let g = rg.graph();
    // Breadth-first tree, visiting stars in letter order.
    let mut parent: Vec<Option<(VertexId, Letter)>> = vec![None; g.vertex_count()];
    let mut visited = vec![false; g.vertex_count()];
    visited[rg.root().idx()] = true;
    let mut order = vec![rg.root()];
    let mut queue = VecDeque::from([rg.root()]);
    let mut tree: BTreeSet<(VertexId, Letter)> = BTreeSet::new();
    while let Some(u) = queue.pop_front() {
        for (&letter, &v) in g.star(u) {
            if !visited[v.idx()] {
                visited[v.idx()] = true;
                parent[v.idx()] = Some((u, letter));
                tree.insert((u, letter));
                tree.insert((v, letter.inverse()));
                order.push(v);
                queue.push_back(v);
            }
        }
    }
    let path_from_root = |mut v: VertexId| -> Word {
        let mut rev = Vec::new();
        while let Some((p, letter)) = parent[v.idx()] {
            rev.push(letter);
            v = p;
        }
        rev.reverse();
        Word(rev)
    };
    let mut basis = BTreeSet::new();
    for u in g.vertices() {
        for (&letter, &v) in g.star(u) {
            if tree.contains(&(u, letter)) {
                continue;
            }
            // One orientation per chord pair.
            if (u, letter.closure_index()) > (v, letter.inverse().closure_index()) {
                continue;
            }
            let mut w = path_from_root(u);
            w.push(letter);
            let back = path_from_root(v).inverse();
            basis.insert(free_reduce(&w.concat(&back)));
        }
    }
    basis.into_iter().collect()
}
