//! End-cones, geodesic cones, and rooted geodesic languages.
//!
//! The end-cone at a vertex of norm `n` is the connected component of the
//! graph minus the radius-`n-1` disk around the root that contains the
//! vertex; its frontier is the set of component vertices of norm exactly `n`.
//! On a ball, the cone is exact out to `trusted_radius` levels above the base
//! norm and unknown beyond.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{InverseGraph, RootedGraph, VertexId};
use crate::word::Word;

/// An end-cone, re-indexed as its own inverse graph.
#[derive(Clone, Debug)]
pub struct EndCone {
    /// The component, as a graph of its own. Keys are inherited.
    pub cone_graph: InverseGraph,
    /// Frontier vertices (cone indexing), all at the base norm.
    pub frontier: BTreeSet<VertexId>,
    /// Norm of the anchor vertex in the ambient rooted graph.
    pub base_norm: u32,
    /// The vertex the cone was taken at (cone indexing).
    pub anchor: VertexId,
    /// Norm above `base_norm` per cone vertex.
    pub rel_norm: Vec<u32>,
    /// Levels above the base norm guaranteed complete; `None` when the whole
    /// component is free of truncated vertices.
    pub trusted_radius: Option<u32>,
}

impl EndCone {
    /// Induced subgraph on the cone vertices at relative norm `<= depth`
    /// that are reachable from the frontier inside that bound, with the
    /// reindexed frontier. Requires `depth <= trusted_radius`.
    pub fn truncated_view(&self, depth: u32) -> Result<(InverseGraph, BTreeSet<VertexId>)> {
        if let Some(trusted) = self.trusted_radius {
            if depth > trusted {
                return Err(Error::InsufficientBall(format!(
                    "cone trusted to depth {trusted}, requested {depth}"
                )));
            }
        }
        let bounded: BTreeSet<VertexId> = self
            .cone_graph
            .vertices()
            .filter(|v| self.rel_norm[v.idx()] <= depth)
            .collect();
        // Keep what the frontier can see inside the bound.
        let mut keep = BTreeSet::new();
        let mut queue: VecDeque<VertexId> = self.frontier.iter().copied().collect();
        keep.extend(self.frontier.iter().copied());
        while let Some(u) = queue.pop_front() {
            for &v in self.cone_graph.star(u).values() {
                if bounded.contains(&v) && keep.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        let view = self.cone_graph.induced(&keep, &BTreeSet::new())?;
        let frontier = self
            .frontier
            .iter()
            .map(|&v| view.vertex_by_key(self.cone_graph.key(v)).unwrap())
            .collect();
        Ok((view, frontier))
    }
}

impl RootedGraph {
    /// The end-cone at `v`. Fails on the root (an end-cone needs norm >= 1).
    pub fn end_cone(&self, v: VertexId) -> Result<EndCone> {
        let norms = self.norms();
        let n = norms[v.idx()];
        if n == 0 {
            return Err(Error::InvalidParameter(
                "the root has no end-cone".into(),
            ));
        }
        // Component of v among vertices of norm >= n.
        let mut component = BTreeSet::from([v]);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &t in self.graph().star(u).values() {
                if norms[t.idx()] >= n && component.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        let cone_graph = self.graph().induced(
            &component,
            &component
                .iter()
                .copied()
                .filter(|&u| self.graph().is_truncated(u))
                .collect(),
        )?;
        let reindex = |u: VertexId| cone_graph.vertex_by_key(self.graph().key(u)).unwrap();
        let frontier: BTreeSet<VertexId> = component
            .iter()
            .copied()
            .filter(|&u| norms[u.idx()] == n)
            .map(reindex)
            .collect();
        let mut rel_norm = vec![0u32; cone_graph.vertex_count()];
        for &u in &component {
            rel_norm[reindex(u).idx()] = norms[u.idx()] - n;
        }
        let trusted_radius = component
            .iter()
            .copied()
            .filter(|&u| self.graph().is_truncated(u))
            .map(|u| norms[u.idx()] - n)
            .min();
        Ok(EndCone {
            anchor: reindex(v),
            cone_graph,
            frontier,
            base_norm: n,
            rel_norm,
            trusted_radius,
        })
    }

    /// The geodesic cone at `v`: vertices reached from the root by a geodesic
    /// through `v`, limited to norms `<= norm(v) + radius`. Requires the ball
    /// to be trusted that far out.
    pub fn cone(&self, v: VertexId, radius: u32) -> Result<InverseGraph> {
        let norms = self.norms();
        let n = norms[v.idx()];
        let reach = n + radius;
        if let Some(trusted) = self.trusted_radius() {
            if reach > trusted {
                return Err(Error::InsufficientBall(format!(
                    "cone needs norms up to {reach}, ball trusted to {trusted}"
                )));
            }
        }
        let from_v = self.graph().distances_from(v);
        let keep: BTreeSet<VertexId> = self
            .graph()
            .vertices()
            .filter(|x| {
                norms[x.idx()] <= reach
                    && from_v[x.idx()].is_some_and(|d| norms[x.idx()] == n + d)
            })
            .collect();
        let boundary = keep
            .iter()
            .copied()
            .filter(|&x| norms[x.idx()] == reach || self.graph().is_truncated(x))
            .collect();
        self.graph().induced(&keep, &boundary)
    }

    /// All words of length `<= max_len` labeling geodesics from the root.
    /// The set is prefix-closed and contains the empty word.
    pub fn geodesic_words(&self, max_len: u32) -> Result<BTreeSet<Word>> {
        let norms = self.norms();
        if let Some(bad) = self
            .graph()
            .truncated_vertices()
            .find(|v| norms[v.idx()] < max_len)
        {
            return Err(Error::InsufficientBall(format!(
                "truncated vertex `{}` at norm {} < {max_len}",
                self.graph().key(bad),
                norms[bad.idx()]
            )));
        }
        let mut out = BTreeSet::new();
        let mut stack: Vec<(VertexId, Word)> = vec![(self.root(), Word::empty())];
        while let Some((at, w)) = stack.pop() {
            out.insert(w.clone());
            if (w.len() as u32) == max_len {
                continue;
            }
            for (&letter, &t) in self.graph().star(at) {
                if norms[t.idx()] == w.len() as u32 + 1 {
                    let mut ext = w.clone();
                    ext.push(letter);
                    stack.push((t, ext));
                }
            }
        }
        Ok(out)
    }
}
