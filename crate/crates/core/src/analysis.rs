//! Desk-scale context-freeness detection and tree-likeness verifiers:
//! end-cone classification at bounded depth, tree-decomposition and
//! strong-tree-decomposition checking, cone separation, and polygon
//! thinness.
//!
//! Cone comparison from balls is necessarily approximate: cones are compared
//! at a bounded relative depth, so census class counts are lower bounds that
//! can only grow as the depth increases.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::alphabet::Letter;
use crate::cones::EndCone;
use crate::error::{Error, Result};
use crate::graph::{InverseGraph, RootedGraph, VertexId, Walk};

/// Whether cone comparison demands literal letter equality or allows a
/// global involution-compatible renaming of the letters.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum LabelMode {
    #[default]
    Exact,
    UpToRelabeling,
}

/// Canonical form of a frontier-tagged cone view: the lexicographically
/// minimal breadth-first encoding over all frontier anchorings (and, in
/// relabeling mode, all letter renamings).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ConeType {
    pub encoding: Vec<u32>,
}

impl ConeType {
    pub fn of(cone: &EndCone, depth: u32, mode: LabelMode) -> Result<ConeType> {
        let (view, frontier) = cone.truncated_view(depth)?;
        Ok(ConeType { encoding: canonical_encoding(&view, &frontier, mode) })
    }
}

fn relabel_maps(g: &InverseGraph, mode: LabelMode) -> Vec<Vec<Letter>> {
    match mode {
        LabelMode::Exact => vec![g.alphabet().letters().collect()],
        LabelMode::UpToRelabeling => g.alphabet().relabelings(),
    }
}

/// Breadth-first numbering from `anchor` with stars visited in relabeled
/// letter order; encodes vertex count, frontier, and the edge list.
fn anchored_encoding(
    g: &InverseGraph,
    frontier: &BTreeSet<VertexId>,
    anchor: VertexId,
    relabel: &[Letter],
) -> Vec<u32> {
    let n = g.vertex_count();
    let mut number: Vec<Option<u32>> = vec![None; n];
    number[anchor.idx()] = Some(0);
    let mut next = 1u32;
    let mut queue = VecDeque::from([anchor]);
    while let Some(u) = queue.pop_front() {
        let mut out: Vec<(Letter, VertexId)> =
            g.star(u).iter().map(|(&l, &v)| (relabel[l.closure_index()], v)).collect();
        out.sort();
        for (_, v) in out {
            if number[v.idx()].is_none() {
                number[v.idx()] = Some(next);
                next += 1;
                queue.push_back(v);
            }
        }
    }
    debug_assert_eq!(next as usize, n, "cone views are frontier-connected");
    let mut enc = vec![n as u32, frontier.len() as u32];
    let mut front: Vec<u32> = frontier.iter().map(|&f| number[f.idx()].unwrap()).collect();
    front.sort_unstable();
    enc.extend(front);
    enc.push(u32::MAX);
    let mut edges: Vec<(u32, u32, u32)> = g
        .edges()
        .map(|(u, l, v)| {
            (
                number[u.idx()].unwrap(),
                relabel[l.closure_index()].closure_index() as u32,
                number[v.idx()].unwrap(),
            )
        })
        .collect();
    edges.sort_unstable();
    for (u, l, v) in edges {
        enc.extend([u, l, v]);
    }
    enc
}

fn canonical_encoding(g: &InverseGraph, frontier: &BTreeSet<VertexId>, mode: LabelMode) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for relabel in relabel_maps(g, mode) {
        for &anchor in frontier {
            let enc = anchored_encoding(g, frontier, anchor, &relabel);
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        }
    }
    best.unwrap_or_else(|| vec![0])
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EndIsoResult {
    pub isomorphic: bool,
    /// Depth both cones were compared at; `None` when compared in full.
    pub compared_depth: Option<u32>,
    /// False when truncation forced an approximate comparison.
    pub exact: bool,
}

/// Compare two end-cones as frontier-tagged graphs. Fully trusted cones are
/// compared outright; otherwise both are cut at the shared trusted depth and
/// the result is flagged approximate.
pub fn end_isomorphic(c1: &EndCone, c2: &EndCone, mode: LabelMode) -> Result<EndIsoResult> {
    let full1 = c1.rel_norm.iter().copied().max().unwrap_or(0);
    let full2 = c2.rel_norm.iter().copied().max().unwrap_or(0);
    let (depth, exact) = match (c1.trusted_radius, c2.trusted_radius) {
        (None, None) => (None, true),
        (t1, t2) => {
            let d = t1.unwrap_or(full1).min(t2.unwrap_or(full2));
            (Some(d), false)
        }
    };
    let isomorphic = match depth {
        None => {
            ConeType::of(c1, full1, mode)? == ConeType::of(c2, full2, mode)?
        }
        Some(d) => ConeType::of(c1, d, mode)? == ConeType::of(c2, d, mode)?,
    };
    Ok(EndIsoResult { isomorphic, compared_depth: depth, exact })
}

#[derive(Clone, Debug)]
pub struct CensusRow {
    pub norm: u32,
    pub vertex_key: String,
    pub class: String,
}

/// Classification of the end-cones of every vertex out to a norm, each cut
/// at the same relative depth.
#[derive(Clone, Debug)]
pub struct CensusTable {
    pub max_norm: u32,
    pub depth: u32,
    pub mode: LabelMode,
    pub rows: Vec<CensusRow>,
    /// Distinct classes among the vertices of each norm `1..=max_norm`.
    pub per_norm_counts: Vec<usize>,
    /// Distinct classes among the vertices of norm at most `n`.
    pub cumulative_counts: Vec<usize>,
}

impl CensusTable {
    pub fn total_classes(&self) -> usize {
        self.cumulative_counts.last().copied().unwrap_or(0)
    }
}

impl fmt::Display for CensusTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{}\t{}\t{}", row.norm, row.vertex_key, row.class)?;
        }
        for (i, (per, cum)) in self.per_norm_counts.iter().zip(&self.cumulative_counts).enumerate() {
            writeln!(f, "# norm {}: classes {} (cumulative {})", i + 1, per, cum)?;
        }
        Ok(())
    }
}

/// Classify the end-cone of every vertex with norm in `1..=max_norm` at the
/// given relative depth. Requires the ball to be trusted out to
/// `max_norm + depth`.
pub fn end_cone_census(
    rg: &RootedGraph,
    max_norm: u32,
    depth: u32,
    mode: LabelMode,
) -> Result<CensusTable> {
    if let Some(trusted) = rg.trusted_radius() {
        if max_norm + depth > trusted {
            return Err(Error::InsufficientBall(format!(
                "census needs radius {}, ball trusted to {trusted}",
                max_norm + depth
            )));
        }
    }
    let norms = rg.norms();
    let todo: Vec<VertexId> = rg
        .graph()
        .vertices()
        .filter(|v| (1..=max_norm).contains(&norms[v.idx()]))
        .collect();
    let encodings: Vec<(VertexId, u32, Vec<u32>)> = todo
        .par_iter()
        .map(|&v| {
            let cone = rg.end_cone(v)?;
            let ty = ConeType::of(&cone, depth, mode)?;
            Ok((v, norms[v.idx()], ty.encoding))
        })
        .collect::<Result<_>>()?;

    // Stable class names in order of first appearance over (norm, vertex).
    let mut ordered = encodings;
    ordered.sort_by_key(|&(v, n, _)| (n, v));
    let mut class_names: BTreeMap<Vec<u32>, String> = BTreeMap::new();
    let mut rows = Vec::with_capacity(ordered.len());
    let mut per_norm: Vec<BTreeSet<String>> = vec![BTreeSet::new(); max_norm as usize];
    let mut cumulative: BTreeSet<String> = BTreeSet::new();
    let mut cumulative_counts = Vec::with_capacity(max_norm as usize);
    let mut current_norm = 1u32;
    for (v, n, enc) in ordered {
        while current_norm < n {
            cumulative_counts.push(cumulative.len());
            current_norm += 1;
        }
        let next_id = class_names.len() + 1;
        let class = class_names.entry(enc).or_insert_with(|| format!("t{next_id}")).clone();
        per_norm[(n - 1) as usize].insert(class.clone());
        cumulative.insert(class.clone());
        rows.push(CensusRow { norm: n, vertex_key: rg.graph().key(v).to_owned(), class });
    }
    while current_norm <= max_norm {
        cumulative_counts.push(cumulative.len());
        current_norm += 1;
    }
    Ok(CensusTable {
        max_norm,
        depth,
        mode,
        rows,
        per_norm_counts: per_norm.into_iter().map(|s| s.len()).collect(),
        cumulative_counts,
    })
}

/// A tree of bags over the vertices of a graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeDecomposition {
    pub node_names: Vec<String>,
    pub tree_edges: Vec<(usize, usize)>,
    pub bags: Vec<BTreeSet<VertexId>>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeDecReport {
    pub tree_ok: bool,
    pub coverage_ok: bool,
    pub edges_covered: bool,
    pub connectivity_ok: bool,
    pub witness: Option<String>,
    pub max_bag_diameter: u32,
}

impl TreeDecReport {
    pub fn valid(&self) -> bool {
        self.tree_ok && self.coverage_ok && self.edges_covered && self.connectivity_ok
    }
}

fn is_tree(node_count: usize, edges: &[(usize, usize)]) -> bool {
    if node_count == 0 {
        return false;
    }
    if edges.len() != node_count - 1 {
        return false;
    }
    let mut adj = vec![Vec::new(); node_count];
    for &(a, b) in edges {
        if a >= node_count || b >= node_count || a == b {
            return false;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; node_count];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == node_count
}

fn bag_diameter(g: &InverseGraph, bag: &BTreeSet<VertexId>) -> u32 {
    let mut max = 0;
    for &u in bag {
        let dist = g.distances_from(u);
        for &v in bag {
            if let Some(d) = dist[v.idx()] {
                max = max.max(d);
            }
        }
    }
    max
}

/// Check the three bag laws verbatim and report the largest bag diameter.
pub fn verify_tree_decomposition(g: &InverseGraph, td: &TreeDecomposition) -> Result<TreeDecReport> {
    let nodes = td.node_names.len();
    if td.bags.len() != nodes {
        return Err(Error::InvalidParameter("one bag per tree node required".into()));
    }
    for bag in &td.bags {
        for &v in bag {
            if v.idx() >= g.vertex_count() {
                return Err(Error::UnknownVertex(format!("{v}")));
            }
        }
    }
    let tree_ok = is_tree(nodes, &td.tree_edges);
    let mut witness = None;

    // Coverage.
    let mut covered = vec![false; g.vertex_count()];
    for bag in &td.bags {
        for &v in bag {
            covered[v.idx()] = true;
        }
    }
    let coverage_ok = covered.iter().all(|&c| c);
    if !coverage_ok {
        let v = covered.iter().position(|&c| !c).unwrap();
        witness.get_or_insert(format!("vertex `{}` in no bag", g.key(VertexId(v as u32))));
    }

    // Every edge inside some bag.
    let mut edges_covered = true;
    'edges: for (u, _, v) in g.positive_edges() {
        if !td.bags.iter().any(|bag| bag.contains(&u) && bag.contains(&v)) {
            edges_covered = false;
            witness.get_or_insert(format!(
                "edge `{}` -- `{}` in no bag",
                g.key(u),
                g.key(v)
            ));
            break 'edges;
        }
    }

    // Bags containing a vertex form a subtree.
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in &td.tree_edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut connectivity_ok = true;
    if tree_ok {
        'vertices: for v in g.vertices() {
            let holders: Vec<usize> =
                (0..nodes).filter(|&t| td.bags[t].contains(&v)).collect();
            if holders.len() <= 1 {
                continue;
            }
            let inside: BTreeSet<usize> = holders.iter().copied().collect();
            let mut seen = BTreeSet::from([holders[0]]);
            let mut queue = VecDeque::from([holders[0]]);
            while let Some(t) = queue.pop_front() {
                for &s in &adj[t] {
                    if inside.contains(&s) && seen.insert(s) {
                        queue.push_back(s);
                    }
                }
            }
            if seen.len() != holders.len() {
                connectivity_ok = false;
                witness.get_or_insert(format!(
                    "bags holding `{}` are not connected in the tree",
                    g.key(v)
                ));
                break 'vertices;
            }
        }
    }

    let max_bag_diameter = td.bags.iter().map(|b| bag_diameter(g, b)).max().unwrap_or(0);
    Ok(TreeDecReport {
        tree_ok,
        coverage_ok,
        edges_covered,
        connectivity_ok,
        witness,
        max_bag_diameter,
    })
}

/// A partition of the vertex set, meant to have a tree as quotient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StrongTreePartition {
    pub blocks: Vec<BTreeSet<VertexId>>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StrongDecReport {
    pub quotient_is_tree: bool,
    pub max_block_diameter: u32,
    /// The induced decomposition: blocks plus their out-neighbors, on the
    /// quotient tree.
    pub augmented: TreeDecReport,
    /// Augmented bag diameters stay within block diameter plus two.
    pub augmentation_within_bound: bool,
}

impl StrongDecReport {
    pub fn valid(&self) -> bool {
        self.quotient_is_tree && self.augmented.valid() && self.augmentation_within_bound
    }
}

/// Check that the partition's quotient simple graph is a tree, then build
/// and verify the induced bag decomposition.
pub fn verify_strong_tree_decomposition(
    g: &InverseGraph,
    p: &StrongTreePartition,
) -> Result<StrongDecReport> {
    if p.blocks.iter().any(|b| b.is_empty()) {
        return Err(Error::InvalidParameter("empty block".into()));
    }
    let mut owner: Vec<Option<usize>> = vec![None; g.vertex_count()];
    for (i, block) in p.blocks.iter().enumerate() {
        for &v in block {
            if v.idx() >= g.vertex_count() {
                return Err(Error::UnknownVertex(format!("{v}")));
            }
            if owner[v.idx()].replace(i).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "vertex `{}` in two blocks",
                    g.key(v)
                )));
            }
        }
    }
    if owner.iter().any(|o| o.is_none()) {
        return Err(Error::InvalidParameter("blocks do not cover the graph".into()));
    }

    let mut quotient_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (u, _, v) in g.positive_edges() {
        let (a, b) = (owner[u.idx()].unwrap(), owner[v.idx()].unwrap());
        if a != b {
            quotient_edges.insert((a.min(b), a.max(b)));
        }
    }
    let edges: Vec<(usize, usize)> = quotient_edges.into_iter().collect();
    let quotient_is_tree = is_tree(p.blocks.len(), &edges);
    let max_block_diameter = p.blocks.iter().map(|b| bag_diameter(g, b)).max().unwrap_or(0);

    // Augment each block by the targets of its outgoing edges.
    let mut bags = p.blocks.clone();
    for (u, _, v) in g.edges() {
        let bu = owner[u.idx()].unwrap();
        bags[bu].insert(v);
    }
    let td = TreeDecomposition {
        node_names: (0..p.blocks.len()).map(|i| format!("b{i}")).collect(),
        tree_edges: edges,
        bags,
    };
    let augmented = verify_tree_decomposition(g, &td)?;
    let augmentation_within_bound = augmented.max_bag_diameter <= max_block_diameter + 2;
    Ok(StrongDecReport {
        quotient_is_tree,
        max_block_diameter,
        augmented,
        augmentation_within_bound,
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeparationCheck {
    pub separated: bool,
    /// True when the search region touched truncated vertices, so a positive
    /// separation verdict could still be overturned by unseen vertices.
    pub boundary_contact: bool,
}

/// Is every geodesic descendant of `v` cut off from the root once the
/// radius-`delta` disk around `v` is removed? The root itself is always
/// admitted as the start of the search, even if it falls inside the disk.
pub fn cone_separation_check(rg: &RootedGraph, v: VertexId, delta: u32) -> Result<SeparationCheck> {
    let g = rg.graph();
    let norms = rg.norms();
    if norms[v.idx()] == 0 {
        return Err(Error::InvalidParameter("separation needs a non-root vertex".into()));
    }
    let from_v = g.distances_from(v);
    let deleted = |x: VertexId| from_v[x.idx()].is_some_and(|d| d <= delta);
    let in_cone = |x: VertexId| {
        from_v[x.idx()].is_some_and(|d| norms[x.idx()] == norms[v.idx()] + d)
    };

    let mut boundary_contact = g.is_truncated(rg.root());
    let mut reached = vec![false; g.vertex_count()];
    reached[rg.root().idx()] = true;
    let mut queue = VecDeque::from([rg.root()]);
    let mut separated = true;
    while let Some(u) = queue.pop_front() {
        for &t in g.star(u).values() {
            if deleted(t) || reached[t.idx()] {
                continue;
            }
            reached[t.idx()] = true;
            if g.is_truncated(t) {
                boundary_contact = true;
            }
            if in_cone(t) {
                separated = false;
            }
            queue.push_back(t);
        }
    }
    Ok(SeparationCheck { separated, boundary_contact })
}

/// Is the closed polygon of geodesic sides `delta`-thin: every vertex of
/// every side within `delta` of some other side?
pub fn polygon_thin_check(g: &InverseGraph, polygon: &[Walk], delta: u32) -> Result<bool> {
    if polygon.len() < 2 {
        return Err(Error::InvalidParameter("a polygon needs at least two sides".into()));
    }
    for (i, side) in polygon.iter().enumerate() {
        let next = &polygon[(i + 1) % polygon.len()];
        if side.end() != next.start {
            return Err(Error::InvalidParameter(format!("sides {i} and {} do not meet", (i + 1) % polygon.len())));
        }
        let d = g
            .distance(side.start, side.end())
            .ok_or_else(|| Error::InvalidParameter("side endpoints disconnected".into()))?;
        if d as usize != side.len() {
            return Err(Error::InvalidParameter(format!("side {i} is not a geodesic")));
        }
    }
    for (i, side) in polygon.iter().enumerate() {
        for u in side.vertices() {
            let dist = g.distances_from(u);
            let near_other = polygon
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .any(|(_, other)| {
                    other
                        .vertices()
                        .any(|w| dist[w.idx()].is_some_and(|d| d <= delta))
                });
            if !near_other {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::graph::GraphBuilder;

    #[test]
    fn identical_cones_compare_equal() {
        let rg = families::free_group_ball(2, 5).unwrap();
        let v = rg.graph().vertex_by_key("ab").unwrap();
        let c1 = rg.end_cone(v).unwrap();
        let c2 = rg.end_cone(v).unwrap();
        let r = end_isomorphic(&c1, &c2, LabelMode::Exact).unwrap();
        assert!(r.isomorphic);
        assert!(!r.exact);
    }

    #[test]
    fn tree_cones_compare_up_to_relabeling() {
        let rg = families::free_group_ball(2, 6).unwrap();
        let c_in_a = rg.end_cone(rg.graph().vertex_by_key("aa").unwrap()).unwrap();
        let c_in_b = rg.end_cone(rg.graph().vertex_by_key("ab").unwrap()).unwrap();
        let c_in_a2 = rg.end_cone(rg.graph().vertex_by_key("ba").unwrap()).unwrap();

        // Same incoming letter: literally isomorphic subtrees.
        assert!(end_isomorphic(&c_in_a, &c_in_a2, LabelMode::Exact).unwrap().isomorphic);
        // Different incoming letters: outgoing letter sets differ, so
        // literal comparison fails but a renaming matches them.
        assert!(!end_isomorphic(&c_in_a, &c_in_b, LabelMode::Exact).unwrap().isomorphic);
        assert!(end_isomorphic(&c_in_a, &c_in_b, LabelMode::UpToRelabeling).unwrap().isomorphic);
    }

    #[test]
    fn grid_vertices_of_one_norm_share_their_cone() {
        // Removing a disk from the grid leaves one ring-shaped component, so
        // same-norm vertices have the same end-cone.
        let rg = families::free_abelian_ball(2, 6).unwrap();
        let corner = rg.end_cone(rg.graph().vertex_by_key("1,1").unwrap()).unwrap();
        let axis = rg.end_cone(rg.graph().vertex_by_key("2,0").unwrap()).unwrap();
        assert_eq!(corner.frontier.len(), axis.frontier.len());
        assert!(end_isomorphic(&corner, &axis, LabelMode::Exact).unwrap().isomorphic);
    }

    #[test]
    fn cone_type_keys_form_an_equivalence() {
        let rg = families::free_abelian_ball(2, 6).unwrap();
        let norms = rg.norms();
        let cones: Vec<EndCone> = rg
            .graph()
            .vertices()
            .filter(|v| (1..=3).contains(&norms[v.idx()]))
            .map(|v| rg.end_cone(v).unwrap())
            .collect();
        for a in &cones {
            assert!(end_isomorphic(a, a, LabelMode::Exact).unwrap().isomorphic);
            for b in &cones {
                let ab = end_isomorphic(a, b, LabelMode::Exact).unwrap().isomorphic;
                let ba = end_isomorphic(b, a, LabelMode::Exact).unwrap().isomorphic;
                assert_eq!(ab, ba);
                for c in &cones {
                    let bc = end_isomorphic(b, c, LabelMode::Exact).unwrap().isomorphic;
                    let ac = end_isomorphic(a, c, LabelMode::Exact).unwrap().isomorphic;
                    if ab && bc {
                        assert!(ac);
                    }
                }
            }
        }
    }

    #[test]
    fn tree_census_collapses_to_one_class() {
        let rg = families::free_group_ball(2, 6).unwrap();
        let table = end_cone_census(&rg, 3, 2, LabelMode::UpToRelabeling).unwrap();
        assert_eq!(table.per_norm_counts, vec![1, 1, 1]);
        assert_eq!(table.cumulative_counts, vec![1, 1, 1]);
    }

    #[test]
    fn grid_census_grows_one_class_per_norm() {
        let rg = families::free_abelian_ball(2, 6).unwrap();
        let table = end_cone_census(&rg, 4, 2, LabelMode::UpToRelabeling).unwrap();
        assert_eq!(table.per_norm_counts, vec![1, 1, 1, 1]);
        assert_eq!(table.cumulative_counts, vec![1, 2, 3, 4]);
    }

    #[test]
    fn census_depth_never_decreases_counts() {
        let rg = families::free_abelian_ball(2, 6).unwrap();
        let shallow = end_cone_census(&rg, 3, 1, LabelMode::Exact).unwrap();
        let deep = end_cone_census(&rg, 3, 2, LabelMode::Exact).unwrap();
        for i in 0..3 {
            assert!(deep.per_norm_counts[i] >= shallow.per_norm_counts[i]);
        }
    }

    #[test]
    fn census_requires_a_big_enough_ball() {
        let rg = families::free_group_ball(2, 4).unwrap();
        assert!(end_cone_census(&rg, 3, 2, LabelMode::Exact).is_err());
        assert!(end_cone_census(&rg, 2, 2, LabelMode::Exact).is_ok());
    }

    #[test]
    fn finite_cycle_census_is_exact() {
        let rg = families::cycle_cayley(6).unwrap();
        let table = end_cone_census(&rg, 3, 3, LabelMode::Exact).unwrap();
        // Antipode cone is a point; the side pairs share a class.
        assert_eq!(table.total_classes(), 3);
    }

    fn singleton_decomposition(rg: &RootedGraph) -> TreeDecomposition {
        let g = rg.graph();
        TreeDecomposition {
            node_names: g.vertices().map(|v| g.key(v).to_owned()).collect(),
            tree_edges: g
                .positive_edges()
                .map(|(u, _, v)| (u.idx(), v.idx()))
                .collect(),
            bags: g.vertices().map(|v| BTreeSet::from([v])).collect(),
        }
    }

    #[test]
    fn singleton_bags_on_a_tree() {
        let rg = families::free_group_ball(1, 3).unwrap();
        let td = singleton_decomposition(&rg);
        let report = verify_tree_decomposition(rg.graph(), &td).unwrap();
        // Edges are never inside a singleton bag; the tree-shaped bag layout
        // still satisfies coverage and connectivity.
        assert!(report.tree_ok && report.coverage_ok && report.connectivity_ok);
        assert!(!report.edges_covered);
        assert_eq!(report.max_bag_diameter, 0);
    }

    fn ladder(n: usize) -> RootedGraph {
        let alpha = crate::alphabet::InvolutiveAlphabet::new(&["a", "b"]).unwrap();
        let a = alpha.parse_letter("a").unwrap();
        let b = alpha.parse_letter("b").unwrap();
        let mut builder = GraphBuilder::new(alpha);
        for i in 0..n {
            let lo = builder.vertex(&format!("{i},0"));
            let hi = builder.vertex(&format!("{i},1"));
            builder.edge(lo, b, hi);
            if i > 0 {
                let prev_lo = builder.lookup(&format!("{},0", i - 1)).unwrap();
                let prev_hi = builder.lookup(&format!("{},1", i - 1)).unwrap();
                builder.edge(prev_lo, a, lo);
                builder.edge(prev_hi, a, hi);
            }
        }
        builder.build_rooted().unwrap()
    }

    #[test]
    fn ladder_with_overlapping_rung_bags_is_valid() {
        let rg = ladder(5);
        let g = rg.graph();
        let bag = |i: usize| -> BTreeSet<VertexId> {
            [format!("{i},0"), format!("{i},1"), format!("{},0", i + 1), format!("{},1", i + 1)]
                .iter()
                .map(|k| g.vertex_by_key(k).unwrap())
                .collect()
        };
        let td = TreeDecomposition {
            node_names: (0..4).map(|i| format!("t{i}")).collect(),
            tree_edges: (0..3).map(|i| (i, i + 1)).collect(),
            bags: (0..4).map(bag).collect(),
        };
        let report = verify_tree_decomposition(g, &td).unwrap();
        assert!(report.valid(), "{report:?}");
        assert_eq!(report.max_bag_diameter, 2);

        // Bags of bare rungs miss the along-edges.
        let rungs = TreeDecomposition {
            node_names: (0..5).map(|i| format!("t{i}")).collect(),
            tree_edges: (0..4).map(|i| (i, i + 1)).collect(),
            bags: (0..5)
                .map(|i| {
                    [format!("{i},0"), format!("{i},1")]
                        .iter()
                        .map(|k| g.vertex_by_key(k).unwrap())
                        .collect()
                })
                .collect(),
        };
        let report = verify_tree_decomposition(g, &rungs).unwrap();
        assert!(!report.edges_covered);
        assert_eq!(report.max_bag_diameter, 1);
    }

    #[test]
    fn broken_connectivity_names_the_vertex() {
        let rg = families::free_abelian_ball(1, 2).unwrap();
        let g = rg.graph();
        let v = |k: &str| g.vertex_by_key(k).unwrap();
        // Vertex "0" appears in the two end bags but not the middle one.
        let td = TreeDecomposition {
            node_names: vec!["l".into(), "m".into(), "r".into()],
            tree_edges: vec![(0, 1), (1, 2)],
            bags: vec![
                BTreeSet::from([v("-2"), v("-1"), v("0")]),
                BTreeSet::from([v("-1"), v("1")]),
                BTreeSet::from([v("1"), v("2"), v("0")]),
            ],
        };
        let report = verify_tree_decomposition(g, &td).unwrap();
        assert!(!report.connectivity_ok);
        assert!(report.witness.as_deref().unwrap().contains("`0`"));
    }

    #[test]
    fn singleton_partition_of_a_tree() {
        let rg = families::free_group_ball(2, 3).unwrap();
        let p = StrongTreePartition {
            blocks: rg.graph().vertices().map(|v| BTreeSet::from([v])).collect(),
        };
        let report = verify_strong_tree_decomposition(rg.graph(), &p).unwrap();
        assert!(report.valid(), "{report:?}");
        assert_eq!(report.max_block_diameter, 0);
        assert!(report.augmented.max_bag_diameter <= 2);
    }

    #[test]
    fn parity_partition_of_the_line() {
        let rg = families::free_abelian_ball(1, 4).unwrap();
        let g = rg.graph();
        let (mut evens, mut odds) = (BTreeSet::new(), BTreeSet::new());
        for v in g.vertices() {
            if g.key(v).parse::<i64>().unwrap().rem_euclid(2) == 0 {
                evens.insert(v);
            } else {
                odds.insert(v);
            }
        }
        let p = StrongTreePartition { blocks: vec![evens, odds] };
        let report = verify_strong_tree_decomposition(g, &p).unwrap();
        // Two blocks, one quotient edge: a tree, whatever the diameters.
        assert!(report.quotient_is_tree);
        assert!(report.valid(), "{report:?}");
    }

    #[test]
    fn antipodal_partition_of_the_square() {
        let rg = families::cycle_cayley(4).unwrap();
        let g = rg.graph();
        let v = |k: &str| g.vertex_by_key(k).unwrap();
        let p = StrongTreePartition {
            blocks: vec![
                BTreeSet::from([v("0"), v("2")]),
                BTreeSet::from([v("1"), v("3")]),
            ],
        };
        let report = verify_strong_tree_decomposition(g, &p).unwrap();
        assert!(report.quotient_is_tree);
        assert_eq!(report.max_block_diameter, 2);
        assert!(report.valid());
    }

    #[test]
    fn non_partition_is_an_error() {
        let rg = families::cycle_cayley(3).unwrap();
        let g = rg.graph();
        let v0 = g.vertex_by_key("0").unwrap();
        let p = StrongTreePartition {
            blocks: vec![BTreeSet::from([v0]), BTreeSet::from([v0])],
        };
        assert!(verify_strong_tree_decomposition(g, &p).is_err());
    }

    #[test]
    fn tree_vertices_separate_their_cones() {
        let rg = families::free_group_ball(2, 5).unwrap();
        for key in ["a", "ab", "b'a'"] {
            let v = rg.graph().vertex_by_key(key).unwrap();
            let check = cone_separation_check(&rg, v, 1).unwrap();
            assert!(check.separated, "deleting around {key} should separate");
        }
    }

    #[test]
    fn grid_detours_around_the_disk() {
        let rg = families::free_abelian_ball(2, 8).unwrap();
        let v = rg.graph().vertex_by_key("2,0").unwrap();
        let check = cone_separation_check(&rg, v, 2).unwrap();
        assert!(!check.separated);
    }

    #[test]
    fn empty_cone_is_vacuously_separated() {
        let rg = families::cycle_cayley(6).unwrap();
        let v = rg.graph().vertex_by_key("3").unwrap();
        let check = cone_separation_check(&rg, v, 1).unwrap();
        assert!(check.separated);
        assert!(!check.boundary_contact);
    }

    #[test]
    fn geodesic_bigon_is_zero_thin() {
        let rg = families::free_abelian_ball(2, 4).unwrap();
        let g = rg.graph();
        let w = g.alphabet().parse_word("a a b").unwrap();
        let side = g.walk(rg.root(), &w).unwrap();
        let back = g.walk(side.end(), &w.inverse()).unwrap();
        assert!(polygon_thin_check(g, &[side, back], 0).unwrap());
    }

    #[test]
    fn tree_triangle_is_zero_thin() {
        let rg = families::free_group_ball(2, 4).unwrap();
        let g = rg.graph();
        let alpha = g.alphabet().clone();
        let p1 = g.walk(rg.root(), &alpha.parse_word("a a").unwrap()).unwrap();
        let p2 = g.walk(p1.end(), &alpha.parse_word("a' b").unwrap()).unwrap();
        let p3 = g.walk(p2.end(), &alpha.parse_word("b' a'").unwrap()).unwrap();
        assert!(polygon_thin_check(g, &[p1, p2, p3], 0).unwrap());
    }

    #[test]
    fn grid_square_is_not_one_thin() {
        let rg = families::free_abelian_ball(2, 8).unwrap();
        let g = rg.graph();
        let alpha = g.alphabet().clone();
        let sides = ["a a a a", "b b b b", "a' a' a' a'", "b' b' b' b'"];
        let mut at = rg.root();
        let mut polygon = Vec::new();
        for s in sides {
            let side = g.walk(at, &alpha.parse_word(s).unwrap()).unwrap();
            at = side.end();
            polygon.push(side);
        }
        assert!(!polygon_thin_check(g, &polygon, 1).unwrap());
        assert!(polygon_thin_check(g, &polygon, 2).unwrap());
    }

    #[test]
    fn non_geodesic_side_is_an_error() {
        let rg = families::cycle_cayley(4).unwrap();
        let g = rg.graph();
        let w = g.alphabet().parse_word("a a a").unwrap();
        let side = g.walk(rg.root(), &w).unwrap();
        let back = g.walk(side.end(), &g.alphabet().parse_word("a").unwrap()).unwrap();
        assert!(polygon_thin_check(g, &[side, back], 1).is_err());
    }
}
