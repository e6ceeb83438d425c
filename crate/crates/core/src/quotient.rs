//! Determinizing vertex quotients generated by a seed set, automorphism
//! enumeration for finite graphs, orbit partitions, and the homomorphism that
//! sends a quotient circuit to the symmetry its lift realizes.
//!
//! Two vertices are identified when some common label reads to both from the
//! seed set; the computed relation is the smallest equivalence containing
//! seed x seed that is compatible with same-label steps.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, InverseGraph, RootedGraph, VertexId};
use crate::morphism::{propagate, GraphMorphism};
use crate::word::Word;

#[derive(Clone, Debug)]
pub struct DvQuotient {
    pub base: RootedGraph,
    pub seeds: BTreeSet<VertexId>,
    pub quotient: RootedGraph,
    /// Quotient vertex per base vertex.
    pub class_of: Vec<VertexId>,
    /// False when truncation could have hidden merges or edges: some class is
    /// not closed under a realized letter.
    pub saturated: bool,
}

impl DvQuotient {
    pub fn projection(&self) -> GraphMorphism {
        GraphMorphism { vertex_map: self.class_of.clone() }
    }

    /// Lift a circuit of the quotient from the base root and return the seed
    /// vertex it lands on. The landing seed names the symmetry that carries
    /// the root there; the word is in the base language exactly when the
    /// landing seed is the root itself.
    pub fn evaluate_action(&self, w: &Word) -> Result<VertexId> {
        if self.quotient.graph().trace(self.quotient.root(), w) != Some(self.quotient.root()) {
            return Err(Error::NotAccepted(
                "word is not a circuit of the quotient".into(),
            ));
        }
        let g = self.base.graph();
        let mut at = self.base.root();
        for letter in w.letters() {
            match g.step(at, letter) {
                Some(next) => at = next,
                None if g.is_truncated(at) => {
                    return Err(Error::InsufficientBall(format!(
                        "lift leaves the trusted region at `{}`",
                        g.key(at)
                    )))
                }
                None => return Err(Error::NotACover(g.key(at).to_owned())),
            }
        }
        if !self.seeds.contains(&at) {
            return Err(Error::Invalid(format!(
                "lift lands on `{}`, which is not a seed; the quotient is not saturated",
                g.key(at)
            )));
        }
        Ok(at)
    }

    /// Key of the landing seed; a readable name for the symmetry.
    pub fn action_label(&self, w: &Word) -> Result<String> {
        Ok(self.base.graph().key(self.evaluate_action(w)?).to_owned())
    }
}

/// Quotient by the smallest compatible equivalence putting all of `seeds` in
/// one class.
pub fn dv_quotient(rg: &RootedGraph, seeds: &BTreeSet<VertexId>) -> Result<DvQuotient> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("seed set is empty".into()));
    }
    let g = rg.graph();
    for &s in seeds {
        if s.idx() >= g.vertex_count() {
            return Err(Error::UnknownVertex(format!("{s}")));
        }
    }

    let mut uf = QuotientUf::new(g);
    let mut pending: VecDeque<(VertexId, VertexId)> = VecDeque::new();
    let mut iter = seeds.iter();
    let &first = iter.next().unwrap();
    for &s in iter {
        pending.push_back((first, s));
    }
    while let Some((a, b)) = pending.pop_front() {
        let (ra, rb) = (uf.find(a), uf.find(b));
        if ra == rb {
            continue;
        }
        let merged = uf.union(ra, rb);
        let (winner, loser) = merged;
        // Merge successor tables; clashes become new merges.
        let loser_star = std::mem::take(&mut uf.star[loser.idx()]);
        for (letter, tgt) in loser_star {
            match uf.star[winner.idx()].get(&letter) {
                Some(&prev) => pending.push_back((prev, tgt)),
                None => {
                    uf.star[winner.idx()].insert(letter, tgt);
                }
            }
        }
    }

    // Classes in order of their smallest member.
    let mut class_repr: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for v in g.vertices() {
        class_repr.entry(uf.find(v)).or_default().push(v);
    }
    let mut builder = GraphBuilder::new(g.alphabet().clone());
    let mut class_vertex: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for members in class_repr.values() {
        let min = members[0];
        let qv = builder.vertex(g.key(min));
        for &m in members {
            class_vertex.insert(m, qv);
        }
    }
    for (u, letter, v) in g.positive_edges() {
        builder.edge(class_vertex[&u], letter, class_vertex[&v]);
    }
    for members in class_repr.values() {
        if members.iter().any(|&m| g.is_truncated(m)) {
            builder.truncate(class_vertex[&members[0]]);
        }
    }
    builder.root(class_vertex[&rg.root()]);
    let quotient = builder.build_rooted()?;

    let class_of: Vec<VertexId> = g.vertices().map(|v| class_vertex[&uf.find(v)]).collect();

    // Saturation: exact when the base is complete as given, else demand that
    // within each class a realized letter is realized by every member.
    let saturated = !g.has_truncation() || {
        class_repr.values().all(|members| {
            g.alphabet().letters().all(|letter| {
                let with: usize = members.iter().filter(|&&m| g.step(m, letter).is_some()).count();
                with == 0 || with == members.len()
            })
        })
    };

    Ok(DvQuotient {
        base: rg.clone(),
        seeds: seeds.clone(),
        quotient,
        class_of,
        saturated,
    })
}

struct QuotientUf {
    parent: Vec<VertexId>,
    star: Vec<BTreeMap<crate::alphabet::Letter, VertexId>>,
}

impl QuotientUf {
    fn new(g: &InverseGraph) -> QuotientUf {
        QuotientUf {
            parent: g.vertices().collect(),
            star: g.vertices().map(|v| g.star(v).clone()).collect(),
        }
    }

    fn find(&mut self, mut x: VertexId) -> VertexId {
        while self.parent[x.idx()] != x {
            self.parent[x.idx()] = self.parent[self.parent[x.idx()].idx()];
            x = self.parent[x.idx()];
        }
        x
    }

    fn union(&mut self, a: VertexId, b: VertexId) -> (VertexId, VertexId) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi.idx()] = lo;
        (lo, hi)
    }
}

/// All label-preserving automorphisms of a finite inverse graph, enumerated
/// by propagating every candidate image of the first vertex. Morphisms that
/// agree at one vertex agree everywhere, so nothing is missed. Truncation
/// marks are inert here.
pub fn automorphisms(g: &InverseGraph) -> Vec<GraphMorphism> {
    let seed = VertexId(0);
    let mut out = Vec::new();
    for y in g.vertices() {
        if let Some(vertex_map) = propagate(g, g, seed, y) {
            let m = GraphMorphism { vertex_map };
            if m.is_bijective(g) {
                out.push(m);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct OrbitLabeling {
    pub automorphisms: Vec<GraphMorphism>,
    pub orbit_of: Vec<usize>,
    pub orbit_count: usize,
}

pub fn orbit_partition(g: &InverseGraph) -> OrbitLabeling {
    let autos = automorphisms(g);
    let mut orbit_of: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut count = 0;
    for v in g.vertices() {
        if orbit_of[v.idx()].is_some() {
            continue;
        }
        for m in &autos {
            orbit_of[m.apply(v).idx()] = Some(count);
        }
        count += 1;
    }
    OrbitLabeling {
        automorphisms: autos,
        orbit_of: orbit_of.into_iter().map(|o| o.unwrap()).collect(),
        orbit_count: count,
    }
}

/// Finite graphs always qualify; the orbit count is the invariant of
/// interest.
pub fn is_quasi_transitive(g: &InverseGraph) -> (bool, usize) {
    let orbits = orbit_partition(g);
    (true, orbits.orbit_count)
}

/// Orbit of one vertex under an explicit list of automorphisms.
pub fn orbit_of_vertex(autos: &[GraphMorphism], v: VertexId) -> BTreeSet<VertexId> {
    autos.iter().map(|m| m.apply(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::morphism::{are_isomorphic, is_cover};

    fn seeds_by_key(rg: &RootedGraph, keys: &[&str]) -> BTreeSet<VertexId> {
        keys.iter()
            .map(|k| rg.graph().vertex_by_key(k).unwrap())
            .collect()
    }

    #[test]
    fn singleton_seed_on_ray_is_trivial() {
        let rg = families::free_group_ball(1, 6).unwrap();
        let q = dv_quotient(&rg, &BTreeSet::from([rg.root()])).unwrap();
        assert!(are_isomorphic(&q.quotient, &rg));
        // A deterministic graph yields singleton classes from one seed.
        for v in rg.graph().vertices() {
            assert_eq!(q.class_of[v.idx()].idx(), v.idx());
        }
    }

    #[test]
    fn parity_seed_on_line_gives_two_cycle() {
        let rg = families::free_abelian_ball(1, 8).unwrap();
        let evens: BTreeSet<VertexId> = rg
            .graph()
            .vertices()
            .filter(|&v| rg.graph().key(v).parse::<i64>().unwrap() % 2 == 0)
            .collect();
        let q = dv_quotient(&rg, &evens).unwrap();
        assert_eq!(q.quotient.graph().vertex_count(), 2);
        assert!(q.quotient.graph().check_invariants().is_clean());
        // Truncated endpoints leave classes open.
        assert!(!q.saturated);
        // Exhaustive: residue classes.
        for v in rg.graph().vertices() {
            let z: i64 = rg.graph().key(v).parse().unwrap();
            let w: i64 = q
                .quotient
                .graph()
                .key(q.class_of[v.idx()])
                .parse()
                .unwrap();
            assert_eq!(z.rem_euclid(2), w.rem_euclid(2));
        }
    }

    #[test]
    fn full_seed_set_on_bouquet_collapses() {
        let rg = families::bouquet(&["a", "b"]).unwrap();
        let q = dv_quotient(&rg, &rg.graph().vertices().collect()).unwrap();
        assert_eq!(q.quotient.graph().vertex_count(), 1);
        assert!(q.saturated);
    }

    #[test]
    fn line_quotients_have_index_many_classes() {
        for k in 2..=5u32 {
            let rg = families::free_abelian_ball(1, 8).unwrap();
            let seeds: BTreeSet<VertexId> = rg
                .graph()
                .vertices()
                .filter(|&v| {
                    rg.graph().key(v).parse::<i64>().unwrap().rem_euclid(k as i64) == 0
                })
                .collect();
            let q = dv_quotient(&rg, &seeds).unwrap();
            assert_eq!(q.quotient.graph().vertex_count() as u32, k);
            let check = is_cover(&rg, &q.quotient, &q.projection());
            assert!(check.is_cover);
        }
    }

    #[test]
    fn quotient_is_idempotent() {
        let rg = families::free_abelian_ball(1, 8).unwrap();
        let seeds = seeds_by_key(&rg, &["-4", "-2", "0", "2", "4", "-6", "6", "-8", "8"]);
        let q = dv_quotient(&rg, &seeds).unwrap();
        let image_seeds: BTreeSet<VertexId> =
            seeds.iter().map(|&s| q.class_of[s.idx()]).collect();
        let q2 = dv_quotient(&q.quotient, &image_seeds).unwrap();
        assert!(are_isomorphic(&q2.quotient, &q.quotient));
    }

    #[test]
    fn empty_seed_set_is_an_error() {
        let rg = families::cycle_cayley(3).unwrap();
        assert!(dv_quotient(&rg, &BTreeSet::new()).is_err());
    }

    /// Filter all vertex bijections; only usable for tiny graphs.
    fn automorphisms_by_permutation_filter(g: &InverseGraph) -> BTreeSet<Vec<u32>> {
        let n = g.vertex_count();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let mut out = BTreeSet::new();
        permute(&mut perm, 0, &mut |p| {
            let ok = g.edges().all(|(u, letter, v)| {
                g.step(VertexId(p[u.idx()]), letter) == Some(VertexId(p[v.idx()]))
            });
            if ok {
                out.insert(p.to_vec());
            }
        });
        out
    }

    fn permute(items: &mut Vec<u32>, k: usize, f: &mut impl FnMut(&[u32])) {
        if k == items.len() {
            f(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, f);
            items.swap(k, i);
        }
    }

    #[test]
    fn cycle_automorphisms_are_rotations() {
        for n in 2..=8usize {
            let rg = families::cycle_cayley(n as u32).unwrap();
            let autos = automorphisms(rg.graph());
            assert_eq!(autos.len(), n);
            let oracle = automorphisms_by_permutation_filter(rg.graph());
            let got: BTreeSet<Vec<u32>> = autos
                .iter()
                .map(|m| m.vertex_map.iter().map(|v| v.0).collect())
                .collect();
            assert_eq!(got, oracle);
            // Composition closure.
            for f in &autos {
                for g in &autos {
                    let composed: Vec<u32> =
                        (0..n).map(|i| f.apply(g.apply(VertexId(i as u32))).0).collect();
                    assert!(got.contains(&composed));
                }
            }
        }
    }

    #[test]
    fn bouquet_is_rigid() {
        let rg = families::bouquet(&["a", "b"]).unwrap();
        assert_eq!(automorphisms(rg.graph()).len(), 1);
    }

    #[test]
    fn square_spur_tree_is_rigid() {
        let rg = families::bicyclic_tree(10).unwrap();
        let autos = automorphisms(rg.graph());
        assert_eq!(autos.len(), 1);
    }

    #[test]
    fn orbit_counts() {
        let rg = families::cycle_cayley(5).unwrap();
        let orbits = orbit_partition(rg.graph());
        assert_eq!(orbits.orbit_count, 1);
        assert_eq!(is_quasi_transitive(rg.graph()), (true, 1));

        let rg = families::bouquet(&["a"]).unwrap();
        assert_eq!(orbit_partition(rg.graph()).orbit_count, 1);
    }

    #[test]
    fn joined_triangles_orbits_by_brute_force() {
        // Two directed a-triangles joined by a single b-edge.
        let alpha = crate::alphabet::InvolutiveAlphabet::new(&["a", "b"]).unwrap();
        let a = alpha.parse_letter("a").unwrap();
        let b = alpha.parse_letter("b").unwrap();
        let mut builder = GraphBuilder::new(alpha);
        let xs: Vec<VertexId> = (0..3).map(|i| builder.vertex(&format!("x{i}"))).collect();
        let ys: Vec<VertexId> = (0..3).map(|i| builder.vertex(&format!("y{i}"))).collect();
        for i in 0..3 {
            builder.edge(xs[i], a, xs[(i + 1) % 3]);
            builder.edge(ys[i], a, ys[(i + 1) % 3]);
        }
        builder.edge(xs[0], b, ys[0]);
        builder.root(xs[0]);
        let rg = builder.build_rooted().unwrap();

        let orbits = orbit_partition(rg.graph());
        let oracle = automorphisms_by_permutation_filter(rg.graph());
        assert_eq!(orbits.automorphisms.len(), oracle.len());
        // The b-edge breaks every symmetry: six singleton orbits.
        assert_eq!(oracle.len(), 1);
        assert_eq!(orbits.orbit_count, 6);
    }

    #[test]
    fn classes_match_orbits_for_full_orbit_seeds() {
        // Rotation-by-two subgroup of the hexagon: seeds = its orbit of 0.
        let rg = families::cycle_cayley(6).unwrap();
        let autos = automorphisms(rg.graph());
        let rot2: Vec<&GraphMorphism> = autos
            .iter()
            .filter(|m| {
                let image = m.apply(rg.root());
                rg.graph().key(image).parse::<u32>().unwrap() % 2 == 0
            })
            .collect();
        assert_eq!(rot2.len(), 3);
        let seeds: BTreeSet<VertexId> = rot2.iter().map(|m| m.apply(rg.root())).collect();
        let q = dv_quotient(&rg, &seeds).unwrap();
        assert_eq!(q.quotient.graph().vertex_count(), 2);
        // Each class is exactly an orbit of the chosen subgroup.
        for v in rg.graph().vertices() {
            let orbit: BTreeSet<VertexId> = rot2.iter().map(|m| m.apply(v)).collect();
            let class: BTreeSet<VertexId> = rg
                .graph()
                .vertices()
                .filter(|&u| q.class_of[u.idx()] == q.class_of[v.idx()])
                .collect();
            assert_eq!(orbit, class);
        }
        let check = is_cover(&rg, &q.quotient, &q.projection());
        assert!(check.is_cover);
    }

    #[test]
    fn action_on_line_is_displacement() {
        let rg = families::free_abelian_ball(1, 8).unwrap();
        let evens: BTreeSet<VertexId> = rg
            .graph()
            .vertices()
            .filter(|&v| rg.graph().key(v).parse::<i64>().unwrap() % 2 == 0)
            .collect();
        let q = dv_quotient(&rg, &evens).unwrap();
        let alpha = rg.graph().alphabet().clone();

        assert_eq!(q.action_label(&alpha.parse_word("a a").unwrap()).unwrap(), "2");
        assert_eq!(q.action_label(&alpha.parse_word("a a'").unwrap()).unwrap(), "0");
        assert_eq!(q.action_label(&Word::empty()).unwrap(), "0");
        assert!(q.evaluate_action(&alpha.parse_word("a").unwrap()).is_err());
    }

    #[test]
    fn action_kernel_is_base_language() {
        let rg = families::free_abelian_ball(1, 8).unwrap();
        let evens: BTreeSet<VertexId> = rg
            .graph()
            .vertices()
            .filter(|&v| rg.graph().key(v).parse::<i64>().unwrap() % 2 == 0)
            .collect();
        let q = dv_quotient(&rg, &evens).unwrap();
        let letters: Vec<_> = rg.graph().alphabet().letters().collect();

        // Exhaustive over words of length <= 8 (displacement stays inside the
        // ball, so every quotient circuit lifts).
        let mut stack = vec![(Word::empty(), 0i64)];
        while let Some((w, disp)) = stack.pop() {
            if q.quotient.accepts(&w) {
                let label: i64 = q.action_label(&w).unwrap().parse().unwrap();
                assert_eq!(label, disp);
                assert_eq!(label == 0, rg.accepts(&w));
            }
            if w.len() < 8 {
                for &l in &letters {
                    let mut ext = w.clone();
                    ext.push(l);
                    stack.push((ext, disp + if l.is_positive() { 1 } else { -1 }));
                }
            }
        }
    }

    #[test]
    fn action_is_a_homomorphism_on_the_line() {
        let rg = families::free_abelian_ball(1, 8).unwrap();
        let evens: BTreeSet<VertexId> = rg
            .graph()
            .vertices()
            .filter(|&v| rg.graph().key(v).parse::<i64>().unwrap() % 2 == 0)
            .collect();
        let q = dv_quotient(&rg, &evens).unwrap();
        let alpha = rg.graph().alphabet().clone();
        let pieces = ["a a", "a' a'", "a a'", "a' a", "a a a a"];
        for u in pieces {
            for v in pieces {
                let wu = alpha.parse_word(u).unwrap();
                let wv = alpha.parse_word(v).unwrap();
                let du: i64 = q.action_label(&wu).unwrap().parse().unwrap();
                let dv: i64 = q.action_label(&wv).unwrap().parse().unwrap();
                let dc: i64 = q.action_label(&wu.concat(&wv)).unwrap().parse().unwrap();
                // Composition of line translations adds displacements.
                assert_eq!(dc, du + dv);
            }
        }
    }
}
