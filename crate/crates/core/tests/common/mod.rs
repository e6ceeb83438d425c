//! Shared oracles for the integration suites. Everything here is written
//! against first principles (raw searches, arithmetic on vertex keys) so the
//! library code paths are checked by independent routes.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use invgraph::{
    families, EndCone, GroupAssembly, InverseGraph, InvolutiveAlphabet, LabelMode, Letter,
    Projection, RootedGraph, VertexId, Word,
};

/// All words over the closure, lengths `0..=max_len`.
pub fn all_words(alpha: &InvolutiveAlphabet, max_len: usize) -> Vec<Word> {
    let letters: Vec<Letter> = alpha.letters().collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                let mut ext = w.clone();
                ext.push(l);
                out.push(ext.clone());
                next.push(ext);
            }
        }
        layer = next;
    }
    out
}

/// Depth-first traversal of all words, invoking `visit` on each.
pub fn walk_words(alpha: &InvolutiveAlphabet, max_len: usize, visit: &mut impl FnMut(&Word)) {
    let letters: Vec<Letter> = alpha.letters().collect();
    fn rec(letters: &[Letter], w: &mut Word, left: usize, visit: &mut impl FnMut(&Word)) {
        visit(w);
        if left == 0 {
            return;
        }
        for &l in letters {
            w.push(l);
            rec(letters, w, left - 1, visit);
            w.0.pop();
        }
    }
    rec(&letters, &mut Word::empty(), max_len, visit);
}

/// Signed exponent sum per positive letter.
pub fn exponent_sums(alpha: &InvolutiveAlphabet, w: &Word) -> Vec<i64> {
    let mut sums = vec![0i64; alpha.positive_count()];
    for l in w.letters() {
        sums[l.base_index()] += if l.is_positive() { 1 } else { -1 };
    }
    sums
}

/// The plane as a subdirect product of two lines: two projections, each
/// killing one generator.
pub fn plane_assembly(radius: u32) -> GroupAssembly {
    let input = InvolutiveAlphabet::new(&["x", "y"]).unwrap();
    let output = input.clone();
    let x = input.parse_letter("x").unwrap();
    let y = input.parse_letter("y").unwrap();
    let mut asm = GroupAssembly::new(input, output.clone(), vec!["1".into()]).unwrap();
    asm.row(0, x, Word(vec![x]), 0).unwrap();
    asm.row(0, y, Word(vec![y]), 0).unwrap();

    let line = InvolutiveAlphabet::new(&["a"]).unwrap();
    let a = line.parse_letter("a").unwrap();
    let keep_x = Projection::new(vec![Word(vec![a]), Word::empty()]);
    let keep_y = Projection::new(vec![Word::empty(), Word(vec![a])]);
    for proj in [keep_x, keep_y] {
        let target = families::free_group_ball_over(&line, radius).unwrap();
        asm.projection(proj, target).unwrap();
    }
    asm.finish().unwrap()
}

/// Are two frontier-tagged graphs isomorphic carrying frontier onto
/// frontier? Tries every anchor image (and letter renaming when asked),
/// propagating depth-first and verifying the full edge relation.
pub fn frontier_iso_oracle(
    g1: &InverseGraph,
    f1: &BTreeSet<VertexId>,
    g2: &InverseGraph,
    f2: &BTreeSet<VertexId>,
    mode: LabelMode,
) -> bool {
    if g1.vertex_count() != g2.vertex_count() || f1.len() != f2.len() {
        return false;
    }
    if g1.vertex_count() == 0 {
        return true;
    }
    let relabelings: Vec<Vec<Letter>> = match mode {
        LabelMode::Exact => vec![g1.alphabet().letters().collect()],
        LabelMode::UpToRelabeling => g1.alphabet().relabelings(),
    };
    let anchor1 = match f1.iter().next() {
        Some(&a) => a,
        None => return g2.vertex_count() == g1.vertex_count() && g1.vertex_count() <= 1,
    };
    for sigma in &relabelings {
        'anchors: for &anchor2 in f2 {
            let mut map: Vec<Option<VertexId>> = vec![None; g1.vertex_count()];
            map[anchor1.idx()] = Some(anchor2);
            let mut stack = vec![anchor1];
            while let Some(u) = stack.pop() {
                let iu = map[u.idx()].unwrap();
                for (&l, &v) in g1.star(u) {
                    let il = sigma[l.closure_index()];
                    let Some(iv) = g2.step(iu, il) else { continue 'anchors };
                    match map[v.idx()] {
                        None => {
                            map[v.idx()] = Some(iv);
                            stack.push(v);
                        }
                        Some(prev) if prev != iv => continue 'anchors,
                        Some(_) => {}
                    }
                }
            }
            if map.iter().any(|m| m.is_none()) {
                continue;
            }
            let image: Vec<VertexId> = map.iter().map(|m| m.unwrap()).collect();
            let mut seen = vec![false; g2.vertex_count()];
            if image.iter().any(|v| std::mem::replace(&mut seen[v.idx()], true)) {
                continue;
            }
            // Full edge relation both ways, under the renaming.
            let edges_match = g1.edges().all(|(u, l, v)| {
                g2.step(image[u.idx()], sigma[l.closure_index()]) == Some(image[v.idx()])
            }) && g1
                .edges()
                .count()
                == g2.edges().count();
            if !edges_match {
                continue;
            }
            let f1_image: BTreeSet<VertexId> = f1.iter().map(|&v| image[v.idx()]).collect();
            if &f1_image == f2 {
                return true;
            }
        }
    }
    false
}

/// Classify scanned vertices by pairwise frontier isomorphism of their
/// depth-cut cones; returns (per-norm counts, cumulative counts, class ids in
/// scan order).
pub fn census_oracle(
    rg: &RootedGraph,
    max_norm: u32,
    depth: u32,
    mode: LabelMode,
) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let norms: Vec<u32> = rg.norms();
    let mut scanned: Vec<(u32, VertexId)> = rg
        .graph()
        .vertices()
        .filter(|v| (1..=max_norm).contains(&norms[v.idx()]))
        .map(|v| (norms[v.idx()], v))
        .collect();
    scanned.sort();

    let views: Vec<(u32, InverseGraph, BTreeSet<VertexId>)> = scanned
        .iter()
        .map(|&(n, v)| {
            let cone: EndCone = rg.end_cone(v).unwrap();
            let (view, frontier) = cone.truncated_view(depth).unwrap();
            (n, view, frontier)
        })
        .collect();

    let mut class_of: Vec<usize> = Vec::with_capacity(views.len());
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..views.len() {
        let mut found = None;
        for (class, &rep) in reps.iter().enumerate() {
            if frontier_iso_oracle(&views[i].1, &views[i].2, &views[rep].1, &views[rep].2, mode) {
                found = Some(class);
                break;
            }
        }
        match found {
            Some(class) => class_of.push(class),
            None => {
                reps.push(i);
                class_of.push(reps.len() - 1);
            }
        }
    }

    let mut per_norm: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); max_norm as usize];
    let mut cumulative_sets: BTreeMap<u32, BTreeSet<usize>> = BTreeMap::new();
    for (i, &(n, _)) in scanned.iter().enumerate() {
        per_norm[(n - 1) as usize].insert(class_of[i]);
    }
    let mut acc = BTreeSet::new();
    let mut cumulative = Vec::new();
    for n in 1..=max_norm {
        for (i, &(m, _)) in scanned.iter().enumerate() {
            if m == n {
                acc.insert(class_of[i]);
            }
        }
        cumulative.push(acc.len());
        cumulative_sets.insert(n, acc.clone());
    }
    (
        per_norm.into_iter().map(|s| s.len()).collect(),
        cumulative,
        class_of,
    )
}
