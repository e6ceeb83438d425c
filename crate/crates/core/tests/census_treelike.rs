//! Census classification against the brute-force pairwise oracle, census
//! growth behavior, and the separation checks tied to the shortest-word
//! bound of the bundled reduction grammar.

mod common;

use std::collections::BTreeSet;

use common::census_oracle;
use invgraph::{
    cone_separation_check, end_cone_census, families, verify_strong_tree_decomposition,
    verify_tree_decomposition, CnfGrammar, LabelMode, StrongTreePartition, TreeDecomposition,
};

#[test]
fn census_matches_pairwise_oracle_on_the_grid() {
    let rg = families::free_abelian_ball(2, 7).unwrap();
    for mode in [LabelMode::Exact, LabelMode::UpToRelabeling] {
        let table = end_cone_census(&rg, 4, 2, mode).unwrap();
        let (per_norm, cumulative, _) = census_oracle(&rg, 4, 2, mode);
        assert_eq!(table.per_norm_counts, per_norm);
        assert_eq!(table.cumulative_counts, cumulative);
    }
}

#[test]
fn census_matches_pairwise_oracle_on_the_tree() {
    let rg = families::free_group_ball(2, 7).unwrap();
    for mode in [LabelMode::Exact, LabelMode::UpToRelabeling] {
        let table = end_cone_census(&rg, 4, 3, mode).unwrap();
        let (per_norm, cumulative, _) = census_oracle(&rg, 4, 3, mode);
        assert_eq!(table.per_norm_counts, per_norm);
        assert_eq!(table.cumulative_counts, cumulative);
    }
    let exact = end_cone_census(&rg, 4, 3, LabelMode::Exact).unwrap();
    // One class per incoming letter.
    assert_eq!(exact.per_norm_counts, vec![4, 4, 4, 4]);
    let renamed = end_cone_census(&rg, 4, 3, LabelMode::UpToRelabeling).unwrap();
    assert_eq!(renamed.cumulative_counts, vec![1, 1, 1, 1]);
}

#[test]
fn census_matches_pairwise_oracle_on_the_square_spur_tree() {
    let rg = families::bicyclic_tree(10).unwrap();
    let table = end_cone_census(&rg, 5, 5, LabelMode::UpToRelabeling).unwrap();
    let (per_norm, cumulative, _) = census_oracle(&rg, 5, 5, LabelMode::UpToRelabeling);
    assert_eq!(table.per_norm_counts, per_norm);
    assert_eq!(table.cumulative_counts, cumulative);
}

#[test]
fn square_spur_tree_type_count_grows_with_the_window() {
    // The spur gaps widen without bound, so deeper windows keep finding new
    // cone shapes; a fixed window saturates instead.
    let mut totals = Vec::new();
    for n in [10u32, 17, 25] {
        let rg = families::bicyclic_tree(n).unwrap();
        let max_norm = n / 2;
        let depth = n - max_norm;
        let table = end_cone_census(&rg, max_norm, depth, LabelMode::UpToRelabeling).unwrap();
        totals.push(table.total_classes());
    }
    assert!(totals[0] < totals[1] && totals[1] < totals[2], "{totals:?}");
}

#[test]
fn separation_holds_with_the_tripled_bound_on_free_balls() {
    // The reduction grammar bound is two, so the disks have radius six.
    for (rank, radius) in [(1usize, 8u32), (2, 8)] {
        let rg = families::free_group_ball(rank, radius).unwrap();
        let grammar = CnfGrammar::symmetric_dyck(rg.graph().alphabet());
        let delta = 3 * grammar.shortest_word_bound() as u32;
        let norms = rg.norms();
        let mut tested = 0usize;
        for v in rg.graph().vertices() {
            if norms[v.idx()] != delta + 1 {
                continue;
            }
            // Sample deterministically on the rank-two tree.
            tested += 1;
            if rank == 2 && tested % 40 != 1 {
                continue;
            }
            let check = cone_separation_check(&rg, v, delta).unwrap();
            assert!(check.separated, "vertex {} not separated", rg.graph().key(v));
        }
        assert!(tested > 0);
    }
}

#[test]
fn grid_fails_separation_where_trees_pass() {
    let rg = families::free_abelian_ball(2, 8).unwrap();
    let v = rg.graph().vertex_by_key("2,0").unwrap();
    assert!(!cone_separation_check(&rg, v, 2).unwrap().separated);

    let tree = families::free_group_ball(2, 8).unwrap();
    let w = tree.graph().vertex_by_key("ab").unwrap();
    assert!(cone_separation_check(&tree, w, 1).unwrap().separated);
}

#[test]
fn augmentations_of_valid_partitions_verify_as_decompositions() {
    let graphs = [
        families::free_group_ball(2, 4).unwrap(),
        families::free_abelian_ball(1, 5).unwrap(),
    ];
    for rg in &graphs {
        let g = rg.graph();
        let p = StrongTreePartition {
            blocks: g.vertices().map(|v| BTreeSet::from([v])).collect(),
        };
        let report = verify_strong_tree_decomposition(g, &p).unwrap();
        assert!(report.valid(), "{report:?}");

        // Rebuild the augmentation by hand and verify it independently.
        let mut bags: Vec<BTreeSet<invgraph::VertexId>> =
            g.vertices().map(|v| BTreeSet::from([v])).collect();
        for (u, _, v) in g.edges() {
            bags[u.idx()].insert(v);
        }
        let td = TreeDecomposition {
            node_names: g.vertices().map(|v| g.key(v).to_owned()).collect(),
            tree_edges: g.positive_edges().map(|(u, _, v)| (u.idx(), v.idx())).collect(),
            bags,
        };
        // The quotient of singletons is the graph itself; only tree-shaped
        // graphs can pass.
        let tree_shaped = g.positive_edges().count() == g.vertex_count() - 1;
        let report = verify_tree_decomposition(g, &td).unwrap();
        assert_eq!(report.valid(), tree_shaped, "{report:?}");
    }
}
