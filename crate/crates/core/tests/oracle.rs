mod common;

use graceful_aqc::encoding::{enumerate_degeneracy, EncodingParams};
use graceful_aqc::graph::extend;
use graceful_aqc::oracle::{brute_force_graceful, sheppard_count};

#[test]
fn oracle_count_equals_degeneracy_for_all_small_graphs() {
    for e in 1..=4 {
        for g in common::all_graphs(e) {
            let a = extend(&g).unwrap();
            let params = EncodingParams::for_adjacency(&a).unwrap();
            let rep = enumerate_degeneracy(&a, &params).unwrap();
            let oracle = brute_force_graceful(&g).unwrap();
            assert_eq!(oracle.graceful, rep.min_cost == 0, "{g:?}");
            if oracle.graceful {
                assert_eq!(oracle.labelling_count, rep.d_count, "{g:?}");
                assert!(oracle.witness.unwrap().is_graceful_for(&g));
            }
        }
    }
}

/// Counts labelled graphs on `{0..e}` whose identity labelling is graceful,
/// by scanning every `e`-edge subset.
fn gracefully_labelled_by_subsets(e: usize) -> u64 {
    common::all_graphs(e)
        .iter()
        .filter(|g| common::definition_graceful(g.edges(), &(0..=e).collect::<Vec<_>>()))
        .count() as u64
}

#[test]
fn sheppard_count_matches_subset_scan_and_factorial() {
    for e in 1..=5 {
        let c = sheppard_count(e).unwrap();
        assert_eq!(c, common::factorial(e as u64));
        assert_eq!(c, gracefully_labelled_by_subsets(e));
    }
}
