mod common;

use graceful_aqc::graph::{
    apply_permutation, edge_labels_are_graceful, extend, is_graceful_labelling, Permutation,
};

#[test]
fn minor_diagonals_agree_with_definition_for_small_graphs() {
    let mut checked = 0;
    for e in 1..=3 {
        for g in common::all_graphs(e) {
            let a = extend(&g).unwrap();
            for images in common::permutations(e + 1) {
                let direct = common::definition_graceful(g.edges(), &images);
                let relabelled = apply_permutation(&a, &Permutation::new(images).unwrap()).unwrap();
                assert_eq!(is_graceful_labelling(&relabelled), direct, "{g:?}");
                assert_eq!(edge_labels_are_graceful(&relabelled), direct);
                checked += 1;
            }
        }
    }
    // 1*2 + 3*6 + 20*24
    assert_eq!(checked, 500);
}
