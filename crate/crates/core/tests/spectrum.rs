mod common;

use graceful_aqc::spectrum::{
    dense_levels, lanczos_levels, manifold_gap, spectrum, uniform_grid, LanczosOptions,
};

#[test]
fn star2_ground_manifold_closes_at_the_end() {
    let hp = common::problem("star:2");
    let trace = spectrum(&hp, &uniform_grid(101), 8).unwrap();
    assert_eq!(trace.levels.len(), 101);
    let first = trace.levels[0].as_ref().unwrap();
    assert!(first[0].abs() < 1e-10);
    let last = trace.levels[100].as_ref().unwrap();
    assert!(last[..4].iter().all(|x| x.abs() < 1e-10));
    assert!(last[4] > 0.5);
    assert!(manifold_gap(&trace, 4).unwrap() > 0.0);
}

#[test]
fn k3_has_twelve_zero_levels() {
    let hp = common::problem("complete:3");
    let trace = spectrum(&hp, &[1.0], 13).unwrap();
    let lv = trace.levels[0].as_ref().unwrap();
    assert!(lv[..12].iter().all(|x| x.abs() < 1e-9));
    assert!(lv[12] > 0.5);
}

#[test]
fn lanczos_agrees_with_dense_at_eight_qubits() {
    let hp = common::problem("path:4");
    for s in [0.0, 0.4, 0.7, 0.95, 1.0] {
        let dense = dense_levels(&hp, s, 6);
        let iter = lanczos_levels(&hp, s, 6, &LanczosOptions::default()).unwrap();
        for (a, b) in dense.iter().zip(&iter) {
            assert!((a - b).abs() < 1e-8, "s = {s}: {dense:?} vs {iter:?}");
        }
    }
}
