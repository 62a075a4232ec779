#![allow(dead_code)]

use graceful_aqc::encoding::EncodingParams;
use graceful_aqc::graph::{extend, ExtendedAdjacency, Graph};
use graceful_aqc::hamiltonian::{build_problem_diagonal, DiagonalHamiltonian};

/// Problem Hamiltonian of `K_{1,2}` labelled as the path `0-1-2`, as Pauli-Z
/// monomials `(qubits, 16 * coefficient)`. Expanded symbolically from its
/// factored form with `z^2 = 1`.
pub const K12_PAULI: [(&[usize], i32); 47] = [
    (&[], 48),
    (&[0], -5),
    (&[1], -4),
    (&[2], -6),
    (&[3], -8),
    (&[4], -5),
    (&[5], -4),
    (&[0, 1], 5),
    (&[0, 2], 5),
    (&[0, 3], -1),
    (&[0, 4], 6),
    (&[0, 5], -1),
    (&[1, 3], 4),
    (&[1, 4], -1),
    (&[1, 5], 8),
    (&[2, 3], 6),
    (&[2, 4], 5),
    (&[3, 4], -1),
    (&[3, 5], 4),
    (&[4, 5], 5),
    (&[0, 1, 2], 1),
    (&[0, 1, 3], 1),
    (&[0, 1, 5], 1),
    (&[0, 2, 3], 1),
    (&[0, 2, 5], -1),
    (&[0, 3, 4], 2),
    (&[0, 3, 5], -1),
    (&[1, 2, 4], -1),
    (&[1, 2, 5], 2),
    (&[1, 3, 4], -1),
    (&[1, 4, 5], 1),
    (&[2, 3, 4], 1),
    (&[2, 4, 5], 1),
    (&[3, 4, 5], 1),
    (&[0, 1, 2, 3], 5),
    (&[0, 1, 2, 5], -1),
    (&[0, 1, 3, 5], 1),
    (&[0, 1, 4, 5], 6),
    (&[0, 2, 3, 5], -1),
    (&[1, 2, 3, 4], -1),
    (&[1, 2, 3, 5], -2),
    (&[1, 2, 4, 5], -1),
    (&[1, 3, 4, 5], 1),
    (&[2, 3, 4, 5], 5),
    (&[0, 1, 2, 3, 5], -1),
    (&[0, 1, 3, 4, 5], 2),
    (&[1, 2, 3, 4, 5], -1),
];

pub fn adjacency(spec: &str) -> ExtendedAdjacency {
    extend(&Graph::from_generator(spec).unwrap()).unwrap()
}

pub fn problem(spec: &str) -> DiagonalHamiltonian {
    let a = adjacency(spec);
    let p = EncodingParams::for_adjacency(&a).unwrap();
    build_problem_diagonal(&a, &p).unwrap()
}

/// Every graph with exactly `e` edges on the vertex set `{0..e}`.
pub fn all_graphs(e: usize) -> Vec<Graph> {
    let n = e + 1;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(e);
    subsets(&pairs, e, 0, &mut pick, &mut |edges| {
        out.push(Graph::new(n, edges.to_vec()).unwrap());
    });
    out
}

fn subsets<T: Copy>(
    items: &[T],
    k: usize,
    from: usize,
    pick: &mut Vec<T>,
    f: &mut impl FnMut(&[T]),
) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in from..items.len() {
        pick.push(items[i]);
        subsets(items, k, i + 1, pick, f);
        pick.pop();
    }
}

/// Labels `{|l(u) - l(v)|}` over the edges are exactly `{1..e}`.
pub fn definition_graceful(edges: &[(usize, usize)], labels: &[usize]) -> bool {
    let e = edges.len();
    let mut seen = vec![false; e + 1];
    for &(u, v) in edges {
        let d = labels[u].abs_diff(labels[v]);
        if d == 0 || d > e || seen[d] {
            return false;
        }
        seen[d] = true;
    }
    true
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}
