//! Brute-force ground truth, independent of the bit encoding.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{
    apply_permutation, extend, is_graceful_labelling, next_lexicographic, Graph, Permutation,
    VertexLabelling,
};
use crate::par;

/// Largest edge count [`brute_force_graceful`] accepts by default.
pub const ORACLE_MAX_EDGES: usize = 9;
/// Largest edge count [`sheppard_count`] accepts.
pub const SHEPPARD_MAX_EDGES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub graceful: bool,
    /// Permutations of `{0..e}` that relabel `G'` gracefully.
    pub labelling_count: u64,
    /// Lexicographically first such permutation, restricted to the original
    /// vertices.
    pub witness: Option<VertexLabelling>,
}

impl OracleReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "graceful": self.graceful,
            "labelling_count": self.labelling_count,
            "witness_labels": self.witness.as_ref().map(|w| w.labels().to_vec()),
        })
    }
}

pub fn brute_force_graceful(g: &Graph) -> Result<OracleReport> {
    brute_force_graceful_capped(g, ORACLE_MAX_EDGES)
}

/// Tries every permutation of `{0..e}` on the extension, in lexicographic
/// order split by first image.
pub fn brute_force_graceful_capped(g: &Graph, max_edges: usize) -> Result<OracleReport> {
    if g.n_edges() > max_edges {
        return Err(Error::CapExceeded {
            what: "e",
            value: g.n_edges(),
            cap: max_edges,
        });
    }
    let a = extend(g)?;
    let dim = a.dim();

    let per_head = par::map_range(dim, |head| {
        let mut images: Vec<usize> = std::iter::once(head)
            .chain((0..dim).filter(|&x| x != head))
            .collect();
        let mut count = 0u64;
        let mut first = None;
        loop {
            let p = Permutation::new(images.clone()).expect("valid by construction");
            let relabelled = apply_permutation(&a, &p).expect("dimensions match");
            if is_graceful_labelling(&relabelled) {
                count += 1;
                first.get_or_insert(p);
            }
            if !next_lexicographic(&mut images[1..]) {
                break;
            }
        }
        (count, first)
    });

    let labelling_count = per_head.iter().map(|(c, _)| c).sum();
    let witness = per_head
        .into_iter()
        .find_map(|(_, w)| w)
        .map(|p| VertexLabelling::new(p.images()[..g.n_vertices()].to_vec(), g.n_edges()))
        .transpose()?;

    Ok(OracleReport {
        graceful: labelling_count > 0,
        labelling_count,
        witness,
    })
}

/// Number of gracefully labelled graphs with `e` edges on labels `{0..e}`,
/// built directly: edge label `i` is realised by one edge `{u, u + i}`.
pub fn sheppard_count(e: usize) -> Result<u64> {
    if e > SHEPPARD_MAX_EDGES {
        return Err(Error::CapExceeded {
            what: "e",
            value: e,
            cap: SHEPPARD_MAX_EDGES,
        });
    }
    if e == 0 {
        return Err(Error::InvalidArgument("e must be at least 1".into()));
    }
    let mut graphs = BTreeSet::new();
    let mut chosen = Vec::with_capacity(e);
    choose_edges(1, e, &mut chosen, &mut graphs);
    Ok(graphs.len() as u64)
}

fn choose_edges(
    label: usize,
    e: usize,
    chosen: &mut Vec<(usize, usize)>,
    out: &mut BTreeSet<Vec<(usize, usize)>>,
) {
    if label > e {
        let mut g = chosen.clone();
        g.sort_unstable();
        out.insert(g);
        return;
    }
    for u in 0..=e - label {
        chosen.push((u, u + label));
        choose_edges(label + 1, e, chosen, out);
        chosen.pop();
    }
}
