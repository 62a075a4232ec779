//! Simple undirected graphs, their extension to `e + 1` vertices, and the
//! minor-diagonal gracefulness test.
//!
//! In the extended adjacency matrix `A'` every vertex id is also a label, so
//! an entry `a'[i][j] = 1` with `i < j` is an edge carrying label `j - i`.
//! The `i`-th minor diagonal collects all entries with column minus row equal
//! to `i`, and its weight is therefore the number of edges labelled `i`. A
//! labelling is graceful exactly when every weight is one.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n_vertices`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Rejects self-loops, duplicate edges and out-of-range endpoints.
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in &edges {
            if u >= n_vertices || v >= n_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n_vertices}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Self { n_vertices, edges })
    }

    /// Path with `n` vertices (`Z_n`).
    pub fn path(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(
                "path needs at least 2 vertices".into(),
            ));
        }
        Self::new(n, (0..n - 1).map(|i| (i, i + 1)).collect())
    }

    /// Star `K_{1,n}`: centre 0 joined to leaves `1..=n`.
    pub fn star(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("star needs at least 1 leaf".into()));
        }
        Self::new(n + 1, (1..=n).map(|i| (0, i)).collect())
    }

    /// Cycle `C_n`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(
                "cycle needs at least 3 vertices".into(),
            ));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(
                "complete graph needs at least 2 vertices".into(),
            ));
        }
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::new(n, edges)
    }

    /// Builds a graph from a generator spec such as `star:4` or `cycle:5`.
    /// A leading `gen:` is accepted and ignored.
    pub fn from_generator(spec: &str) -> Result<Self> {
        let spec = spec.strip_prefix("gen:").unwrap_or(spec);
        let (name, arg) = spec
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("bad generator spec '{spec}'")))?;
        let n: usize = arg
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad generator size '{arg}'")))?;
        match name.trim() {
            "path" => Self::path(n),
            "star" => Self::star(n),
            "cycle" => Self::cycle(n),
            "complete" => Self::complete(n),
            other => Err(Error::InvalidArgument(format!(
                "unknown generator '{other}' (expected path, star, cycle or complete)"
            ))),
        }
    }

    /// Whether `spec` names one of the built-in generators.
    pub fn is_generator_spec(spec: &str) -> bool {
        let spec = spec.strip_prefix("gen:").unwrap_or(spec);
        match spec.split_once(':') {
            Some((name, arg)) => {
                matches!(name, "path" | "star" | "cycle" | "complete")
                    && arg.trim().parse::<usize>().is_ok()
            }
            None => false,
        }
    }

    /// Parses the edge-list text format: a header line `N e`, then `e`
    /// lines `u v`. Blank lines and lines starting with `#` are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing 'N e' header".into(),
        })?;
        let (n, e) = parse_pair(hline, header)?;

        let mut edges = Vec::with_capacity(e);
        for (line, l) in lines {
            if edges.len() == e {
                return Err(Error::Parse {
                    line,
                    msg: format!("more than the declared {e} edges"),
                });
            }
            edges.push(parse_pair(line, l)?);
        }
        if edges.len() != e {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: format!("declared {e} edges, found {}", edges.len()),
            });
        }
        Self::new(n, edges).map_err(|err| match err {
            Error::InvalidGraph(msg) => Error::Parse { line: 0, msg },
            other => other,
        })
    }

    /// Writes the graph in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n_vertices, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `e + 1 >= N`, i.e. an injective labelling into `{0..e}` exists.
    pub fn is_admissible(&self) -> bool {
        self.n_edges() + 1 >= self.n_vertices
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line,
            msg: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("'{tok}' is not a non-negative integer"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_edge_list(s)
    }
}

/// A permutation of `{0..n}`, read as "vertex `i` receives label `images[i]`".
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {x} out of range 0..{n}"
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("image {x} repeated")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(len: usize) -> Self {
        Self {
            images: (0..len).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &p) in self.images.iter().enumerate() {
            inv[p] = i;
        }
        Self { images: inv }
    }

    /// Advances to the next permutation in lexicographic order. Returns
    /// `false` (leaving `self` as the first permutation) after the last one.
    pub fn advance(&mut self) -> bool {
        next_lexicographic(&mut self.images)
    }
}

pub(crate) fn next_lexicographic(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Symmetric 0/1 adjacency matrix of the extension `G'` (`e + 1` vertices).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedAdjacency {
    dim: usize,
    entries: Vec<u8>,
}

impl ExtendedAdjacency {
    /// Builds from a row-major matrix, validating symmetry, the zero diagonal
    /// and that the upper triangle holds exactly `dim - 1` ones.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let dim = rows.len();
        if dim < 2 {
            return Err(Error::InvalidGraph(
                "extended matrix needs dimension >= 2".into(),
            ));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| u8::from(x != 0)));
        }
        let a = Self { dim, entries };
        for i in 0..dim {
            if a.get(i, i) != 0 {
                return Err(Error::InvalidGraph(format!("non-zero diagonal at {i}")));
            }
            for j in i + 1..dim {
                if a.get(i, j) != a.get(j, i) {
                    return Err(Error::InvalidGraph(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        if a.n_edges() != dim - 1 {
            return Err(Error::InvalidGraph(format!(
                "{} edges in a dimension-{dim} extension, expected {}",
                a.n_edges(),
                dim - 1
            )));
        }
        Ok(a)
    }

    fn from_edges(dim: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut entries = vec![0u8; dim * dim];
        for (u, v) in edges {
            entries[u * dim + v] = 1;
            entries[v * dim + u] = 1;
        }
        Self { dim, entries }
    }

    /// `N' + 1`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `N' = e`.
    pub fn n_prime(&self) -> usize {
        self.dim - 1
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.dim + j]
    }

    /// Upper-triangle edges `(i, j)` with `i < j`, row-major.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.dim)
            .flat_map(|i| (i + 1..self.dim).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j) == 1)
            .collect()
    }

    pub fn n_edges(&self) -> usize {
        self.edges().len()
    }

    /// Total number of ones in the matrix (twice the edge count).
    pub fn ones(&self) -> usize {
        self.entries.iter().map(|&x| x as usize).sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.entries.chunks(self.dim).map(<[u8]>::to_vec).collect()
    }
}

impl fmt::Display for ExtendedAdjacency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.dim) {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Adds `r = e + 1 - N` isolated vertices so that labelling becomes a
/// bijection onto `{0..e}`.
pub fn extend(g: &Graph) -> Result<ExtendedAdjacency> {
    if !g.is_admissible() {
        return Err(Error::TooManyVertices {
            n_vertices: g.n_vertices(),
            n_edges: g.n_edges(),
        });
    }
    if g.n_edges() == 0 {
        return Err(Error::InvalidGraph("graph has no edges".into()));
    }
    Ok(ExtendedAdjacency::from_edges(
        g.n_edges() + 1,
        g.edges().iter().copied(),
    ))
}

/// Hamming weights `m(b_1), ..., m(b_{N'})` of the minor diagonals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorDiagonalProfile {
    pub weights: Vec<usize>,
}

impl MinorDiagonalProfile {
    /// Weight of diagonal `b_i`, `1 <= i <= N'`.
    pub fn weight(&self, i: usize) -> usize {
        self.weights[i - 1]
    }

    pub fn total(&self) -> usize {
        self.weights.iter().sum()
    }

    /// `sum_i (1 - m(b_i))^2`, the gracefulness penalty.
    pub fn penalty(&self) -> u64 {
        self.weights
            .iter()
            .map(|&m| {
                let d = 1 - m as i64;
                (d * d) as u64
            })
            .sum()
    }
}

pub fn minor_diagonals(a: &ExtendedAdjacency) -> MinorDiagonalProfile {
    let n = a.n_prime();
    let weights = (1..=n)
        .map(|i| (0..=n - i).map(|k| a.get(k, k + i) as usize).sum())
        .collect();
    MinorDiagonalProfile { weights }
}

/// Minor-diagonal test: every diagonal `b_1..b_{N'}` has weight exactly one.
pub fn is_graceful_labelling(a: &ExtendedAdjacency) -> bool {
    minor_diagonals(a).weights.iter().all(|&m| m == 1)
}

/// Direct check: the edge labels `|i - j|` are exactly `{1..e}`.
pub fn edge_labels_are_graceful(a: &ExtendedAdjacency) -> bool {
    let e = a.n_prime();
    let mut labels: Vec<usize> = a.edges().iter().map(|&(i, j)| j - i).collect();
    labels.sort_unstable();
    labels.len() == e && labels.iter().copied().eq(1..=e)
}

/// Relabels `A'` so that vertex `i` becomes `p(i)`: `a''[p(i)][p(j)] = a'[i][j]`.
pub fn apply_permutation(a: &ExtendedAdjacency, p: &Permutation) -> Result<ExtendedAdjacency> {
    if p.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: p.len(),
        });
    }
    Ok(ExtendedAdjacency::from_edges(
        a.dim(),
        a.edges().into_iter().map(|(i, j)| (p.image(i), p.image(j))),
    ))
}

/// Injective vertex labelling into `{0..e}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexLabelling {
    labels: Vec<usize>,
}

impl VertexLabelling {
    pub fn new(labels: Vec<usize>, n_edges: usize) -> Result<Self> {
        let mut seen = HashSet::with_capacity(labels.len());
        for &l in &labels {
            if l > n_edges {
                return Err(Error::InvalidArgument(format!(
                    "label {l} exceeds e = {n_edges}"
                )));
            }
            if !seen.insert(l) {
                return Err(Error::InvalidArgument(format!("label {l} repeated")));
            }
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Definition check on the original graph: edge labels are `{1..e}`.
    pub fn is_graceful_for(&self, g: &Graph) -> bool {
        if self.labels.len() != g.n_vertices() {
            return false;
        }
        let mut diffs: Vec<usize> = g
            .edges()
            .iter()
            .map(|&(u, v)| self.labels[u].abs_diff(self.labels[v]))
            .collect();
        diffs.sort_unstable();
        diffs.iter().copied().eq(1..=g.n_edges())
    }
}
