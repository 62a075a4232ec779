//! Low-lying spectrum of `H(s)` along the schedule.
//!
//! `H(s)` is real symmetric. Small registers are diagonalized densely; larger
//! ones use a matrix-free Lanczos solver with full reorthogonalization and
//! explicit locking, one eigenpair per outer cycle. Locking one pair at a
//! time and restarting each new pair from a fresh vector lets the solver
//! resolve degenerate levels, which a single Krylov sequence cannot.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{apply_h_into, dense_matrix, DiagonalHamiltonian};
use crate::par;

/// Registers up to this size are diagonalized densely.
pub const DENSE_MAX_QUBITS: usize = 8;
/// Largest register the iterative path accepts.
pub const ITERATIVE_MAX_QUBITS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    pub max_krylov: usize,
    pub max_restarts: usize,
    /// Convergence threshold on `||H x - theta x||`.
    pub tol: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            max_krylov: 120,
            max_restarts: 60,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Dense for `L <= DENSE_MAX_QUBITS`, Lanczos above.
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTrace {
    pub s_grid: Vec<f64>,
    pub k: usize,
    /// `None` marks a grid point where the iterative solver did not converge.
    pub levels: Vec<Option<Vec<f64>>>,
}

/// `k` lowest eigenvalues of `H(s)` for every `s` in `s_grid`.
pub fn spectrum(hp: &DiagonalHamiltonian, s_grid: &[f64], k: usize) -> Result<SpectrumTrace> {
    spectrum_with(hp, s_grid, k, Method::Auto, &LanczosOptions::default())
}

pub fn spectrum_with(
    hp: &DiagonalHamiltonian,
    s_grid: &[f64],
    k: usize,
    method: Method,
    opts: &LanczosOptions,
) -> Result<SpectrumTrace> {
    let n = hp.n_qubits();
    if k == 0 || k > hp.dim() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} for dimension {}",
            hp.dim()
        )));
    }
    if let Some(&s) = s_grid.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(Error::InvalidArgument(format!(
            "schedule point {s} outside [0, 1]"
        )));
    }
    let dense = match method {
        Method::Auto => n <= DENSE_MAX_QUBITS,
        Method::Dense => true,
        Method::Lanczos => false,
    };
    let cap = if dense { 12 } else { ITERATIVE_MAX_QUBITS };
    if n > cap {
        return Err(Error::CapExceeded {
            what: "L",
            value: n,
            cap,
        });
    }

    let levels = par::map_slice(s_grid, |&s| {
        if dense {
            Some(dense_levels(hp, s, k))
        } else {
            lanczos_levels(hp, s, k, opts).ok()
        }
    });
    Ok(SpectrumTrace {
        s_grid: s_grid.to_vec(),
        k,
        levels,
    })
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn dense_levels(hp: &DiagonalHamiltonian, s: f64, k: usize) -> Vec<f64> {
    let mut ev = sorted_eigenvalues(dense_matrix(s, hp));
    ev.truncate(k);
    ev
}

/// Deterministic pseudo-random vector (splitmix64). A structured start
/// vector could be orthogonal to whole symmetry sectors of `H`.
fn start_vector(dim: usize, seed: u64) -> Vec<f64> {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03;
    (0..dim)
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Two passes of classical Gram-Schmidt against every vector in `sets`.
fn orthogonalize(w: &mut [f64], sets: &[&[Vec<f64>]]) {
    for _ in 0..2 {
        for set in sets {
            for q in set.iter() {
                let c = dot(q, w);
                axpy(-c, q, w);
            }
        }
    }
}

/// `k` lowest eigenvalues of a real symmetric operator given by `apply`.
pub fn lanczos_lowest<F>(dim: usize, k: usize, apply: F, opts: &LanczosOptions) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    if k > dim {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds dimension {dim}"
        )));
    }
    let mut locked_vecs: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut locked_vals: Vec<f64> = Vec::with_capacity(k);
    let mut w = vec![0.0; dim];

    for target in 0..k {
        let mut v = start_vector(dim, target as u64 + 1);
        orthogonalize(&mut v, &[&locked_vecs]);
        normalize(&mut v);

        let room = dim - locked_vecs.len();
        let m_max = opts.max_krylov.min(room).max(1);
        let mut converged = None;

        for _restart in 0..opts.max_restarts {
            let mut basis: Vec<Vec<f64>> = vec![v.clone()];
            let mut alpha: Vec<f64> = Vec::new();
            let mut beta: Vec<f64> = Vec::new();
            let mut best: Option<(f64, Vec<f64>, f64)> = None;

            for j in 0..m_max {
                apply(&basis[j], &mut w);
                let a = dot(&basis[j], &w);
                alpha.push(a);
                orthogonalize(&mut w, &[&locked_vecs, &basis]);
                let b = normalize(&mut w);

                let last = j + 1 == m_max;
                let breakdown = b < 1e-12 * (1.0 + a.abs());
                if last || breakdown || (j + 1) % 8 == 0 {
                    let (theta, y) = lowest_ritz(&alpha, &beta);
                    let resid = if breakdown { 0.0 } else { (b * y[j]).abs() };
                    best = Some((theta, y, resid));
                    if resid <= opts.tol || last || breakdown {
                        break;
                    }
                }
                beta.push(b);
                basis.push(w.clone());
            }

            let (_, y, resid) = best.expect("at least one Ritz extraction");
            let mut x = vec![0.0; dim];
            for (c, q) in y.iter().zip(&basis) {
                axpy(*c, q, &mut x);
            }
            orthogonalize(&mut x, &[&locked_vecs]);
            normalize(&mut x);
            // the recurrence estimate can report convergence for a vector
            // that still leans on a locked one, so confirm it directly
            if resid <= opts.tol {
                apply(&x, &mut w);
                let theta = dot(&x, &w);
                let true_resid = w
                    .iter()
                    .zip(&x)
                    .map(|(h, xi)| (h - theta * xi).powi(2))
                    .sum::<f64>()
                    .sqrt();
                if true_resid <= opts.tol * (1.0 + theta.abs()) {
                    converged = Some((theta, x));
                    break;
                }
            }
            v = x;
        }

        match converged {
            Some((theta, x)) => {
                locked_vals.push(theta);
                locked_vecs.push(x);
            }
            None => {
                return Err(Error::InvalidArgument(format!(
                    "Lanczos did not converge for level {target}"
                )))
            }
        }
    }
    locked_vals.sort_by(f64::total_cmp);
    Ok(locked_vals)
}

/// Lowest eigenpair of the tridiagonal matrix with diagonal `alpha` and
/// off-diagonal `beta` (`beta.len() == alpha.len() - 1`).
fn lowest_ritz(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, theta) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    (
        theta,
        eig.eigenvectors.column(idx).iter().copied().collect(),
    )
}

pub fn lanczos_levels(
    hp: &DiagonalHamiltonian,
    s: f64,
    k: usize,
    opts: &LanczosOptions,
) -> Result<Vec<f64>> {
    let n = hp.n_qubits();
    let diag = hp.diag();
    lanczos_lowest(
        hp.dim(),
        k,
        |x, out| apply_h_into(x, s, Some(diag), n, out),
        opts,
    )
}

/// `min_s (level[d](s) - level[0](s))` over the converged grid points: the
/// gap between the ground level and the first level outside a `d`-fold
/// ground manifold.
pub fn manifold_gap(trace: &SpectrumTrace, d: usize) -> Result<f64> {
    if trace.k <= d {
        return Err(Error::InvalidArgument(format!(
            "trace holds {} levels, need more than d = {d}",
            trace.k
        )));
    }
    trace
        .levels
        .iter()
        .flatten()
        .map(|lv| lv[d] - lv[0])
        .reduce(f64::min)
        .ok_or_else(|| Error::InvalidArgument("no converged grid points".into()))
}

/// `n` evenly spaced points on `[0, 1]` including both ends.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}
