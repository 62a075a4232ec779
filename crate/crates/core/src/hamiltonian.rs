//! Problem and driver Hamiltonians on `L` qubits.
//!
//! Basis index convention: `index = sum_l s_l 2^(L-1-l)`, so qubit `l` is
//! bit `L-1-l` of the index. `Hp` is stored as its diagonal; `H0` is never
//! materialized and is applied through bit flips.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::encoding::{CostModel, EncodingParams};
use crate::error::{Error, Result};
use crate::graph::ExtendedAdjacency;
use crate::par;

/// Default cap on `L` for diagonal-only builds.
pub const DIAGONAL_CAP: usize = 24;

const APPLY_CHUNK: usize = 1 << 12;

/// Scalar types a state vector can hold.
pub trait Amplitude:
    Copy + Send + Sync + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
}

impl Amplitude for f64 {}
impl Amplitude for Complex64 {}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian {
    n_qubits: usize,
    diag: Vec<f64>,
}

impl DiagonalHamiltonian {
    pub fn from_diagonal(diag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || !diag.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "diagonal length {} is not a power of two",
                diag.len()
            )));
        }
        Ok(Self {
            n_qubits: diag.len().trailing_zeros() as usize,
            diag,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn min(&self) -> f64 {
        self.diag.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.diag.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Basis indices attaining the minimum, ascending.
    pub fn ground_indices(&self) -> Vec<usize> {
        let min = self.min();
        self.diag
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == min)
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn build_problem_diagonal(
    a: &ExtendedAdjacency,
    params: &EncodingParams,
) -> Result<DiagonalHamiltonian> {
    build_problem_diagonal_capped(a, params, DIAGONAL_CAP)
}

pub fn build_problem_diagonal_capped(
    a: &ExtendedAdjacency,
    params: &EncodingParams,
    cap_l: usize,
) -> Result<DiagonalHamiltonian> {
    if params.l_total > cap_l {
        return Err(Error::CapExceeded {
            what: "L",
            value: params.l_total,
            cap: cap_l,
        });
    }
    if a.dim() != params.n_blocks() {
        return Err(Error::DimensionMismatch {
            expected: params.n_blocks(),
            found: a.dim(),
        });
    }
    let model = CostModel::new(a)?;
    let diag = par::map_range(params.n_states(), |i| model.total(i as u64) as f64);
    DiagonalHamiltonian::from_diagonal(diag)
}

fn check_state<T>(state: &[T], n_qubits: usize) -> Result<()> {
    if state.len() != 1 << n_qubits {
        return Err(Error::DimensionMismatch {
            expected: 1 << n_qubits,
            found: state.len(),
        });
    }
    Ok(())
}

fn n_qubits_of<T>(state: &[T]) -> Result<usize> {
    if state.is_empty() || !state.len().is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "state length {} is not a power of two",
            state.len()
        )));
    }
    Ok(state.len().trailing_zeros() as usize)
}

/// `H0 psi = (L/2) psi - (1/2) sum_l X_l psi`.
pub fn apply_h0<T: Amplitude>(state: &[T]) -> Result<Vec<T>> {
    let n = n_qubits_of(state)?;
    let mut out = vec![T::default(); state.len()];
    apply_h_into(state, 0.0, None, n, &mut out);
    Ok(out)
}

/// `H(s) psi = (1 - s) H0 psi + s Hp psi`.
pub fn apply_h<T: Amplitude>(
    state: &[T],
    s_value: f64,
    hp: &DiagonalHamiltonian,
) -> Result<Vec<T>> {
    check_state(state, hp.n_qubits())?;
    let mut out = vec![T::default(); state.len()];
    apply_h_into(state, s_value, Some(hp.diag()), hp.n_qubits(), &mut out);
    Ok(out)
}

/// Allocation-free kernel behind [`apply_h`]. Lengths are the caller's
/// responsibility.
pub(crate) fn apply_h_into<T: Amplitude>(
    state: &[T],
    s_value: f64,
    diag: Option<&[f64]>,
    n_qubits: usize,
    out: &mut [T],
) {
    let drive = 1.0 - s_value;
    let on_site = 0.5 * n_qubits as f64 * drive;
    let hop = -0.5 * drive;
    par::for_each_chunk_mut(out, APPLY_CHUNK, |offset, chunk| {
        for (k, slot) in chunk.iter_mut().enumerate() {
            let i = offset + k;
            let mut flips = T::default();
            for l in 0..n_qubits {
                flips = flips + state[i ^ (1 << l)];
            }
            let diag_term = match diag {
                Some(d) => s_value * d[i],
                None => 0.0,
            };
            *slot = state[i] * (on_site + diag_term) + flips * hop;
        }
    });
}

/// Dense `H(s)`, only for small checks and the dense spectrum path.
pub fn dense_matrix(s_value: f64, hp: &DiagonalHamiltonian) -> nalgebra::DMatrix<f64> {
    let n = hp.n_qubits();
    let dim = hp.dim();
    let mut m = nalgebra::DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = 0.5 * n as f64 * (1.0 - s_value) + s_value * hp.diag()[i];
        for l in 0..n {
            m[(i, i ^ (1 << l))] = -0.5 * (1.0 - s_value);
        }
    }
    m
}

/// Linear schedule `s(t) = t / T'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleParams {
    pub total_time: f64,
}

impl ScheduleParams {
    pub fn new(total_time: f64) -> Result<Self> {
        if !(total_time >= 0.0 && total_time.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "evolution time {total_time}"
            )));
        }
        Ok(Self { total_time })
    }

    pub fn s(&self, t: f64) -> f64 {
        if self.total_time == 0.0 {
            1.0
        } else {
            (t / self.total_time).clamp(0.0, 1.0)
        }
    }
}

/// One `coeff * prod_{l in qubits} Z_l` term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coeff: f64,
    pub qubits: Vec<usize>,
}

impl PauliTerm {
    /// Bit `l` set for each `Z_l` factor.
    pub fn qubit_mask(&self) -> u64 {
        self.qubits.iter().fold(0, |m, &q| m | 1 << q)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliZExpansion {
    pub n_qubits: usize,
    /// Non-zero terms, ordered by index-space mask.
    pub terms: Vec<PauliTerm>,
}

pub const PRUNE_TOL: f64 = 1e-12;

/// In-place unnormalized Walsh-Hadamard transform. Stages run in sequence;
/// butterflies within a stage are independent.
pub fn walsh_hadamard(data: &mut [f64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        par::for_each_chunk_mut(data, 2 * h, |_, block| {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        });
        h *= 2;
    }
}

/// Expands `Hp` as `sum_S c_S prod_{l in S} Z_l` by substituting
/// `s_l -> (1 - Z_l) / 2`, i.e. `c_S = 2^-L sum_x C(x) (-1)^{x . S}`.
pub fn pauli_z_expansion(hp: &DiagonalHamiltonian) -> Result<PauliZExpansion> {
    pauli_z_expansion_capped(hp, DIAGONAL_CAP)
}

pub fn pauli_z_expansion_capped(hp: &DiagonalHamiltonian, cap_l: usize) -> Result<PauliZExpansion> {
    let n = hp.n_qubits();
    if n > cap_l {
        return Err(Error::CapExceeded {
            what: "L",
            value: n,
            cap: cap_l,
        });
    }
    let mut w = hp.diag().to_vec();
    walsh_hadamard(&mut w);
    let scale = 1.0 / hp.dim() as f64;
    let terms = w
        .into_iter()
        .enumerate()
        .filter_map(|(mask, c)| {
            let coeff = c * scale;
            (coeff.abs() > PRUNE_TOL).then(|| PauliTerm {
                coeff,
                // index bit b acts on qubit L-1-b
                qubits: (0..n).filter(|&l| mask >> (n - 1 - l) & 1 == 1).collect(),
            })
        })
        .collect();
    Ok(PauliZExpansion { n_qubits: n, terms })
}

impl PauliZExpansion {
    pub fn constant(&self) -> f64 {
        self.terms
            .iter()
            .find(|t| t.qubits.is_empty())
            .map_or(0.0, |t| t.coeff)
    }

    pub fn coefficient(&self, qubits: &[usize]) -> f64 {
        self.terms
            .iter()
            .find(|t| t.qubits == qubits)
            .map_or(0.0, |t| t.coeff)
    }

    /// Rebuilds the diagonal by the inverse transform.
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.n_qubits;
        let mut w = vec![0.0; 1 << n];
        for t in &self.terms {
            let idx = t.qubits.iter().fold(0usize, |m, &l| m | 1 << (n - 1 - l));
            w[idx] = t.coeff;
        }
        walsh_hadamard(&mut w);
        w
    }

    /// Terms sorted by `|coeff|` descending, ties by qubit mask ascending.
    pub fn sorted_terms(&self) -> Vec<&PauliTerm> {
        let mut v: Vec<&PauliTerm> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            b.coeff
                .abs()
                .total_cmp(&a.coeff.abs())
                .then(a.qubit_mask().cmp(&b.qubit_mask()))
        });
        v
    }

    /// One JSON object `{coeff, qubits}` per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for t in self.sorted_terms() {
            out.push_str(&serde_json::to_string(t).expect("term serializes"));
            out.push('\n');
        }
        out
    }
}
