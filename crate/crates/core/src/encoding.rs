//! Binary encoding of permutations and the total cost function.
//!
//! A permutation `pi` of `{0..N'}` is written as `N' + 1` blocks of `U` bits,
//! block `j` holding `pi_j` most-significant bit first. The whole string
//! `s_0 s_1 ... s_{L-1}` is also read as an `L`-bit integer with `s_0` as the
//! most significant bit; that integer is the basis index used by the
//! Hamiltonian layer.
//!
//! The total cost is `C = C1 + C2 + C3`:
//! - `C1` counts blocks whose value lies above `N'`,
//! - `C2` counts index pairs `i < j` with equal blocks,
//! - `C3` is `sum_{i=1..e} (1 - m_i)^2` where `m_i` is the weight of the
//!   `i`-th minor diagonal of the relabelled matrix `P A' P^T`.
//!
//! All three are integers on binary input, so everything here is exact.
//! [`polynomial`] evaluates the same costs literally from their product
//! form over bits and serves as an independent check of [`CostModel`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{ExtendedAdjacency, Permutation};
use crate::par;

/// Longest bit string the packed representation supports.
pub const MAX_BITS: usize = 63;
/// Default cap on `L` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;
/// Explicit minimizers kept by [`enumerate_degeneracy`]; the count is exact
/// regardless.
pub const DEFAULT_MAX_MINIMIZERS: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingParams {
    /// `N' = e`.
    pub n_prime: usize,
    /// `U = ceil(log2(N' + 1))`.
    pub u_bits: usize,
    /// `M' = 2^U - 1`.
    pub m_prime: usize,
    /// `L = (N' + 1) U`.
    pub l_total: usize,
}

impl EncodingParams {
    pub fn new(n_prime: usize) -> Result<Self> {
        if n_prime == 0 {
            return Err(Error::InvalidArgument("N' must be at least 1".into()));
        }
        // smallest U with 2^U >= N' + 1
        let u_bits = (usize::BITS - n_prime.leading_zeros()) as usize;
        let l_total = (n_prime + 1) * u_bits;
        if l_total > MAX_BITS {
            return Err(Error::CapExceeded {
                what: "L",
                value: l_total,
                cap: MAX_BITS,
            });
        }
        Ok(Self {
            n_prime,
            u_bits,
            m_prime: (1 << u_bits) - 1,
            l_total,
        })
    }

    pub fn for_adjacency(a: &ExtendedAdjacency) -> Result<Self> {
        Self::new(a.n_prime())
    }

    pub fn n_blocks(&self) -> usize {
        self.n_prime + 1
    }

    /// Number of basis states, `2^L`.
    pub fn n_states(&self) -> usize {
        1usize << self.l_total
    }

    /// Value of block `j` in the packed string `index`.
    #[inline]
    pub fn block(&self, index: u64, j: usize) -> usize {
        let shift = self.l_total - (j + 1) * self.u_bits;
        ((index >> shift) & self.m_prime as u64) as usize
    }
}

/// Fixed-length bit string `s_0 ... s_{len-1}`, packed with `s_0` as the
/// most significant bit of `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    value: u64,
    len: usize,
}

impl BitString {
    pub fn from_index(value: u64, len: usize) -> Result<Self> {
        if len > MAX_BITS || (len < 64 && value >> len != 0) {
            return Err(Error::InvalidArgument(format!(
                "index {value} does not fit in {len} bits"
            )));
        }
        Ok(Self { value, len })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.len() > MAX_BITS {
            return Err(Error::CapExceeded {
                what: "bit string length",
                value: bits.len(),
                cap: MAX_BITS,
            });
        }
        let mut value = 0u64;
        for &b in bits {
            if b > 1 {
                return Err(Error::InvalidArgument(format!("bit value {b}")));
            }
            value = (value << 1) | b as u64;
        }
        Ok(Self {
            value,
            len: bits.len(),
        })
    }

    pub fn index(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit `s_l`.
    pub fn bit(&self, l: usize) -> u8 {
        ((self.value >> (self.len - 1 - l)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len).map(|l| self.bit(l)).collect()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in 0..self.len {
            f.write_str(if self.bit(l) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidArgument(format!("'{other}' is not a bit"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(&bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

fn check_len(s: &BitString, params: &EncodingParams) -> Result<()> {
    if s.len() != params.l_total {
        return Err(Error::DimensionMismatch {
            expected: params.l_total,
            found: s.len(),
        });
    }
    Ok(())
}

pub fn encode_permutation(p: &Permutation, params: &EncodingParams) -> Result<BitString> {
    if p.len() != params.n_blocks() {
        return Err(Error::DimensionMismatch {
            expected: params.n_blocks(),
            found: p.len(),
        });
    }
    let value = p
        .images()
        .iter()
        .fold(0u64, |acc, &x| (acc << params.u_bits) | x as u64);
    BitString::from_index(value, params.l_total)
}

/// Block values `s_int`. No validity judgement: values up to `M'` and
/// repeats are returned as they are.
pub fn decode_bitstring(s: &BitString, params: &EncodingParams) -> Result<Vec<usize>> {
    check_len(s, params)?;
    Ok((0..params.n_blocks())
        .map(|j| params.block(s.index(), j))
        .collect())
}

/// Decodes to a [`Permutation`] when `C1 = C2 = 0`, otherwise `None`.
pub fn decode_permutation(s: &BitString, params: &EncodingParams) -> Result<Option<Permutation>> {
    Ok(Permutation::new(decode_bitstring(s, params)?).ok())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub c1: u64,
    pub c2: u64,
    pub c3: u64,
    pub total: u64,
}

/// Precomputed evaluator of the total cost on packed strings for one graph.
#[derive(Debug, Clone)]
pub struct CostModel {
    params: EncodingParams,
    edges: Vec<(usize, usize)>,
}

impl CostModel {
    pub fn new(a: &ExtendedAdjacency) -> Result<Self> {
        Ok(Self {
            params: EncodingParams::for_adjacency(a)?,
            edges: a.edges(),
        })
    }

    pub fn params(&self) -> &EncodingParams {
        &self.params
    }

    #[inline]
    fn decode_into(&self, index: u64, out: &mut [usize; MAX_BITS]) -> usize {
        let n = self.params.n_blocks();
        for (j, slot) in out.iter_mut().take(n).enumerate() {
            *slot = self.params.block(index, j);
        }
        n
    }

    #[inline]
    fn c1_of(&self, vals: &[usize]) -> u64 {
        vals.iter().filter(|&&x| x > self.params.n_prime).count() as u64
    }

    #[inline]
    fn c2_of(&self, vals: &[usize]) -> u64 {
        // M' < 2 (N' + 1) <= 2 * 64
        let mut counts = [0u8; 2 * MAX_BITS + 2];
        let mut pairs = 0u64;
        for &x in vals {
            pairs += counts[x] as u64;
            counts[x] += 1;
        }
        pairs
    }

    #[inline]
    fn c3_of(&self, vals: &[usize]) -> u64 {
        let n = self.params.n_prime;
        let mut m = [0i64; MAX_BITS + 1];
        for &(u, v) in &self.edges {
            let (a, b) = (vals[u], vals[v]);
            if a <= n && b <= n && a != b {
                m[a.abs_diff(b)] += 1;
            }
        }
        m[1..=n].iter().map(|&w| ((1 - w) * (1 - w)) as u64).sum()
    }

    pub fn breakdown(&self, index: u64) -> CostBreakdown {
        let mut buf = [0usize; MAX_BITS];
        let n = self.decode_into(index, &mut buf);
        let vals = &buf[..n];
        let (c1, c2, c3) = (self.c1_of(vals), self.c2_of(vals), self.c3_of(vals));
        CostBreakdown {
            c1,
            c2,
            c3,
            total: c1 + c2 + c3,
        }
    }

    /// Total cost of the packed string `index`.
    #[inline]
    pub fn total(&self, index: u64) -> u64 {
        let mut buf = [0usize; MAX_BITS];
        let n = self.decode_into(index, &mut buf);
        let vals = &buf[..n];
        self.c1_of(vals) + self.c2_of(vals) + self.c3_of(vals)
    }
}

pub fn cost_c1(s: &BitString, params: &EncodingParams) -> Result<u64> {
    let vals = decode_bitstring(s, params)?;
    Ok(vals.iter().filter(|&&x| x > params.n_prime).count() as u64)
}

pub fn cost_c2(s: &BitString, params: &EncodingParams) -> Result<u64> {
    let vals = decode_bitstring(s, params)?;
    let mut pairs = 0;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            pairs += u64::from(vals[i] == vals[j]);
        }
    }
    Ok(pairs)
}

pub fn cost_c3(s: &BitString, a: &ExtendedAdjacency, params: &EncodingParams) -> Result<u64> {
    check_dim(a, params)?;
    let model = CostModel::new(a)?;
    let vals = decode_bitstring(s, params)?;
    Ok(model.c3_of(&vals))
}

pub fn total_cost(
    s: &BitString,
    a: &ExtendedAdjacency,
    params: &EncodingParams,
) -> Result<CostBreakdown> {
    check_dim(a, params)?;
    check_len(s, params)?;
    Ok(CostModel::new(a)?.breakdown(s.index()))
}

fn check_dim(a: &ExtendedAdjacency, params: &EncodingParams) -> Result<()> {
    if a.dim() != params.n_blocks() {
        return Err(Error::DimensionMismatch {
            expected: params.n_blocks(),
            found: a.dim(),
        });
    }
    Ok(())
}

/// Literal evaluation of the costs from their product-of-bits form.
///
/// Deliberately slow: every Kronecker delta is expanded as
/// `prod_r (x_r + y_r - 1)^2` over the `U` bits and `A''` is assembled as
/// `P A' P^T` with `p_ij = delta(i, pi_j)`.
pub mod polynomial {
    use super::*;

    /// Bit `r` of `x` in `U`-bit MSB-first order.
    fn bit(x: usize, r: usize, u_bits: usize) -> i64 {
        ((x >> (u_bits - 1 - r)) & 1) as i64
    }

    /// `delta(x, y)` as `prod_r (x_r + y_r - 1)^2`.
    pub fn kronecker(x: usize, y: usize, u_bits: usize) -> i64 {
        (0..u_bits)
            .map(|r| {
                let t = bit(x, r, u_bits) + bit(y, r, u_bits) - 1;
                t * t
            })
            .product()
    }

    fn s_bits(s: &BitString) -> Vec<i64> {
        s.bits().into_iter().map(i64::from).collect()
    }

    /// `prod_r (s_{jU+r} + k_r - 1)^2`: block `j` of `s` equals `k`.
    fn block_delta(sb: &[i64], j: usize, k: usize, u_bits: usize) -> i64 {
        (0..u_bits)
            .map(|r| {
                let t = sb[j * u_bits + r] + bit(k, r, u_bits) - 1;
                t * t
            })
            .product()
    }

    pub fn c1(s: &BitString, params: &EncodingParams) -> Result<i64> {
        check_len(s, params)?;
        let sb = s_bits(s);
        let u = params.u_bits;
        let mut acc = 0;
        for i in 0..=params.n_prime {
            for k in params.n_prime + 1..=params.m_prime {
                acc += block_delta(&sb, i, k, u);
            }
        }
        Ok(acc)
    }

    pub fn c2(s: &BitString, params: &EncodingParams) -> Result<i64> {
        check_len(s, params)?;
        let sb = s_bits(s);
        let u = params.u_bits;
        let mut acc = 0;
        for i in 0..params.n_prime {
            for j in i + 1..=params.n_prime {
                acc += (0..u)
                    .map(|r| {
                        let t = sb[i * u + r] + sb[j * u + r] - 1;
                        t * t
                    })
                    .product::<i64>();
            }
        }
        Ok(acc)
    }

    /// `p_ij = delta(i, pi_j)` for `i, j` in `0..=N'`.
    pub fn permutation_matrix(s: &BitString, params: &EncodingParams) -> Result<Vec<Vec<i64>>> {
        check_len(s, params)?;
        let sb = s_bits(s);
        let n = params.n_blocks();
        Ok((0..n)
            .map(|i| {
                (0..n)
                    .map(|j| block_delta(&sb, j, i, params.u_bits))
                    .collect()
            })
            .collect())
    }

    pub fn c3(s: &BitString, a: &ExtendedAdjacency, params: &EncodingParams) -> Result<i64> {
        check_dim(a, params)?;
        let p = permutation_matrix(s, params)?;
        let n = params.n_blocks();
        let a2 = |i: usize, j: usize| -> i64 {
            let mut acc = 0;
            for k in 0..n {
                for r in 0..n {
                    acc += p[i][r] * a.get(r, k) as i64 * p[j][k];
                }
            }
            acc
        };
        let e = params.n_prime;
        Ok((1..=e)
            .map(|i| {
                let m: i64 = (0..=e - i).map(|k| a2(k, i + k)).sum();
                (1 - m) * (1 - m)
            })
            .sum())
    }

    pub fn total(s: &BitString, a: &ExtendedAdjacency, params: &EncodingParams) -> Result<i64> {
        Ok(c1(s, params)? + c2(s, params)? + c3(s, a, params)?)
    }
}

/// Exact minimum and degeneracy of the total cost over all `2^L` strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyReport {
    pub params: EncodingParams,
    pub min_cost: u64,
    pub d_count: u64,
    /// Lexicographically first minimizers, at most the configured limit.
    pub minimizers: Vec<BitString>,
}

impl DegeneracyReport {
    pub fn graceful(&self) -> bool {
        self.min_cost == 0
    }

    pub fn is_truncated(&self) -> bool {
        (self.minimizers.len() as u64) < self.d_count
    }

    pub fn to_json(&self, graph: &str) -> serde_json::Value {
        json!({
            "graph": graph,
            "n_prime": self.params.n_prime,
            "u_bits": self.params.u_bits,
            "l_total": self.params.l_total,
            "min_cost": self.min_cost,
            "d_count": self.d_count,
            "graceful": self.graceful(),
            "minimizers": self.minimizers.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub cap_l: usize,
    pub max_minimizers: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            cap_l: DEFAULT_ENUMERATION_CAP,
            max_minimizers: DEFAULT_MAX_MINIMIZERS,
        }
    }
}

const CHUNK_BITS: usize = 14;

#[derive(Debug)]
struct Partial {
    min: u64,
    count: u64,
    minimizers: Vec<u64>,
}

impl Partial {
    fn merge(mut self, other: Partial, keep: usize) -> Partial {
        use std::cmp::Ordering::*;
        match other.min.cmp(&self.min) {
            Less => other,
            Greater => self,
            Equal => {
                self.count += other.count;
                let room = keep.saturating_sub(self.minimizers.len());
                self.minimizers
                    .extend(other.minimizers.into_iter().take(room));
                self
            }
        }
    }
}

pub fn enumerate_degeneracy(
    a: &ExtendedAdjacency,
    params: &EncodingParams,
) -> Result<DegeneracyReport> {
    enumerate_degeneracy_with(a, params, &EnumerationOptions::default())
}

/// Scans all strings in lexicographic order, in disjoint chunks merged in
/// order, so the result does not depend on scheduling.
pub fn enumerate_degeneracy_with(
    a: &ExtendedAdjacency,
    params: &EncodingParams,
    opts: &EnumerationOptions,
) -> Result<DegeneracyReport> {
    check_dim(a, params)?;
    if params.l_total > opts.cap_l {
        return Err(Error::CapExceeded {
            what: "L",
            value: params.l_total,
            cap: opts.cap_l,
        });
    }
    let model = CostModel::new(a)?;
    let total = 1u64 << params.l_total;
    let chunk = 1u64 << CHUNK_BITS.min(params.l_total);
    let n_chunks = (total / chunk) as usize;
    let keep = opts.max_minimizers;

    let partials = par::map_range(n_chunks, |c| {
        let start = c as u64 * chunk;
        let mut p = Partial {
            min: u64::MAX,
            count: 0,
            minimizers: Vec::new(),
        };
        for idx in start..start + chunk {
            let cost = model.total(idx);
            if cost < p.min {
                p.min = cost;
                p.count = 0;
                p.minimizers.clear();
            }
            if cost == p.min {
                p.count += 1;
                if p.minimizers.len() < keep {
                    p.minimizers.push(idx);
                }
            }
        }
        p
    });

    let merged = partials
        .into_iter()
        .reduce(|acc, p| acc.merge(p, keep))
        .expect("at least one chunk");

    Ok(DegeneracyReport {
        params: *params,
        min_cost: merged.min,
        d_count: merged.count,
        minimizers: merged
            .minimizers
            .into_iter()
            .map(|i| BitString::from_index(i, params.l_total))
            .collect::<Result<_>>()?,
    })
}
