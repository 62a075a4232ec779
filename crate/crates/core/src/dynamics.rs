//! Schrodinger evolution along `H(t) = (1 - t/T') H0 + (t/T') Hp`.
//!
//! Fixed-step classic RK4 with `hbar = 1`. The state starts in the uniform
//! superposition (ground state of `H0`) and the success probability is the
//! total weight on the degenerate ground manifold of `Hp`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{apply_h_into, DiagonalHamiltonian, ScheduleParams};
use crate::par;

/// Default cap on `L` for state-vector dynamics.
pub const DYNAMICS_CAP: usize = 16;
/// Largest tolerated `| ||psi|| - 1 |` on an accepted run.
pub const NORM_DRIFT_TOL: f64 = 1e-6;

pub fn initial_state(n_qubits: usize) -> Result<Vec<Complex64>> {
    if n_qubits > DYNAMICS_CAP {
        return Err(Error::CapExceeded {
            what: "L",
            value: n_qubits,
            cap: DYNAMICS_CAP,
        });
    }
    let dim = 1usize << n_qubits;
    Ok(vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim])
}

/// Stability bound `0.1 / (1 + max diag)`.
pub fn max_step(hp: &DiagonalHamiltonian) -> f64 {
    0.1 / (1.0 + hp.max())
}

/// `min(0.01, max_step)`.
pub fn default_step(hp: &DiagonalHamiltonian) -> f64 {
    max_step(hp).min(0.01)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    pub final_state: Vec<Complex64>,
    pub ground_indices: Vec<usize>,
    /// `|<psi(T')|g_j>|^2` on the renormalized state, one per ground state.
    pub per_ground_overlap: Vec<f64>,
    pub total_success: f64,
    /// Largest `| ||psi(t)|| - 1 |` seen during the run.
    pub norm_drift: f64,
    pub total_time: f64,
    /// Step actually used: `T' / n_steps`.
    pub step_size: f64,
    pub n_steps: usize,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

fn success(state: &[Complex64], ground: &[usize]) -> (Vec<f64>, f64) {
    let n2 = state.iter().map(Complex64::norm_sqr).sum::<f64>();
    let parts: Vec<f64> = ground.iter().map(|&j| state[j].norm_sqr() / n2).collect();
    let total = parts.iter().sum();
    (parts, total)
}

/// Success probability of the untouched initial state, `D / 2^L`.
pub fn initial_success(hp: &DiagonalHamiltonian) -> f64 {
    hp.ground_indices().len() as f64 / hp.dim() as f64
}

/// Integrates from the uniform superposition to `t = T'` with steps no
/// longer than `step`.
pub fn evolve(
    hp: &DiagonalHamiltonian,
    schedule: &ScheduleParams,
    step: f64,
) -> Result<EvolutionResult> {
    let n = hp.n_qubits();
    let mut psi = initial_state(n)?;
    let ground = hp.ground_indices();
    let total_time = schedule.total_time;

    if total_time == 0.0 {
        let (per, total) = success(&psi, &ground);
        return Ok(EvolutionResult {
            final_state: psi,
            ground_indices: ground,
            per_ground_overlap: per,
            total_success: total,
            norm_drift: 0.0,
            total_time,
            step_size: 0.0,
            n_steps: 0,
        });
    }

    let bound = max_step(hp);
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step {step} must be positive"
        )));
    }
    if step > bound * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { step, max: bound });
    }

    let n_steps = (total_time / step).ceil().max(1.0) as usize;
    let h = total_time / n_steps as f64;
    let dim = psi.len();
    let diag = hp.diag();

    let mut tmp = vec![Complex64::default(); dim];
    let mut hk = vec![Complex64::default(); dim];
    let mut acc = vec![Complex64::default(); dim];
    let mut drift: f64 = 0.0;

    // dpsi/dt = -i H psi; the -i factor is folded into the stage weights.
    let minus_i = Complex64::new(0.0, -1.0);
    for k in 0..n_steps {
        let t = k as f64 * h;
        let s0 = schedule.s(t);
        let s_half = schedule.s(t + 0.5 * h);
        let s1 = schedule.s(t + h);

        apply_h_into(&psi, s0, Some(diag), n, &mut hk);
        stage(
            &psi,
            &hk,
            minus_i * (0.5 * h),
            &mut tmp,
            &mut acc,
            1.0,
            true,
        );

        apply_h_into(&tmp, s_half, Some(diag), n, &mut hk);
        stage(
            &psi,
            &hk,
            minus_i * (0.5 * h),
            &mut tmp,
            &mut acc,
            2.0,
            false,
        );

        apply_h_into(&tmp, s_half, Some(diag), n, &mut hk);
        stage(&psi, &hk, minus_i * h, &mut tmp, &mut acc, 2.0, false);

        apply_h_into(&tmp, s1, Some(diag), n, &mut hk);
        let w = minus_i * (h / 6.0);
        par::for_each_chunk_mut(&mut psi, 1 << 12, |off, chunk| {
            for (j, p) in chunk.iter_mut().enumerate() {
                *p += w * (acc[off + j] + hk[off + j]);
            }
        });

        drift = drift.max((norm(&psi) - 1.0).abs());
    }

    if drift > NORM_DRIFT_TOL {
        return Err(Error::IntegrationAccuracy { drift });
    }

    let (per, total) = success(&psi, &ground);
    Ok(EvolutionResult {
        final_state: psi,
        ground_indices: ground,
        per_ground_overlap: per,
        total_success: total,
        norm_drift: drift,
        total_time,
        step_size: h,
        n_steps,
    })
}

/// `tmp = psi + c * hk` and `acc (+)= weight * hk`.
fn stage(
    psi: &[Complex64],
    hk: &[Complex64],
    c: Complex64,
    tmp: &mut [Complex64],
    acc: &mut [Complex64],
    weight: f64,
    reset: bool,
) {
    for j in 0..psi.len() {
        tmp[j] = psi[j] + c * hk[j];
        if reset {
            acc[j] = hk[j] * weight;
        } else {
            acc[j] += hk[j] * weight;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub t_prime: f64,
    pub p_s: Option<f64>,
    pub norm_drift: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub target: f64,
    /// `T'` at the first upward crossing of `target`, if any.
    pub interpolated_t: Option<f64>,
}

impl SweepResult {
    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t_prime).collect()
    }

    pub fn probabilities(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.p_s).collect()
    }

    pub fn max_probability(&self) -> Option<f64> {
        self.points.iter().filter_map(|p| p.p_s).reduce(f64::max)
    }
}

/// First bracketing of `target` by piecewise-linear interpolation. If the
/// first point already reaches the target, its time is returned.
pub fn first_crossing(times: &[f64], probs: &[f64], target: f64) -> Option<f64> {
    let i = probs.iter().position(|&p| p >= target)?;
    if i == 0 {
        return Some(times[0]);
    }
    let (t0, t1) = (times[i - 1], times[i]);
    let (p0, p1) = (probs[i - 1], probs[i]);
    Some(t0 + (target - p0) * (t1 - t0) / (p1 - p0))
}

/// Evolves once per entry of `times` (independently, possibly in parallel)
/// and interpolates the first crossing of `target`. Failed points are kept
/// with their error and skipped by the interpolation.
pub fn sweep_times(
    hp: &DiagonalHamiltonian,
    times: &[f64],
    target: f64,
    step: f64,
) -> Result<SweepResult> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("empty time list".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "times must be strictly increasing".into(),
        ));
    }
    if times[0] < 0.0 {
        return Err(Error::InvalidArgument("times must be non-negative".into()));
    }

    let points = par::map_slice(times, |&t| {
        match ScheduleParams::new(t).and_then(|sched| evolve(hp, &sched, step)) {
            Ok(r) => SweepPoint {
                t_prime: t,
                p_s: Some(r.total_success),
                norm_drift: Some(r.norm_drift),
                error: None,
            },
            Err(e) => SweepPoint {
                t_prime: t,
                p_s: None,
                norm_drift: None,
                error: Some(e.to_string()),
            },
        }
    });

    let (ts, ps): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter_map(|p| p.p_s.map(|ps| (p.t_prime, ps)))
        .unzip();
    let interpolated_t = if ts.is_empty() {
        None
    } else {
        first_crossing(&ts, &ps, target)
    };

    Ok(SweepResult {
        points,
        target,
        interpolated_t,
    })
}
