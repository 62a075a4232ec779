//! Reproduction recipes for the degeneracy and evolution-time tables and the
//! quadratic scaling fit.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::dynamics::{default_step, sweep_times, DYNAMICS_CAP};
use crate::encoding::{enumerate_degeneracy, EncodingParams};
use crate::error::{Error, Result};
use crate::graph::{extend, Graph};
use crate::hamiltonian::build_problem_diagonal;

/// Success probability the evolution-time column is measured at.
pub const TARGET_PROBABILITY: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    /// `T' ~ a L^2 + b L + c`.
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub r_squared: f64,
    pub residuals: Vec<f64>,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        self.a * x * x + self.b * x + self.c
    }
}

/// Ordinary least-squares quadratic through `(x, y)` points.
pub fn fit_quadratic(points: &[(f64, f64)]) -> Result<FitResult> {
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(Error::DegenerateDesign(format!(
            "{} distinct abscissae, need at least 3",
            xs.len()
        )));
    }
    let n = points.len();
    let design = DMatrix::from_fn(n, 3, |i, j| points[i].0.powi(2 - j as i32));
    let y = DVector::from_iterator(n, points.iter().map(|p| p.1));
    let coef = design
        .clone()
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::DegenerateDesign(e.to_string()))?;
    let fitted = &design * &coef;
    let residuals: Vec<f64> = (0..n).map(|i| y[i] - fitted[i]).collect();

    let mean = y.mean();
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };

    Ok(FitResult {
        a: coef[0],
        b: coef[1],
        c: coef[2],
        r_squared,
        residuals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    Table2,
    Table3,
}

impl std::str::FromStr for Table {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table2" => Ok(Self::Table2),
            "table3" => Ok(Self::Table3),
            other => Err(Error::InvalidArgument(format!(
                "unknown table '{other}' (expected table2 or table3)"
            ))),
        }
    }
}

/// A reference row: name, generator (absent when the structure is only
/// available pictorially), qubit count, `D` and evolution time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub name: &'static str,
    pub generator: Option<&'static str>,
    pub n_edges: usize,
    pub l_total: usize,
    pub d: u64,
    pub t_prime: Option<f64>,
}

const fn row(
    name: &'static str,
    generator: Option<&'static str>,
    n_edges: usize,
    l_total: usize,
    d: u64,
    t_prime: Option<f64>,
) -> ReferenceRow {
    ReferenceRow {
        name,
        generator,
        n_edges,
        l_total,
        d,
        t_prime,
    }
}

pub const TABLE2: [ReferenceRow; 11] = [
    row("K1,1", Some("path:2"), 1, 2, 2, Some(0.0)),
    row("K1,2", Some("star:2"), 2, 6, 4, Some(2.402)),
    row("Z4", Some("path:4"), 3, 8, 4, Some(7.075)),
    row("K1,3", Some("star:3"), 3, 8, 12, Some(2.292)),
    row("K3", Some("complete:3"), 3, 8, 12, Some(2.504)),
    row("Z5", Some("path:5"), 4, 15, 8, Some(19.360)),
    row("K1,4", Some("star:4"), 4, 15, 48, Some(5.557)),
    row("C4", Some("cycle:4"), 4, 15, 16, Some(11.221)),
    row("G4_1", None, 4, 15, 12, Some(16.085)),
    row("G4_2", None, 4, 15, 20, Some(9.311)),
    row("G4_3", None, 4, 15, 120, Some(5.547)),
];

pub const TABLE3: [ReferenceRow; 12] = [
    row("G5_1", None, 5, 18, 40, None),
    row("G5_2", None, 5, 18, 28, None),
    row("G5_3", None, 5, 18, 64, None),
    row("G5_4", None, 5, 18, 72, None),
    row("G5_5", None, 5, 18, 48, None),
    row("G5_6", None, 5, 18, 36, None),
    row("K1,5", Some("star:5"), 5, 18, 240, None),
    row("Z6", Some("path:6"), 5, 18, 24, None),
    row("C5", Some("cycle:5"), 5, 18, 1220, None),
    row("Z7", Some("path:7"), 6, 21, 32, None),
    row("K1,6", Some("star:6"), 6, 21, 1440, None),
    row("G6_1", None, 6, 21, 44, None),
];

/// Evolution-time tolerance: the larger of the relative band (10%, or 15%
/// for 15-qubit rows) and 0.25 absolute.
pub fn t_prime_tolerance(reference: f64, l_total: usize) -> f64 {
    let rel = if l_total >= 15 { 0.15 } else { 0.10 };
    (rel * reference).max(0.25)
}

#[derive(Debug, Clone)]
pub struct ReproduceOptions {
    pub times: Vec<f64>,
    pub target: f64,
    /// Step override; `None` uses the per-graph default.
    pub step: Option<f64>,
    /// Rows with more qubits than this get `D` only.
    pub sweep_max_l: usize,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            times: (0..=20).map(f64::from).collect(),
            target: TARGET_PROBABILITY,
            step: None,
            sweep_max_l: DYNAMICS_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Pass,
    Mismatch,
    SkippedByDesign,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowReport {
    pub name: String,
    pub generator: Option<String>,
    pub n_edges: usize,
    pub l_total: usize,
    pub reference_d: u64,
    pub computed_d: Option<u64>,
    pub min_cost: Option<u64>,
    pub d_pass: Option<bool>,
    pub reference_t_prime: Option<f64>,
    pub computed_t_prime: Option<f64>,
    pub t_tolerance: Option<f64>,
    pub t_pass: Option<bool>,
    pub status: RowStatus,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryMean {
    pub l_total: usize,
    pub rows: Vec<String>,
    pub mean_t_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub source: String,
    pub means: Vec<CategoryMean>,
    pub fit: Option<FitResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproductionReport {
    pub table: Table,
    pub rows: Vec<RowReport>,
    pub fits: Vec<ScalingFit>,
    pub notes: Vec<String>,
}

impl ReproductionReport {
    /// True when no row mismatched or errored.
    pub fn all_pass(&self) -> bool {
        self.rows
            .iter()
            .all(|r| matches!(r.status, RowStatus::Pass | RowStatus::SkippedByDesign))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        crate::output::round_json(&mut v);
        v
    }
}

fn reproduce_row(r: &ReferenceRow, opts: &ReproduceOptions, with_dynamics: bool) -> RowReport {
    let mut out = RowReport {
        name: r.name.into(),
        generator: r.generator.map(Into::into),
        n_edges: r.n_edges,
        l_total: r.l_total,
        reference_d: r.d,
        computed_d: None,
        min_cost: None,
        d_pass: None,
        reference_t_prime: r.t_prime,
        computed_t_prime: None,
        t_tolerance: None,
        t_pass: None,
        status: RowStatus::SkippedByDesign,
        note: None,
    };
    let Some(spec) = r.generator else {
        out.note = Some("structure only given pictorially".into());
        return out;
    };

    let mut run = || -> Result<()> {
        let a = extend(&Graph::from_generator(spec)?)?;
        let params = EncodingParams::for_adjacency(&a)?;
        let rep = enumerate_degeneracy(&a, &params)?;
        out.computed_d = Some(rep.d_count);
        out.min_cost = Some(rep.min_cost);
        out.d_pass = Some(rep.d_count == r.d);

        if let (true, Some(reference_t)) = (with_dynamics, r.t_prime) {
            if params.l_total > opts.sweep_max_l {
                out.note = Some(format!("sweep skipped: L = {} above cap", params.l_total));
            } else {
                let hp = build_problem_diagonal(&a, &params)?;
                let step = opts.step.unwrap_or_else(|| default_step(&hp));
                let sweep = sweep_times(&hp, &opts.times, opts.target, step)?;
                let tol = t_prime_tolerance(reference_t, r.l_total);
                out.t_tolerance = Some(tol);
                out.computed_t_prime = sweep.interpolated_t;
                out.t_pass = Some(
                    sweep
                        .interpolated_t
                        .is_some_and(|t| (t - reference_t).abs() <= tol),
                );
            }
        }
        Ok(())
    };

    match run() {
        Ok(()) => {
            let ok = out.d_pass != Some(false) && out.t_pass != Some(false);
            out.status = if ok {
                RowStatus::Pass
            } else {
                RowStatus::Mismatch
            };
        }
        Err(e) => {
            out.status = RowStatus::Error;
            out.note = Some(e.to_string());
        }
    }
    out
}

fn category_means<'a>(rows: impl Iterator<Item = (&'a str, usize, f64)>) -> Vec<CategoryMean> {
    let mut by_l: BTreeMap<usize, Vec<(&str, f64)>> = BTreeMap::new();
    for (name, l, t) in rows {
        by_l.entry(l).or_default().push((name, t));
    }
    by_l.into_iter()
        .map(|(l, v)| CategoryMean {
            l_total: l,
            rows: v.iter().map(|(n, _)| n.to_string()).collect(),
            mean_t_prime: v.iter().map(|(_, t)| t).sum::<f64>() / v.len() as f64,
        })
        .collect()
}

fn scaling_fit(source: &str, means: Vec<CategoryMean>) -> ScalingFit {
    let pts: Vec<(f64, f64)> = means
        .iter()
        .map(|m| (m.l_total as f64, m.mean_t_prime))
        .collect();
    ScalingFit {
        source: source.into(),
        fit: fit_quadratic(&pts).ok(),
        means,
    }
}

/// Per-category mean evolution times from reference rows.
pub fn reference_category_means(named_only: bool) -> Vec<CategoryMean> {
    category_means(
        TABLE2
            .iter()
            .filter(|r| !named_only || r.generator.is_some())
            .filter_map(|r| r.t_prime.map(|t| (r.name, r.l_total, t))),
    )
}

pub fn reproduce(table: Table, opts: &ReproduceOptions) -> ReproductionReport {
    match table {
        Table::Table2 => {
            let rows: Vec<RowReport> = TABLE2
                .iter()
                .map(|r| reproduce_row(r, opts, true))
                .collect();
            let computed = category_means(
                rows.iter()
                    .filter_map(|r| r.computed_t_prime.map(|t| (r.name.as_str(), r.l_total, t))),
            );
            ReproductionReport {
                table,
                fits: vec![
                    scaling_fit("computed, named rows", computed),
                    scaling_fit("reference, named rows", reference_category_means(true)),
                    scaling_fit("reference, all rows", reference_category_means(false)),
                ],
                rows,
                notes: vec![
                    "G4_i rows are excluded: their structures are only given pictorially; \
                     the 15-qubit category mean therefore differs from the reference average."
                        .into(),
                    "Evolution times are swept over T' = 0..20; a row whose initial success \
                     probability already reaches the target reports T' = 0."
                        .into(),
                ],
            }
        }
        Table::Table3 => ReproductionReport {
            table,
            rows: TABLE3
                .iter()
                .map(|r| reproduce_row(r, opts, false))
                .collect(),
            fits: Vec::new(),
            notes: vec![
                "Caption mentions e = 6, 7 edges while the row groups are 5-edge and 6-edge \
                 graphs; rows follow the edge counts implied by the graph names."
                    .into(),
            ],
        },
    }
}
