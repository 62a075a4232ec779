//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line; exits non-zero on any FAIL.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use graceful_aqc::dynamics::{default_step, evolve, sweep_times, SweepResult};
use graceful_aqc::encoding::{enumerate_degeneracy, EncodingParams};
use graceful_aqc::experiments::fit_quadratic;
use graceful_aqc::graph::{apply_permutation, extend, is_graceful_labelling, Permutation};
use graceful_aqc::hamiltonian::{pauli_z_expansion, ScheduleParams};
use graceful_aqc::oracle::{brute_force_graceful, sheppard_count};

const TABLE2_D: [(&str, &str, u64); 8] = [
    ("K1,1", "path:2", 2),
    ("K1,2", "star:2", 4),
    ("Z4", "path:4", 4),
    ("K1,3", "star:3", 12),
    ("K3", "complete:3", 12),
    ("Z5", "path:5", 8),
    ("K1,4", "star:4", 48),
    ("C4", "cycle:4", 16),
];

const TABLE3_D: [(&str, &str, u64); 5] = [
    ("Z6", "path:6", 24),
    ("K1,5", "star:5", 240),
    ("C5", "cycle:5", 1220),
    ("Z7", "path:7", 32),
    ("K1,6", "star:6", 1440),
];

/// `(name, generator, qubits, reference T')`.
const TABLE2_T: [(&str, &str, usize, f64); 8] = [
    ("K1,1", "path:2", 2, 0.0),
    ("K1,2", "star:2", 6, 2.402),
    ("Z4", "path:4", 8, 7.075),
    ("K1,3", "star:3", 8, 2.292),
    ("K3", "complete:3", 8, 2.504),
    ("Z5", "path:5", 15, 19.360),
    ("K1,4", "star:4", 15, 5.557),
    ("C4", "cycle:4", 15, 11.221),
];

type Outcome = Result<String, String>;

struct Sweeps {
    rows: Vec<(&'static str, usize, f64, SweepResult, Duration)>,
}

fn degeneracy(spec: &str) -> u64 {
    let a = common::adjacency(spec);
    let p = EncodingParams::for_adjacency(&a).unwrap();
    enumerate_degeneracy(&a, &p).unwrap().d_count
}

fn check_d(rows: &[(&str, &str, u64)]) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for &(name, spec, want) in rows {
        let got = degeneracy(spec);
        if got != want {
            bad.push(format!("{name}: D = {got}, expected {want}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if bad.is_empty() {
        Ok(format!("{} graphs exact in {secs:.2} s", rows.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_1() -> Outcome {
    check_d(&TABLE2_D)
}

fn criterion_2() -> Outcome {
    check_d(&TABLE3_D)
}

fn criterion_3() -> Outcome {
    let a = common::adjacency("path:3");
    let p = EncodingParams::for_adjacency(&a).unwrap();
    let rep = enumerate_degeneracy(&a, &p).unwrap();
    let got: BTreeSet<String> = rep.minimizers.iter().map(ToString::to_string).collect();
    let want: BTreeSet<String> = ["001001", "011000", "010010", "100001"]
        .into_iter()
        .map(String::from)
        .collect();
    if rep.min_cost == 0 && got == want {
        Ok(format!("zero-cost strings {got:?}"))
    } else {
        Err(format!("min cost {}, strings {got:?}", rep.min_cost))
    }
}

fn run_sweeps() -> Sweeps {
    let times: Vec<f64> = (0..=20).map(f64::from).collect();
    let rows = TABLE2_T
        .iter()
        .map(|&(name, spec, l, reference)| {
            let hp = common::problem(spec);
            assert_eq!(hp.n_qubits(), l, "{name}");
            let start = Instant::now();
            let sweep = sweep_times(&hp, &times, 0.25, default_step(&hp)).unwrap();
            (name, l, reference, sweep, start.elapsed())
        })
        .collect();
    Sweeps { rows }
}

fn criterion_4(s: &Sweeps) -> Outcome {
    let mut parts = Vec::new();
    let mut bad = Vec::new();
    for (name, l, reference, sweep, took) in &s.rows {
        let Some(t) = sweep.interpolated_t else {
            bad.push(format!("{name}: no crossing"));
            continue;
        };
        let ok = if *reference == 0.0 {
            t == 0.0
        } else if *l == 15 {
            (t - reference).abs() <= 0.15 * reference && *took <= Duration::from_secs(3600)
        } else {
            (t - reference).abs() <= (0.10 * reference).max(0.25)
        };
        let line = format!("{name} {t:.3} vs {reference}");
        if ok {
            parts.push(line);
        } else {
            bad.push(format!("{line} ({:.0} s)", took.as_secs_f64()));
        }
    }
    let slowest = s.rows.iter().map(|r| r.4).max().unwrap_or_default();
    if bad.is_empty() {
        Ok(format!(
            "{}; slowest sweep {:.0} s",
            parts.join(", "),
            slowest.as_secs_f64()
        ))
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_5() -> Outcome {
    let hp = common::problem("path:3");
    let ex = pauli_z_expansion(&hp).unwrap();
    let mut worst = 0.0f64;
    for (qubits, c16) in common::K12_PAULI {
        worst = worst.max((ex.coefficient(qubits) - c16 as f64 / 16.0).abs());
    }
    let recon = ex
        .reconstruct()
        .iter()
        .zip(hp.diag())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let count_ok = ex.terms.len() == common::K12_PAULI.len();
    if count_ok && worst <= 1e-9 && recon <= 1e-12 && (ex.constant() - 3.0).abs() <= 1e-9 {
        Ok(format!(
            "{} terms, constant {}, max coefficient error {worst:.1e}, reconstruction error {recon:.1e}",
            ex.terms.len(),
            ex.constant()
        ))
    } else {
        Err(format!(
            "{} terms, max coefficient error {worst:.1e}, reconstruction error {recon:.1e}",
            ex.terms.len()
        ))
    }
}

fn criterion_6() -> Outcome {
    let mut graceful = 0;
    for e in 1..=4 {
        for g in common::all_graphs(e) {
            let oracle = brute_force_graceful(&g).unwrap();
            if !oracle.graceful {
                continue;
            }
            graceful += 1;
            let a = extend(&g).unwrap();
            let rep =
                enumerate_degeneracy(&a, &EncodingParams::for_adjacency(&a).unwrap()).unwrap();
            if rep.d_count != oracle.labelling_count || rep.min_cost != 0 {
                return Err(format!(
                    "{g:?}: oracle {} vs D {} (min cost {})",
                    oracle.labelling_count, rep.d_count, rep.min_cost
                ));
            }
        }
    }
    Ok(format!("{graceful} graceful graphs with e <= 4 agree"))
}

fn criterion_7() -> Outcome {
    let mut n = 0;
    for e in 1..=3 {
        for g in common::all_graphs(e) {
            let a = extend(&g).unwrap();
            for images in common::permutations(e + 1) {
                let direct = common::definition_graceful(g.edges(), &images);
                let b = apply_permutation(&a, &Permutation::new(images).unwrap()).unwrap();
                if is_graceful_labelling(&b) != direct {
                    return Err(format!("{g:?} disagrees"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} labellings agree"))
}

fn criterion_8() -> Outcome {
    let counts: Vec<u64> = (1..=5).map(|e| sheppard_count(e).unwrap()).collect();
    let want: Vec<u64> = (1..=5).map(common::factorial).collect();
    if counts == want {
        Ok(format!("counts {counts:?}"))
    } else {
        Err(format!("counts {counts:?}, expected {want:?}"))
    }
}

fn criterion_9(s: &Sweeps) -> Outcome {
    let drift = s
        .rows
        .iter()
        .flat_map(|r| &r.3.points)
        .map(|p| p.norm_drift.expect("every sweep point integrated"))
        .fold(0.0, f64::max);

    let hp = common::problem("path:2");
    let sched = ScheduleParams::new(5.0).unwrap();
    let p: Vec<f64> = [0.03125, 0.015625, 0.0078125]
        .iter()
        .map(|&h| evolve(&hp, &sched, h).unwrap().total_success)
        .collect();
    let ratio = (p[0] - p[1]).abs() / (p[1] - p[2]).abs();

    let mut p0 = 0.0f64;
    for &(_, spec, d) in &TABLE2_D {
        let hp = common::problem(spec);
        let r = evolve(&hp, &ScheduleParams::new(0.0).unwrap(), 0.01).unwrap();
        p0 = p0.max((r.total_success - d as f64 / hp.dim() as f64).abs());
    }

    let msg =
        format!("max norm drift {drift:.1e}, halving ratio {ratio:.2}, P_s(0) error {p0:.1e}");
    if drift <= 1e-6 && (12.0..=20.0).contains(&ratio) && p0 <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_10(s: &Sweeps) -> Outcome {
    let mut by_l: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    for (_, l, _, sweep, _) in &s.rows {
        by_l.entry(*l)
            .or_default()
            .push(sweep.interpolated_t.ok_or("missing T'")?);
    }
    let pts: Vec<(f64, f64)> = by_l
        .iter()
        .map(|(l, ts)| (*l as f64, ts.iter().sum::<f64>() / ts.len() as f64))
        .collect();
    let fit = fit_quadratic(&pts).map_err(|e| e.to_string())?;
    let means: Vec<String> = pts.iter().map(|(l, t)| format!("{l}:{t:.3}")).collect();
    let msg = format!("means {}, R^2 = {:.4}", means.join(" "), fit.r_squared);
    if fit.r_squared >= 0.95 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn report(id: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match &outcome {
        Ok(m) => println!("criterion {id:>2} PASS  {name}: {m} [{secs:.1} s]"),
        Err(m) => println!("criterion {id:>2} FAIL  {name}: {m} [{secs:.1} s]"),
    }
    outcome.is_ok()
}

fn main() {
    let mut ok = true;
    ok &= report(1, "degeneracy, 6 to 15 qubits", criterion_1);
    ok &= report(2, "degeneracy, 18 and 21 qubits", criterion_2);
    ok &= report(3, "K1,2 ground kets", criterion_3);

    let sweeps = catch_unwind(run_sweeps).ok();
    let need = |s: &Option<Sweeps>| {
        s.as_ref()
            .map(|_| ())
            .ok_or_else(|| "sweeps failed".to_string())
    };
    ok &= report(4, "evolution times", || {
        need(&sweeps)?;
        criterion_4(sweeps.as_ref().unwrap())
    });
    ok &= report(5, "Pauli-Z expansion", criterion_5);
    ok &= report(6, "oracle equivalence", criterion_6);
    ok &= report(7, "minor diagonals vs definition", criterion_7);
    ok &= report(8, "graceful labelled graph count", criterion_8);
    ok &= report(9, "numerical hygiene", || {
        need(&sweeps)?;
        criterion_9(sweeps.as_ref().unwrap())
    });
    ok &= report(10, "scaling fit", || {
        need(&sweeps)?;
        criterion_10(sweeps.as_ref().unwrap())
    });

    if !ok {
        std::process::exit(1);
    }
}
