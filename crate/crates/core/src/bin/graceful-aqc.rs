use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use graceful_aqc::dynamics::{default_step, sweep_times, DYNAMICS_CAP};
use graceful_aqc::encoding::{
    enumerate_degeneracy_with, EncodingParams, EnumerationOptions, DEFAULT_ENUMERATION_CAP,
};
use graceful_aqc::experiments::{
    fit_quadratic, reproduce, ReproduceOptions, RowStatus, Table, TARGET_PROBABILITY,
};
use graceful_aqc::graph::{extend, Graph};
use graceful_aqc::hamiltonian::{build_problem_diagonal_capped, pauli_z_expansion_capped};
use graceful_aqc::oracle::{brute_force_graceful, ORACLE_MAX_EDGES};
use graceful_aqc::output::{clean_zero, fmt_sig6, round_json, spectrum_csv, sweep_csv};
use graceful_aqc::spectrum::{spectrum, uniform_grid, ITERATIVE_MAX_QUBITS};
use graceful_aqc::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(
    name = "graceful-aqc",
    version,
    about = "Adiabatic graceful-labelling simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide gracefulness by ground-state enumeration, cross-checked by brute force.
    Decide {
        #[command(flatten)]
        graph: GraphArg,
        /// Largest qubit count to enumerate.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap_l: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sweep the total evolution time and report the success probability.
    Simulate {
        #[command(flatten)]
        graph: GraphArg,
        /// Evolution times, `a..b` (unit spacing) or `a..b:dt`.
        #[arg(long, default_value = "0..20")]
        times: TimeRange,
        #[arg(long, default_value_t = TARGET_PROBABILITY)]
        target: f64,
        /// RK4 step; defaults to a stability-safe value for the graph.
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = DYNAMICS_CAP)]
        cap_l: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lowest levels of H(s) on a uniform grid over [0, 1].
    Spectrum {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 8)]
        levels: usize,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, default_value_t = ITERATIVE_MAX_QUBITS)]
        cap_l: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Pauli-Z expansion of the problem Hamiltonian, one term per line.
    Pauli {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 20)]
        cap_l: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quadratic least-squares fit to `L:T` points.
    Fit {
        /// Comma-separated `L:T` pairs, e.g. `2:0,6:2.402,8:3.957,15:11.18`.
        #[arg(long)]
        points: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Recompute a reference table and compare row by row.
    Reproduce {
        table: Table,
        #[arg(long, default_value = "0..20")]
        times: TimeRange,
        #[arg(long, default_value_t = TARGET_PROBABILITY)]
        target: f64,
        #[arg(long)]
        step: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct GraphArg {
    /// Edge-list file, or a generator such as `gen:star:4`.
    #[arg(long)]
    graph: String,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
struct TimeRange(Vec<f64>);

impl std::str::FromStr for TimeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (range, dt) = match s.split_once(':') {
            Some((r, d)) => (
                r,
                d.parse::<f64>().map_err(|e| format!("bad spacing: {e}"))?,
            ),
            None => (s, 1.0),
        };
        let (a, b) = range
            .split_once("..")
            .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
        let a: f64 = a.trim().parse().map_err(|e| format!("bad start: {e}"))?;
        let b: f64 = b.trim().parse().map_err(|e| format!("bad end: {e}"))?;
        if !(a.is_finite() && b.is_finite() && dt.is_finite()) || a < 0.0 || b < a || dt <= 0.0 {
            return Err(format!("need 0 <= a <= b and dt > 0, got {s:?}"));
        }
        let n = ((b - a) / dt + 1e-9).floor() as usize;
        Ok(TimeRange((0..=n).map(|i| a + i as f64 * dt).collect()))
    }
}

enum Failure {
    Lib(Error),
    Io(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn load_graph(source: &str) -> Result<Graph, Failure> {
    if Graph::is_generator_spec(source) {
        return Ok(Graph::from_generator(source)?);
    }
    let text =
        std::fs::read_to_string(source).map_err(|e| Failure::Io(format!("{source}: {e}")))?;
    Ok(Graph::parse_edge_list(&text)?)
}

fn emit(out: Option<&PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn json_text(mut v: serde_json::Value) -> String {
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("json serializes");
    s.push('\n');
    s
}

fn csv_field(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Null => String::new(),
        serde_json::Value::Number(n) => match n.as_u64() {
            Some(u) => u.to_string(),
            None => fmt_sig6(n.as_f64().unwrap_or(f64::NAN)),
        },
        serde_json::Value::String(s) => csv_quote(s),
        serde_json::Value::Array(a) => a.iter().map(csv_field).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn decide(source: &str, cap_l: usize, out: &OutArgs) -> Result<(), Failure> {
    let g = load_graph(source)?;
    let mut report = serde_json::Map::new();
    report.insert("graph".into(), json!(source));
    report.insert("n_vertices".into(), json!(g.n_vertices()));
    report.insert("n_edges".into(), json!(g.n_edges()));

    match extend(&g) {
        Err(Error::TooManyVertices { .. }) => {
            report.insert("graceful".into(), json!(false));
            report.insert("reason".into(), json!("e + 1 < N: not enough labels"));
        }
        Err(e) => return Err(e.into()),
        Ok(a) => {
            let params = EncodingParams::for_adjacency(&a)?;
            let opts = EnumerationOptions {
                cap_l,
                ..Default::default()
            };
            let rep = enumerate_degeneracy_with(&a, &params, &opts)?;
            report.insert("l_total".into(), json!(params.l_total));
            report.insert("min_cost".into(), json!(rep.min_cost));
            report.insert("d_count".into(), json!(rep.d_count));
            report.insert("graceful".into(), json!(rep.graceful()));

            if g.n_edges() <= ORACLE_MAX_EDGES {
                let oracle = brute_force_graceful(&g)?;
                if oracle.graceful != rep.graceful()
                    || (oracle.graceful && oracle.labelling_count != rep.d_count)
                {
                    return Err(Error::InvalidArgument(format!(
                        "oracle ({} labellings) disagrees with enumeration (D = {}, min cost {})",
                        oracle.labelling_count, rep.d_count, rep.min_cost
                    ))
                    .into());
                }
                report.insert(
                    "oracle_labelling_count".into(),
                    json!(oracle.labelling_count),
                );
                report.insert(
                    "witness_labels".into(),
                    json!(oracle.witness.as_ref().map(|w| w.labels().to_vec())),
                );
            }
        }
    }

    let report = serde_json::Value::Object(report);
    let body = match out.format {
        Format::Json => json_text(report),
        Format::Csv => {
            let obj = report.as_object().expect("object");
            let keys: Vec<&String> = obj.keys().collect();
            let vals: Vec<String> = obj.values().map(csv_field).collect();
            format!(
                "{}\n{}\n",
                keys.iter()
                    .map(|k| k.as_str())
                    .collect::<Vec<_>>()
                    .join(","),
                vals.join(",")
            )
        }
    };
    emit(out.out.as_ref(), &body)
}

fn problem_hamiltonian(
    source: &str,
    cap_l: usize,
) -> Result<graceful_aqc::hamiltonian::DiagonalHamiltonian, Failure> {
    let g = load_graph(source)?;
    let a = extend(&g)?;
    let params = EncodingParams::for_adjacency(&a)?;
    Ok(build_problem_diagonal_capped(&a, &params, cap_l)?)
}

fn simulate(
    source: &str,
    times: &[f64],
    target: f64,
    step: Option<f64>,
    cap_l: usize,
    out: &OutArgs,
) -> Result<(), Failure> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::InvalidArgument(format!("target {target} outside [0, 1]")).into());
    }
    let cap = cap_l.min(DYNAMICS_CAP);
    let hp = problem_hamiltonian(source, cap)?;
    let step = step.unwrap_or_else(|| default_step(&hp));
    let sweep = sweep_times(&hp, times, target, step)?;

    let body = match out.format {
        Format::Json => json_text(json!({
            "graph": source,
            "l_total": hp.n_qubits(),
            "step": step,
            "target": target,
            "interpolated_t_prime": sweep.interpolated_t,
            "points": sweep.points,
        })),
        Format::Csv => {
            let mut s = sweep_csv(&sweep);
            let _ = writeln!(
                s,
                "# interpolated_t_prime,{}",
                sweep.interpolated_t.map_or_else(|| "none".into(), fmt_sig6)
            );
            s
        }
    };
    emit(out.out.as_ref(), &body)
}

fn spectrum_cmd(
    source: &str,
    levels: usize,
    grid: usize,
    cap_l: usize,
    out: &OutArgs,
) -> Result<(), Failure> {
    if grid < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 points".into()).into());
    }
    let hp = problem_hamiltonian(source, cap_l.min(ITERATIVE_MAX_QUBITS))?;
    let trace = spectrum(&hp, &uniform_grid(grid), levels)?;
    let body = match out.format {
        Format::Csv => spectrum_csv(&trace),
        Format::Json => json_text(serde_json::to_value(&trace).expect("trace serializes")),
    };
    emit(out.out.as_ref(), &body)
}

fn pauli(source: &str, cap_l: usize, out: Option<&PathBuf>) -> Result<(), Failure> {
    let hp = problem_hamiltonian(source, cap_l)?;
    let expansion = pauli_z_expansion_capped(&hp, cap_l)?;
    emit(out, &expansion.to_json_lines())
}

fn parse_points(text: &str) -> Result<Vec<(f64, f64)>, Error> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (l, t) = p
                .split_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("expected L:T, got {p:?}")))?;
            let l = l.trim().parse::<f64>();
            let t = t.trim().parse::<f64>();
            match (l, t) {
                (Ok(l), Ok(t)) if l.is_finite() && t.is_finite() => Ok((l, t)),
                _ => Err(Error::InvalidArgument(format!("non-numeric point {p:?}"))),
            }
        })
        .collect()
}

fn fit(points: &str, out: &OutArgs) -> Result<(), Failure> {
    let pts = parse_points(points)?;
    let f = fit_quadratic(&pts)?;
    let body = match out.format {
        Format::Json => json_text(serde_json::to_value(&f).expect("fit serializes")),
        Format::Csv => format!(
            "a,b,c,r_squared\n{},{},{},{}\n",
            fmt_sig6(clean_zero(f.a)),
            fmt_sig6(clean_zero(f.b)),
            fmt_sig6(clean_zero(f.c)),
            fmt_sig6(f.r_squared)
        ),
    };
    emit(out.out.as_ref(), &body)
}

fn reproduce_cmd(table: Table, opts: &ReproduceOptions, out: &OutArgs) -> Result<(), Failure> {
    let report = reproduce(table, opts);
    let body = match out.format {
        Format::Json => json_text(report.to_json()),
        Format::Csv => {
            let mut s = String::from(
                "name,generator,l_total,reference_d,computed_d,reference_t_prime,computed_t_prime,t_tolerance,status\n",
            );
            let opt = |x: Option<f64>| x.map_or_else(String::new, fmt_sig6);
            for r in &report.rows {
                let status = serde_json::to_value(r.status).expect("status serializes");
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    csv_quote(&r.name),
                    r.generator.as_deref().unwrap_or(""),
                    r.l_total,
                    r.reference_d,
                    r.computed_d.map_or_else(String::new, |d| d.to_string()),
                    opt(r.reference_t_prime),
                    opt(r.computed_t_prime),
                    opt(r.t_tolerance),
                    status.as_str().unwrap_or("")
                );
            }
            s
        }
    };
    emit(out.out.as_ref(), &body)?;
    for r in report.rows.iter().filter(|r| r.status != RowStatus::Pass) {
        eprintln!(
            "{}: {:?}{}",
            r.name,
            r.status,
            r.note
                .as_ref()
                .map_or_else(String::new, |n| format!(" ({n})"))
        );
    }
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Decide { graph, cap_l, out } => decide(&graph.graph, cap_l, &out),
        Command::Simulate {
            graph,
            times,
            target,
            step,
            cap_l,
            out,
        } => simulate(&graph.graph, &times.0, target, step, cap_l, &out),
        Command::Spectrum {
            graph,
            levels,
            grid,
            cap_l,
            out,
        } => spectrum_cmd(&graph.graph, levels, grid, cap_l, &out),
        Command::Pauli { graph, cap_l, out } => pauli(&graph.graph, cap_l, out.as_ref()),
        Command::Fit { points, out } => fit(&points, &out),
        Command::Reproduce {
            table,
            times,
            target,
            step,
            out,
        } => {
            let opts = ReproduceOptions {
                times: times.0,
                target,
                step,
                ..Default::default()
            };
            reproduce_cmd(table, &opts, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => {
            eprintln!("error: reproduction mismatch");
            ExitCode::from(EXIT_MISMATCH)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::CapExceeded { .. } => ExitCode::from(EXIT_CAP),
                Error::IntegrationAccuracy { .. } => ExitCode::FAILURE,
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}
