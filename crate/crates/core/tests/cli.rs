use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graceful-aqc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn decide_star4() {
    let out = run(&["decide", "--graph", "gen:star:4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["graceful"], true);
    assert_eq!(v["d_count"], 48);
    assert_eq!(v["oracle_labelling_count"], 48);
    assert!(v["witness_labels"].is_array());
}

#[test]
fn decide_c5_not_graceful() {
    let out = run(&["decide", "--graph", "gen:cycle:5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let field = |k: &str| row[header.iter().position(|h| *h == k).unwrap()];
    assert_eq!(field("graceful"), "false");
    assert_eq!(field("d_count"), "1220");
    assert_eq!(field("min_cost"), "2");
}

#[test]
fn decide_reads_edge_list_file() {
    let dir = std::env::temp_dir().join(format!("graceful-aqc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k11.txt");
    std::fs::write(&path, "2 1\n0 1\n").unwrap();
    let out = run(&["decide", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["d_count"], 2);

    std::fs::write(&path, "2 1\n0 x\n").unwrap();
    assert_eq!(
        run(&["decide", "--graph", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn too_many_vertices_is_decided_without_simulation() {
    let dir = std::env::temp_dir().join(format!("graceful-aqc-tmv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.txt");
    std::fs::write(&path, "4 2\n0 1\n2 3\n").unwrap();
    let out = run(&["decide", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["graceful"], false);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["decide", "--graph", "gen:wheel:4"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["decide"]).status.code(), Some(2));
    assert_eq!(
        run(&["decide", "--graph", "gen:star:7", "--cap-l", "20"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["simulate", "--graph", "gen:star:5"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["fit", "--points", "1:1,1:2,2:3"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["reproduce", "table9"]).status.code(), Some(2));
    assert_eq!(
        run(&["simulate", "--graph", "gen:star:2", "--times", "5..1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn simulate_star2_is_deterministic() {
    let args = [
        "simulate",
        "--graph",
        "gen:star:2",
        "--times",
        "0..5",
        "--format",
        "csv",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("t_prime,p_s,norm_drift\n0,0.0625,0\n"));
    let t: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# interpolated_t_prime,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((t - 2.402).abs() <= 0.25);
}

#[test]
fn spectrum_csv_shape() {
    let out = run(&[
        "spectrum",
        "--graph",
        "gen:star:2",
        "--levels",
        "8",
        "--grid",
        "11",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[0].split(',').count(), 9);
    assert!(lines[11].starts_with("1,0,0,0,0,"));
}

#[test]
fn fit_reports_r_squared() {
    let out = run(&["fit", "--points", "2:0,6:2.402,8:3.957,15:11.18"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["r_squared"].as_f64().unwrap() >= 0.99);
}

#[test]
fn pauli_lines_for_k12() {
    let out = run(&["pauli", "--graph", "gen:star:2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 47);
}

#[test]
fn writes_to_out_path() {
    let path = std::env::temp_dir().join(format!("graceful-aqc-fit-{}.csv", std::process::id()));
    let out = run(&[
        "fit",
        "--points",
        "0:0,1:1,2:4",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "a,b,c,r_squared\n1,0,0,1\n");
    std::fs::remove_file(&path).unwrap();
}
