use std::fs;
use std::net::TcpListener;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SMALL: [&str; 8] = ["-n", "64", "-k", "2", "-N", "20", "-g", "2"];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_warsparse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn small(args: &[&str]) -> Output {
    let mut all: Vec<&str> = SMALL.to_vec();
    all.extend_from_slice(args);
    run(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn stream_reports_at_queries() {
    let dir = TempDir::new().unwrap();
    let t = write(
        &dir,
        "t",
        "Q\n# comment\nU 3 5\nQ\nU 3 -5\nU 10 1\nU 20 1\nU 30 1\nQ\n",
    );
    let o = small(&["stream", &t]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(stdout(&o), "0\n1 3:5\nBOT\n");
    let naive = small(&["--naive", "--memo", "8", "stream", &t]);
    assert_eq!(stdout(&naive), stdout(&o));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad", "U 3 5\nX\n");
    let o = small(&["stream", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains('2'));
    let range = write(&dir, "range", "U 65 1\n");
    assert_eq!(small(&["stream", &range]).status.code(), Some(2));
    assert_eq!(
        small(&["stream", "/nonexistent/trace"]).status.code(),
        Some(2)
    );

    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["attack", "nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let ok = write(&dir, "ok", "Q\n");
    assert_eq!(small(&["--secure", "stream", &ok]).status.code(), Some(3));
    assert_eq!(small(&["-q", "1024", "stream", &ok]).status.code(), Some(3));
    assert_eq!(
        run(&["-n", "8", "-k", "5", "-g", "2", "stream", &ok])
            .status
            .code(),
        Some(3)
    );

    let busy = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = busy.local_addr().unwrap().port().to_string();
    let e = write(&dir, "e", "U 1 1\n");
    assert_eq!(
        small(&["dist", &e, "--transport", "tcp", "--port", &port])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn dist_matches_stream_over_both_transports() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a", "U 1 1\nU 7 3\n");
    let b = write(&dir, "b", "U 1 1\nU 7 -1\n");
    let whole = write(&dir, "w", "U 1 1\nU 7 3\nU 1 1\nU 7 -1\nQ\n");
    let inproc = small(&["dist", &a, &b]);
    let tcp = small(&["dist", &a, &b, "--transport", "tcp"]);
    assert_eq!(
        inproc.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&inproc.stderr)
    );
    assert_eq!(stdout(&inproc), "2 1:2 7:2\n");
    assert_eq!(stdout(&tcp), stdout(&inproc));
    assert_eq!(stdout(&small(&["stream", &whole])), stdout(&inproc));
    assert!(String::from_utf8_lossy(&inproc.stderr).contains("# server=1"));
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn collision_attack_is_rejected_only_with_the_hash() {
    let args = ["-n", "64", "-k", "2", "-g", "2", "--beta", "2", "attack"];
    let mut guarded = args.to_vec();
    guarded.extend(["collision", "--trials", "5"]);
    let o = run(&guarded);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rows = json_lines(&o);
    assert_eq!(rows.len(), 5);
    assert!(rows
        .iter()
        .all(|r| r["rejected"] == true && r["incorrect"] == 0));

    let mut ablated = args.to_vec();
    ablated.extend(["collision-ablation", "--trials", "5"]);
    let o = run(&ablated);
    assert_eq!(o.status.code(), Some(0));
    assert!(json_lines(&o)
        .iter()
        .all(|r| r["incorrect"].as_u64().unwrap() > 0));
}

#[test]
fn oblivious_game_has_no_incorrect_answers() {
    let o = small(&["attack", "oblivious", "--trials", "3", "--rounds", "40"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(json_lines(&o)
        .iter()
        .all(|r| r["incorrect"] == 0 && r["scenario"] == "oblivious"));
}

fn bench_value(text: &str, key: &str) -> u64 {
    let line = text.lines().find(|l| l.starts_with(key)).unwrap();
    line.split_whitespace().nth(1).unwrap().parse().unwrap()
}

#[test]
fn bench_reports_costs() {
    let a = run(&[
        "-n",
        "256",
        "-k",
        "4",
        "-N",
        "50",
        "-g",
        "2",
        "bench",
        "--ks",
        "4,8",
        "--batches",
        "2",
    ]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    let a = stdout(&a);
    assert_eq!(bench_value(&a, "per_update_ct_mults"), 8);
    let b = stdout(&run(&[
        "-n",
        "256",
        "-k",
        "8",
        "-N",
        "50",
        "-g",
        "2",
        "bench",
        "--ks",
        "4",
        "--batches",
        "2",
    ]));
    let seeded = bench_value(&a, "digest_bytes_seeded");
    assert_eq!(seeded, bench_value(&b, "digest_bytes_seeded"));
    assert!(bench_value(&a, "digest_bytes_explicit") > seeded);
}

#[test]
fn gen_is_deterministic_and_replayable() {
    let args = [
        "-n",
        "64",
        "-N",
        "20",
        "--seed",
        "9",
        "gen",
        "--updates",
        "50",
        "--sparsity",
        "2",
        "--query-every",
        "10",
    ];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&run(&args)));
    let text = stdout(&a);
    assert!(text.starts_with("# n=64"));
    assert!(text.trim_end().ends_with('Q'));

    let dir = TempDir::new().unwrap();
    let t = write(&dir, "g", &text);
    let o = small(&["stream", &t]);
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert!(last.starts_with("2 "), "final support is 2: {last}");
    assert_eq!(stdout(&small(&["stream", &t])), stdout(&o));
    assert!(Path::new(&t).exists());
}
