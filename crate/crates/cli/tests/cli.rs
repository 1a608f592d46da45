use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaussian-eof"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no '{key}' line in:\n{text}"))
        .split_whitespace()
        .next()
        .unwrap()
}

fn matrix_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn analyze_first_reference_state() {
    let o = run(&["analyze", "--sf", "1.5,2,1.2,-1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, "LB1"), "0.14635");
    assert_eq!(field(&out, "LB2"), "0.28919");
    assert_eq!(field(&out, "best"), "0.28919");
    assert_eq!(field(&out, "class"), "entangled");
}

#[test]
fn swapped_modes_are_reported() {
    let out = stdout(&run(&["analyze", "--sf", "2,1.5,1.2,-1"]));
    assert!(
        out.contains("1.50000, 2.00000, 1.20000, -1.00000  (modes swapped)"),
        "{out}"
    );
    assert_eq!(field(&out, "LB1"), "0.14635");
}

#[test]
fn rejected_states_exit_2() {
    let o = run(&["analyze", "--sf", "1,1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("separable"));

    let o = run(&["analyze", "--sf", "1,1,0.5,-0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n m - kx^2 >= 1"), "{}", stderr(&o));

    let vacuum = matrix_file("# vacuum\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
    let o = run(&["analyze", "--matrix", vacuum.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("separable"));

    let too_correlated = matrix_file("1 0 0.5 0\n0 1 0 0\n0.5 0 1 0\n0 0 0 1\n");
    let o = run(&["analyze", "--matrix", too_correlated.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unphysical"));
}

#[test]
fn parse_errors_exit_3() {
    for args in [
        vec!["analyze", "--sf", "1,2,3"],
        vec!["analyze", "--sf", "1,2,x,4"],
        vec!["analyze", "--matrix", "/nonexistent/state.txt"],
        vec!["analyze"],
        vec!["analyze", "--sf", "1.5,2,1.2,-1", "--matrix", "m.txt"],
        vec!["check", "--seed", "minus-one"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(3), "{args:?}: {}", stderr(&o));
    }
    let asymmetric = matrix_file("2 0 1.1 0\n0 2 0 -1\n1 0 2 0\n0 -1 0 2\n");
    let o = run(&["analyze", "--matrix", asymmetric.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let short = matrix_file("1 0 0 0\n0 1 0 0\n");
    assert_eq!(
        run(&["analyze", "--matrix", short.path().to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["analyze", "--help"]).status.code(), Some(0));
}

#[test]
fn json_has_stable_keys_and_round_trips() {
    let o = run(&["analyze", "--sf", "1.5,2,1.2,-1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let value: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "class",
            "n",
            "m",
            "kx",
            "kp",
            "lb1",
            "lb2",
            "best",
            "delta",
            "delta_optimized",
            "lb2_degenerate",
            "invariants"
        ]
    );
    assert_eq!(value["class"], "entangled");
    assert_eq!(format!("{}\n", serde_json::to_string_pretty(&value).unwrap()), text);
}

#[test]
fn table_values_are_json_values_rounded() {
    for sf in [
        "1.5,2,1.2,-1",
        "2,3,1.8,-1.2",
        "1.7,2.6,1.3,-0.9",
        "2,2.5,1.3,-1.2",
        "3,3,2.5,-2",
    ] {
        let table = stdout(&run(&["analyze", "--sf", sf]));
        let json: Value = serde_json::from_str(&stdout(&run(&["analyze", "--sf", sf, "--json"]))).unwrap();
        for (line, key) in [
            ("LB1", "lb1"),
            ("LB2", "lb2"),
            ("best", "best"),
            ("delta ", "delta"),
            ("delta_optimized", "delta_optimized"),
        ] {
            let exact = json[key].as_f64().unwrap();
            assert_eq!(field(&table, line), format!("{exact:.5}"), "{sf} {key}");
        }
        assert_eq!(field(&table, "lb2_degenerate"), json["lb2_degenerate"].to_string());
    }
}

#[test]
fn verbose_prints_intermediates() {
    let out = stdout(&run(&["analyze", "--sf", "1.5,2,1.2,-1", "--verbose"]));
    assert!(out.contains("i1=1.5 i2=2 i3=-1.2"), "{out}");
    assert!(out.contains("tan^2 theta"));
    assert!(out.contains("delta (input)"));
}

#[test]
fn scrambled_pure_state_matrix() {
    // Two-mode squeezed vacuum with r = 0.7 after a rotation of mode 1 and a
    // squeeze of mode 2.
    let (c, s) = (1.4f64.cosh(), 1.4f64.sinh());
    let (ct, st) = (0.3f64.cos(), 0.3f64.sin());
    let (a, b) = (1.3f64, 1.0 / 1.3);
    let rows = [
        [c, 0.0, s * ct * a, s * st * b],
        [0.0, c, s * st * a, -s * ct * b],
        [s * ct * a, s * st * a, c * a * a, 0.0],
        [s * st * b, -s * ct * b, 0.0, c * b * b],
    ];
    let text: String = rows
        .iter()
        .map(|r| r.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" ") + "\n")
        .collect();
    let f = matrix_file(&text);
    let o = run(&["analyze", "--matrix", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entropy = {
        let (ch, sh) = (0.7f64.cosh().powi(2), 0.7f64.sinh().powi(2));
        ch * ch.log2() - sh * sh.log2()
    };
    assert!((v["lb1"].as_f64().unwrap() - entropy).abs() < 1e-10, "{v}");
    assert!((v["lb2"].as_f64().unwrap() - entropy).abs() < 1e-10, "{v}");
}

#[test]
fn table1_rows_and_diff() {
    let o = run(&["table1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = |params: &str| -> Vec<String> {
        let line = out.lines().find(|l| l.starts_with(params)).unwrap();
        line[params.len()..].split_whitespace().map(str::to_owned).collect()
    };
    assert_eq!(row("(2, 3, 1.8, -1.2)"), ["0.02448", "0.00681"]);
    assert_eq!(row("(2, 2.5, 1.3, -1.2)"), ["0.00173", "0.00001"]);
    assert_eq!(out.lines().count(), 7);

    let o = run(&["table1", "--diff"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let last = out.lines().last().unwrap();
    assert!(last.starts_with("max absolute deviation"), "{last}");
}

#[test]
fn counterexamples_hold() {
    let o = run(&["counterexamples"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for number in ["0.001728", "0.000909", "0.208853", "0.186205"] {
        assert!(out.contains(number), "{number} missing from\n{out}");
    }
    assert_eq!(out.matches("holds").count(), 2);
}

#[test]
fn check_is_deterministic() {
    let a = run(&["check", "--seed", "11", "--count", "40"]);
    let b = run(&["check", "--seed", "11", "--count", "40"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("all suites passed"));

    let c = run(&["check", "--seed", "12", "--count", "40"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn check_json_and_empty_run() {
    let o = run(&["check", "--count", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("PASS").count(), 3);

    let o = run(&["check", "--seed", "5", "--count", "20", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let suites: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["suite"].as_str().unwrap())
        .collect();
    assert_eq!(suites, ["concavity", "pipeline_equivalence", "local_invariance"]);
    assert!(v.as_array().unwrap().iter().all(|r| r["samples"] == 20));
}
