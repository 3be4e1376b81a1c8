//! End-to-end runs of the `spherecap` binary.

use std::path::Path;
use std::process::{Command, Output};

fn spherecap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spherecap"))
        .args(args)
        .output()
        .expect("spawn spherecap")
}

/// Metadata line, header, and rows of a CSV output.
fn parse(text: &str) -> (String, Vec<String>, Vec<Vec<String>>) {
    let (meta, body) = text.split_once('\n').expect("metadata line");
    assert!(meta.starts_with("# spherecap "), "metadata: {meta}");
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (meta.to_string(), header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s:?}"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn table_first_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.csv");
    let o = spherecap(&["table", "--n-range", "1..3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (meta, header, rows) = parse(&read(&out));
    assert!(meta.contains("quadrature(") && meta.contains("seed=none"));
    assert_eq!(
        header,
        [
            "n",
            "rbar",
            "rbar_over_sqrt_n",
            "sqrt_n",
            "residual",
            "method",
            "iterations",
            "error"
        ]
    );
    assert_eq!(rows.len(), 3);
    for (row, (n, want)) in rows.iter().zip([(1, 1.6659), (2, 2.4561), (3, 3.0636)]) {
        assert_eq!(row[0], n.to_string());
        assert!((num(&row[1]) - want).abs() < 5e-3, "n={n}: {}", row[1]);
        assert_eq!(row[5], "quad");
        assert!(row[7].is_empty());
    }
    assert!((num(&rows[0][2]) - 1.666).abs() < 1e-3);
}

#[test]
fn quadrature_output_is_byte_identical() {
    let a = spherecap(&["table", "--n", "1"]);
    let b = spherecap(&["table", "--n", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn monte_carlo_output_is_byte_identical_per_seed() {
    let args = [
        "mmse-curve",
        "--n",
        "2",
        "--radius",
        "1,2",
        "--method",
        "mc",
        "--seed",
        "11",
        "--samples",
        "50000",
    ];
    let a = spherecap(&args);
    let b = spherecap(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("seed=11"));
    let mut other = args;
    other[7] = "12";
    assert_ne!(spherecap(&other).stdout, a.stdout);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["table", "--n-range", "3..1"],
        vec!["table", "--n-range", "0..2"],
        vec!["table", "--n-range", "1..65"],
        vec!["table"],
        vec!["table", "--n", "1", "--method", "mc"],
        vec!["profile", "--n", "1", "--radius", "1", "--grid", "8"],
        vec!["profile", "--n", "1", "--radius", "-1"],
        vec!["table", "--n", "1", "--rel-tol", "0"],
        vec!["frobnicate"],
    ] {
        let o = spherecap(&args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn mmse_table_rows() {
    let o = spherecap(&["mmse-table", "--n", "10"]);
    assert!(o.status.success());
    let (_, header, rows) = parse(&stdout(&o));
    assert_eq!(header, ["n", "rbar", "rbar_mmse", "sqrt_n", "error"]);
    let r = &rows[0];
    assert!((num(&r[2]) - 3.5848).abs() < 5e-3);
    assert!(num(&r[2]) < num(&r[1]));

    let o = spherecap(&["mmse-table", "--n", "1"]);
    let (_, _, rows) = parse(&stdout(&o));
    assert!((num(&rows[0][2]) - 1.0582).abs() < 5e-3);
    assert!(num(&rows[0][2]) > num(&rows[0][3]));
}

#[test]
fn profile_phase_around_threshold() {
    let i0_minus_ir = |radius: &str| {
        let o = spherecap(&["profile", "--n", "1", "--radius", radius, "--grid", "16"]);
        assert!(o.status.success());
        let (_, header, rows) = parse(&stdout(&o));
        assert_eq!(header, ["xnorm", "i_x", "i_R_minus_i_x"]);
        assert_eq!(rows.len(), 16);
        assert_eq!(num(&rows[0][0]), 0.0);
        assert_eq!(rows[15][0], radius);
        -num(&rows[0][2])
    };
    assert!(i0_minus_ir("1.665925641").abs() < 1e-5);
    assert!(i0_minus_ir("1.64") < 0.0);
    assert!(i0_minus_ir("1.67") > 0.0);
}

#[test]
fn profile_in_bits() {
    let nats = spherecap(&["profile", "--n", "2", "--radius", "2", "--grid", "16"]);
    let bits = spherecap(&["profile", "--n", "2", "--radius", "2", "--grid", "16", "--base", "bits"]);
    let (_, _, a) = parse(&stdout(&nats));
    let (meta, _, b) = parse(&stdout(&bits));
    assert!(meta.contains("base=bits"));
    let ratio = num(&a[3][1]) / num(&b[3][1]);
    assert!((ratio - std::f64::consts::LN_2).abs() < 1e-10);
}

#[test]
fn mmse_curve_rows() {
    let o = spherecap(&["mmse-curve", "--n", "2", "--radius", "0.01,3"]);
    assert!(o.status.success());
    let (_, header, rows) = parse(&stdout(&o));
    assert_eq!(header, ["R", "mmse_sphere", "mmse_gaussian", "error"]);
    let (sphere, gauss) = (num(&rows[0][1]), num(&rows[0][2]));
    assert!((sphere / 1e-4 - 1.0).abs() < 0.02 && (gauss / 1e-4 - 1.0).abs() < 0.02);
    assert!((num(&rows[1][2]) - 1.63636).abs() < 1e-5);

    let o = spherecap(&["mmse-curve", "--n", "1", "--radius", "2"]);
    let (_, _, rows) = parse(&stdout(&o));
    assert!(num(&rows[0][1]) < num(&rows[0][2]));

    let o = spherecap(&["mmse-curve", "--n", "3", "--grid", "5"]);
    let (_, _, rows) = parse(&stdout(&o));
    assert_eq!(rows.len(), 5);
}

#[test]
fn asymptotic_constants() {
    let o = spherecap(&["asymptotic"]);
    assert!(o.status.success());
    let (_, _, rows) = parse(&stdout(&o));
    let get = |k: &str| num(&rows.iter().find(|r| r[0] == k).unwrap()[1]);
    assert!((get("c") - 1.860935682).abs() < 1e-6);
    assert!((get("mmse_limit") - 1.15096).abs() < 1e-5);
    assert!((get("n_sufficient") - 1.892).abs() < 0.01);
}

#[test]
fn solve_threshold() {
    let o = spherecap(&["solve", "--n", "1", "--kind", "tanh"]);
    assert!(o.status.success());
    let (_, _, rows) = parse(&stdout(&o));
    assert!((num(&rows[0][2]) - 1.665925641).abs() < 1e-6);
    assert_eq!(
        spherecap(&["solve", "--n", "2", "--kind", "tanh"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_fast_passes() {
    let o = spherecap(&["verify", "fast"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text.contains("PASS"));
    assert!(text.contains("0 failed"));
}
