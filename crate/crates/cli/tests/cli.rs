use std::path::Path;
use std::process::{Command, Output};

fn pjlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pjlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn leading_moment_at_t_zero_is_one_sixth() {
    let o = pjlab(&["moments", "--t", "0", "--nmax", "2", "--kmax", "3"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let (k, mu, agree) = (column(&h, "k"), column(&h, "mu"), column(&h, "route_agreement"));
    let first = rows.iter().find(|r| r[k] == "0").unwrap();
    let v: f64 = first[mu].parse().unwrap();
    assert!((v - 1.0 / 6.0).abs() < 1e-15);
    assert!(first[mu].starts_with("1.66666666666666666666666666"));
    assert!(first[agree].is_empty());
}

#[test]
fn route_agreement_is_reported_for_positive_t() {
    let o = pjlab(&["moments", "--t", "1", "--nmax", "2", "--kmax", "4"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let (k, shift, agree) = (column(&h, "k"), column(&h, "shift"), column(&h, "route_agreement"));
    let unshifted: Vec<_> = rows.iter().filter(|r| r[shift] == "(0,0)").collect();
    assert_eq!(unshifted.len(), 6);
    // the Kummer route starts at k = 0
    for r in unshifted {
        if r[k] == "-1" {
            assert!(r[agree].is_empty());
            continue;
        }
        let a: f64 = r[agree].parse().unwrap();
        assert!(a <= 1.0, "{a}");
    }
}

#[test]
fn invalid_configuration_exits_with_two() {
    assert_eq!(code(&pjlab(&["moments", "--t", ""])), 2);
    assert_eq!(code(&pjlab(&["moments", "--alpha", "-3"])), 2);
    assert_eq!(code(&pjlab(&["verify", "--tol", "nonsense"])), 2);
    assert_eq!(code(&pjlab(&["sweep", "--svg", "alpha"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "alpha = 1\nunknown = 3\n").unwrap();
    assert_eq!(code(&pjlab(&["moments", "--config", cfg.to_str().unwrap()])), 2);
    let missing = dir.path().join("no/such/dir/out.csv");
    assert_eq!(code(&pjlab(&["moments", "--nmax", "1", "--out", missing.to_str().unwrap()])), 2);
}

#[test]
fn small_verify_passes_and_reports_schema() {
    let o = pjlab(&["verify", "--nmax", "3", "--t", "0,1", "--suites", "difference,recurrence,t0,toda"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["summary"]["fail"], 0);
    assert!(v["rows"].as_array().unwrap().len() > 10);
}

#[test]
fn impossible_stencil_tolerance_exits_with_one() {
    let o = pjlab(&["verify", "--nmax", "2", "--t", "1", "--suites", "toda", "--tol", "stencil=1e-200"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn suite_filter_at_t_zero_emits_only_those_reports() {
    let o = pjlab(&["verify", "--nmax", "3", "--t", "0", "--suites", "t0", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let suite = column(&h, "suite");
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[suite] == "t0"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# sweep setup\nt = 0, 0.5\nnmax = 5\nalpha = 2\n").unwrap();
    let o = pjlab(&["sweep", "--config", cfg.to_str().unwrap(), "--nmax", "1"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 4);
    let (n, t, a) = (column(&h, "n"), column(&h, "t"), column(&h, "alpha_n"));
    // alpha_0(0) = (alpha + 1) / (alpha + beta + 2) = 3/5
    let r = rows.iter().find(|r| r[n] == "0" && r[t].parse::<f64>().unwrap() == 0.0).unwrap();
    assert!((r[a].parse::<f64>().unwrap() - 0.6).abs() < 1e-15);
}

#[test]
fn sweep_matches_closed_forms_at_t_zero() {
    let o = pjlab(&["sweep", "--t", "0,1", "--nmax", "4", "--alpha", "1.5", "--beta", "0.5"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let (n, t, a, hh) = (column(&h, "n"), column(&h, "t"), column(&h, "alpha_n"), column(&h, "H_n"));
    let (al, be) = (1.5f64, 0.5f64);
    for r in &rows {
        let k: f64 = r[n].parse().unwrap();
        if k == 0.0 {
            assert_eq!(r[hh].parse::<f64>().unwrap(), 0.0);
        }
        if r[t].parse::<f64>().unwrap() == 0.0 {
            let s = 2.0 * k + al + be;
            let want = 0.5 + (al * al - be * be) / (2.0 * s * (s + 2.0));
            assert!((r[a].parse::<f64>().unwrap() - want).abs() < 1e-14, "n = {k}");
        }
    }
}

#[test]
fn svg_points_follow_t_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = pjlab(&["sweep", "--t", "2,0.5,1", "--nmax", "1", "--svg", "beta", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let svg = read(&dir.path().join("sweep.beta.svg"));
    assert!(svg.starts_with("<svg"));
    let line = svg.lines().find(|l| l.contains("<polyline")).unwrap();
    let pts = line.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    let xs: Vec<f64> = pts.split_whitespace().map(|p| p.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(xs.len(), 3);
    assert!(xs.windows(2).all(|w| w[0] < w[1]), "{xs:?}");
}

#[test]
fn output_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let args = ["verify", "--nmax", "2", "--t", "0.5", "--suites", "ladder,ortho", "--out", p.to_str().unwrap()];
        assert_eq!(code(&pjlab(&args)), 0);
        std::fs::read(p).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn p3limit_reports_decay() {
    let o = pjlab(&["p3limit", "--beta-values", "1e3,1e4", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let id = column(&h, "identity");
    assert!(rows.iter().any(|r| r[id] == "painleve-iii-decay"));
    assert_eq!(code(&pjlab(&["p3limit", "--beta-values", "1e4,1e3"])), 2);
}
