use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_sharp-ineq");

fn run(dir: &Path, cmd: &str, config: &str, extra: &[&str]) -> Output {
    let path = dir.join("config.json");
    std::fs::write(&path, config).unwrap();
    Command::new(BIN).arg(cmd).arg("--config").arg(&path).args(extra).output().unwrap()
}

fn repo_config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const CONSTANT: &str =
    r#"{"space": {"kind": "continuum", "d": 2, "m": 0}, "modulus": {"kind": "power", "alpha": 1}, "h": [1]}"#;

#[test]
fn constant_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "constant", CONSTANT, &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "d,m,alpha_or_modulus,h,mu,ball_integral,ratio,method,error_bound\n2,0,1,1,4,2.66666666667,0.666666666667,closed_form,0\n");
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"space": {"kind": "continuum", "d": 1}, "modulus": {"kind": "power", "alpha": 1}, "h": []}"#,
        r#"{"space": {"kind": "continuum", "d": 1}, "modulus": {"kind": "power", "alpha": 1}}"#,
        r#"{"space": {"kind": "continuum", "d": 1}, "modulus": {"kind": "power", "alpha": 1}, "h": [1], "colour": 3}"#,
        r#"{"space": {"kind": "continuum", "d": 1}, "modulus": {"kind": "power", "alpha": 2}, "h": [1]}"#,
        r#"{"space": {"kind": "lattice", "d": 1}, "modulus": {"kind": "power", "alpha": 1}, "h": [1]}"#,
        "not json",
    ];
    for c in cases {
        let o = run(dir.path(), "constant", c, &[]);
        assert_eq!(o.status.code(), Some(2), "{c}");
        assert!(o.stdout.is_empty());
    }
    let o = run(
        dir.path(),
        "verify",
        r#"{"theorem": "landau", "space": {"kind": "continuum", "d": 1}, "modulus": {"kind": "power", "alpha": 1}, "h": [1]}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(BIN).args(["constant", "--config", "/nonexistent/config.json"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), "oracle", CONSTANT, &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn quadrature_section() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        "constant",
        r#"{"space": {"kind": "continuum", "d": 2}, "modulus": {"kind": "power", "alpha": 0.5}, "h": [1], "quadrature": {"method": "radial_1d", "abs_tol": 1e-12, "rel_tol": 1e-12}}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[7], "radial_1d");
    assert!((row[5].parse::<f64>().unwrap() - 3.2).abs() < 1e-10, "{out}");
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        "verify",
        r#"{"theorem": ["nagy", "mixed_additive"], "space": [{"kind": "continuum", "d": 1, "m": 0}, {"kind": "continuum", "d": 3, "m": 2}], "modulus": {"kind": "power", "alpha": 1}, "h": [1]}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("\nnagy,1,0,1,1,1,0.5,0.5,0,equality\n"), "{out}");
    assert!(out.contains("\nmixed_additive,3,2,1,1,1,0.75,1,0.75,holds\n"), "{out}");
}

#[test]
fn verify_with_suites() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        "verify",
        r#"{"theorem": "lemma1", "space": {"kind": "lattice", "d": 1}, "modulus": {"kind": "power", "alpha": 1}, "h": [1.5], "trials": 50, "seeds": [3, 4]}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let tables: Vec<&str> = out.split("\n\n").collect();
    assert_eq!(tables.len(), 2);
    assert!(tables[0].ends_with("lhs=2/3 rhs1=2/3 rhs2=0 gap=0"), "{out}");
    assert!(tables[1].starts_with("theorem_id,d,m,alpha_or_modulus,seed,trials,violations,min_gap,worst_case_spec\n"));
    assert_eq!(tables[1].lines().count(), 3);
    let o = run(
        dir.path(),
        "verify",
        r#"{"theorem": "lemma1", "space": {"kind": "lattice", "d": 1}, "modulus": {"kind": "power", "alpha": 1}, "h": [1.5], "trials": 50, "seeds": [3, 4]}"#,
        &["--seed", "9"],
    );
    assert_eq!(stdout(&o).split("\n\n").nth(1).unwrap().lines().count(), 2);
}

#[test]
fn json_format_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.json");
    let o = run(dir.path(), "constant", CONSTANT, &["--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let row = &v["constants"][0];
    assert_eq!(row["mu"], 4.0);
    assert_eq!(row["d"], 2);
    assert!((row["ratio"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn output_section_of_config() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("table.json");
    let cfg = format!(
        r#"{{"space": {{"kind": "continuum", "d": 1}}, "modulus": {{"kind": "power", "alpha": 1}}, "h": [2], "output": {{"path": {:?}, "format": "json"}}}}"#,
        target.to_str().unwrap()
    );
    let o = run(dir.path(), "constant", &cfg, &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&target).unwrap().contains("\"constants\""));
    let o = run(dir.path(), "constant", &cfg, &["--format", "csv", "--out", "-"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "d,m,alpha_or_modulus,h,mu,ball_integral,ratio,method,error_bound\n1,0,1,2,4,4,1,closed_form,0\n"
    );
}

#[test]
fn stechkin_rows() {
    let o = Command::new(BIN).args(["stechkin", "--config"]).arg(repo_config("stechkin.json")).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "d,m,alpha_or_modulus,n,h,e_n\n1,0,1,0.5,1,0.5\n1,0,1,1,0.5,0.25\n1,0,1,2,0.25,0.125\n");
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        "stechkin",
        r#"{"space": {"kind": "lattice", "d": 1}, "modulus": {"kind": "power", "alpha": 1}, "n": [1]}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_output_independent_of_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{
        "trials": 40,
        "seeds": [1, 2],
        "suites": [
            {"theorem": "nagy", "space": {"kind": "lattice", "d": 2}, "modulus": {"kind": "power", "alpha": 0.5}, "h": [1.5, 2.5]},
            {"theorem": "mixed_additive", "space": {"kind": "continuum", "d": 1, "m": 1}, "modulus": {"kind": "power", "alpha": 0.5}, "h": [0.5, 1]},
            {"theorem": "sobolev", "space": {"kind": "lattice", "d": 1}, "modulus": {"kind": "power", "alpha": 1}, "h": [2.5], "trials": 10}
        ],
        "cross_checks": [{"op": "split_point", "modulus": {"kind": "power", "alpha": 1}, "h": 1, "d": 1, "samples": 10000}]
    }"#;
    let path = dir.path().join("config.json");
    std::fs::write(&path, cfg).unwrap();
    let outputs: Vec<Vec<u8>> = ["1", "3", "8"]
        .iter()
        .map(|n| {
            let o = Command::new(BIN)
                .arg("oracle")
                .arg("--config")
                .arg(&path)
                .env("SHARP_INEQ_THREADS", n)
                .output()
                .unwrap();
            assert_eq!(o.status.code(), Some(0));
            o.stdout
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert_eq!(text.split("\n\n").next().unwrap().lines().count(), 7);
    assert!(text.contains("\nsobolev,1,0,1,1,10,0,"));
}
