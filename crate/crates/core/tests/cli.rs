use std::path::PathBuf;
use std::process::{Command, Output};

fn seqchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqchain"))
        .args(args)
        .env_remove("SEQCHAIN_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("seqchain-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn output_is_deterministic() {
    let args = ["fig3", "--n-range", "2:6,20:200:4"];
    let a = seqchain(&args);
    let b = seqchain(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("# config: {\"command\":\"fig3\""));
}

#[test]
fn spectrum_reports_unit_dimension() {
    let o = seqchain(&["spectrum", "--gate", "weyl", "--params", "0.7,pi/2,pi/2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 4);
    assert!(r.iter().all(|row| row[8] == "2" && row[10] == "true"));

    let o = seqchain(&["spectrum", "--gate", "identity"]);
    assert!(rows(&stdout(&o)).iter().all(|row| row[5] == "1" && row[7] == "false"));
}

#[test]
fn ghz_variance_column_is_n_squared() {
    let o = seqchain(&["fig3", "--params", "pi", "--n-range", "2:10"]);
    assert_eq!(o.status.code(), Some(0));
    for row in rows(&stdout(&o)) {
        let n: f64 = row[1].parse().unwrap();
        let v: f64 = row[2].parse().unwrap();
        assert!((v - n * n).abs() < 1e-9 * n * n);
        assert_eq!(row[5], "true");
    }
}

#[test]
fn neff_column_is_cos_squared() {
    let o = seqchain(&[
        "neff",
        "--gate",
        "weyl",
        "--params",
        "0.2:1.2:3,pi/2,pi/2",
        "--bloch",
        "0,1,0",
    ]);
    for row in rows(&stdout(&o)) {
        let a: f64 = row[0].parse().unwrap();
        let v: f64 = row[7].parse().unwrap();
        assert!((v - a.cos().powi(2)).abs() < 1e-10);
    }
}

#[test]
fn correlate_identity_is_constant() {
    let o = seqchain(&["correlate", "--gate", "identity", "--n", "5"]);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 5);
    for row in r {
        assert_eq!(row[1].parse::<f64>().unwrap(), 1.0);
        assert_eq!(row[2].parse::<f64>().unwrap(), 1.0);
    }
}

#[test]
fn squeezing_curve_flags_pairwise_violation() {
    let o = seqchain(&["fig4", "--chi-t", "0.1|0.2|0.9"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r[0][7], "true");
    assert_eq!(r[2][6], "false");
}

#[test]
fn oracle_check_passes_on_seed_sweep() {
    let o = seqchain(&["oracle-check", "--seed", "5", "--count", "4", "--n-range", "2:8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(rows(&stdout(&o)).iter().all(|row| row.last().unwrap() == "true"));
}

#[test]
fn exit_codes() {
    assert_eq!(seqchain(&["spectrum"]).status.code(), Some(2));
    assert_eq!(seqchain(&["spectrum", "--gate", "bogus"]).status.code(), Some(2));
    assert_eq!(
        seqchain(&["spectrum", "--gate", "weyl", "--params", "1,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        seqchain(&["correlate", "--gate", "identity", "--c0", "1", "--c1", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(seqchain(&["fig4", "--chi-t", "2"]).status.code(), Some(2));
    assert_eq!(seqchain(&["oracle-check", "--n-range", "20"]).status.code(), Some(2));
    assert_eq!(
        seqchain(&["oracle-check", "--n-range", "6", "--cap", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(seqchain(&["--no-such-flag"]).status.code(), Some(2));
    assert_eq!(seqchain(&["--help"]).status.code(), Some(0));

    let o = seqchain(&["oracle-check", "--count", "1", "--n-range", "4", "--check-tol", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stdout.is_empty(), "table still written");
}

#[test]
fn gate_files_and_output_directory() {
    let dir = scratch_dir("files");
    let family = dir.join("weyl.json");
    std::fs::write(
        &family,
        r#"{"family": "weyl", "params": [0.7, 1.5707963267948966, 1.5707963267948966]}"#,
    )
    .unwrap();
    let o = seqchain(&["spectrum", "--gate-file", family.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(rows(&stdout(&o)).iter().all(|row| row[5] == "2"));

    let bad = dir.join("bad.json");
    let mut m = vec![vec![[0.0, 0.0]; 4]; 4];
    m[0][0] = [2.0, 0.0];
    std::fs::write(&bad, serde_json::json!({ "matrix": m }).to_string()).unwrap();
    assert_eq!(
        seqchain(&["spectrum", "--gate-file", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(
        seqchain(&["spectrum", "--gate-file", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let status = Command::new(env!("CARGO_BIN_EXE_seqchain"))
        .args(["correlate", "--gate", "identity", "--n", "3", "--out", "sub/c.csv"])
        .env("SEQCHAIN_OUT_DIR", &dir)
        .status()
        .unwrap();
    assert!(status.success());
    let written = std::fs::read_to_string(dir.join("sub/c.csv")).unwrap();
    assert!(written.contains("site,one_point"));
    let _ = std::fs::remove_dir_all(&dir);
}
