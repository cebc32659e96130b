use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use leafgauge_cli::fixture::Fixture;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn leafgauge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leafgauge"))
        .args(args)
        .output()
        .expect("run leafgauge")
}

fn code(args: &[&str]) -> i32 {
    leafgauge(args).status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_poly_reports_levi_flatness() {
    let out = leafgauge(&["check-poly", path_str(&fixture("pzw.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("levi_det: ZERO"));

    let out = leafgauge(&["check-poly", path_str(&fixture("ball.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("levi_det: 1"));
    assert!(stdout(&out).contains("degree: FAIL"));
}

#[test]
fn point_flag_overrides_fixture() {
    let pz4 = fixture("pz4.json");
    assert_eq!(code(&["check-poly", path_str(&pz4)]), 0);
    assert_eq!(
        code(&["check-poly", path_str(&pz4), "--point", "0,0,1,0"]),
        2
    );
    assert_eq!(
        code(&["check-poly", path_str(&pz4), "--point=-1,0.5,0.2,0"]),
        0
    );
}

#[test]
fn derive_field_prints_both_candidates() {
    let out = leafgauge(&["derive-field", path_str(&fixture("pzw.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("V1 = (-z*wbar, w*wbar)"), "{text}");
    assert!(text.contains("V2 = (-z*zbar, zbar*w)"), "{text}");
    assert!(text.contains("selected at point: V1"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let pzw = fixture("pzw.json");
    assert_eq!(code(&["build-gauge", path_str(&pzw), "--samples", "10"]), 0);
    assert_eq!(code(&["build-gauge", path_str(&fixture("ball.json"))]), 2);
    assert_eq!(
        code(&[
            "build-gauge",
            path_str(&fixture("pz4_on_harmonic_line.json"))
        ]),
        2
    );
    assert_eq!(
        code(&[
            "build-gauge",
            path_str(&fixture("field_nonintegrable.json"))
        ]),
        2
    );
    // no root can meet this residual, so every sample is skipped
    assert_eq!(
        code(&[
            "build-gauge",
            path_str(&pzw),
            "--samples",
            "10",
            "--tol-root",
            "1e-300"
        ]),
        3
    );

    assert_eq!(
        code(&["build-gauge", path_str(&dir.path().join("missing.json"))]),
        4
    );
    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"polynomial\": [").unwrap();
    assert_eq!(code(&["build-gauge", path_str(&broken)]), 4);
    assert_eq!(code(&["build-gauge", path_str(&pzw), "--point", "1,2"]), 4);
    assert_eq!(
        code(&["build-gauge", path_str(&pzw), "--chart-radius", "2"]),
        4
    );
    assert_eq!(code(&["build-gauge"]), 4);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn saved_records_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let record = dir.path().join("run.json");
    let field = fixture("field_linear.json");
    let args = [
        "build-gauge",
        path_str(&field),
        "--samples",
        "10",
        "--seed",
        "7",
    ];
    let out = leafgauge(&[&args[..], &["--out", path_str(&record)]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("overall: pass"));

    let out = leafgauge(&["verify", path_str(&record)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("matches saved report"));

    let again = dir.path().join("again.json");
    assert_eq!(
        code(&["verify", path_str(&record), "--out", path_str(&again)]),
        0
    );
    assert_eq!(fs::read(&record).unwrap(), fs::read(&again).unwrap());

    let json = leafgauge(&["verify", path_str(&record), "--json"]);
    assert_eq!(json.stdout, fs::read(&record).unwrap());

    // a different seed is a fresh run, not a comparison
    assert_eq!(code(&["verify", path_str(&record), "--seed", "8"]), 0);

    let text = fs::read_to_string(&record).unwrap();
    let tampered = dir.path().join("tampered.json");
    fs::write(
        &tampered,
        text.replacen("\"samples\": 10", "\"samples\": 11", 1),
    )
    .unwrap();
    assert_eq!(code(&["verify", path_str(&tampered)]), 3);

    // a plain fixture can be verified too
    assert_eq!(
        code(&["verify", path_str(&fixture("pz4.json")), "--samples", "10"]),
        0
    );
}

#[test]
fn grid_dump() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("grid.csv");
    let out = leafgauge(&[
        "build-gauge",
        path_str(&fixture("pz4.json")),
        "--samples",
        "5",
        "--degree",
        "2",
        "--grid-csv",
        path_str(&csv),
        "--grid-size",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re_z,im_z,re_w,im_w,T,g"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 16);
    for r in rows {
        // g = (Re z)^2 and T = 1 / Re z for this fixture
        assert!((r[5] - r[0] * r[0]).abs() < 1e-9, "{r:?}");
        assert!((r[4] * r[0] - 1.0).abs() < 1e-9, "{r:?}");
    }
}

#[test]
fn trace_leaf_stays_on_the_leaf() {
    let out = leafgauge(&[
        "trace-leaf",
        path_str(&fixture("field_nonholomorphic.json")),
        "--grid",
        "5x5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s1,s2,re_z,im_z,re_w,im_w"));
    let mut count = 0;
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        // z w is constant on the leaves
        let (re, im) = (v[2] * v[4] - v[3] * v[5], v[2] * v[5] + v[3] * v[4]);
        assert!((re - 1.0).abs() < 1e-8 && im.abs() < 1e-8, "{line}");
        count += 1;
    }
    assert_eq!(count, 25);
    assert_eq!(
        code(&[
            "trace-leaf",
            path_str(&fixture("pzw.json")),
            "--grid",
            "5x4"
        ]),
        4
    );
}

#[test]
fn fixtures_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        let a = Fixture::load(&path).unwrap();
        let copy = dir.path().join(path.file_name().unwrap());
        fs::write(&copy, a.to_json()).unwrap();
        let b = Fixture::load(&copy).unwrap();
        assert_eq!(a.poly().unwrap(), b.poly().unwrap(), "{}", path.display());
        assert_eq!(
            a.vector_field().unwrap(),
            b.vector_field().unwrap(),
            "{}",
            path.display()
        );
        assert_eq!(a.point, b.point);
        assert_eq!(a.n, b.n);
    }
}
