//! CLI acceptance: byte-stable output for identical configuration, the
//! exit-code contract across the catalog, and spec-file round-tripping.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qnm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("qnm-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn criterion_10_determinism_and_exit_codes() {
    // Byte-identical repeated runs.
    let args = [
        "solve",
        "--preset",
        "scarf2-qes-qnm",
        "--alpha",
        "1.0",
        "--c",
        "1.5",
        "--a",
        "1.0",
        "--N",
        "3",
    ];
    let first = qnm(&args);
    let second = qnm(&args);
    assert!(first.status.success());
    let deterministic = first.stdout == second.stdout;

    // Exit-code contract: 0 on success across the whole catalog.
    let catalog = qnm(&["catalog"]);
    assert!(catalog.status.success());
    let ids: Vec<String> = {
        let parsed: serde_json::Value = serde_json::from_slice(&catalog.stdout).unwrap();
        parsed
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p["id"].as_str().unwrap().to_string())
            .collect()
    };
    assert_eq!(ids.len(), 20);
    let mut all_solve = true;
    for id in &ids {
        let out = qnm(&["solve", "--preset", id]);
        all_solve &= out.status.success();
    }

    // 2: invalid input (unknown preset, violated constraint, bad file).
    let code = |out: &Output| out.status.code().unwrap();
    let unknown = code(&qnm(&["solve", "--preset", "zz-none"]));
    let constraint = code(&qnm(&["solve", "--preset", "genpt-qes-qnm", "--a", "1.0", "--N", "1"]));
    let missing = code(&qnm(&["solve", "--spec-file", "/nonexistent/spec.json"]));

    // 3: verification failure (a spec whose balance is broken by hand).
    let bad = temp_path("bad.json");
    std::fs::write(
        &bad,
        r#"{"family":"scarf2","A2":[0.0,1.0],"A1":[1.5008,0.0],"A0":[1.0,1.0],
           "alpha":[1.0,0.0],"beta":[0.0,0.0],"gamma":[1.0,0.0],"N":1}"#,
    )
    .unwrap();
    let verify_fail = code(&qnm(&["verify", "--spec-file", bad.to_str().unwrap()]));

    // 4: higher-type degrees are reported, never generated.
    let higher = temp_path("higher.json");
    std::fs::write(
        &higher,
        r#"{"P": [[0,0],[1,0],[0,0],[2,0]], "Q": [[1,0],[0,0],[1,0]]}"#,
    )
    .unwrap();
    let higher_code = code(&qnm(&["solve", "--spec-file", higher.to_str().unwrap()]));

    let pass = deterministic
        && all_solve
        && unknown == 2
        && constraint == 2
        && missing == 2
        && verify_fail == 3
        && higher_code == 4;
    println!(
        "acceptance criterion 10 (CLI determinism and exit codes): {} \
         (deterministic {deterministic}, catalog solves {all_solve}, codes {unknown}/{constraint}/{missing}/{verify_fail}/{higher_code})",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::fs::remove_file(bad);
    let _ = std::fs::remove_file(higher);
    assert!(pass);
}

#[test]
fn solve_output_round_trips_byte_for_byte() {
    let out_path = temp_path("solve.json");
    let first = qnm(&[
        "solve",
        "--preset",
        "morse-qes-qnm",
        "--b",
        "1.0",
        "--d",
        "1.0",
        "--N",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(first.status.success());
    let first_bytes = std::fs::read(&out_path).unwrap();

    // Re-ingest the document itself (the `spec` field is honored).
    let second = qnm(&["solve", "--spec-file", out_path.to_str().unwrap()]);
    assert!(second.status.success());
    let mut with_newline = second.stdout.clone();
    if with_newline.last() == Some(&b'\n') {
        with_newline.pop();
    }
    assert_eq!(
        first_bytes, with_newline,
        "re-ingested spec must reproduce the document byte for byte"
    );
    let _ = std::fs::remove_file(out_path);
}

#[test]
fn solve_reports_expected_qnm_ladder() {
    let out = qnm(&[
        "solve", "--preset", "scarf2-qnm", "--alpha", "1", "--c", "2", "--d", "0", "--N", "3",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let levels = doc["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    // E_n = 1 - (n+1/2)^2 - 2i(n+1/2) as a set.
    for n in 0..4usize {
        let ef = n as f64 + 0.5;
        let expect = (1.0 - ef * ef, -2.0 * ef);
        let found = levels.iter().any(|l| {
            let e = l["E"].as_array().unwrap();
            (e[0].as_f64().unwrap() - expect.0).abs() < 1e-10
                && (e[1].as_f64().unwrap() - expect.1).abs() < 1e-10
        });
        assert!(found, "missing E_{n}");
    }
    assert!(levels
        .iter()
        .all(|l| l["mode_class"].as_str().unwrap() == "decaying-qnm"));
}

#[test]
fn scarf1_with_a2_solves_to_non_normalizable() {
    let out = qnm(&["solve", "--preset", "scarf1", "--N", "1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["normalizability"].as_str().unwrap(), "non-normalizable");
}

#[test]
fn potential_emits_full_precision_csv_and_terms() {
    let out = qnm(&[
        "potential",
        "--preset",
        "scarf2-exact",
        "--grid-points",
        "101",
        "--x-lo",
        "-2.0",
        "--x-hi",
        "2.0",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,V");
    let row_count = lines.clone().count();
    assert_eq!(row_count, 101);
    let first = lines.next().unwrap();
    let v: f64 = first.split(',').nth(1).unwrap().parse().unwrap();
    assert!(v.is_finite());
    assert!(first.contains('e'), "scientific notation expected: {first}");

    let terms = qnm(&["potential", "--preset", "scarf2-exact", "--terms"]);
    assert!(terms.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&terms.stdout).unwrap();
    assert!(doc["terms"].get("sech^2").is_some());
    assert_eq!(doc["constants"].as_array().unwrap().len(), 4);
}

#[test]
fn spectrum_reports_ladder_and_coincidence_note() {
    let out = qnm(&["spectrum", "--preset", "scarf2-exact", "--n-max", "5"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let levels = doc["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 6);
    // E_0 = -a1^2/alpha = -16 with the default a1 = 4, alpha = 1.
    let e0 = levels[0]["energy"].as_array().unwrap();
    assert!((e0[0].as_f64().unwrap() + 16.0).abs() < 1e-12);
    assert!(doc["note"].as_str().unwrap().contains("share"));

    // QES models have no closed ladder: exit 2.
    let qes = qnm(&["spectrum", "--preset", "sextic-qes"]);
    assert_eq!(qes.status.code().unwrap(), 2);
}
