//! Black-box tests of the `tphase` binary: file formats, JSON reports,
//! exit codes, and seed reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tphase::io;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tphase"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// 2x2x2 sectorial (in fact Hermitian positive definite) tensor file.
fn write_pd_tensor(path: &Path) {
    std::fs::write(
        path,
        r#"{"m":2,"n":2,"p":2,"data":[
            [[[2.0,0.0],[0.1,0.05]],[[0.1,-0.05],[1.5,0.0]]],
            [[[0.3,0.0],[0.0,0.0]],[[0.0,0.0],[0.2,0.0]]]]}"#,
    )
    .unwrap();
}

/// Indefinite Hermitian tensor: phases {0, pi}, not sectorial.
fn write_indefinite_tensor(path: &Path) {
    std::fs::write(
        path,
        r#"{"m":2,"n":2,"p":1,"data":[[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[-1.0,0.0]]]]}"#,
    )
    .unwrap();
}

fn write_rational_system(path: &Path, unstable: bool) {
    let den = if unstable {
        "[1.0,-1.0]" // s - 1
    } else {
        "[1.0,1.0]" // s + 1
    };
    std::fs::write(
        path,
        format!(
            r#"{{"kind":"rational","slices":[[[{{"num":[1.0],"den":{den}}}]]]}}"#
        ),
    )
    .unwrap();
}

#[test]
fn info_reports_shape_phases_and_rank() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("a.ttj");
    write_pd_tensor(&t);
    let out = run(&["info", "a.ttj"], dir.path());
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["m"], 2);
    assert_eq!(v["n"], 2);
    assert_eq!(v["p"], 2);
    assert_eq!(v["tprank"], 0); // positive definite: all phases zero
    assert_eq!(v["sectoriality"]["sectorial"], true);
    assert_eq!(v["sector"]["accretive"], true);
    let phases = v["canonical_phases_rad"].as_array().unwrap();
    assert_eq!(phases.len(), 4);
    let svs = v["t_singular_values"].as_array().unwrap();
    assert_eq!(svs.len(), 4);
    // Sorted nonincreasing.
    for w in svs.windows(2) {
        assert!(w[0].as_f64().unwrap() >= w[1].as_f64().unwrap());
    }
}

#[test]
fn info_on_non_sectorial_tensor_reports_flags_without_phases() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("ns.ttj");
    write_indefinite_tensor(&t);
    let out = run(&["info", "ns.ttj"], dir.path());
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["sectoriality"]["sectorial"], false);
    assert!(v["canonical_phases_rad"].is_null());
    assert!(v["tprank"].is_null());
}

#[test]
fn malformed_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.ttj"), "{\"m\":2,").unwrap();
    let out = run(&["info", "bad.ttj"], dir.path());
    assert_eq!(code(&out), 2);

    // Ragged rows.
    std::fs::write(
        dir.path().join("ragged.ttj"),
        r#"{"m":2,"n":2,"p":1,"data":[[[[1.0,0.0]],[[0.0,0.0],[1.0,0.0]]]]}"#,
    )
    .unwrap();
    let out = run(&["info", "ragged.ttj"], dir.path());
    assert_eq!(code(&out), 2);

    // Unknown keys.
    std::fs::write(
        dir.path().join("extra.ttj"),
        r#"{"m":1,"n":1,"p":1,"data":[[[[1.0,0.0]]]],"why":1}"#,
    )
    .unwrap();
    let out = run(&["info", "extra.ttj"], dir.path());
    assert_eq!(code(&out), 2);

    // Missing file.
    let out = run(&["info", "absent.ttj"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn truncate_writes_factor_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    write_pd_tensor(&dir.path().join("a.ttj"));
    let out = run(&["truncate", "a.ttj", "--r", "2"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["r"], 2);
    assert_eq!(v["gauge"], "lp:2");
    assert!(v["optimal_value"].as_f64().unwrap() >= 0.0);

    // Factor tensor exists and loads through the library.
    let e = io::read_tensor(&dir.path().join("a.E.ttj")).unwrap();
    assert_eq!(e.shape(), (2, 2, 2));
    // Sidecar parses and repeats the report.
    let side: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.truncation.json")).unwrap())
            .unwrap();
    assert_eq!(side["r"], 2);
    assert_eq!(side["kept_phases"].as_array().unwrap().len(), 2);
}

#[test]
fn truncate_on_non_sectorial_tensor_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    write_indefinite_tensor(&dir.path().join("ns.ttj"));
    let out = run(&["truncate", "ns.ttj", "--r", "1"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sectorial"));
}

#[test]
fn truncate_with_bad_gauge_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    write_pd_tensor(&dir.path().join("a.ttj"));
    let out = run(&["truncate", "a.ttj", "--r", "1", "--gauge", "l3"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn tsvd_matches_library_value() {
    let dir = tempfile::tempdir().unwrap();
    write_pd_tensor(&dir.path().join("a.ttj"));
    let out = run(&["tsvd", "a.ttj", "--r", "2"], dir.path());
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);

    let a = io::read_tensor(&dir.path().join("a.ttj")).unwrap();
    let expect = tphase::truncate_rank(&a, 2, &tphase::GaugeSpec::parse("lp:2").unwrap()).unwrap();
    assert!((v["value"].as_f64().unwrap() - expect.value).abs() < 1e-12);

    let approx = io::read_tensor(&dir.path().join("a.r2.ttj")).unwrap();
    assert!(
        approx.sub(&expect.approx).unwrap().frobenius_norm() < 1e-12,
        "written tensor differs from library truncation"
    );
}

#[test]
fn geomean_reports_residual_and_majorization() {
    let dir = tempfile::tempdir().unwrap();
    write_pd_tensor(&dir.path().join("a.ttj"));
    // Second operand: a scaled identity-like PD file.
    std::fs::write(
        dir.path().join("b.ttj"),
        r#"{"m":2,"n":2,"p":2,"data":[
            [[[3.0,0.0],[0.2,0.0]],[[0.2,0.0],[2.0,0.0]]],
            [[[0.1,0.0],[0.0,0.0]],[[0.0,0.0],[0.1,0.0]]]]}"#,
    )
    .unwrap();
    let out = run(&["geomean", "a.ttj", "b.ttj"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!(v["riccati_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["majorization"]["holds"], true);
    assert!(dir.path().join("a.geomean.ttj").exists());
}

#[test]
fn lti_sweep_writes_csv_and_reports_certificates() {
    let dir = tempfile::tempdir().unwrap();
    write_rational_system(&dir.path().join("g.tlj"), false);
    std::fs::write(
        dir.path().join("h.tlj"),
        r#"{"kind":"rational","slices":[[[{"num":[0.25],"den":[1.0]}]]]}"#,
    )
    .unwrap();
    let out = run(
        &[
            "lti", "g.tlj", "--with", "h.tlj", "--grid", "1e-2:1e2:50", "--certify", "both",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!((v["hinf"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(v["feedback"]["stable"], true);
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 2);
    for c in certs {
        let verdict = c["verdict"].as_str().unwrap();
        assert!(
            ["certified", "inconclusive", "assumption-violated"].contains(&verdict),
            "unexpected verdict {verdict}"
        );
    }
    // 1/(s+1) against 0.25: gain product 0.25 < 1 -> certified.
    assert_eq!(certs[0]["test"], "small-gain");
    assert_eq!(certs[0]["verdict"], "certified");

    // CSV: header + 50 grid rows + omega = 0 + omega = inf.
    let csv = std::fs::read_to_string(dir.path().join("g.bode.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "omega_rad_s,sigma_max,sigma_min,phi_max_deg,phi_min_deg,sectorial"
    );
    assert_eq!(lines.len(), 1 + 50 + 2);
    assert!(lines[1].starts_with("0.0000000000000000e0,"));
    assert!(lines.last().unwrap().starts_with("inf,"));
}

#[test]
fn lti_on_unstable_system_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    write_rational_system(&dir.path().join("u.tlj"), true);
    let out = run(&["lti", "u.tlj"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unstable"));
}

#[test]
fn lti_certify_requires_with() {
    let dir = tempfile::tempdir().unwrap();
    write_rational_system(&dir.path().join("g.tlj"), false);
    let out = run(&["lti", "g.tlj", "--certify", "gain"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_is_seed_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(
        &["verify", "--suite", "bcirc", "--seed", "5", "--trials", "8"],
        dir.path(),
    );
    let b = run(
        &["verify", "--suite", "bcirc", "--seed", "5", "--trials", "8"],
        dir.path(),
    );
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "same seed must give identical output");
    let text = String::from_utf8_lossy(&a.stdout);
    assert!(text.contains("PASS bcirc-homomorphism"));

    let c = run(
        &["verify", "--suite", "bcirc", "--seed", "6", "--trials", "8"],
        dir.path(),
    );
    assert_ne!(
        a.stdout, c.stdout,
        "different seeds should sample different tensors"
    );
}

#[test]
fn verify_conjecture_emits_probe_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["verify", "--suite", "conjecture", "--trials", "60", "--seed", "9"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    // JSON block followed by the PASS line.
    assert!(text.contains("\"trials\": 60"));
    assert!(text.contains("PASS conjecture-probe"));
}

#[test]
fn verify_rejects_unknown_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--suite", "nonsense"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn help_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["--help"], dir.path());
    assert_eq!(code(&out), 0);
    let out = run(&["truncate", "--help"], dir.path());
    assert_eq!(code(&out), 0);
}

#[test]
fn ss_system_roundtrips_through_lti() {
    let dir = tempfile::tempdir().unwrap();
    // One-state lag 1/(s+1) as a state-space file.
    let one = |v: f64| format!(r#"{{"m":1,"n":1,"p":1,"data":[[[[{v},0.0]]]]}}"#);
    let tlj = format!(
        r#"{{"kind":"ss","A":{},"B":{},"C":{},"D":{}}}"#,
        one(-1.0),
        one(1.0),
        one(1.0),
        one(0.0)
    );
    let path: PathBuf = dir.path().join("lag.tlj");
    std::fs::write(&path, tlj).unwrap();
    let out = run(&["lti", "lag.tlj", "--grid", "1e-2:1e2:40"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!((v["hinf"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!(dir.path().join("lag.bode.csv").exists());
}
