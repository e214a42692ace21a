use std::process::Command;

use qdomain::cli::run;
use serde_json::Value;

const FIXTURES: &str = "tests/fixtures";

fn fixture(name: &str) -> String {
    format!("{FIXTURES}/{name}")
}

fn qdomain(args: &[&str]) -> qdomain::cli::Execution {
    run(std::iter::once("qdomain").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--report", "json"]);
    let out = qdomain(&full);
    (out.code, serde_json::from_str(&out.output).expect("json report"))
}

#[test]
fn documented_exit_codes() {
    let luk = fixture("lukasiewicz.json");
    let (code, report) = json(&["check-tnorm", "--spec", &luk, "--grid", "100"]);
    assert_eq!(code, 0);
    assert_eq!(report["outcome"], "pass");

    let godel = fixture("godel.json");
    let (code, report) = json(&["classify-injectivity", "--spec", &godel]);
    assert_eq!(code, 0);
    assert_eq!(report["report"]["verdict"], "counterexample");
    assert_eq!(report["report"]["certificate"]["kind"], "non-extendable");

    let bad = fixture("bad_order.json");
    let (code, report) = json(&["check-order", "--file", &bad]);
    assert_eq!(code, 1);
    let w = &report["report"]["worst_transitivity"];
    assert_eq!((w["x"].as_u64(), w["y"].as_u64(), w["z"].as_u64()), (Some(0), Some(1), Some(2)));
}

#[test]
fn input_errors_exit_two() {
    let malformed = fixture("malformed.json");
    let out = qdomain(&["check-tnorm", "--spec", &malformed]);
    assert_eq!(out.code, 2);
    assert!(out.diagnostics.contains("malformed.json") && out.diagnostics.contains("line 2"), "{}", out.diagnostics);

    let product = fixture("product.json");
    assert_eq!(qdomain(&["check-tnorm", "--spec", &product, "--exact"]).code, 2);
    assert_eq!(qdomain(&["check-tnorm", "--spec", "missing.json"]).code, 2);
    assert_eq!(qdomain(&["no-such-command"]).code, 2);
    assert_eq!(qdomain(&["way-below", "--shape", "alphaR"]).code, 2);
    assert_eq!(qdomain(&["way-below", "--shape", "power:alphaR:0", "--spec", "godel"]).code, 2);
    assert_eq!(qdomain(&["check-tnorm", "--spec", "godel", "--grid", "0"]).code, 2);

    let (code, report) = json(&["check-order", "--file", &fixture("missing.json")]);
    assert_eq!(code, 2);
    assert_eq!(report["outcome"], "error");
}

#[test]
fn exact_mode_on_lukasiewicz() {
    let (code, report) = json(&["check-tnorm", "--spec", "lukasiewicz", "--grid", "40", "--exact"]);
    assert_eq!(code, 0);
    assert_eq!(report["report"]["laws"]["exact"], true);
    assert_eq!(report["report"]["laws"]["max_violation"], 0.0);
}

#[test]
fn failures_carry_witnesses() {
    let (code, report) = json(&["check-approach", "--file", &fixture("bad_approach.json")]);
    assert_eq!(code, 1);
    assert!(report["report"]["a3"].is_object());
    assert_eq!(report["report"]["a2"][0], 0);

    let luk = fixture("luk_quarter_half.json");
    let (code, report) = json(&["check-continuity", "--shape", "alphaL", "--spec", &luk, "--grid", "64"]);
    assert_eq!(code, 1);
    assert_eq!(report["report"]["dl_witness"]["t"], 0.4);
    assert!(report["report"]["left_adjoint"]["witness"].is_object());
}

#[test]
fn passing_suites() {
    let chain = fixture("chain3.json");
    for cmd in ["check-order", "way-below", "check-continuity", "sobriety", "sigma-product"] {
        let out = qdomain(&[cmd, "--file", &chain]);
        assert_eq!(out.code, 0, "{cmd}: {}", out.output);
    }
    assert_eq!(qdomain(&["check-approach", "--file", &fixture("approach.json")]).code, 0);
    for spec in ["godel", "lukasiewicz", "product"] {
        let out = qdomain(&["check-continuity", "--shape", "alphaR", "--spec", spec, "--grid", "16"]);
        assert_eq!(out.code, 0, "{spec}: {}", out.output);
    }
    let (code, report) =
        json(&["scott-delta", "--shape", "alphaR", "--spec", "godel", "--grid", "16", "--point", "0.5", "--set", "0.25,0.75"]);
    assert_eq!(code, 0);
    assert_eq!(report["report"]["delta"], 1.0);
}

#[test]
fn certificate_replay() {
    let dir = tempfile::tempdir().unwrap();
    let specs = ["godel".to_string(), "lukasiewicz".into(), "product".into(), fixture("luk_quarter_half.json")];
    for spec in specs {
        let out = qdomain(&["classify-injectivity", "--spec", &spec, "--grid", "20", "--report", "json"]);
        assert_eq!(out.code, 0, "{}", out.output);
        let path = dir.path().join("cert.json");
        std::fs::write(&path, &out.output).unwrap();
        let (code, replay) = json(&["verify-certificate", "--file", path.to_str().unwrap()]);
        let original: Value = serde_json::from_str(&out.output).unwrap();
        assert_eq!(code, 0, "{replay}");
        assert_eq!(replay["report"]["verdict"], original["report"]["verdict"]);

        let mut forged = original.clone();
        forged["report"]["verdict"] = Value::from("injective-all-continuous-lattices");
        std::fs::write(&path, forged.to_string()).unwrap();
        let (code, _) = json(&["verify-certificate", "--file", path.to_str().unwrap()]);
        if original["report"]["verdict"] != "injective-all-continuous-lattices" {
            assert_eq!(code, 1);
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["sobriety", "--shape", "alphaR", "--spec", "godel", "--grid", "16", "--report", "json"];
    let a = qdomain(&args);
    let b = qdomain(&args);
    assert_eq!(a, b);
    let args = ["check-tnorm", "--spec", "product", "--grid", "50", "--report", "json"];
    assert_eq!(qdomain(&args).output, qdomain(&args).output);
}

#[test]
fn golden_reports() {
    let cases: [(&str, &[&str]); 5] = [
        ("check_tnorm_lukasiewicz", &["check-tnorm", "--spec", "tests/fixtures/lukasiewicz.json", "--grid", "100"]),
        ("classify_godel", &["classify-injectivity", "--spec", "tests/fixtures/godel.json", "--grid", "8"]),
        ("check_order_bad", &["check-order", "--file", "tests/fixtures/bad_order.json"]),
        (
            "continuity_alpha_l",
            &["check-continuity", "--shape", "alphaL", "--spec", "tests/fixtures/luk_quarter_half.json", "--grid", "64"],
        ),
        ("way_below_chain3", &["way-below", "--file", "tests/fixtures/chain3.json"]),
    ];
    for (name, args) in cases {
        let mut full = args.to_vec();
        full.extend(["--report", "json"]);
        let got = qdomain(&full).output;
        let want = std::fs::read_to_string(format!("tests/golden/{name}.json")).unwrap();
        assert_eq!(got, want, "golden {name}");
        let v: Value = serde_json::from_str(&got).unwrap();
        assert_eq!(v["schema_version"], 1);
    }
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_qdomain");
    let status = Command::new(bin).args(["check-order", "--file", &fixture("bad_order.json")]).output().unwrap().status;
    assert_eq!(status.code(), Some(1));
    let out = Command::new(bin).args(["check-tnorm", "--spec", &fixture("malformed.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
    let out = Command::new(bin).args(["check-tnorm", "--spec", &fixture("lukasiewicz.json"), "--grid", "100"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("check-tnorm: pass"));
}
