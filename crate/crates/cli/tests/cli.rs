use std::process::{Command, Output};

use serde_json::Value;

fn ftvn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftvn"))
        .args(args)
        .env_remove("FTVN_DEFAULT_TOL")
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

// integral floats are written without a fraction
fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|e| e.as_f64().unwrap()).collect()
}

#[test]
fn documented_invocations() {
    let out = ftvn(&["axioms", "--system", "sym", "--dim", "4", "--samples", "1000", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["system"], "sym(4)");
    assert_eq!(r["seed"], 42);
    assert_eq!(r["passed"], true);
    assert!(r.get("counterexample").is_none());

    let out = ftvn(&["axioms", "--system", "subspace-counterexample"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["seed"], 0);
    assert_eq!(r["counterexample"]["gap"], 9.0);
    assert_eq!(r["counterexample"]["inner_product"], -10.0);

    let out = ftvn(&["majorize", "--system", "rn-down", "--dim", "3", "--x", "[1,1,1]", "--y", "[3,0,0]", "--witness"]);
    assert_eq!(out.status.code(), Some(0));
    let m = report(&out)["details"]["witness"]["matrix"].clone();
    for row in m.as_array().unwrap() {
        for e in row.as_array().unwrap() {
            assert_eq!(e.as_f64().unwrap(), 1.0 / 3.0);
        }
    }
}

#[test]
fn usage_and_validation_errors_exit_2() {
    for args in [
        &["bogus"][..],
        &["axioms"],
        &["axioms", "--system", "nope"],
        &["axioms", "--system", "sym", "--samples", "0"],
        &["axioms", "--system", "sym", "--tol", "-1"],
        &["axioms", "--system", "sym", "--jobs", "0"],
        &["majorize", "--system", "rn-down", "--x", "[[1,2],[3]]", "--y", "[1,2]"],
        &["majorize", "--system", "rn-down", "--dim", "3", "--x", "[1,2]", "--y", "[1,2,3]"],
        &["majorize", "--system", "rn-down", "--x", "[1e999,0]", "--y", "[1,2]"],
        &["center", "--system", "sym", "--dim", "2", "--x", "[[1,2],[3,4]]"],
        &["reduce-check", "--system", "{\"kind\":\"twisted\",\"inner\":{\"kind\":\"rn-down\",\"dim\":2}}"],
        &["birkhoff", "--matrix", "[[1,1],[0,0]]"],
        &["--unknown-flag"],
    ] {
        let out = ftvn(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn violations_exit_1() {
    for args in [
        &["ds-witness", "--x", "[2,0]", "--y", "[1,1]"][..],
        &["majorize", "--system", "rn-down", "--x", "[3,0]", "--y", "[2,1]"],
        &["orbit-transport", "--system", "rn-abs", "--x", "[1,2]", "--y", "[1,3]"],
        &["automorph-check", "--system", "rn-down", "--matrix", "[[0.75,0.25],[0.25,0.75]]", "--samples", "20"],
        &["center", "--system", "rn-down", "--x", "[1,2,3]"],
    ] {
        let out = ftvn(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let r = report(&out);
        assert_eq!(r["passed"], false);
        assert!(r["counterexample"].is_object(), "{args:?}");
    }
}

#[test]
fn every_command_runs() {
    let sym2 = ["--system", "sym", "--dim", "2"];
    let swap_avg = "[[0.5,0,0,0.5],[0,0.5,0.5,0],[0,0.5,0.5,0],[0.5,0,0,0.5]]";
    let cases: Vec<Vec<&str>> = vec![
        vec!["commute", "--system", "spin", "--samples", "50"],
        vec!["commute", "--system", "rn-down", "--x", "[1,2,3]", "--y", "[0,1,5]"],
        vec!["center", "--system", "sing-val", "--samples", "50"],
        vec!["decompose", "--system", "rn-down", "--x", "[1,2,6]"],
        vec!["automorph-check", "--system", "sym", "--samples", "50"],
        vec!["orbit-transport", "--system", "sym", "--dim", "2", "--x", "[[1,0],[0,0]]", "--y", "[[0,0],[0,1]]"],
        [&["ds-check", "--matrix", swap_avg, "--x", "[[3,0],[0,1]]", "--samples", "50"][..], &sym2[..]].concat(),
        vec!["birkhoff", "--matrix", "[[0.5,0.5,0],[0,0.5,0.5],[0.5,0,0.5]]"],
        vec!["reduce-check", "--system", "finite-seq", "--dim", "5", "--samples", "100"],
        vec!["lidskii", "--system", "sing-val", "--samples", "100"],
        vec!["rearrange", "--x", "[1,0,0.5,0,-2]"],
    ];
    for args in cases {
        let out = ftvn(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(report(&out)["command"], args[0]);
    }
    let r = report(&ftvn(&["rearrange", "--x", "[1,0,0.5,0,-2]"]));
    assert_eq!(floats(&r["details"]["star"]), vec![2.0, 1.0, 0.5, 0.0, 0.0]);
    let r = report(&ftvn(&[&["ds-check", "--matrix", swap_avg, "--x", "[[3,0],[0,1]]", "--samples", "20"][..], &sym2[..]].concat()));
    let t = &r["details"]["transition_matrix"];
    assert_eq!(floats(&t[0]), vec![0.5, 0.5]);
    assert_eq!(floats(&t[1]), vec![0.5, 0.5]);
}

#[test]
fn output_file_and_env_tolerance() {
    let path = std::env::temp_dir().join(format!("ftvn-report-{}.json", std::process::id()));
    let out = ftvn(&["axioms", "--system", "rn-abs", "--samples", "10", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let r: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["tol"], 1e-8);

    let out = Command::new(env!("CARGO_BIN_EXE_ftvn"))
        .args(["axioms", "--system", "rn-abs", "--samples", "10"])
        .env("FTVN_DEFAULT_TOL", "0.001")
        .output()
        .unwrap();
    assert_eq!(report(&out)["tol"], 0.001);
}

#[test]
fn seeds_change_samples_but_not_structure() {
    let a = report(&ftvn(&["axioms", "--system", "sym", "--samples", "20", "--seed", "1"]));
    let b = report(&ftvn(&["axioms", "--system", "sym", "--samples", "20", "--seed", "2"]));
    assert_ne!(a["max_violation"], b["max_violation"]);
    assert_eq!(a["samples"], b["samples"]);
}
