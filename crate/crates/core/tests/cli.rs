use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_traceform"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

const CUBICS: &str = r#"{"label":"c23","poly":[-1,-1,0,1]}
{"label":"c31","poly":[-1,1,0,1]}
{"label":"a972","poly":[30,-18,0,1]}
{"label":"b972","poly":[6,0,0,1]}
"#;

#[test]
fn compare_distinct_discriminants() {
    let out = run(&["compare", "-", "c23", "c31"], CUBICS);
    assert_eq!(code(&out), 0);
    let v = lines(&out);
    let iso = v.iter().find(|l| l["op"] == "isometric_traces").unwrap();
    assert_eq!(iso["verdict"]["answer"], false);
    assert_eq!(iso["verdict"]["basis"], "ISOMETRIC_TRACE");
}

#[test]
fn compare_equal_discriminant_pair_with_witness() {
    let out = run(&["compare", "-", "a972", "b972", "--oracle", "--witness-bound", "4"], CUBICS);
    assert_eq!(code(&out), 0);
    let v = lines(&out);
    let iso = v.iter().find(|l| l["op"] == "isometric_traces").unwrap();
    assert_eq!(iso["verdict"]["answer"], true);
    let oracle = v.iter().find(|l| l.get("oracle").is_some()).unwrap();
    assert_eq!(oracle["oracle"]["genus_equal"], true);
    let w = v.iter().find(|l| l.get("witness").is_some()).unwrap();
    assert_eq!(w["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn totally_real_quintics_have_no_criterion() {
    let recs = r#"{"label":"q11","poly":[-1,3,3,-4,-1,1]}
{"label":"q31","poly":[-5,1,21,-12,-1,1]}"#;
    let out = run(&["compare", "-", "q11", "q31"], recs);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no applicable criterion"));
}

#[test]
fn wild_prime_blocks_isometry_criteria() {
    let recs = r#"{"label":"a","poly":[-2,0,0,0,1]}
{"label":"b","poly":[-3,0,0,0,1]}"#;
    let out = run(&["compare", "-", "a", "b"], recs);
    assert_eq!(code(&out), 3);
}

#[test]
fn unsupported_splitting_then_supplied() {
    // 2 splits into three primes of degree one, so it divides every index
    let bare = r#"{"label":"k","poly":[2,-4,-3,-4,1]}"#;
    let out = run(&["invariants", "-"], bare);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stdout).contains("p = 2"));

    let given = r#"{"label":"k","poly":[2,-4,-3,-4,1],"splitting":{"2":[[1,1],[1,1],[2,1]]}}"#;
    let out = run(&["invariants", "-"], given);
    assert_eq!(code(&out), 0);
    let v = lines(&out);
    assert_eq!(v[0]["disc"], -41192);
    assert_eq!(v[0]["tame"], false);
}

#[test]
fn invariants_examples() {
    let recs = r#"{"label":"c23","poly":[-1,-1,0,1]}
{"label":"c9","poly":[1,-3,0,1]}
{"label":"q5","poly":[-5,0,1]}"#;
    let out = run(&["invariants", "-"], recs);
    assert_eq!(code(&out), 0);
    let v = lines(&out);
    assert_eq!(v[0]["disc"], -23);
    assert_eq!(v[0]["signature"], serde_json::json!([1, 1]));
    let p23 = &v[0]["primes"][0];
    assert_eq!((p23["p"].as_u64(), p23["alpha"].as_i64(), p23["legendre_alpha"].as_i64()), (Some(23), Some(2), Some(1)));
    // wild at 3: alpha is not reported
    assert_eq!(v[1]["primes"][0]["tame"], false);
    assert!(v[1]["primes"][0]["alpha"].is_null());
    let p5 = &v[2]["primes"][0];
    assert_eq!((p5["alpha"].as_i64(), p5["legendre_alpha"].as_i64()), (Some(2), Some(-1)));
}

#[test]
fn parse_and_validation_errors() {
    let out = run(&["invariants", "-"], "{\"label\":\"a\",\"poly\":[-2,0,1]}\nnot json\n");
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let dup = "{\"label\":\"a\",\"poly\":[-2,0,1]}\n{\"label\":\"a\",\"poly\":[-3,0,1]}\n";
    assert_eq!(code(&run(&["invariants", "-"], dup)), 2);

    let basis = r#"{"label":"a","poly":[1,0,1],"basis":[[1,0,0],[0,1,0]]}"#;
    let out = run(&["invariants", "-"], basis);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("basis"));
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&["frobnicate"], "")), 1);
    assert_eq!(code(&run(&["compare", "-"], "")), 1);
    assert_eq!(code(&run(&["--help"], "")), 0);
}

#[test]
fn corrupt_basis_fails_oracle_check() {
    // Z[2 theta] does not contain theta
    let recs = r#"{"label":"bad","poly":[-5,0,1],"basis":[[1,0],[0,2]]}"#;
    let out = run(&["oracle-check", "-"], recs);
    assert_eq!(code(&out), 5);
    assert!(String::from_utf8_lossy(&out.stdout).contains("basis-is-order"));
    // Z[sqrt 5] is an order but not the maximal one
    let recs = r#"{"label":"q5","poly":[-5,0,1],"basis":[[1,0],[0,1]]}"#;
    let out = run(&["oracle-check", "-"], recs);
    assert_eq!(code(&out), 5);
    let v = lines(&out);
    assert_eq!(v[0]["checks"][0]["check"], "maximal-order");
    assert_eq!(v[0]["checks"][0]["ok"], false);
}

#[test]
fn scan_skips_mixed_signatures() {
    let recs = r#"{"label":"c23","poly":[-1,-1,0,1]}
{"label":"c49","poly":[1,-2,-1,1]}"#;
    let out = run(&["scan", "-"], recs);
    assert_eq!(code(&out), 0);
    let v = lines(&out);
    assert!(v.iter().any(|l| l["skipped"] == "signatures differ"));
}

#[test]
fn empty_input_gives_empty_report() {
    for verb in ["invariants", "scan", "oracle-check"] {
        let out = run(&[verb, "-"], "");
        assert_eq!(code(&out), 0, "{verb}");
        assert!(out.stdout.is_empty(), "{verb}");
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["scan", "-", "--group-by-disc", "--cubic-search", "1500"];
    let a = run(&args, CUBICS);
    let b = run(&args, CUBICS);
    let c = run(&[&args[..], &["--sequential"]].concat(), CUBICS);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    // input fields join the search results; every verdict and oracle agrees
    let v = lines(&a);
    assert!(v.iter().any(|l| l["pair"] == serde_json::json!(["a972", "b972"])));
    assert!(v.iter().any(|l| l["pair"] == serde_json::json!(["x^3+6", "x^3+12"])));
    let skipped = v.iter().find(|l| l["pair"] == serde_json::json!(["c23", "x^3-x^2-4x+5"])).unwrap();
    assert_eq!(skipped["skipped"], "isomorphic fields");
    assert!(v.iter().filter(|l| l["op"] == "isometric_traces" && l.get("verdict").is_some()).all(|l| l["verdict"]["answer"] == true));
    assert!(v.iter().filter_map(|l| l.get("oracle")).all(|o| o["agrees"] == true));
}
