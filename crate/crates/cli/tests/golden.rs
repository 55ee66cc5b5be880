//! Runs the binary on the fixtures in tests/data and compares stdout with
//! tests/golden/<case>.out. Set CTXLOGIC_BLESS=1 to rewrite the expected files.

use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

struct Case {
    name: &'static str,
    args: &'static [&'static str],
    code: i32,
    /// For failing runs: the `error` kind expected on stderr.
    error: Option<&'static str>,
}

const fn ok(name: &'static str, args: &'static [&'static str]) -> Case {
    Case {
        name,
        args,
        code: 0,
        error: None,
    }
}

const fn negative(name: &'static str, args: &'static [&'static str]) -> Case {
    Case {
        name,
        args,
        code: 1,
        error: None,
    }
}

const fn err(
    name: &'static str,
    args: &'static [&'static str],
    code: i32,
    kind: &'static str,
) -> Case {
    Case {
        name,
        args,
        code,
        error: Some(kind),
    }
}

const CASES: &[Case] = &[
    ok(
        "check_truth_set",
        &["check", "tests/data/model.json", "[[o]] p@1"],
    ),
    ok(
        "check_world",
        &["check", "tests/data/model.json", "<p> a@2", "--world", "g2"],
    ),
    ok(
        "check_cxt",
        &["check", "tests/data/planets.cxt", "[o] true@1"],
    ),
    ok(
        "valid_true",
        &["valid", "tests/data/planets.cxt", "p@1 -> [[p]] [[o]] p@1"],
    ),
    negative(
        "valid_false",
        &["valid", "tests/data/planets.cxt", "[[p]] [[o]] p@1 -> p@1"],
    ),
    ok(
        "lattice_formal_json",
        &["lattice", "tests/data/planets.cxt"],
    ),
    ok(
        "lattice_formal_dot",
        &["lattice", "tests/data/planets.cxt", "--out", "dot"],
    ),
    ok(
        "lattice_property_dot",
        &[
            "lattice",
            "tests/data/planets.cxt",
            "--kind",
            "property",
            "--out",
            "dot",
        ],
    ),
    ok(
        "lattice_object_json",
        &["lattice", "tests/data/planets.cxt", "--kind", "object"],
    ),
    ok(
        "dba_semiconcept_pure",
        &["dba-verify", "tests/data/planets.cxt", "--pure"],
    ),
    ok(
        "dba_protoconcept",
        &["dba-verify", "tests/data/planets.cxt", "--fully-contextual"],
    ),
    negative(
        "dba_semiconcept_not_fc",
        &[
            "dba-verify",
            "tests/data/planets.cxt",
            "--algebra",
            "semiconcept",
            "--fully-contextual",
        ],
    ),
    ok(
        "dba_file",
        &[
            "dba-verify",
            "tests/data/boolean2.json",
            "--pure",
            "--fully-contextual",
        ],
    ),
    negative("dba_broken", &["dba-verify", "tests/data/broken.json"]),
    ok("props", &["props", "tests/data/planets.cxt"]),
    ok(
        "proof_kb",
        &["proof", "tests/data/kb.prf", "--system", "KB"],
    ),
    negative(
        "proof_kb_in_kf",
        &["proof", "tests/data/kb.prf", "--system", "KF"],
    ),
    negative("proof_bad_mp", &["proof", "tests/data/bad.prf"]),
    ok("translate_rho", &["translate", "[[o]] p@1", "--map", "rho"]),
    ok(
        "translate_tau",
        &["translate", "[[p]] [[o]] p@1", "--map", "tau"],
    ),
    ok("disjointify", &["disjointify", "tests/data/overlap.json"]),
    err(
        "err_ill_sorted",
        &["valid", "tests/data/planets.cxt", "[o] p@1 -> p@1"],
        1,
        "ill_sorted",
    ),
    err(
        "err_syntax",
        &["check", "tests/data/model.json", "p@1 &&"],
        1,
        "syntax",
    ),
    err(
        "err_cxt",
        &["lattice", "tests/data/nonsense.cxt"],
        1,
        "line",
    ),
    err(
        "err_missing_file",
        &["props", "tests/data/nope.cxt"],
        1,
        "io",
    ),
    err(
        "err_tau_graded",
        &["translate", "[o:2] p@1", "--map", "tau"],
        1,
        "unsupported",
    ),
    err("err_usage", &["lattice"], 2, "usage"),
    err("err_unknown_command", &["bogus"], 2, "usage"),
];

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ctxlogic"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs");
    let s = |b: Vec<u8>| String::from_utf8(b).expect("utf-8 output");
    (
        out.status.code().expect("exited normally"),
        s(out.stdout),
        s(out.stderr),
    )
}

#[test]
fn golden_outputs() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var_os("CTXLOGIC_BLESS").is_some();
    let mut failures = Vec::new();
    for case in CASES {
        let (code, stdout, stderr) = run(case.args);
        if code != case.code {
            failures.push(format!(
                "{}: exit {code}, expected {} (stderr: {stderr})",
                case.name, case.code
            ));
            continue;
        }
        if let Some(kind) = case.error {
            assert!(
                stdout.is_empty(),
                "{}: stdout should be empty on error",
                case.name
            );
            let v: Value = serde_json::from_str(stderr.trim())
                .unwrap_or_else(|e| panic!("{}: stderr is not JSON: {e}", case.name));
            if v["error"] != kind || !v["message"].is_string() {
                failures.push(format!("{}: stderr {stderr}", case.name));
            }
            continue;
        }
        assert!(
            stderr.is_empty(),
            "{}: unexpected stderr {stderr}",
            case.name
        );
        let path = dir.join(format!("{}.out", case.name));
        if bless {
            fs::write(&path, &stdout).unwrap();
        } else {
            match fs::read_to_string(&path) {
                Ok(want) if want == stdout => {}
                Ok(_) => failures.push(format!(
                    "{}: output differs from {}",
                    case.name,
                    path.display()
                )),
                Err(e) => failures.push(format!("{}: {e}", case.name)),
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn json_outputs_parse() {
    for case in CASES
        .iter()
        .filter(|c| c.error.is_none() && !c.args.contains(&"dot"))
    {
        let (_, stdout, _) = run(case.args);
        serde_json::from_str::<Value>(&stdout).unwrap_or_else(|e| panic!("{}: {e}", case.name));
    }
}

#[test]
fn disjointify_output_loads_as_a_model() {
    let (_, stdout, _) = run(&["disjointify", "tests/data/overlap.json"]);
    let tmp = std::env::temp_dir().join(format!("ctxlogic-disjoint-{}.json", std::process::id()));
    fs::write(&tmp, stdout).unwrap();
    let (code, stdout, stderr) = run(&["check", tmp.to_str().unwrap(), "p@1"]);
    fs::remove_file(&tmp).ok();
    assert_eq!(code, 0, "{stderr}");
    let v: Value = serde_json::from_str(&stdout).unwrap();
    // g1 and its primed copy both carry p.
    assert_eq!(v["truth_set"], serde_json::json!(["g1", "g1'"]));
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let (code, stdout, _) = run(&[flag]);
        assert_eq!(code, 0);
        assert!(stdout.contains("ctxlogic"));
    }
}
