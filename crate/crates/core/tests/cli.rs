use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

use chainlogic::cli::run_cli;
use chainlogic::proofcheck::{corpus, ProofScript, Rule};

fn manifest(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel).display().to_string()
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("chainlogic").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut with = args.to_vec();
    with.push("--json");
    let out = run(&with);
    assert_eq!(out.stdout.lines().count(), 1, "one JSON object expected: {}", out.stdout);
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

/// The verdict a JSON report states, mapped to the exit code it implies.
fn json_exit(v: &Value) -> i32 {
    let refuted = match v["command"].as_str().unwrap() {
        "scope" | "count" => false,
        "eval" => !v["holds"].as_bool().unwrap(),
        "valid" | "counterexample" => !v["valid"].as_bool().unwrap(),
        "prove" => !v["accepted"].as_bool().unwrap(),
        "falsify" => v["found"].as_bool().unwrap(),
        other => panic!("unexpected command {other}"),
    };
    i32::from(refuted)
}

fn tmp_script(script: &ProofScript) -> tempfile::NamedTempFile {
    let file = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(file.path(), script.to_json()).unwrap();
    file
}

#[test]
fn golden_suite() {
    let gateway = manifest("protocols/gateway.json");
    let prop4 = manifest("corpus/prop4.json");
    let mut tainted = corpus().into_iter().find(|(n, _)| *n == "prop4").unwrap().1;
    tainted.premises_allowed = true;
    tainted.lines[0].rule = Rule::Premise;
    let tainted = tmp_script(&tainted);
    let tainted = tainted.path().to_str().unwrap();

    let tel4 = ["telephone", "--len", "4", "--alphabet", "latin", "--chain", "3"];
    let tel3 = ["telephone", "--len", "3", "--alphabet", "abc", "--chain", "3"];
    let with = |base: &[&'static str], rest: &[&'static str]| -> Vec<&'static str> {
        base.iter().chain(rest).copied().collect()
    };

    // (arguments, exit code, first line of stdout)
    let cases: Vec<(Vec<&str>, i32, &str)> = vec![
        (vec!["scope", "[2]([3]p@3 -> [4]q@4)"], 0, "{2}"),
        (vec!["scope", "--formula", "p@0 & q@1"], 0, "{0, 1}"),
        (vec!["scope", "true"], 0, "{}"),
        (
            with(&tel4, &["eval", "--run", "byte,bite,cite", "--formula", "[0]!(eq_book@2)"]),
            0,
            "true",
        ),
        (
            with(&tel4, &["eval", "--run", "byte,bite,cite", "--formula", "[0][1]!(eq_book@2)"]),
            0,
            "true",
        ),
        (
            with(&tel4, &["eval", "--run", "toon,torn,tort", "--formula", "[0]!(eq_book@2)"]),
            1,
            "false",
        ),
        (with(&tel3, &["count"]), 0, "1323"),
        (
            with(&tel3, &["valid", "--formula", "[1]!(eq_abc@0) -> [1]!(eq_abc@2)"]),
            0,
            "valid",
        ),
        (with(&tel3, &["counterexample", "--formula", "[1]!(eq_abc@0)"]), 1, "(aaa, aac, aaa)"),
        (with(&tel3, &["counterexample", "--formula", "eq_abc@0 -> [0]eq_abc@0"]), 0, "none"),
        (
            vec!["eval", "--protocol", &gateway, "--run", "u,x,z", "--formula", "[1]p@0"],
            0,
            "true",
        ),
        (
            vec!["eval", "--protocol", &gateway, "--run", "u,x,z", "--formula", "[2]p@0"],
            1,
            "false",
        ),
        (
            vec!["valid", "--protocol", &gateway, "--formula", "[1]p@0 -> [2]p@0"],
            1,
            "not valid",
        ),
        (
            vec!["valid", "--protocol", &gateway, "--formula", "[0]p@2 -> [1]p@2"],
            0,
            "valid",
        ),
        (vec!["prove", "--script", &prop4], 0, "accepted"),
        (vec!["prove", "--script", tainted], 1, "rejected at line 2: necessitation applied to line 1, which depends on a premise"),
        (
            vec!["falsify", "--formula", "[1]p@0 -> [2]p@0", "--channels", "3", "--max-values", "2"],
            1,
            "falsified",
        ),
        (
            vec!["falsify", "--formula", "[0]p@1 -> [1]p@1", "--channels", "2", "--max-values", "2"],
            0,
            "no countermodel among 292 protocol(s) (the whole bounded space); this proves nothing beyond the bounds",
        ),
        (
            vec!["falsify", "--formula", "p@5 -> [6]p@5", "--seed", "3", "--samples", "500"],
            1,
            "falsified",
        ),
    ];
    assert!(cases.len() >= 12);
    for (args, code, first) in &cases {
        let out = run(args);
        assert_eq!(out.code, *code, "{args:?}: {}{}", out.stdout, out.stderr);
        assert_eq!(out.stdout.lines().next(), Some(*first), "{args:?}");
        assert!(out.stderr.is_empty(), "{args:?}: {}", out.stderr);
        let (jcode, json) = run_json(args);
        assert_eq!(jcode, *code, "{args:?} with --json");
        assert_eq!(json_exit(&json), *code, "{args:?}: {json}");
    }
}

#[test]
fn witnesses_in_text_and_json_agree() {
    let tel4 = ["telephone", "--len", "4", "--chain", "3", "eval", "--run", "toon,torn,tort", "--formula", "[0]!(eq_book@2)"];
    let out = run(&tel4);
    assert_eq!(out.stdout, "false\nwitness: (toon, boon, book)\n");
    let (_, json) = run_json(&tel4);
    assert_eq!(json["witness"], serde_json::json!(["toon", "boon", "book"]));

    let args = ["falsify", "--formula", "[1]p@0 -> [2]p@0", "--channels", "3", "--max-values", "2"];
    let text = run(&args).stdout;
    let (_, json) = run_json(&args);
    let run_line = text.lines().find_map(|l| l.strip_prefix("run: ")).unwrap();
    let labels: Vec<&str> = json["run"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(run_line, format!("({})", labels.join(", ")));
    let protocol_line = text.lines().find_map(|l| l.strip_prefix("protocol: ")).unwrap();
    let from_text: Value = serde_json::from_str(protocol_line).unwrap();
    assert_eq!(from_text, json["protocol"]);

    let (_, json) = run_json(&["prove", "--script", &manifest("corpus/prop5.json")]);
    assert_eq!(json["lines"].as_array().unwrap().len(), 13);
    assert_eq!(json["line"], Value::Null);
}

#[test]
fn errors_exit_with_two() {
    let gateway = manifest("protocols/gateway.json");
    let bad_json = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(bad_json.path(), "{ \"goal\": ").unwrap();
    let bad_json = bad_json.path().to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["scope", "[2"],
        vec!["scope"],
        vec!["bogus"],
        vec!["eval", "--protocol", "/nonexistent.json", "--run", "u", "--formula", "p@0"],
        vec!["eval", "--protocol", &gateway, "--run", "u,q,z", "--formula", "p@0"],
        vec!["eval", "--protocol", &gateway, "--run", "u,y,z", "--formula", "p@0"],
        vec!["eval", "--protocol", &gateway, "--run", "u,x", "--formula", "p@0"],
        vec!["eval", "--protocol", &gateway, "--run", "u,x,z", "--formula", "q@0"],
        vec!["eval", "--protocol", &gateway, "--run", "u,x,z", "--formula", "[7]p@0", "--strict-window"],
        vec!["valid", "--protocol", &gateway],
        vec!["prove", "--script", bad_json],
        vec!["falsify", "--formula", "p@0 -> p@3"],
        vec!["falsify", "--formula", "q@0", "--atoms", "1"],
        vec!["falsify", "--formula", "p@0", "--channels", "4", "--max-values", "3"],
        vec!["falsify", "--formula", "p@0", "--budget", "0"],
        vec!["telephone", "--len", "0", "--chain", "3", "count"],
        vec!["telephone", "--len", "2", "--alphabet", "a-b", "--chain", "3", "count"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.code, 2, "{args:?}: {}", out.stdout);
        assert!(out.stdout.is_empty(), "{args:?}");
        assert_eq!(out.stderr.lines().count(), 1, "{args:?}: {}", out.stderr);
        let json = run(&[args.as_slice(), &["--json"]].concat());
        assert_eq!(json.code, 2, "{args:?} with --json");
        assert!(json.stdout.is_empty());
    }
}

#[test]
fn out_of_window_boxes_are_lenient_by_default() {
    let gateway = manifest("protocols/gateway.json");
    let out = run(&["eval", "--protocol", &gateway, "--run", "u,x,z", "--formula", "[7]p@0"]);
    assert_eq!((out.code, out.stdout.as_str()), (1, "false\nwitness: (v, y, z)\n"));
}

#[test]
fn help_and_version() {
    let out = run(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("falsify"));
    assert_eq!(run(&["--version"]).code, 0);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_chainlogic");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["scope", "[2]([3]p@3 -> [4]q@4)"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "{2}\n");
    let refuted = status(&["falsify", "--formula", "p@0 -> [1]p@0"]);
    assert_eq!(refuted.status.code(), Some(1));
    let broken = status(&["scope", "p@"]);
    assert_eq!(broken.status.code(), Some(2));
}
