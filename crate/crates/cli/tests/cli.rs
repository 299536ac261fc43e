use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_scattered")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf8 output");
    let json = serde_json::from_str(&text).unwrap_or_else(|e| panic!("bad json {e}: {text}"));
    (out.status.code().expect("exit code"), json)
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scattered-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn space_embed_yes_with_checked_depths() {
    let (code, v) = run(&["space", "embed", "lim(pt)", "lim(lim(pt))"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["checkedDepths"].as_array().unwrap().len(), 6);
}

#[test]
fn space_embed_no_reports_obstruction() {
    let (code, v) = run(&["space", "embed", "lim(lim(pt))", "sum(lim(pt),lim(pt))"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "no");
    assert_eq!(v["obstruction"]["kind"], "CBRankDrop");
}

#[test]
fn triangle_into_four_cycle_from_files() {
    let tri = temp_file("tri.json", r#"{"support":3,"edges":[[0,1],[1,2],[0,2]]}"#);
    let c4 = temp_file("c4.json", r#"{"support":4,"edges":[[0,1],[1,2],[2,3],[0,3]]}"#);
    let (code, v) = run(&["graph", "ihom", &format!("@{}", tri.display()), &format!("@{}", c4.display())]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "no");
    let (_, v) = run(&["graph", "ihom", &format!("@{}", c4.display()), &format!("@{}", c4.display())]);
    assert_eq!(v["verdict"], "yes");
}

#[test]
fn rank_of_finite_space() {
    let (code, v) = run(&["space", "rank", "fin(3)"]);
    assert_eq!(code, 0);
    assert_eq!(v["rank"], 1);
}

#[test]
fn derive_and_canon() {
    let (_, v) = run(&["space", "derive", "lim(lim(pt))"]);
    assert_eq!(v["derivative"], "lim(pt)");
    let (_, v) = run(&["space", "canon", "sum(pt,lim(pt),fin(2))"]);
    assert_eq!(v["canonical"], "lim(pt)");
}

#[test]
fn parse_errors_exit_two_with_position() {
    let (code, v) = run(&["space", "rank", "lim(("]);
    assert_eq!(code, 2);
    assert_eq!(v["error"], "Parse");
    assert_eq!(v["line"], 1);
}

#[test]
fn unsupported_inputs_exit_three() {
    let (code, v) = run(&["label", "gamma", "fn over lim(lim(pt)) -> nat { inf: 0, tail: const(0) }"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"], "UnsupportedDomain");
}

#[test]
fn classify_step_function_as_d0() {
    let (code, v) = run(&["fn", "classify", "fn over lim(pt) -> nat { inf: 1, tail: const(0) }", "--depth", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["class"], "d0");
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn eval_and_continuity() {
    let f = "fn over lim(pt) -> omega+1 { inf: w, exc: {0: 5}, tail: approach(base=1) }";
    let (_, v) = run(&["fn", "eval", f, "copy0/pt"]);
    assert_eq!(v["value"], "5");
    let (_, v) = run(&["fn", "eval", f, "copy3/pt"]);
    assert_eq!(v["value"], "4");
    let (_, v) = run(&["fn", "cont", f]);
    assert_eq!(v["continuous"], true);
}

#[test]
fn reduction_commands() {
    let g = r#"{"support":3,"edges":[[0,2]]}"#;
    let (_, v) = run(&["red", "recover", g, "--support", "3"]);
    assert_eq!(v["matches"], true);
    let (code, v) = run(&["red", "check", g, g, "--depth", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], true);
    assert_eq!(v["forwardWitnessVerified"], true);
}

#[test]
fn rank_commands() {
    let odds = "set over lim(pt) { inf: false, tail: parity(odd) }";
    let evens = "set over lim(pt) { inf: true, tail: parity(even) }";
    let (_, v) = run(&["rank", "sep", odds, evens]);
    assert_eq!(v["rank"], 2);
    let (_, v) = run(&["rank", "witness", "3"]);
    assert_eq!(v["rank"], 4);
    let (code, _) = run(&["rank", "witness", "9"]);
    assert_eq!(code, 3);
    let (_, v) = run(&["rank", "escalate", "fn over lim(pt) -> nat { inf: 1, tail: const(0) }"]);
    assert_eq!(v["sourceRank"], 2);
    assert_eq!(v["rank"], 3);
}

#[test]
fn output_is_byte_stable() {
    let args = [
        "fn",
        "embed",
        "fn over lim(pt) -> nat { inf: 1, tail: const(0) }",
        "fn over lim(lim(pt)) -> nat { inf: 1, tail: const(0) }",
    ];
    let a = Command::new(env!("CARGO_BIN_EXE_scattered")).args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_scattered")).args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}
