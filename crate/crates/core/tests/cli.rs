use std::io::Write;
use std::process::{Command, Stdio};

fn modfo(args: &[&str]) -> (String, String, i32) {
    modfo_with_stdin(args, "")
}

fn modfo_with_stdin(args: &[&str], stdin: &str) -> (String, String, i32) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_modfo"))
        .args(args)
        .env_remove("MODFO_JOBS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn json_lines(s: &str) -> Vec<serde_json::Value> {
    s.lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("`{l}` is not JSON: {e}")))
        .collect()
}

#[test]
fn translate_golden() {
    let (out, _, code) = modfo(&["translate", "forall a. exists b. a < b"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "forall a. not (a mod a = a) -> exists b. not (b mod b = b) & a mod b = a\n"
    );
    let (out, _, _) = modfo(&["translate", "forall a. forall b. b divides a"]);
    assert_eq!(
        out,
        "forall a. not (a mod a = a) -> forall b. not (b mod b = b) -> (a mod b) mod (a mod b) = a mod b\n"
    );
}

#[test]
fn manifest_golden() {
    let (out, _, code) = modfo(&["translate", "--manifest"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "name paper\nsource posdiv\ntarget mod\nuniverse(u) := not (u mod u = u)\n<(a, b) := a mod b = a\ndivides(b, a) := (a mod b) mod (a mod b) = a mod b\n"
    );
}

#[test]
fn translate_with_manifest_file() {
    let dir = std::env::temp_dir().join(format!("modfo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.interp");
    std::fs::write(
        &path,
        "name broken\nsource posdiv\ntarget mod\nuniverse(u) := not (u mod u = u)\n<(a, b) := a mod b = b\ndivides(b, a) := (a mod b) mod (a mod b) = a mod b\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let (out, _, code) = modfo(&["translate", "--interp", p, "x < y"]);
    assert_eq!(code, 0);
    assert_eq!(out, "x mod y = y\n");
    let (out, _, code) = modfo(&["fuzz", "--interp", p, "--seed", "42", "--count", "200"]);
    assert_eq!(code, 1);
    assert!(out.lines().last().unwrap().starts_with("fail: broken:"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_lemma() {
    let (out, _, code) = modfo(&["check", "lemma", "--bound", "1000"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("pass: 3 lemma items, 1002001 pairs"), "{out}");
    let (out, _, code) = modfo(&["--json", "check", "lemma", "--bound", "10"]);
    assert_eq!(code, 0);
    let v = &json_lines(&out)[0];
    assert_eq!(v["pairs"], 121);
    assert_eq!(v["passed"], true);
}

#[test]
fn defcheck_succ_paper() {
    let (out, _, code) = modfo(&["defcheck", "--definition", "succ_paper", "--oracle", "succ", "--bound", "100"]);
    assert_eq!(code, 1);
    let first = out.lines().next().unwrap();
    let v: serde_json::Value = serde_json::from_str(first).unwrap();
    assert_eq!(v["kind"], "definition");
    assert_eq!(v["assignment"]["x"], 3);
    assert_eq!(v["assignment"]["y"], 1);
    assert_eq!(v["left"], true);
    assert_eq!(v["right"], false);

    let (_, _, code) = modfo(&["defcheck", "--definition", "succ_fixed"]);
    assert_eq!(code, 0);
}

#[test]
fn defcheck_ad_hoc_formula() {
    let (out, _, code) = modfo(&[
        "--json",
        "defcheck",
        "--formula",
        "y < x & not exists z. y < z & z < x",
        "--params",
        "x,y",
        "--base",
        "order",
        "--bound",
        "40",
    ]);
    assert_eq!(code, 0, "{out}");
    let v = &json_lines(&out)[0];
    assert_eq!(v["tuples"], 1600);

    let (out, _, code) = modfo(&[
        "defcheck",
        "--formula",
        "x mod x = x",
        "--params",
        "x",
        "--structure",
        "mod",
        "--oracle",
        "zero",
    ]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn eval_exit_codes() {
    let (out, _, code) = modfo(&["eval", "--structure", "mod", "--assign", "x=0", "exists y. y mod y = x"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("true"));
    let (_, _, code) = modfo(&["eval", "--structure", "mod", "--assign", "x=7", "--bound", "50", "exists y. y mod y = x"]);
    assert_eq!(code, 1);
    let (_, _, code) = modfo(&["eval", "--bound", "30", "forall a. exists b. a < b"]);
    assert_eq!(code, 1);
    let (out, _, code) = modfo(&["--json", "eval", "--bound", "4", "exists a. exists b. a < b"]);
    assert_eq!(code, 0);
    let v = &json_lines(&out)[0];
    assert_eq!(v["value"], true);
    assert_eq!(v["visited"], 3);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    for args in [
        &["eval", "x <"][..],
        &["eval", "--bound", "4294967297", "forall x. x = x"],
        &["eval", "--structure", "nope", "x = x"],
        &["eval", "x < y"],
        &["frobnicate"],
        &["fuzz", "--no-such-flag"],
        &["fuzz", "--mutate=nope"],
        &["defcheck", "--definition", "nope"],
        &["defcheck"],
        &["translate", "--interp", "/nonexistent/manifest", "x < y"],
        &["parse", "--signature", "mod", "x < y"],
    ] {
        let (_, err, code) = modfo(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
    let (_, err, _) = modfo(&["parse", "x < y & y"]);
    assert!(err.contains("1:10"), "{err}");
}

#[test]
fn bound_cap_is_inclusive() {
    let (_, _, code) = modfo(&["eval", "--bound", "4294967296", "--assign", "x=5", "x = x"]);
    assert_eq!(code, 0);
}

#[test]
fn formula_from_stdin_and_file() {
    let (out, _, code) = modfo_with_stdin(&["parse", "-"], "forall x.\n  exists y. x < y");
    assert_eq!(code, 0);
    assert_eq!(out, "forall x. exists y. x < y\n");

    let path = std::env::temp_dir().join(format!("modfo-formula-{}", std::process::id()));
    std::fs::write(&path, "x divides y").unwrap();
    let (out, _, code) = modfo(&["parse", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 0);
    assert_eq!(out, "x divides y\n");
}

#[test]
fn fuzz_reports() {
    let (out, _, code) = modfo(&["fuzz", "--count", "200"]);
    assert_eq!(code, 0);
    assert_eq!(out, "pass: paper: 200 of 200 sentences agree (seed 0, bound 20)\n");

    let (out, _, code) = modfo(&["--json", "fuzz", "--seed", "42", "--mutate", "--shrink"]);
    assert_eq!(code, 1);
    let lines = json_lines(&out);
    let summaries: Vec<_> = lines.iter().filter(|v| v["command"] == "fuzz").collect();
    assert_eq!(summaries.len(), 3);
    assert!(summaries.iter().all(|v| v["passed"] == false));
    for c in lines.iter().filter(|v| v["kind"] == "differential") {
        assert_eq!(c["seed"], 42);
        assert!(c["iteration"].is_u64());
    }
}

#[test]
fn jobs_env_matches_flag() {
    let args = ["--json", "fuzz", "--seed", "3", "--count", "300"];
    let plain = modfo(&args);
    let out = Command::new(env!("CARGO_BIN_EXE_modfo"))
        .args(args)
        .env("MODFO_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), plain.0);
    let (_, _, code) = modfo(&["--jobs", "zero", "corpus", "list"]);
    assert_eq!(code, 2);
}

#[test]
fn corpus_list() {
    let (out, _, code) = modfo(&["corpus", "list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = out.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(names, ["succ_paper", "succ_fixed", "lemma1_exists", "lemma2_full", "lemma3_full"]);
    let (out, _, _) = modfo(&["--json", "corpus", "list"]);
    assert_eq!(json_lines(&out).len(), 5);
}

#[test]
fn json_mode_prints_only_json() {
    for args in [
        &["--json", "parse", "forall x. x < x"][..],
        &["--json", "translate", "x < y"],
        &["--json", "translate", "--manifest"],
        &["--json", "stability", "exists a. exists b. exists c. a < b & b < c", "--bounds", "2,3"],
        &["--json", "defcheck", "--definition", "lemma3_full", "--bound", "30"],
    ] {
        let (out, _, _) = modfo(args);
        assert!(!json_lines(&out).is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let (out, _, code) = modfo(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("defcheck"));
    let (out, _, _) = modfo(&["fuzz", "--help"]);
    assert!(out.contains("[default: 0]") && out.contains("[default: 20]"));
}

#[test]
fn in_process_run() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = modfo::cli::run(["modfo", "parse", "x < y"], &mut std::io::empty(), &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), "x < y\n");
}
