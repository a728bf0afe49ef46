use std::process::{Command, Output};

fn permlogic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permlogic"))
        .args(args)
        .env_remove("PERMLOGIC_MAX_N")
        .env_remove("PERMLOGIC_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn stack_sorts_231() {
    let o = permlogic(&["sort", "--op", "stack", "231"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "213");
    let o = permlogic(&["sort", "--op", "stack,stack", "231"]);
    assert_eq!(stdout(&o).trim(), "123");
}

#[test]
fn stack_sortable_count_at_five() {
    let s = stdout(&permlogic(&["compile", "sortable", "--ops", "stack"]));
    let o = permlogic(&["count", "--sentence", s.trim(), "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "42");
}

#[test]
fn verify_all_small() {
    let o = permlogic(&["verify", "all", "--max-n", "6"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("sortable[stack]: 873 cases, 0 failures"), "{text}");
    assert!(text.trim_end().ends_with("11 of 11 suites passed"), "{text}");
}

#[test]
fn verify_reports_are_reproducible() {
    let args = ["verify", "patterns", "--max-n", "5", "--output", "json", "--no-timing"];
    let (a, b) = (permlogic(&args), permlogic(&args));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let r = &v["reports"][0];
    assert_eq!(r["suite"], "patterns");
    assert_eq!(r["failures"].as_array().unwrap().len(), 0);
    assert_eq!(r["elapsed_ms"], 0);
    let t1 = permlogic(&["verify", "ef", "--max-n", "5"]);
    let t2 = permlogic(&["verify", "ef", "--max-n", "5"]);
    assert_eq!(t1.stdout, t2.stdout);
}

#[test]
fn models_json_shape() {
    let o = permlogic(&["models", "--sentence", "A x . A y . (x <P y -> x <V y)", "--n", "3", "--output", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["count"], 1);
    assert_eq!(v["models"][0], "123");
}

#[test]
fn ef_exit_codes() {
    assert_eq!(permlogic(&["ef", "1234567", "12345678", "--k", "3"]).status.code(), Some(0));
    let o = permlogic(&["ef", "123456", "1234567", "--k", "3", "--output", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["distinguishing_depth"], 3);
    let marked = permlogic(&["ef", "132", "132", "--k", "1", "--marks1", "1,2", "--marks2", "2,3"]);
    assert_eq!(marked.status.code(), Some(1));
    assert_eq!(permlogic(&["ef", "12", "21", "--k", "9"]).status.code(), Some(2));
}

#[test]
fn compiled_formulas_reparse() {
    let cases: &[&[&str]] = &[
        &["compile", "simple"],
        &["compile", "plus"],
        &["compile", "pattern", "--pattern", "2413"],
        &["compile", "pattern", "--pattern", "231", "--open"],
        &["compile", "avoid", "--basis", "231,4321"],
        &["compile", "mesh", "--pattern", "21", "--shading", "[[0,0],[1,1]]"],
        &["compile", "barred", "--pattern", "3142", "--barred", "1"],
        &["compile", "decorated", "--pattern", "12", "--constraints", r#"[{"cells":[[1,1]],"forbidden":"12"}]"#],
        &["compile", "grid", "--grid", r#"[[["21"],null],[null,["12"]]]"#],
        &["compile", "cycletype", "--lambda", "3,2", "--theory", "toob"],
        &["compile", "cycletype", "--lambda", "2", "--theory", "toto", "--padded"],
        &["compile", "kcycle", "--k", "3"],
        &["compile", "characteristic", "--perm", "2413"],
        &["compile", "fixedpoint", "--k", "3", "--m", "1", "--n", "1"],
        &["compile", "transposition", "--k", "3", "--m", "2", "--n", "2"],
        &["compile", "stable", "--pattern", "21", "--bound", "2"],
        &["compile", "cycle", "--k", "2", "--bound", "2", "--close"],
        &["compile", "preimage", "--op", "stack", "--sentence", "E x . x = x"],
    ];
    for args in cases {
        let o = permlogic(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        let f = permlogic::parse(text.trim()).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(permlogic::print(&f), text.trim(), "{args:?}");
    }
}

#[test]
fn marginals_commands() {
    let o = permlogic(&["expand", "--pattern", "2413", "--cycle", "1,2,5"]);
    assert_eq!(stdout(&o).trim(), "7416253");
    let o = permlogic(&["expand", "--pattern", "1", "--cycle", "1,2", "--inflate", "12,21"]);
    assert_eq!(o.status.code(), Some(0));
    let o = permlogic(&["decompose", "[[0,2,0],[0,0,2],[2,0,1]]"]);
    assert_eq!(stdout(&o).trim(), "2 (1,2,3)\n1 (3)");
    let o = permlogic(&["decompose", "[[0,1],[0,0]]"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(permlogic(&["decompose", "not json"]).status.code(), Some(2));
    let o = permlogic(&["stable", "--pattern", "21", "2143"]);
    assert_eq!(stdout(&o).trim(), "1,2\n3,4");
    assert_eq!(permlogic(&["stable", "--pattern", "21", "231"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(permlogic(&["sort", "--op", "heap", "21"]).status.code(), Some(2));
    assert_eq!(permlogic(&["sort", "--op", "stack", "22"]).status.code(), Some(2));
    assert_eq!(permlogic(&["eval", "--sentence", "x <P", "12"]).status.code(), Some(2));
    assert_eq!(permlogic(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(permlogic(&["models", "--sentence", "E x . x = x", "--n", "9"]).status.code(), Some(2));
    assert_eq!(permlogic(&["--help"]).status.code(), Some(0));
}

#[test]
fn env_and_flag_caps() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_permlogic"));
        c.args(["count", "--sentence", "E x . x = x", "--n", "5"]).args(extra).env_remove("PERMLOGIC_CONFIG");
        match env {
            Some(v) => c.env("PERMLOGIC_MAX_N", v),
            None => c.env_remove("PERMLOGIC_MAX_N"),
        };
        c.output().unwrap().status.code()
    };
    assert_eq!(run(None, &[]), Some(0));
    assert_eq!(run(Some("4"), &[]), Some(2));
    assert_eq!(run(Some("4"), &["--max-n", "5"]), Some(0));
}

#[test]
fn eval_reads_stdin() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_permlogic"))
        .args(["eval", "21"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"E x . E y . (x <P y & y <V x)").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "true");
}
