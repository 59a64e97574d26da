use std::process::{Command, Output};

fn itree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itree"))
        .args(args)
        .env_remove("ITREE_SEED")
        .env_remove("ITREE_CASES")
        .env_remove("ITREE_DEPTH")
        .env_remove("ITREE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_prints_system_and_unfolding() {
    let o = itree(&[
        "--pres",
        "product(a,b)",
        "--p",
        "p",
        "solve",
        "--eqs",
        "x = a(y); y = b(x)",
        "--depth",
        "6",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("x = rec s0. a(s1); s1 = b(s0)\n"), "{out}");
    assert!(out.contains("a(b(a(b(a(b(p))))))"), "{out}");
}

#[test]
fn solve_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = itree(&["--pres", "pf", "solve", "--eqs", "x = {x, y}; y = {}; z = {{x}, y}"]);
    assert!(first.status.success(), "{}", stderr(&first));
    let path = dir.path().join("sol.eqs");
    std::fs::write(&path, stdout(&first)).unwrap();
    let second = itree(&["--pres", "pf", "solve", "--file", path.to_str().unwrap()]);
    assert!(second.status.success(), "{}", stderr(&second));
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn check_is_deterministic() {
    let args = ["check", "--suite", "cut-quotient", "--cases", "15", "--seed", "5"];
    let a = itree(&args);
    let b = itree(&args);
    let c = itree(&[&args[..], &["--sequential"]].concat());
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a), stdout(&c));
    assert!(stdout(&a).lines().skip(1).all(|l| l.ends_with("pass")));
}

#[test]
fn stage_sizes() {
    let sizes: Vec<String> = (0..=4)
        .map(|n| stdout(&itree(&["enumerate", "--n", &n.to_string()])).trim().to_string())
        .collect();
    assert_eq!(sizes, ["0", "1", "2", "4", "16"]);
    let o = itree(&["enumerate", "--kind", "terminal", "--n", "2", "--list"]);
    assert_eq!(stdout(&o), "4\n{}\n{{}}\n{{{}}}\n{{}, {{}}}\n");
}

#[test]
fn order_and_congruence() {
    assert_eq!(
        stdout(&itree(&["leq", "--lhs", "{{}}", "--rhs", "{{{}}, {}}"])),
        "true\n"
    );
    assert_eq!(stdout(&itree(&["leq", "--lhs", "{{{}}}", "--rhs", "{{}}"])), "false\n");
    assert_eq!(
        stdout(&itree(&["equiv", "--lhs", "rec s. {s, s}", "--rhs", "rec t. {{t}}"])),
        "true\n"
    );
    assert_eq!(
        stdout(&itree(&[
            "--pres", "am23", "equiv", "--lhs", "s2(x, x)", "--rhs", "s3(x, x)"
        ])),
        "true\n"
    );
}

#[test]
fn dot_output() {
    let o = itree(&["--pres", "product(a,b)", "dot", "--term", "rec s. a(b(s))"]);
    let out = stdout(&o);
    assert!(out.starts_with("digraph \"tree\" {"), "{out}");
    assert!(out.contains("shape=doublecircle"));
}

#[test]
fn exit_codes() {
    let usage = itree(&["nf"]);
    assert_eq!(usage.status.code(), Some(2));
    let bad = itree(&["--pres", "pk(0)", "nf", "--term", "{}"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(stderr(&bad).lines().count(), 1);
    assert!(stderr(&bad).starts_with("error: BadParams: "));
    let unguarded = itree(&["--pres", "product(a,b)", "solve", "--eqs", "x = rec s. s"]);
    assert_eq!(unguarded.status.code(), Some(1));
    assert!(stderr(&unguarded).starts_with("error: "), "{}", stderr(&unguarded));
    let missing = itree(&["solve", "--file", "/nonexistent/eqs"]);
    assert_eq!(missing.status.code(), Some(1));
}
