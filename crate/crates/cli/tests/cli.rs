use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(p: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(p)
}

fn laf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laf")).args(args).output().unwrap()
}

fn with_file(sub: &str, file: &str, rest: &[&str]) -> Output {
    let path = corpus(file);
    let mut args = vec![sub, path.to_str().unwrap()];
    args.extend_from_slice(rest);
    laf(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_accepts_and_rejects() {
    let ok = with_file("check", "k1/excluded_middle.laf", &[]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("accepted\nrules: select sync async"));

    let bad = with_file("check", "negative/em_missing_branch.laf", &[]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("AsyncDomainMismatch at path [0, 0]"), "{}", stderr(&bad));
}

#[test]
fn parse_and_usage_errors_exit_2() {
    let o = with_file("check", "malformed/unbalanced.laf", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3, column 1: expected `)`, found end of input"), "{}", stderr(&o));
    assert_eq!(with_file("check", "holes/em.laf", &[]).status.code(), Some(2));
    assert_eq!(laf(&["check"]).status.code(), Some(2));
    assert_eq!(laf(&["semprove", "--logic", "k3", "true+"]).status.code(), Some(2));
    assert_eq!(laf(&["decomps", "--logic", "k1", "a |+"]).status.code(), Some(2));
    assert_eq!(laf(&["check", "/nonexistent.laf"]).status.code(), Some(2));
}

#[test]
fn semprove_and_decomps() {
    let o = laf(&["semprove", "--logic", "k1", "false+"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "false\n".into()));
    let o = laf(&["semprove", "--logic", "k1", "a |+ ~a"]);
    assert_eq!(stdout(&o), "true\n");
    let o = laf(&["decomps", "--logic", "k1", "a |+ ~a"]);
    assert_eq!(stdout(&o), "inl pos : a\ninr neg : !a\n");
    let o = laf(&["decomps", "--logic", "j", "L(l => l)"]);
    assert_eq!(stdout(&o), "pos :: neg_l : (R(l), !R(l))\n");
}

#[test]
fn eval_traces() {
    let o = with_file("eval", "k1/cut_true.laf", &["--fuel", "100", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "step 1: cut unit on true+ | env sizes (0,1,0)\nstep 2: select $0 unit | env sizes (0,1,0)\nhalted after 2 steps: reached opaque k0\n"
    );
    let o = with_file("eval", "k1/cut_true.laf", &["--fuel", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(with_file("eval", "k1/true_intro.laf", &[]).status.code(), Some(2));
}

#[test]
fn prove_fills_holes() {
    let o = with_file("prove", "holes/em.laf", &["--depth", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("cmd < $0 | inr neg . { pos => < $0 | inl pos . #0 > } >\n"), "{}", stdout(&o));
    assert_eq!(with_file("prove", "holes/unprovable.laf", &["--depth", "4"]).status.code(), Some(1));
    let o = with_file("prove", "holes/identity.laf", &[]);
    assert!(stdout(&o).contains("dec { pos :: neg_l => < $rs | pos . #0 > } : !L(l => l)"));
}

#[test]
fn translate_and_sweep() {
    let o = with_file("translate", "j/use_identity.laf", &[]);
    assert_eq!(stdout(&o), "l, l => l |- l\n");
    let o = with_file("translate", "k1/dec_pair.laf", &[]);
    assert_eq!(stdout(&o), "|- ~a [a]\n|- ~a [true-]\n");
    for logic in ["k1", "j"] {
        let u = corpus(&format!("universe/{logic}.txt"));
        let o = laf(&["sweep", "--logic", logic, "--depth", "4", "--universe", u.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).starts_with("consistent: no closed command up to depth 4"));
    }
}
