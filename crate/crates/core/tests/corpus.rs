use std::fs;
use std::path::{Path, PathBuf};

use laf::j::J;
use laf::k1::K1;
use laf::kernel::check_judgment;
use laf::sequent::{translate_j, translate_k1, Focus};
use laf::syntax::{parse_judgment, print_judgment, SourceJudgment};

fn corpus(dir: &str) -> Vec<PathBuf> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(dir);
    let mut out: Vec<PathBuf> = fs::read_dir(&root)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "laf"))
        .collect();
    out.sort();
    out
}

fn parse(path: &Path) -> (String, SourceJudgment) {
    let text = fs::read_to_string(path).unwrap();
    let src = parse_judgment(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    (text, src)
}

fn verdict(src: &SourceJudgment) -> Result<(), &'static str> {
    let r = match src {
        SourceJudgment::K1(s) => check_judgment(&K1, &s.judgment().unwrap()).map(|_| ()),
        SourceJudgment::J(s) => check_judgment(&J, &s.judgment().unwrap()).map(|_| ()),
    };
    r.map_err(|e| e.error.kind())
}

#[test]
fn positives_are_accepted() {
    for dir in ["k1", "j"] {
        for p in corpus(dir) {
            let (_, src) = parse(&p);
            assert_eq!(src.logic().to_string(), dir, "{}", p.display());
            assert_eq!(verdict(&src), Ok(()), "{}", p.display());
        }
    }
}

#[test]
fn negatives_fail_with_the_annotated_kind() {
    let files = corpus("negative");
    assert!(files.len() >= 10);
    for p in files {
        let (text, src) = parse(&p);
        let want = text.lines().find_map(|l| l.strip_prefix("# expect: ")).unwrap();
        assert_eq!(verdict(&src), Err(want.trim()), "{}", p.display());
    }
}

#[test]
fn malformed_files_do_not_parse() {
    for p in corpus("malformed") {
        let text = fs::read_to_string(&p).unwrap();
        assert!(parse_judgment(&text).is_err(), "{}", p.display());
    }
}

#[test]
fn printing_is_idempotent_on_the_corpus() {
    for dir in ["k1", "j", "negative", "holes"] {
        for p in corpus(dir) {
            let (_, src) = parse(&p);
            let once = print_judgment(&src);
            let again = parse_judgment(&once).unwrap();
            assert_eq!(again, src, "{}", p.display());
            assert_eq!(print_judgment(&again), once);
        }
    }
}

#[test]
fn sequents_match_golden_files() {
    for dir in ["k1", "j"] {
        for p in corpus(dir) {
            let (_, src) = parse(&p);
            let mut got = String::new();
            match &src {
                SourceJudgment::K1(s) => {
                    for f in Focus::of_goal(&s.judgment().unwrap().goal) {
                        got.push_str(&format!("{}\n", translate_k1(&s.context, &f)));
                    }
                }
                SourceJudgment::J(s) => {
                    for f in Focus::of_goal(&s.judgment().unwrap().goal) {
                        got.push_str(&format!("{}\n", translate_j(&s.context, &f).unwrap()));
                    }
                }
            }
            let golden = p.parent().unwrap().join("../golden").join(dir).join(p.file_name().unwrap()).with_extension("sequent");
            assert_eq!(got, fs::read_to_string(&golden).unwrap(), "{}", p.display());
        }
    }
}
