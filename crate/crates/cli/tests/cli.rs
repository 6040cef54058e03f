use std::path::Path;
use std::process::{Command, Output};

fn hyperfix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperfix")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen_ck(dir: &Path) {
    let o = hyperfix(&["gen", "ck", "2", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
}

fn check(dir: &Path, name: &str, extra: &[&str]) -> Output {
    let sys = dir.join(format!("{name}.sys"));
    let hf = dir.join(format!("{name}.hf"));
    let mut args = vec!["check", "--system", sys.to_str().unwrap(), "--formula", hf.to_str().unwrap()];
    args.extend_from_slice(extra);
    hyperfix(&args)
}

#[test]
fn knowledge_of_a_is_sat_at_three() {
    let dir = tempfile::tempdir().unwrap();
    gen_ck(dir.path());
    let o = check(dir.path(), "ck_a_2", &["--method", "iter"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("VERDICT=SAT precision=3 method=iter peak_states="), "{out}");
    assert!(out.contains(" ms="), "{out}");
}

#[test]
fn knowledge_of_next_a_is_unsat_with_traces() {
    let dir = tempfile::tempdir().unwrap();
    gen_ck(dir.path());
    let o = check(dir.path(), "ck_next_a_2", &["--witness"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("VERDICT=UNSAT"), "{out}");
    assert!(out.lines().any(|l| l.starts_with("r = {a}")), "{out}");
}

#[test]
fn zero_precision_is_unknown() {
    let dir = tempfile::tempdir().unwrap();
    gen_ck(dir.path());
    let o = check(dir.path(), "ck_a_2", &["--method", "iter", "--max-precision", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("VERDICT=UNKNOWN precision=0"));
}

#[test]
fn bad_inputs_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    gen_ck(dir.path());
    std::fs::write(dir.path().join("broken.hf"), "forall p in S. G (a@p").unwrap();
    std::fs::copy(dir.path().join("ck_a_2.sys"), dir.path().join("broken.sys")).unwrap();
    assert_eq!(check(dir.path(), "broken", &[]).status.code(), Some(3));
    assert_eq!(check(dir.path(), "missing", &[]).status.code(), Some(3));
    assert_eq!(hyperfix(&["check"]).status.code(), Some(3));
    assert_eq!(hyperfix(&["gen", "nonsense", "--out", "x"]).status.code(), Some(3));
}

#[test]
fn generated_families_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for args in [vec!["muddy", "2", "2"], vec!["od", "q1"], vec!["swap", "n", "3"]] {
        let mut full = vec!["gen"];
        full.extend(args);
        full.extend(["--out", d]);
        assert_eq!(hyperfix(&full).status.code(), Some(0));
    }
    assert_eq!(check(dir.path(), "muddy_2_2", &[]).status.code(), Some(0));
    assert_eq!(check(dir.path(), "od_q1", &[]).status.code(), Some(1));
    assert_eq!(check(dir.path(), "od_asyn_q1", &[]).status.code(), Some(0));
    let o = check(dir.path(), "swap_a_3", &["--method", "iter"]);
    assert!(stdout(&o).starts_with("VERDICT=SAT precision=3"));
}

#[test]
fn selftest_passes() {
    let o = hyperfix(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
