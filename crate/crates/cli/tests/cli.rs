use std::path::{Path, PathBuf};
use std::process::Command;

use qgt_core::exactalg::{bracket, EntryDiff, NumberSystem, Rat};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qgt(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qgt")).args(args).output().expect("spawn qgt");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Timing lines are the only nondeterministic output.
fn stable(s: &str) -> String {
    s.lines().filter(|l| !l.starts_with("elapsed_ms")).map(|l| format!("{l}\n")).collect()
}

/// Compares against `tests/golden/<name>.txt`; `QGT_BLESS=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"));
    let actual = stable(actual);
    if std::env::var_os("QGT_BLESS").is_some() {
        std::fs::write(&path, &actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

#[test]
fn standard_set_is_admissible_with_one_component() {
    let r = qgt(&["check-admissible", &fixture("standard3.spec")]);
    assert_eq!(r.code, 0);
    golden("check_admissible_standard3", &r.stdout);
}

#[test]
fn cross_prints_witness_and_exits_one() {
    let r = qgt(&["check-admissible", &fixture("cross3.spec")]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("violation = condition (iii) cross"));
    golden("check_admissible_cross3", &r.stdout);
}

#[test]
fn empty_set_is_admissible() {
    let r = qgt(&["check-admissible", &fixture("empty3.spec")]);
    assert_eq!(r.code, 0);
    golden("check_admissible_empty3", &r.stdout);
}

#[test]
fn weight_generator_gives_one_scalar_line() {
    let r = qgt(&["act", &fixture("generic2.spec"), "qeps_1", "T[0]"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().count(), 1);
    golden("act_qeps1_generic2", &r.stdout);
}

#[test]
fn raising_on_generic_n2_matches_hand_substitution() {
    // base (1/2, 0 | 1/4): e_1 T = -[1/2 - 1/4][0 - 1/4] T(+1) = [1/4]^2 T(+1)
    let r = qgt(&["act", &fixture("generic2.spec"), "e1", "T[0]"]);
    assert_eq!(r.code, 0);
    let b = bracket(NumberSystem::Quantum, &EntryDiff::constant(Rat::new(1, 4)));
    assert_eq!(r.stdout, format!("T[1]: {}\n", b.mul(&b)));
}

#[test]
fn raising_on_a_derivative_vector_mixes_kinds() {
    let r = qgt(&["act", &fixture("singular3.spec"), "--mode", "classical", "e2", "DT[0,1,0]"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.lines().any(|l| l.starts_with("T[")));
    assert!(r.stdout.lines().any(|l| l.starts_with("DT[")));
    golden("act_e2_derivative_classical", &r.stdout);
}

#[test]
fn tau_fixed_derivative_is_zero() {
    let r = qgt(&["act", &fixture("singular3.spec"), "e2", "DT[1,0,0]"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "0\n"));
}

#[test]
fn act_outside_window_is_an_input_error() {
    let r = qgt(&["act", &fixture("generic2.spec"), "e1", "T[5]"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("outside the window"));
    let r = qgt(&["act", &fixture("generic2.spec"), "g7", "T[0]"]);
    assert_eq!(r.code, 2);
}

#[test]
fn verify_module_suites_on_singular_spec_pass() {
    for suite in ["relations", "compatibility", "gamma", "irreducible"] {
        let r = qgt(&["verify", &fixture("singular3.spec"), "--bound", "1", "--suite", suite]);
        assert_eq!(r.code, 0, "{suite}: {}", r.stdout);
        assert!(r.stdout.ends_with("result = pass\n"));
    }
}

/// The evaluated pole-pair identity fails unless `ev(Σ f g^τ) = 0` is added
/// to its hypotheses, so `all` exits 1 with that as the only failure.
#[test]
fn verify_all_fails_only_on_the_unanchored_ev_identity() {
    let r = qgt(&["verify", &fixture("singular3.spec"), "--bound", "1"]);
    assert_eq!(r.code, 1, "{}", r.stdout);
    let summary = r.stdout.split("[summary]").nth(1).expect("summary block");
    for line in ["relations = pass", "compatibility = pass", "gamma = pass", "irreducible = pass", "appendix = fail"] {
        assert!(summary.contains(line), "missing {line:?}");
    }
    assert!(r.stdout.contains("relation = pole pair: ev identity"));
    assert!(r.stdout.contains("note = anchored pole pair: ev identity: 100 pass, 0 fail"));
    assert!(r.stdout.contains("note = pole pair: ev identity: 0 pass, 100 fail"));
}

#[test]
fn mutated_spec_fails_verification() {
    let r = qgt(&["verify", &fixture("mutated3.spec"), "--suite", "relations"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("[counterexample]"));
    assert!(r.stdout.ends_with("result = fail\n"));
}

#[test]
fn bound_zero_relations_pass() {
    let r = qgt(&["verify", &fixture("generic2.spec"), "--suite", "relations", "--bound", "0"]);
    assert_eq!(r.code, 0);
    golden("verify_relations_bound0", &r.stdout);
}

#[test]
fn unknown_suite_is_an_input_error() {
    let r = qgt(&["verify", &fixture("generic2.spec"), "--suite", "everything"]);
    assert_eq!(r.code, 2);
}

#[test]
fn parse_errors_are_positioned() {
    let r = qgt(&["verify", &fixture("bad.spec")]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 4, column 13"), "{}", r.stderr);
    let r = qgt(&["blocks", "/nonexistent/file.spec"]);
    assert_eq!(r.code, 2);
}

#[test]
fn enumerate_two() {
    let r = qgt(&["enumerate", "2"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.lines().any(|l| l == "{}"));
    golden("enumerate_2", &r.stdout);
}

#[test]
fn enumerate_three_lists_standard_once() {
    let r = qgt(&["enumerate", "3"]);
    assert_eq!(r.code, 0);
    let sets: Vec<&str> = r.stdout.lines().filter(|l| l.starts_with('{')).collect();
    let standard = "{[1,1] > [2,2], [2,1] >= [1,1], [2,1] > [3,2], [2,2] > [3,3], [3,1] >= [2,1], [3,2] >= [2,2]}";
    assert!(sets.contains(&standard));
    let mut dedup = sets.clone();
    dedup.sort();
    dedup.dedup();
    assert_eq!(dedup.len(), sets.len());
    let total: usize = r.stdout.lines().find_map(|l| l.strip_prefix("admissible = ")).unwrap().parse().unwrap();
    assert_eq!(total, sets.len());
}

#[test]
fn enumerate_four_is_refused() {
    let r = qgt(&["enumerate", "4"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("size limit"));
}

/// `(dim, max jordan, cells, members)` per table row.
fn block_rows(out: &str) -> Vec<(usize, String, String, String)> {
    out.lines()
        .filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit()))
        .map(|l| {
            let f: Vec<&str> = l.splitn(6, ' ').collect();
            (f[1].parse().unwrap(), f[2].to_string(), f[3].to_string(), f[4].to_string())
        })
        .collect()
}

#[test]
fn singular_blocks_have_size_two_jordan_cells() {
    let r = qgt(&["blocks", &fixture("singular3.spec"), "--bound", "1"]);
    assert_eq!(r.code, 0);
    let rows = block_rows(&r.stdout);
    assert!(!rows.is_empty());
    assert!(rows.iter().any(|(d, j, _, _)| *d == 2 && j == "2"));
    for (dim, jordan, _, members) in &rows {
        assert!(*dim <= 2);
        // a block of one normal vector has a tau-fixed shift
        if *dim == 1 {
            assert_eq!(jordan, "1");
            assert!(members.starts_with("T["));
        }
    }
}

#[test]
fn generic_blocks_are_one_dimensional() {
    let r = qgt(&["blocks", &fixture("generic2.spec")]);
    assert_eq!(r.code, 0);
    let rows = block_rows(&r.stdout);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|(d, j, c, _)| *d == 1 && j == "1" && c == "-"));
    golden("blocks_generic2", &r.stdout);
}
