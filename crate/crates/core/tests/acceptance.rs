//! Acceptance run: one line per criterion, exit status 1 on any unexpected
//! outcome. Criteria may be selected by number, e.g.
//! `cargo test -p qgt-core --test acceptance -- 4 6`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{brute, generic_catalog, relation_catalog, singular_catalog, standard, Named};
use qgt_core::action::{window, Mutation};
use qgt_core::exactalg::NumberSystem::{self, Classical, Quantum};
use qgt_core::tableaux::{universe, Relation, RelationSet};
use qgt_core::verify::{
    check_appendix, check_compatibility, check_defining_relations, check_finite_dimensional, check_gamma,
    finite_dimensional_spec, CheckReport, DEFAULT_SAMPLES, DEFAULT_SEED,
};

/// Criteria that fail for a documented reason. Such a criterion is reported
/// as FAIL; if it ever passes, the run fails so the list gets updated.
const KNOWN_FAILURES: &[u32] = &[2];

type Verdict = Result<String, String>;

fn all_pass(reports: &[CheckReport]) -> Verdict {
    let checked: u64 = reports.iter().map(|r| r.checked).sum();
    match reports.iter().find(|r| !r.passed()) {
        None => Ok(format!("{} reports, {checked} checks", reports.len())),
        Some(r) => Err(format!("{r}")),
    }
}

/// The n = 4 singular specs without relations are left to the sweeps in the
/// integration tests: at B = 2 each takes several minutes.
fn criterion_one_set(sys: NumberSystem) -> Vec<Named> {
    relation_catalog(sys)
        .into_iter()
        .filter(|s| !(s.spec.n() == 4 && s.spec.pair().is_some() && s.spec.relations().is_empty()))
        .collect()
}

fn relations_at_two(sys: NumberSystem) -> Verdict {
    let reports: Vec<_> = criterion_one_set(sys).iter().map(|s| check_defining_relations(&s.spec, 2)).collect();
    all_pass(&reports)
}

fn c1() -> Verdict {
    relations_at_two(Quantum)
}

fn c2() -> Verdict {
    // n = 4 at B = 2 alone would exceed the one-minute budget
    let mut reports: Vec<_> = singular_catalog(Quantum)
        .iter()
        .map(|s| check_compatibility(&s.spec, if s.spec.n() >= 4 { 1 } else { 2 }))
        .collect();
    for sys in [Quantum, Classical] {
        reports.push(check_appendix(sys, DEFAULT_SAMPLES, DEFAULT_SEED));
    }
    let failing: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .flat_map(|r| r.notes.iter().filter(|n| !n.ends_with(" 0 fail")).map(move |n| format!("{}: {n}", r.spec)))
        .collect();
    if failing.is_empty() {
        all_pass(&reports)
    } else {
        Err(failing.join("; "))
    }
}

fn gamma_singular(sys: NumberSystem) -> Verdict {
    let reports: Vec<_> = singular_catalog(sys).iter().map(|s| check_gamma(&s.spec, 2)).collect();
    all_pass(&reports)
}

fn c3() -> Verdict {
    gamma_singular(Quantum)
}

fn c4() -> Verdict {
    let reports: Vec<_> = generic_catalog(Quantum).iter().map(|s| check_gamma(&s.spec, 2)).collect();
    all_pass(&reports)
}

fn finite_dimensional(sys: NumberSystem) -> Verdict {
    let mut tops: Vec<(Vec<i64>, usize)> = (0..=10).map(|m| (vec![m, 0], m as usize + 1)).collect();
    tops.push((vec![2, 1, 0], 8));
    let mut reports = Vec::new();
    for (top, size) in tops {
        let spec = finite_dimensional_spec(&top, sys).map_err(|e| e.to_string())?;
        let basis = window(&spec, (top[0] - top[top.len() - 1]) as u32).len();
        if basis != size {
            return Err(format!("top row {top:?}: basis size {basis}, expected {size}"));
        }
        reports.push(check_finite_dimensional(&top, sys, None));
    }
    all_pass(&reports)
}

fn c5() -> Verdict {
    finite_dimensional(Quantum)
}

fn c6() -> Verdict {
    let n = 3;
    let u = universe(n);
    let total: u64 = 1 << u.len();
    let threads = std::thread::available_parallelism().map_or(4, |p| p.get()) as u64;
    let chunk = total.div_ceil(threads);
    let results: Vec<(u64, u64, Option<u64>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let u = &u;
                scope.spawn(move || {
                    let (mut admissible, mut disagree, mut first) = (0u64, 0u64, None);
                    for mask in w * chunk..((w + 1) * chunk).min(total) {
                        let rels: Vec<Relation> = (0..u.len()).filter(|i| mask >> i & 1 == 1).map(|i| u[i]).collect();
                        let oracle = brute::admissible(n, &rels);
                        let lib = RelationSet::new(n, rels).expect("universe relations").is_admissible().admissible;
                        admissible += oracle as u64;
                        if oracle != lib {
                            disagree += 1;
                            first.get_or_insert(mask);
                        }
                    }
                    (admissible, disagree, first)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let admissible: u64 = results.iter().map(|r| r.0).sum();
    let disagree: u64 = results.iter().map(|r| r.1).sum();
    match results.iter().find_map(|r| r.2) {
        None => Ok(format!("{total} subsets, {admissible} admissible, 0 disagreements")),
        Some(mask) => {
            let rels: Vec<Relation> = (0..u.len()).filter(|i| mask >> i & 1 == 1).map(|i| u[i]).collect();
            Err(format!("{disagree} disagreements, first {}", RelationSet::new(n, rels).unwrap()))
        }
    }
}

fn c7() -> Verdict {
    let parts = [
        ("relations", relations_at_two(Classical)),
        ("gamma", gamma_singular(Classical)),
        ("findim", finite_dimensional(Classical)),
    ];
    let mut ok = Vec::new();
    for (name, v) in parts {
        ok.push(format!("{name}: {}", v.map_err(|e| format!("{name}: {e}"))?));
    }
    Ok(ok.join("; "))
}

fn c8() -> Verdict {
    let mut caught = Vec::new();
    let mutations = [Mutation::SignFlip { k: 1, j: 1 }, Mutation::DropGate, Mutation::GammaPrefactor];
    for m in mutations {
        let spec = standard(3, Quantum).with_mutation(Some(m));
        let reports = [
            check_defining_relations(&spec, 1),
            check_gamma(&spec, 1),
            check_finite_dimensional(&[2, 1, 0], Quantum, Some(m)),
        ];
        let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
        if failed.is_empty() {
            return Err(format!("{m} passes every suite"));
        }
        caught.push(format!("{m} caught by {}", failed.join("+")));
    }
    Ok(caught.join(", "))
}

const CRITERIA: [(u32, &str, fn() -> Verdict); 8] = [
    (1, "defining relations at B = 2, quantum", c1),
    (2, "singular calculus and pole-pair identities", c2),
    (3, "central action on singular modules", c3),
    (4, "generic eigenvalues against the symmetric-function oracle", c4),
    (5, "finite-dimensional basis sizes and closure", c5),
    (6, "admissibility against brute force, n = 3", c6),
    (7, "classical reruns of 1, 3 and 5", c7),
    (8, "mutation sensitivity", c8),
];

fn main() -> ExitCode {
    let picked: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = 0;
    for (id, title, run) in CRITERIA {
        if !picked.is_empty() && !picked.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let verdict = run();
        let secs = t.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.contains(&id);
        let (word, detail) = match &verdict {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        let tag = match (verdict.is_ok(), known) {
            (true, false) => "",
            (false, true) => " (known failure)",
            (true, true) => " (unexpected pass, update the known-failure list)",
            (false, false) => " (unexpected)",
        };
        if verdict.is_ok() == known {
            unexpected += 1;
        }
        println!("criterion {id} {word}{tag}: {title} [{secs:.1}s] {detail}");
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
