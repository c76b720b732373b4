mod common;

use common::brute;
use qgt_core::tableaux::{enumerate_admissible, universe, Condition, Position, Relation, RelationSet, Succ};

fn subsets(n: usize) -> impl Iterator<Item = Vec<Relation>> {
    let u = universe(n);
    (0u64..1 << u.len()).map(move |mask| (0..u.len()).filter(|i| mask >> i & 1 == 1).map(|i| u[i]).collect())
}

#[test]
fn n2_agrees_with_brute_force_and_enumeration() {
    let listed = enumerate_admissible(2).unwrap();
    let brute: Vec<RelationSet> =
        subsets(2).filter(|r| brute::admissible(2, r)).map(|r| RelationSet::new(2, r).unwrap()).collect();
    assert_eq!(listed, brute);
    assert!(listed.contains(&RelationSet::empty(2)));
    assert!(listed.contains(&RelationSet::standard(2)));
}

#[test]
fn n3_enumeration_is_self_consistent() {
    let listed = enumerate_admissible(3).unwrap();
    assert_eq!(listed.len(), 3571);
    assert!(listed.contains(&RelationSet::standard(3)));
    assert!(listed.iter().all(|c| c.is_admissible().admissible));
    assert!(listed.iter().all(|c| brute::admissible(3, c.relations())));
    for w in listed.windows(2) {
        assert_ne!(w[0], w[1]);
    }
}

#[test]
fn enumeration_refuses_large_heights() {
    assert!(enumerate_admissible(4).is_err());
}

/// Cross-freeness is a per-component condition: the two relations of a
/// cross may coexist only when nothing links them.
#[test]
fn crosses_survive_only_across_components() {
    let p = Position::new;
    let cross = [Relation::weak(p(3, 1), p(2, 2)), Relation::strict(p(2, 1), p(3, 2))];
    let listed = enumerate_admissible(3).unwrap();
    let with_cross: Vec<_> = listed.iter().filter(|c| cross.iter().all(|r| c.contains(r))).collect();
    assert!(!with_cross.is_empty());
    for c in with_cross {
        assert_ne!(c.component_of(p(3, 1)), c.component_of(p(2, 1)), "{c}");
    }
    let linked = RelationSet::new(3, vec![cross[0], cross[1], Relation::strict(p(2, 2), p(3, 2))]).unwrap();
    let report = linked.is_admissible();
    assert!(!report.admissible);
    let v = report.violations.iter().find(|v| v.condition == Condition::Cross).unwrap();
    assert_eq!(v.witness, vec![p(3, 1), p(2, 2), p(2, 1), p(3, 2)]);
}

#[test]
fn closure_examples() {
    let p = Position::new;
    let c = RelationSet::new(2, vec![Relation::weak(p(2, 1), p(1, 1)), Relation::strict(p(1, 1), p(2, 2))]).unwrap();
    assert_eq!(c.succ_relation(p(2, 1), p(2, 2)), Succ::Strict);
    assert_eq!(RelationSet::empty(2).succ_relation(p(2, 1), p(2, 2)), Succ::None);
    // the top-row order relation only ever makes a weak chain
    let top = RelationSet::new(2, vec![Relation::weak(p(2, 1), p(2, 2))]).unwrap();
    assert_eq!(top.succ_relation(p(2, 1), p(2, 2)), Succ::Weak);
    assert!(top.is_admissible().admissible);
    let reversed = RelationSet::new(2, vec![Relation::weak(p(2, 2), p(2, 1))]).unwrap();
    assert!(!reversed.is_admissible().admissible);
}
