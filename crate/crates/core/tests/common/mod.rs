#![allow(dead_code)]

use qgt_core::action::ModuleSpec;
use qgt_core::exactalg::{NumberSystem, Rat};
use qgt_core::tableaux::{Position, Relation, RelationSet, Tableau};
use qgt_core::verify::finite_dimensional_spec;

pub mod brute;

/// Base entries with pairwise non-integral differences. A shared
/// denominator keeps every quantum bracket a polynomial in `Q^(1/7)`.
pub fn generic_base(n: usize) -> Vec<Rat> {
    const RES: [i64; 10] = [3, 1, 2, 4, 5, 6, 0, 1, 2, 3];
    (0..n * (n + 1) / 2).map(|i| Rat::new(RES[i], 7)).collect()
}

pub fn p(row: usize, col: usize) -> Position {
    Position::new(row, col)
}

pub fn ge(a: (usize, usize), b: (usize, usize)) -> Relation {
    Relation::weak(p(a.0, a.1), p(b.0, b.1))
}

pub fn gt(a: (usize, usize), b: (usize, usize)) -> Relation {
    Relation::strict(p(a.0, a.1), p(b.0, b.1))
}

/// Generic base with `entry(to) = entry(from) + d`.
pub fn tie(base: &mut [Rat], to: (usize, usize), from: (usize, usize), d: i64) {
    base[p(to.0, to.1).index()] = &base[p(from.0, from.1).index()] + &Rat::from_int(d);
}

pub fn build(n: usize, base: Vec<Rat>, rels: Vec<Relation>, sys: NumberSystem) -> ModuleSpec {
    let t = Tableau::new(n, base).expect("tableau");
    let c = RelationSet::new(n, rels).expect("relations");
    ModuleSpec::new(&t, c, sys).expect("valid spec")
}

pub struct Named {
    pub label: String,
    pub spec: ModuleSpec,
}

fn named(label: &str, spec: ModuleSpec) -> Named {
    Named { label: format!("{label} ({})", spec.system().name()), spec }
}

pub fn generic_empty(n: usize, sys: NumberSystem) -> ModuleSpec {
    build(n, generic_base(n), vec![], sys)
}

pub fn standard(n: usize, sys: NumberSystem) -> ModuleSpec {
    let top: &[i64] = match n {
        2 => &[2, 0],
        3 => &[2, 1, 0],
        _ => &[2, 1, 0, 0],
    };
    finite_dimensional_spec(top, sys).expect("finite-dimensional spec")
}

pub fn two_component(n: usize, sys: NumberSystem) -> ModuleSpec {
    let mut b = generic_base(n);
    match n {
        3 => {
            tie(&mut b, (2, 1), (1, 1), 1);
            tie(&mut b, (3, 3), (2, 2), 2);
            build(3, b, vec![ge((2, 1), (1, 1)), ge((3, 3), (2, 2))], sys)
        }
        4 => {
            tie(&mut b, (2, 1), (1, 1), 1);
            tie(&mut b, (3, 1), (2, 1), 0);
            tie(&mut b, (4, 4), (3, 3), 1);
            build(4, b, vec![ge((3, 1), (2, 1)), ge((2, 1), (1, 1)), ge((4, 4), (3, 3))], sys)
        }
        _ => panic!("no two-component set for n = {n}"),
    }
}

/// Generic base with the pair `(row, i)`, `(row, j)` made equal.
pub fn singular_base(n: usize, row: usize, i: usize, j: usize) -> Vec<Rat> {
    let mut b = generic_base(n);
    tie(&mut b, (row, j), (row, i), 0);
    b
}

pub fn singular_empty(n: usize, row: usize, i: usize, j: usize, sys: NumberSystem) -> ModuleSpec {
    build(n, singular_base(n, row, i, j), vec![], sys)
}

pub fn singular_with_relations(n: usize, sys: NumberSystem) -> ModuleSpec {
    match n {
        3 => {
            let mut b = singular_base(3, 2, 1, 2);
            tie(&mut b, (3, 1), (3, 2), 1);
            build(3, b, vec![ge((3, 1), (3, 2))], sys)
        }
        4 => {
            let mut b = singular_base(4, 2, 1, 2);
            tie(&mut b, (4, 1), (3, 1), 1);
            tie(&mut b, (3, 3), (4, 4), 1);
            build(4, b, vec![ge((4, 1), (3, 1)), gt((3, 3), (4, 4))], sys)
        }
        _ => panic!("no relation-carrying singular spec for n = {n}"),
    }
}

/// The specs of the relation sweep: generic `C = ∅`, `C = S`, a
/// two-component set and singular specs, for heights 2 to 4.
pub fn relation_catalog(sys: NumberSystem) -> Vec<Named> {
    vec![
        named("n=2 C=empty", generic_empty(2, sys)),
        named("n=2 C=S", standard(2, sys)),
        named("n=3 C=empty", generic_empty(3, sys)),
        named("n=3 C=S", standard(3, sys)),
        named("n=3 two components", two_component(3, sys)),
        named("n=3 singular row 2, C=empty", singular_empty(3, 2, 1, 2, sys)),
        named("n=3 singular row 2, C={[3,1]>=[3,2]}", singular_with_relations(3, sys)),
        named("n=4 C=empty", generic_empty(4, sys)),
        named("n=4 C=S", standard(4, sys)),
        named("n=4 two components", two_component(4, sys)),
        named("n=4 singular row 2, C=empty", singular_empty(4, 2, 1, 2, sys)),
        named("n=4 singular row 3 (1,3), C=empty", singular_empty(4, 3, 1, 3, sys)),
        named("n=4 singular row 2, two-component C", singular_with_relations(4, sys)),
    ]
}

pub fn singular_catalog(sys: NumberSystem) -> Vec<Named> {
    relation_catalog(sys).into_iter().filter(|s| s.spec.pair().is_some()).collect()
}

pub fn generic_catalog(sys: NumberSystem) -> Vec<Named> {
    relation_catalog(sys).into_iter().filter(|s| s.spec.pair().is_none()).collect()
}
