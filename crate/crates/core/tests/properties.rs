mod common;

use common::{brute, singular_catalog};
use proptest::prelude::*;
use qgt_core::exactalg::{bracket, EntryDiff, FieldElement, NumberSystem, Rat};
use qgt_core::tableaux::{maximal_relation_set, satisfies, universe, Relation, RelationSet, Tableau};
use qgt_core::verify::appendix::{single_sample, Sampler};
use qgt_core::verify::finite_dimensional_spec;

fn system() -> impl Strategy<Value = NumberSystem> {
    prop_oneof![Just(NumberSystem::Quantum), Just(NumberSystem::Classical)]
}

/// Three light random elements in `x`, `y` and `Q`.
fn triple(sys: NumberSystem, seed: u64) -> [FieldElement; 3] {
    let mut s = Sampler::new(sys, seed);
    [s.smooth_light(), s.smooth_light(), s.smooth_light()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(sys in system(), seed in any::<u64>()) {
        let [a, b, c] = triple(sys, seed);
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.add(&FieldElement::zero(sys)), a.clone());
        prop_assert_eq!(a.mul(&FieldElement::one(sys)), a.clone());
        if !b.is_zero() {
            prop_assert!(b.mul(&b.inv().unwrap()).is_one());
            prop_assert_eq!(a.div(&b).unwrap().mul(&b), a.clone());
        }
    }

    #[test]
    fn tau_is_an_involutive_ring_map(sys in system(), seed in any::<u64>()) {
        let [a, b, _] = triple(sys, seed);
        prop_assert_eq!(a.tau_swap().tau_swap(), a.clone());
        prop_assert_eq!(a.mul(&b).tau_swap(), a.tau_swap().mul(&b.tau_swap()));
        prop_assert_eq!(a.add(&b).tau_swap(), a.tau_swap().add(&b.tau_swap()));
    }

    #[test]
    fn bracket_is_odd(sys in system(), num in -30i64..30, den in prop::sample::select(vec![1i64, 2, 4, 7])) {
        let d = EntryDiff::constant(Rat::new(num, den));
        prop_assert_eq!(bracket(sys, &d.neg()), bracket(sys, &d).neg());
        prop_assert_eq!(bracket(sys, &d).is_zero(), num == 0);
    }

    #[test]
    fn classical_bracket_is_the_identity(num in -30i64..30, den in 1i64..9) {
        let r = Rat::new(num, den);
        prop_assert_eq!(bracket(NumberSystem::Classical, &EntryDiff::constant(r.clone())).as_rat(), Some(r));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Antisymmetry, the divided difference, the product rule and the
    /// symmetric-factor formula on random smooth functions.
    #[test]
    fn derivative_calculus_identities(sys in system(), seed in any::<u64>()) {
        let mut s = Sampler::new(sys, seed);
        for o in single_sample(&mut s).unwrap() {
            prop_assert!(o.failure.is_none(), "{}: {}", o.identity, o.failure.unwrap());
        }
    }
}

fn entry() -> impl Strategy<Value = Rat> {
    prop::sample::select(vec![
        Rat::from_int(-1),
        Rat::from_int(0),
        Rat::from_int(1),
        Rat::from_int(2),
        Rat::new(1, 2),
        Rat::new(1, 3),
        Rat::new(5, 7),
    ])
}

fn tableau3() -> impl Strategy<Value = Tableau> {
    prop::collection::vec(entry(), 6).prop_map(|b| Tableau::new(3, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Any realized subset of the satisfied relations is implied by the
    /// maximal set, which is itself realized.
    #[test]
    fn maximal_set_implies_realized_subsets(t in tableau3(), keep in prop::collection::vec(any::<bool>(), 22)) {
        let max = maximal_relation_set(&t);
        prop_assert!(max.relations().iter().all(|r| t.holds(r)));
        let sub: Vec<Relation> = max.relations().iter().zip(&keep).filter(|(_, k)| **k).map(|(r, _)| *r).collect();
        let c = RelationSet::new(3, sub).unwrap();
        prop_assert!(max.implies(&c));
        if satisfies(&t, &c) {
            prop_assert!(satisfies(&t, &max));
        }
    }

    #[test]
    fn admissibility_matches_brute_force_on_random_n4_sets(mask in any::<u64>(), density in 1u32..4) {
        // thin the mask so that small, often admissible sets dominate
        let u = universe(4);
        let thin = (0..density).fold(mask, |m, i| m & mask.rotate_left(7 * (i + 1)));
        let rels: Vec<Relation> = (0..u.len()).filter(|i| thin >> i & 1 == 1).map(|i| u[i]).collect();
        let lib = RelationSet::new(4, rels.clone()).unwrap().is_admissible().admissible;
        prop_assert_eq!(lib, brute::admissible(4, &rels));
    }

    #[test]
    fn membership_is_tau_invariant(z in prop::collection::vec(-3i32..=3, 6), pick in 0usize..4) {
        let specs = singular_catalog(NumberSystem::Quantum);
        let spec = &specs[pick % specs.len()].spec;
        let sp = spec.pair().unwrap();
        let z = &z[..spec.n() * (spec.n() - 1) / 2];
        prop_assert_eq!(spec.in_basis(z), spec.in_basis(&sp.tau(z)));
    }
}

#[test]
fn dominant_integral_tableau_contains_standard_relations() {
    for top in [vec![2, 0], vec![2, 1, 0], vec![3, 3, 1, 0]] {
        let spec = finite_dimensional_spec(&top, NumberSystem::Quantum).unwrap();
        let t = spec.base_tableau();
        let max = maximal_relation_set(&t);
        let n = top.len();
        assert!(RelationSet::standard(n).relations().iter().all(|r| max.contains(r)), "{top:?}");
        assert!(max.implies(&RelationSet::standard(n)));
    }
}
