//! Rational functions in Q, X, Y (classical: x, y) with factored denominators.
//!
//! An element is stored as `coeff · M · ∏ aᵢ^eᵢ · rest` where `M` is a
//! monomial, the atoms `aᵢ` are cyclotomic polynomials in primitive
//! monomials (or opaque polynomials), and `rest` is an expanded polynomial.
//! Negative exponents make up the denominator. Keeping both sides factored
//! means products of quantum brackets never expand, and sums only expand
//! the factors the two summands do not share.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use super::cyclo;
use super::poly::{Exps, LaurentPoly, QExp};
use super::rat::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NumberSystem {
    Quantum,
    Classical,
}

impl NumberSystem {
    pub fn name(self) -> &'static str {
        match self {
            NumberSystem::Quantum => "quantum",
            NumberSystem::Classical => "classical",
        }
    }
}

/// An irreducible-ish factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// `Φ_order(M)` for a primitive monomial `M` with unit coefficient.
    /// For Q-only bases `M = Q^(1/r)`; otherwise the first non-zero of
    /// (x, y) exponents is positive and gcd(x, y) = 1.
    Cyclo { base: Exps, order: u32 },
    /// A polynomial factor with zero minimal exponents and leading
    /// coefficient one.
    Poly(LaurentPoly),
}

impl Atom {
    pub fn expand(&self) -> LaurentPoly {
        match self {
            Atom::Cyclo { base, order } => {
                let cs = cyclo::cyclotomic(*order);
                LaurentPoly::from_terms(
                    cs.iter()
                        .enumerate()
                        .filter(|(_, c)| **c != 0)
                        .map(|(i, c)| (base.scale(i as i32), Rat::from_int(*c)))
                        .collect(),
                )
            }
            Atom::Poly(p) => p.clone(),
        }
    }

    /// `r` when the atom is `Φ_m(Q^(1/r))`.
    fn q_root(&self) -> Option<i64> {
        match self {
            Atom::Cyclo { base, .. } if !base.has_xy() => Some(*base.q.denom()),
            _ => None,
        }
    }

    pub fn has_xy(&self) -> bool {
        match self {
            Atom::Cyclo { base, .. } => base.has_xy(),
            Atom::Poly(p) => p.has_xy(),
        }
    }

    /// The factor vanishing on X = Y (classical: x = y).
    pub fn diagonal(sys: NumberSystem) -> Atom {
        match sys {
            NumberSystem::Quantum => Atom::Cyclo { base: Exps::new(Ratio::zero(), 1, -1), order: 1 },
            NumberSystem::Classical => Atom::Poly(LaurentPoly::from_terms(vec![
                (Exps::new(Ratio::zero(), 1, 0), Rat::one()),
                (Exps::new(Ratio::zero(), 0, 1), Rat::from_int(-1)),
            ])),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FieldElement {
    pub(crate) system: NumberSystem,
    pub(crate) coeff: Rat,
    pub(crate) mono: Exps,
    /// Sorted by atom, exponents non-zero; all Q-only cyclotomic atoms share
    /// one root.
    pub(crate) atoms: Vec<(Atom, i32)>,
    /// Either one, or a polynomial with at least two terms, zero minimal
    /// exponents and leading coefficient one.
    pub(crate) rest: LaurentPoly,
}

pub(crate) fn to_qexp(r: &Rat) -> QExp {
    let (n, d) = r.to_small().expect("exponent out of range");
    Ratio::new(n, d)
}


/// `(sign, monomial, atoms)` with `M - 1 = sign · monomial · ∏ atoms`.
fn binomial_factors(d: Exps) -> (Rat, Exps, Vec<(Atom, i32)>) {
    debug_assert!(!d.is_zero());
    let mut sign = Rat::one();
    let mut mono = Exps::ZERO;
    let mut d = d;
    let flip = if d.has_xy() {
        if d.x != 0 {
            d.x < 0
        } else {
            d.y < 0
        }
    } else {
        d.q.is_negative()
    };
    if flip {
        sign = -sign;
        mono = d;
        d = -d;
    }
    let atoms = if d.has_xy() {
        let g = (d.x.unsigned_abs()).gcd(&d.y.unsigned_abs());
        let base = Exps { x: d.x / g as i32, y: d.y / g as i32, q: d.q / g as i64 };
        cyclo::divisors(g).into_iter().map(|k| (Atom::Cyclo { base, order: k }, 1)).collect()
    } else {
        let p = u32::try_from(*d.q.numer()).expect("exponent out of range");
        let base = Exps::q(Ratio::new(1, *d.q.denom()));
        cyclo::divisors(p).into_iter().map(|k| (Atom::Cyclo { base, order: k }, 1)).collect()
    };
    (sign, mono, atoms)
}

/// Φ_m(Q^c) for rational `c ≠ 0`, as a factored element.
fn cyclo_at_q_power(m: u32, c: QExp) -> FieldElement {
    let sys = NumberSystem::Quantum;
    debug_assert!(!c.is_zero());
    let n = c.numer().unsigned_abs() as u32;
    let s = *c.denom();
    let base = Exps::q(Ratio::new(1, s));
    let atoms = cyclo::refine_orders(m, n).into_iter().map(|o| (Atom::Cyclo { base, order: o }, 1)).collect();
    let mut out = FieldElement::from_parts(sys, Rat::one(), Exps::ZERO, atoms, LaurentPoly::one());
    if c.is_negative() {
        let (sign, shift) = if m == 1 {
            (Rat::from_int(-1), -(n as i64))
        } else {
            (Rat::one(), -((n * cyclo::totient(m)) as i64))
        };
        out = out.mul(&FieldElement::monomial(sys, Exps::q(Ratio::new(shift, s)), sign));
    }
    out
}

fn merge_sorted(a: &[(Atom, i32)], b: &[(Atom, i32)], sign_b: i32) -> Vec<(Atom, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = if i == a.len() {
            std::cmp::Ordering::Greater
        } else if j == b.len() {
            std::cmp::Ordering::Less
        } else {
            a[i].0.cmp(&b[j].0)
        };
        match ord {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0.clone(), sign_b * b[j].1));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let e = a[i].1 + sign_b * b[j].1;
                if e != 0 {
                    out.push((a[i].0.clone(), e));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Sorts, merges and refines Q-only atoms to a common root (at least a
/// multiple of `min_root`).
fn canon_atoms(v: Vec<(Atom, i32)>, min_root: i64) -> Vec<(Atom, i32)> {
    let root = v.iter().filter_map(|(a, _)| a.q_root()).fold(min_root, |acc, r| acc.lcm(&r));
    let mut out = Vec::with_capacity(v.len());
    for (a, e) in v {
        match (&a, a.q_root()) {
            (Atom::Cyclo { order, .. }, Some(r)) if r != root => {
                let base = Exps::q(Ratio::new(1, root));
                for o in cyclo::refine_orders(*order, (root / r) as u32) {
                    out.push((Atom::Cyclo { base, order: o }, e));
                }
            }
            _ => out.push((a, e)),
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(Atom, i32)> = Vec::with_capacity(out.len());
    for (a, e) in out {
        match merged.last_mut() {
            Some(last) if last.0 == a => last.1 += e,
            _ => merged.push((a, e)),
        }
    }
    merged.retain(|t| t.1 != 0);
    merged
}

/// A necessary condition for `atom | p`: a Q-only cyclotomic atom
/// `Φ_m(Q^(1/r))` must vanish on `p` at a primitive `m`-th root of unity
/// modulo a prime, separately for every X, Y monomial.
fn may_divide(p: &LaurentPoly, atom: &Atom) -> bool {
    let Atom::Cyclo { base, order } = atom else {
        return true;
    };
    if base.has_xy() {
        return may_divide_xy(p, base, *order);
    }
    let r = *base.q.denom();
    let table = cyclo::root_mod_prime(*order);
    let (prime, m) = (table.p, *order as i64);
    let red = |v: i64| v.rem_euclid(prime as i64) as u64;
    // each group is kept as a fraction `num / den` mod p
    let mut sums: Vec<((i32, i32), u64, u64)> = Vec::new();
    for (e, c) in p.terms() {
        if r % e.q.denom() != 0 {
            return true;
        }
        let Some((n, d)) = c.to_small() else {
            return true;
        };
        let d = red(d);
        if d == 0 {
            return true;
        }
        let k = (e.q.numer() * (r / e.q.denom())).rem_euclid(m) as usize;
        let n = cyclo::mul_mod(red(n), table.powers[k], prime);
        match sums.iter_mut().find(|s| s.0 == (e.x, e.y)) {
            Some(s) => {
                s.1 = (cyclo::mul_mod(s.1, d, prime) + cyclo::mul_mod(n, s.2, prime)) % prime;
                s.2 = cyclo::mul_mod(s.2, d, prime);
            }
            None => sums.push(((e.x, e.y), n, d)),
        }
    }
    sums.iter().all(|s| s.1 == 0)
}

/// The same test for `Φ_m(X^a Y^b Q^c)` with `|a| = 1` or `|b| = 1`: a
/// homomorphism to F_p sending the base to a primitive `m`-th root kills
/// every multiple of the atom.
fn may_divide_xy(p: &LaurentPoly, base: &Exps, order: u32) -> bool {
    if base.x.abs() != 1 && base.y.abs() != 1 {
        return true;
    }
    let r = p.terms().iter().fold(*base.q.denom(), |acc, (e, _)| acc.lcm(e.q.denom()));
    let table = cyclo::root_mod_prime(order);
    let prime = table.p;
    let zeta = table.powers[1 % order as usize];
    let powi = |x: u64, e: i64| cyclo::pow_mod(x, e.rem_euclid(prime as i64 - 1) as u64, prime);
    let inv = |x: u64| powi(x, -1);
    let t = 5;
    let cr = base.q.numer() * (r / base.q.denom());
    let (alpha, beta) = if base.x.abs() == 1 {
        let beta = 3;
        let rhs = cyclo::mul_mod(cyclo::mul_mod(zeta, powi(beta, -base.y as i64), prime), powi(t, -cr), prime);
        (if base.x == 1 { rhs } else { inv(rhs) }, beta)
    } else {
        let alpha = 3;
        let rhs = cyclo::mul_mod(cyclo::mul_mod(zeta, powi(alpha, -base.x as i64), prime), powi(t, -cr), prime);
        (alpha, if base.y == 1 { rhs } else { inv(rhs) })
    };
    let (mut num, mut den) = (0u64, 1u64);
    for (e, c) in p.terms() {
        let Some((n, d)) = c.to_small() else {
            return true;
        };
        let d = d.rem_euclid(prime as i64) as u64;
        if d == 0 {
            return true;
        }
        let mut v = n.rem_euclid(prime as i64) as u64;
        v = cyclo::mul_mod(v, powi(t, e.q.numer() * (r / e.q.denom())), prime);
        v = cyclo::mul_mod(v, powi(alpha, e.x as i64), prime);
        v = cyclo::mul_mod(v, powi(beta, e.y as i64), prime);
        num = (cyclo::mul_mod(num, d, prime) + cyclo::mul_mod(v, den, prime)) % prime;
        den = cyclo::mul_mod(den, d, prime);
    }
    num == 0
}

/// Expanded `atom^k`, memoized per thread.
fn atom_power(atom: &Atom, k: u32) -> Rc<LaurentPoly> {
    thread_local! {
        static POWERS: RefCell<HashMap<(Atom, u32), Rc<LaurentPoly>>> = RefCell::new(HashMap::new());
    }
    POWERS.with(|m| {
        if let Some(p) = m.borrow().get(&(atom.clone(), k)) {
            return p.clone();
        }
        let p = Rc::new(atom.expand().pow(k));
        let mut m = m.borrow_mut();
        if m.len() > 50_000 {
            m.clear();
        }
        m.insert((atom.clone(), k), p.clone());
        p
    })
}

fn atoms_root(atoms: &[(Atom, i32)]) -> Option<i64> {
    atoms.iter().find_map(|(a, _)| a.q_root())
}

impl FieldElement {
    pub fn zero(sys: NumberSystem) -> Self {
        FieldElement {
            system: sys,
            coeff: Rat::zero(),
            mono: Exps::ZERO,
            atoms: Vec::new(),
            rest: LaurentPoly::one(),
        }
    }

    pub fn one(sys: NumberSystem) -> Self {
        Self::from_rat(sys, Rat::one())
    }

    pub fn from_rat(sys: NumberSystem, c: Rat) -> Self {
        Self::monomial(sys, Exps::ZERO, c)
    }

    pub fn from_int(sys: NumberSystem, c: i64) -> Self {
        Self::from_rat(sys, Rat::from_int(c))
    }

    pub fn monomial(sys: NumberSystem, e: Exps, c: Rat) -> Self {
        if c.is_zero() {
            return Self::zero(sys);
        }
        FieldElement { system: sys, coeff: c, mono: e, atoms: Vec::new(), rest: LaurentPoly::one() }
    }

    /// `Q^c` (quantum only).
    pub fn q_power(c: QExp) -> Self {
        Self::monomial(NumberSystem::Quantum, Exps::q(c), Rat::one())
    }

    pub fn from_poly(sys: NumberSystem, p: LaurentPoly) -> Self {
        Self::from_parts(sys, Rat::one(), Exps::ZERO, Vec::new(), p)
    }

    pub fn from_atom(sys: NumberSystem, a: Atom, e: i32) -> Self {
        Self::from_parts(sys, Rat::one(), Exps::ZERO, vec![(a, e)], LaurentPoly::one())
    }

    /// `num / den` from expanded polynomials.
    pub fn from_fraction(sys: NumberSystem, num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        Self::from_poly(sys, num).div(&Self::from_poly(sys, den))
    }

    pub(crate) fn from_parts(
        sys: NumberSystem,
        coeff: Rat,
        mono: Exps,
        atoms: Vec<(Atom, i32)>,
        rest: LaurentPoly,
    ) -> Self {
        FieldElement { system: sys, coeff, mono, atoms: canon_atoms(atoms, 1), rest }.normalize()
    }

    pub fn system(&self) -> NumberSystem {
        self.system
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.as_rat().is_some_and(|r| r.is_one())
    }

    /// The value when the element is a constant rational.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        (self.mono.is_zero() && self.atoms.is_empty() && self.rest.is_one()).then(|| self.coeff.clone())
    }

    pub fn has_xy(&self) -> bool {
        self.mono.has_xy() || self.atoms.iter().any(|(a, _)| a.has_xy()) || self.rest.has_xy()
    }

    fn normalize(mut self) -> Self {
        if self.coeff.is_zero() || self.rest.is_zero() {
            return Self::zero(self.system);
        }
        let mut changed = true;
        let mut guard = 0;
        while changed && !self.rest.is_one() {
            changed = false;
            guard += 1;
            debug_assert!(guard < 64);
            self.extract_content();
            if self.rest.is_one() {
                break;
            }
            let mut new_atoms = Vec::new();
            if self.rest.len() == 2 && self.system == NumberSystem::Quantum {
                let (e1, c1) = self.rest.terms()[0].clone();
                let e2 = self.rest.terms()[1].0;
                let d = e2 - e1;
                if c1 == Rat::from_int(-1) {
                    let (s, m, a) = binomial_factors(d);
                    self.coeff *= &s;
                    self.mono = self.mono + e1 + m;
                    new_atoms = a;
                    self.rest = LaurentPoly::one();
                } else if c1.is_one() {
                    let (s2, m2, a2) = binomial_factors(d.scale(2));
                    let (s1, m1, a1) = binomial_factors(d);
                    self.coeff = &self.coeff * &s2 / &s1;
                    self.mono = self.mono + e1 + m2 - m1;
                    new_atoms = a2;
                    new_atoms.extend(a1.into_iter().map(|(a, e)| (a, -e)));
                    self.rest = LaurentPoly::one();
                }
            } else if self.system == NumberSystem::Classical && self.rest.has_xy() && self.is_linear_rest() {
                new_atoms.push((Atom::Poly(std::mem::replace(&mut self.rest, LaurentPoly::one())), 1));
            }
            if !new_atoms.is_empty() {
                new_atoms.extend(self.atoms.drain(..));
                self.atoms = canon_atoms(new_atoms, 1);
                break;
            }
            for i in 0..self.atoms.len() {
                if self.atoms[i].1 >= 0 {
                    continue;
                }
                if !may_divide(&self.rest, &self.atoms[i].0) {
                    continue;
                }
                let den = self.atoms[i].0.expand();
                while self.atoms[i].1 < 0 {
                    match self.rest.exact_div(&den) {
                        Some(q) => {
                            self.rest = q;
                            self.atoms[i].1 += 1;
                            changed = true;
                        }
                        None => break,
                    }
                }
                if changed {
                    break;
                }
            }
            self.atoms.retain(|t| t.1 != 0);
        }
        self
    }

    fn is_linear_rest(&self) -> bool {
        self.rest.terms().iter().all(|(e, _)| e.x >= 0 && e.y >= 0 && e.x + e.y <= 1)
    }

    fn extract_content(&mut self) {
        let lo = self.rest.min_exps();
        let lead = self.rest.highest().expect("non-zero rest").1.clone();
        if !lo.is_zero() || !lead.is_one() {
            self.rest = self.rest.mul_monomial(-lo, &lead.recip());
            self.coeff *= &lead;
            self.mono = self.mono + lo;
        }
        if self.rest.len() == 1 {
            self.rest = LaurentPoly::one();
        }
    }

    fn check_system(&self, o: &Self) {
        assert_eq!(self.system, o.system, "mixed number systems");
    }

    /// Both operands with Q-only atoms refined to a common root.
    fn aligned<'a>(&'a self, o: &'a Self) -> (std::borrow::Cow<'a, Self>, std::borrow::Cow<'a, Self>) {
        use std::borrow::Cow;
        match (atoms_root(&self.atoms), atoms_root(&o.atoms)) {
            (Some(r1), Some(r2)) if r1 != r2 => {
                let r = r1.lcm(&r2);
                (Cow::Owned(self.refined(r)), Cow::Owned(o.refined(r)))
            }
            _ => (Cow::Borrowed(self), Cow::Borrowed(o)),
        }
    }

    fn refined(&self, r: i64) -> Self {
        let mut out = self.clone();
        out.atoms = canon_atoms(out.atoms, r);
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_system(o);
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.system);
        }
        let (a, b) = self.aligned(o);
        let atoms = merge_sorted(&a.atoms, &b.atoms, 1);
        let rest = if a.rest.is_one() {
            b.rest.clone()
        } else if b.rest.is_one() {
            a.rest.clone()
        } else {
            a.rest.mul(&b.rest)
        };
        let out = FieldElement {
            system: self.system,
            coeff: &a.coeff * &b.coeff,
            mono: a.mono + b.mono,
            atoms,
            rest,
        };
        if out.rest.is_one() {
            out
        } else {
            out.normalize()
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.system);
        }
        let mut out = self.clone();
        out.coeff *= c;
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        out.coeff = -&out.coeff;
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_system(o);
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b) = self.aligned(o);
        let (a, b) = (a.as_ref(), b.as_ref());
        let mut common = Vec::new();
        let mut left_a = Vec::new();
        let mut left_b = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.atoms.len() || j < b.atoms.len() {
            let ord = if i == a.atoms.len() {
                std::cmp::Ordering::Greater
            } else if j == b.atoms.len() {
                std::cmp::Ordering::Less
            } else {
                a.atoms[i].0.cmp(&b.atoms[j].0)
            };
            let (atom, ea, eb) = match ord {
                std::cmp::Ordering::Less => {
                    i += 1;
                    (&a.atoms[i - 1].0, a.atoms[i - 1].1, 0)
                }
                std::cmp::Ordering::Greater => {
                    j += 1;
                    (&b.atoms[j - 1].0, 0, b.atoms[j - 1].1)
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (&a.atoms[i - 1].0, a.atoms[i - 1].1, b.atoms[j - 1].1)
                }
            };
            let g = ea.min(eb);
            if g != 0 {
                common.push((atom.clone(), g));
            }
            if ea > g {
                left_a.push((atom, (ea - g) as u32));
            }
            if eb > g {
                left_b.push((atom, (eb - g) as u32));
            }
        }
        let gm = a.mono.min_each(&b.mono);
        let expand = |f: &FieldElement, left: &[(&Atom, u32)]| {
            let p = f.rest.mul_monomial(f.mono - gm, &f.coeff);
            let powers: Vec<Rc<LaurentPoly>> = left.iter().map(|(atom, k)| atom_power(atom, *k)).collect();
            let refs: Vec<&LaurentPoly> = powers.iter().map(|p| p.as_ref()).collect();
            p.mul_many(&refs)
        };
        let sum = expand(a, &left_a).add(&expand(b, &left_b));
        FieldElement { system: self.system, coeff: Rat::one(), mono: gm, atoms: common, rest: sum }.normalize()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Sum of many elements over one common denominator, normalized once.
    /// Much cheaper than folding `add` when the summands have different
    /// denominators.
    pub fn sum(sys: NumberSystem, items: &[FieldElement]) -> Self {
        let items: Vec<&FieldElement> = items.iter().filter(|f| !f.is_zero()).collect();
        match items.len() {
            0 => return Self::zero(sys),
            1 => return items[0].clone(),
            2 => return items[0].add(items[1]),
            _ => {}
        }
        let root = items.iter().filter_map(|f| atoms_root(&f.atoms)).fold(1i64, |acc, r| acc.lcm(&r));
        let items: Vec<std::borrow::Cow<FieldElement>> = items
            .into_iter()
            .map(|f| {
                assert_eq!(sys, f.system, "mixed number systems");
                match atoms_root(&f.atoms) {
                    Some(r) if r != root => std::borrow::Cow::Owned(f.refined(root)),
                    _ => std::borrow::Cow::Borrowed(f),
                }
            })
            .collect();
        let mut common: std::collections::BTreeMap<&Atom, i32> = std::collections::BTreeMap::new();
        for f in &items {
            for (a, _) in &f.atoms {
                common.entry(a).or_insert(0);
            }
        }
        for f in &items {
            for (a, e) in common.iter_mut() {
                let mine = f.atoms.binary_search_by(|t| t.0.cmp(a)).map(|i| f.atoms[i].1).unwrap_or(0);
                *e = (*e).min(mine);
            }
        }
        let gm = items.iter().skip(1).fold(items[0].mono, |acc, f| acc.min_each(&f.mono));
        let mut powers: std::collections::HashMap<(&Atom, u32), LaurentPoly> = std::collections::HashMap::new();
        let mut terms = Vec::new();
        for f in &items {
            let mut p = f.rest.mul_monomial(f.mono - gm, &f.coeff);
            for (a, g) in &common {
                let mine = f.atoms.binary_search_by(|t| t.0.cmp(a)).map(|i| f.atoms[i].1).unwrap_or(0);
                if mine > *g {
                    let k = (mine - g) as u32;
                    let pw = powers.entry((*a, k)).or_insert_with(|| a.expand().pow(k));
                    p = p.mul(pw);
                }
            }
            terms.extend(p.terms().iter().cloned());
        }
        let rest = LaurentPoly::from_terms(terms);
        if rest.is_zero() {
            return Self::zero(sys);
        }
        let atoms = common.into_iter().filter(|t| t.1 != 0).map(|(a, e)| (a.clone(), e)).collect();
        FieldElement { system: sys, coeff: Rat::one(), mono: gm, atoms, rest }.normalize()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut atoms: Vec<(Atom, i32)> = self.atoms.iter().map(|(a, e)| (a.clone(), -e)).collect();
        if !self.rest.is_one() {
            atoms.push((Atom::Poly(self.rest.clone()), -1));
            atoms = canon_atoms(atoms, 1);
        }
        Ok(FieldElement {
            system: self.system,
            coeff: self.coeff.recip(),
            mono: -self.mono,
            atoms,
            rest: LaurentPoly::one(),
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.system);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Exact equality (zero test of the difference).
    pub fn equals(&self, o: &Self) -> bool {
        self.system == o.system && self.sub(o).is_zero()
    }

    /// Expanded numerator; the element equals `numerator() / denominator()`.
    pub fn numerator(&self) -> LaurentPoly {
        let mut p = self.rest.mul_monomial(self.mono, &self.coeff);
        for (a, e) in &self.atoms {
            if *e > 0 {
                p = p.mul(&a.expand().pow(*e as u32));
            }
        }
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let (lo, lead) = self.den_content();
        p.mul_monomial(-lo, &lead.recip())
    }

    /// Expanded denominator, leading coefficient one and zero minimal
    /// exponents.
    pub fn denominator(&self) -> LaurentPoly {
        let raw = self.raw_denominator();
        let (lo, lead) = self.den_content();
        raw.mul_monomial(-lo, &lead.recip())
    }

    fn raw_denominator(&self) -> LaurentPoly {
        let mut p = LaurentPoly::one();
        for (a, e) in &self.atoms {
            if *e < 0 {
                p = p.mul(&a.expand().pow((-e) as u32));
            }
        }
        p
    }

    fn den_content(&self) -> (Exps, Rat) {
        let raw = self.raw_denominator();
        (raw.min_exps(), raw.highest().map(|t| t.1.clone()).unwrap_or(Rat::one()))
    }

    /// Fully reduced `(numerator, denominator)` of an X, Y-free element.
    ///
    /// Q-only atoms are refined to the finest root appearing anywhere in
    /// the element, where they are irreducible and pairwise coprime, so
    /// trial division yields the reduced fraction and the pair is a
    /// canonical form.
    pub fn canonical_parts(&self) -> (LaurentPoly, LaurentPoly) {
        assert!(!self.has_xy(), "canonical form requires an X, Y-free element");
        if self.is_zero() {
            return (LaurentPoly::zero(), LaurentPoly::one());
        }
        if self.system == NumberSystem::Classical {
            let num = self.numerator();
            let den = self.denominator();
            let value = num.as_constant().unwrap() / den.as_constant().unwrap();
            return (LaurentPoly::constant(value), LaurentPoly::one());
        }
        let mut root = self.rest.q_denominator().lcm(self.mono.q.denom());
        for (a, _) in &self.atoms {
            if let Atom::Poly(p) = a {
                root = root.lcm(&p.q_denominator());
            }
        }
        let fine = self.refined(root);
        let mut num = fine.rest.mul_monomial(fine.mono, &fine.coeff);
        let mut dens = Vec::new();
        for (a, e) in &fine.atoms {
            if *e > 0 {
                num = num.mul(&a.expand().pow(*e as u32));
            } else {
                for _ in 0..(-e) {
                    dens.push(a.expand());
                }
            }
        }
        let mut den = LaurentPoly::one();
        for d in dens {
            match num.exact_div(&d) {
                Some(q) => num = q,
                None => den = den.mul(&d),
            }
        }
        let lo = den.min_exps();
        let lead = den.highest().unwrap().1.clone();
        let inv = lead.recip();
        (num.mul_monomial(-lo, &inv), den.mul_monomial(-lo, &inv))
    }

    /// Applies the X ↔ Y exchange.
    pub fn tau_swap(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeff = self.coeff.clone();
        let mut mono = self.mono.swap_xy();
        let mut atoms = Vec::with_capacity(self.atoms.len());
        let mut rest = self.rest.swap_xy();
        for (a, e) in &self.atoms {
            match a {
                Atom::Cyclo { base, order } if base.has_xy() => {
                    let b = base.swap_xy();
                    let flip = if b.x != 0 { b.x < 0 } else { b.y < 0 };
                    if flip {
                        // Φ_m(M⁻¹) = -M⁻¹ Φ_1(M) for m = 1, M^(-φ(m)) Φ_m(M) otherwise
                        let nb = -b;
                        if *order == 1 {
                            if e % 2 != 0 {
                                coeff = -coeff;
                            }
                            mono = mono + b.scale(*e);
                        } else {
                            mono = mono + b.scale(cyclo::totient(*order) as i32 * e);
                        }
                        atoms.push((Atom::Cyclo { base: nb, order: *order }, *e));
                    } else {
                        atoms.push((Atom::Cyclo { base: b, order: *order }, *e));
                    }
                }
                Atom::Poly(p) if p.has_xy() => {
                    let sp = p.swap_xy();
                    let lo = sp.min_exps();
                    let lead = sp.highest().unwrap().1.clone();
                    let np = sp.mul_monomial(-lo, &lead.recip());
                    coeff = &coeff * &lead.pow(*e);
                    mono = mono + lo.scale(*e);
                    atoms.push((Atom::Poly(np), *e));
                }
                _ => atoms.push((a.clone(), *e)),
            }
        }
        if rest.is_one() {
            rest = LaurentPoly::one();
        }
        Self::from_parts(self.system, coeff, mono, atoms, rest)
    }

    pub fn display(&self) -> String {
        self.to_string()
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classical = self.system == NumberSystem::Classical;
        let (num, den) = if self.has_xy() {
            (self.numerator(), self.denominator())
        } else {
            self.canonical_parts()
        };
        if den.is_one() {
            num.fmt_with(f, classical)
        } else {
            write!(f, "(")?;
            num.fmt_with(f, classical)?;
            write!(f, ") / (")?;
            den.fmt_with(f, classical)?;
            write!(f, ")")
        }
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement::add(self, o)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement::sub(self, o)
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        FieldElement::mul(self, o)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl FieldElement {
    /// Value of a polynomial at X = Y = Q^c (classical: x = y = c).
    pub(crate) fn poly_at(sys: NumberSystem, p: &LaurentPoly, c: &Rat) -> Result<FieldElement> {
        match sys {
            NumberSystem::Quantum => {
                let cq = to_qexp(c);
                let sub = p.map_exps(|e| Exps::q(e.q + cq * (e.x + e.y) as i64));
                Ok(FieldElement::from_poly(sys, sub))
            }
            NumberSystem::Classical => {
                let mut acc = Rat::zero();
                for (e, k) in p.terms() {
                    let d = e.x + e.y;
                    if d < 0 && c.is_zero() {
                        return Err(Error::PoleAtEvaluation("negative power of zero".into()));
                    }
                    acc += &(k * &c.pow(d));
                }
                Ok(FieldElement::from_rat(sys, acc))
            }
        }
    }

    fn atom_at(&self, a: &Atom, c: &Rat) -> Result<FieldElement> {
        match (self.system, a) {
            (NumberSystem::Quantum, Atom::Cyclo { base, order }) => {
                let cq = base.q + to_qexp(c) * (base.x + base.y) as i64;
                if cq.is_zero() {
                    Ok(FieldElement::from_int(self.system, cyclo::value_at_one(*order)))
                } else {
                    Ok(cyclo_at_q_power(*order, cq))
                }
            }
            (_, Atom::Poly(p)) => Self::poly_at(self.system, p, c),
            (NumberSystem::Classical, Atom::Cyclo { .. }) => unreachable!("cyclotomic atom in classical system"),
        }
    }

    /// Substitutes X = Y = Q^c (classical: x = y = c), cancelling factors
    /// that vanish on the diagonal first (at most four of them).
    pub fn evaluate_at_singular(&self, c: &Rat) -> Result<FieldElement> {
        if !self.has_xy() {
            return Ok(self.clone());
        }
        let sys = self.system;
        let diag = Atom::diagonal(sys);
        let diag_poly = diag.expand();
        let mut f = self.clone();
        // Split diagonal factors out of opaque atoms.
        let mut split = Vec::new();
        for (a, e) in f.atoms.drain(..) {
            match &a {
                Atom::Poly(p) if a.has_xy() && a != diag => {
                    let mut p = p.clone();
                    let mut k = 0;
                    while k < 4 && Self::poly_at(sys, &p, c)?.is_zero() {
                        match p.exact_div(&diag_poly) {
                            Some(q) => {
                                p = q;
                                k += 1;
                            }
                            None => break,
                        }
                    }
                    if k > 0 {
                        split.push((diag.clone(), e * k));
                        let g = FieldElement::from_poly(sys, p).pow(e).expect("non-zero factor");
                        f.coeff *= &g.coeff;
                        f.mono = f.mono + g.mono;
                        split.extend(g.atoms);
                        if !g.rest.is_one() {
                            split.push((Atom::Poly(g.rest), e));
                        }
                    } else {
                        split.push((a, e));
                    }
                }
                _ => split.push((a, e)),
            }
        }
        f.atoms = canon_atoms(split, 1);
        let pos = f.atoms.iter().position(|(a, _)| *a == diag);
        if let Some(i) = pos {
            let mut depth = 0;
            while f.atoms[i].1 < 0 && depth < 4 && !f.rest.is_one() {
                match f.rest.exact_div(&diag_poly) {
                    Some(q) => {
                        f.rest = q;
                        f.atoms[i].1 += 1;
                        depth += 1;
                    }
                    None => break,
                }
            }
            if f.atoms[i].1 < 0 {
                return Err(Error::PoleAtEvaluation(format!("unresolved pole on the diagonal in {self}")));
            }
        }
        let mut vanishes = false;
        let mut acc = FieldElement::from_rat(sys, f.coeff.clone());
        acc = acc.mul(&Self::poly_at(sys, &LaurentPoly::monomial(f.mono, Rat::one()), c)?);
        for (a, e) in &f.atoms {
            let v = f.atom_at(a, c)?;
            if v.is_zero() {
                if *e < 0 {
                    return Err(Error::PoleAtEvaluation(format!("denominator vanishes in {self}")));
                }
                vanishes = true;
                continue;
            }
            acc = acc.mul(&v.pow(*e)?);
        }
        let r = Self::poly_at(sys, &f.rest, c)?;
        if vanishes || r.is_zero() {
            return Ok(FieldElement::zero(sys));
        }
        Ok(acc.mul(&r))
    }

    /// Applies the derivation `wx·D_x + wy·D_y`, where `D` is the Euler
    /// operator `X∂_X` in the quantum system and `∂_x` in the classical one.
    pub fn derivation(&self, wx: i32, wy: i32) -> FieldElement {
        let sys = self.system;
        if self.is_zero() {
            return self.clone();
        }
        let mut f = self.clone();
        if sys == NumberSystem::Classical && f.mono.has_xy() {
            let m = Exps { q: Ratio::zero(), ..f.mono };
            f.rest = f.rest.mul_monomial(m, &Rat::one());
            f.mono = Exps { x: 0, y: 0, ..f.mono };
        }
        let d_poly = |p: &LaurentPoly| match sys {
            NumberSystem::Quantum => p.euler(wx, wy),
            NumberSystem::Classical => p.partial(wx, wy),
        };
        let k = match sys {
            NumberSystem::Quantum => wx * f.mono.x + wy * f.mono.y,
            NumberSystem::Classical => 0,
        };
        let involved: Vec<usize> = (0..f.atoms.len())
            .filter(|&i| f.atoms[i].0.has_xy() && !d_poly(&f.atoms[i].0.expand()).is_zero())
            .collect();
        let expanded: Vec<LaurentPoly> = involved.iter().map(|&i| f.atoms[i].0.expand()).collect();
        let prod_all = expanded.iter().fold(LaurentPoly::one(), |acc, p| acc.mul(p));
        let mut bracket = f.rest.mul(&prod_all).scale(&Rat::from(k));
        bracket = bracket.add(&d_poly(&f.rest).mul(&prod_all));
        for (idx, &i) in involved.iter().enumerate() {
            let mut term = d_poly(&expanded[idx]).mul(&f.rest).scale(&Rat::from(f.atoms[i].1));
            for (jdx, p) in expanded.iter().enumerate() {
                if jdx != idx {
                    term = term.mul(p);
                }
            }
            bracket = bracket.add(&term);
        }
        let mut atoms = f.atoms.clone();
        for &i in &involved {
            atoms[i].1 -= 1;
        }
        atoms.retain(|t| t.1 != 0);
        FieldElement::from_parts(sys, f.coeff.clone(), f.mono, atoms, bracket)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QU: NumberSystem = NumberSystem::Quantum;

    fn mono(q: i64, x: i32, y: i32) -> FieldElement {
        FieldElement::monomial(QU, Exps::new(Ratio::from_integer(q), x, y), Rat::one())
    }

    #[test]
    fn additive_inverse() {
        let a = mono(1, 0, 0).sub(&mono(-1, 0, 0));
        let b = mono(-1, 0, 0).sub(&mono(1, 0, 0));
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn multiplicative_inverse() {
        let a = mono(0, 1, -1);
        let b = mono(0, -1, 1);
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn difference_of_squares() {
        let num = mono(0, 2, 0).sub(&mono(0, 0, 2));
        let den = mono(0, 1, 0).sub(&mono(0, 0, 1));
        let lhs = num.div(&den).unwrap();
        let rhs = mono(0, 1, 0).add(&mono(0, 0, 1));
        assert_eq!(lhs, rhs);
        assert!(lhs.atoms.iter().all(|(_, e)| *e > 0));
    }

    #[test]
    fn sum_matches_folded_add() {
        let sys = NumberSystem::Quantum;
        let b = |c: i64, d: i64, x: i32| {
            crate::exactalg::bracket(sys, &crate::exactalg::EntryDiff { constant: Rat::new(c, d), x, y: 0 })
        };
        let items = vec![
            b(1, 3, 1).inv().unwrap(),
            b(2, 5, 0).mul(&mono(1, 1, 0)).inv().unwrap(),
            b(1, 3, 1).mul(&b(1, 2, 0)).inv().unwrap().neg(),
            mono(-2, 0, 1),
        ];
        let folded = items.iter().fold(FieldElement::zero(sys), |acc, f| acc.add(f));
        assert_eq!(FieldElement::sum(sys, &items), folded);
        let mut cancel = items.clone();
        cancel.push(folded.neg());
        assert!(FieldElement::sum(sys, &cancel).is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(mono(0, 0, 0).div(&FieldElement::zero(QU)).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn canonical_parts_reduce() {
        // (Q^2 - 1)/(Q - 1) = Q + 1
        let a = mono(2, 0, 0).sub(&mono(0, 0, 0));
        let b = mono(1, 0, 0).sub(&mono(0, 0, 0));
        let (n, d) = a.div(&b).unwrap().canonical_parts();
        assert!(d.is_one());
        assert_eq!(n, mono(1, 0, 0).add(&mono(0, 0, 0)).numerator());
    }

    #[test]
    fn mixed_roots_compare_equal() {
        // (Q - 1) = (Q^(1/2) - 1)(Q^(1/2) + 1)
        let h = FieldElement::q_power(Ratio::new(1, 2));
        let one = FieldElement::one(QU);
        let lhs = FieldElement::q_power(Ratio::from_integer(1)).sub(&one);
        let rhs = h.sub(&one).mul(&h.add(&one));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.canonical_parts(), rhs.canonical_parts());
    }
}
