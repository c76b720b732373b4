//! The module `V_C(T(v̄))`: basis vectors, generator actions and the
//! singular evaluation pipeline.

mod element;

use std::cell::RefCell;
use std::rc::Rc;
use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;

pub use element::ModuleElement;

use crate::error::{Error, Result};
use crate::exactalg::{bracket, bracket_x_minus_y, dv_operator, EntryDiff, FieldElement, NumberSystem, Rat};
use crate::tableaux::{
    detect_singular_pair, normalize_singular, num_free_positions, Membership, Position, RelationSet, Shift,
    SingularPair, Singularity, Tableau,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Normal,
    Derivative,
}

/// `T(v̄ + z)` or `𝒟T(v̄ + z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisVector {
    pub kind: Kind,
    pub z: Shift,
}

impl BasisVector {
    pub fn normal(z: Shift) -> Self {
        BasisVector { kind: Kind::Normal, z }
    }

    pub fn derivative(z: Shift) -> Self {
        BasisVector { kind: Kind::Derivative, z }
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            Kind::Normal => "T",
            Kind::Derivative => "DT",
        };
        let z: Vec<String> = self.z.iter().map(|v| v.to_string()).collect();
        write!(f, "{tag}[{}]", z.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    E(usize),
    F(usize),
    /// `q^{ε_k}`; the Cartan element `E_kk` in the classical system.
    QEps(usize),
    /// `q^h` for `h ∈ P`; `Σ h_r E_rr` in the classical system.
    QH(Vec<i64>),
}

impl Generator {
    fn validate(&self, n: usize) -> Result<()> {
        let ok = match self {
            Generator::E(k) | Generator::F(k) => *k >= 1 && *k < n,
            Generator::QEps(k) => *k >= 1 && *k <= n,
            Generator::QH(h) => h.len() == n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!("generator {self} is not defined for n = {n}")))
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::E(k) => write!(f, "e{k}"),
            Generator::F(k) => write!(f, "f{k}"),
            Generator::QEps(k) => write!(f, "qeps{k}"),
            Generator::QH(h) => {
                let s: Vec<String> = h.iter().map(|v| v.to_string()).collect();
                write!(f, "qh({})", s.join(","))
            }
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("cannot parse generator {s:?}"));
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("qh(").and_then(|r| r.strip_suffix(')')) {
            let h = inner
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Generator::QH(h));
        }
        for (prefix, ctor) in [
            ("qeps", Generator::QEps as fn(usize) -> Generator),
            ("e", Generator::E),
            ("f", Generator::F),
        ] {
            if let Some(rest) = s.strip_prefix(prefix) {
                return rest.parse::<usize>().map(ctor).map_err(|_| bad());
            }
        }
        Err(bad())
    }
}

/// Deliberate corruptions used to confirm that the verification suites
/// are sensitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// Negates the `e_k` summand moving column `j`.
    SignFlip { k: usize, j: usize },
    /// Ignores target membership when expanding `e_k`, `f_k`.
    DropGate,
    /// Multiplies every central eigenvalue by `Q` (classical: by 2).
    GammaPrefactor,
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::SignFlip { k, j } => write!(f, "sign-flip {k} {j}"),
            Mutation::DropGate => write!(f, "drop-gate"),
            Mutation::GammaPrefactor => write!(f, "gamma-prefactor"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModuleSpec {
    n: usize,
    base: Vec<Rat>,
    relations: RelationSet,
    system: NumberSystem,
    singular: Singularity,
    mutation: Option<Mutation>,
    membership: Membership,
}

impl ModuleSpec {
    /// Validates admissibility and realization, detects the singular pair
    /// and normalizes the base so the pair has equal entries.
    pub fn new(tableau: &Tableau, relations: RelationSet, system: NumberSystem) -> Result<Self> {
        let n = tableau.n();
        if relations.n() != n {
            return Err(Error::InvalidSpec("relation set and tableau heights differ".into()));
        }
        if tableau.shift().iter().any(|&s| s != 0) {
            return Err(Error::InvalidSpec("base tableau must be unshifted".into()));
        }
        let report = relations.is_admissible();
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidSpec(format!("relation set is not admissible: {v}")));
        }
        let singular = detect_singular_pair(tableau, &relations)?;
        let mut base = tableau.base().to_vec();
        if let Singularity::Pair(sp) = &singular {
            normalize_singular(&mut base, sp);
        }
        let membership = Membership::new(&relations, &base);
        Ok(ModuleSpec { n, base, relations, system, singular, mutation: None, membership })
    }

    pub fn with_mutation(mut self, m: Option<Mutation>) -> Self {
        self.mutation = m;
        self
    }

    pub fn with_system(mut self, system: NumberSystem) -> Self {
        self.system = system;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &[Rat] {
        &self.base
    }

    pub fn base_tableau(&self) -> Tableau {
        Tableau::new(self.n, self.base.clone()).expect("validated base")
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn system(&self) -> NumberSystem {
        self.system
    }

    pub fn singular(&self) -> Singularity {
        self.singular
    }

    pub fn pair(&self) -> Option<SingularPair> {
        self.singular.pair()
    }

    pub fn mutation(&self) -> Option<Mutation> {
        self.mutation
    }

    pub fn in_basis(&self, z: &[i32]) -> bool {
        self.membership.contains(z)
    }

    /// Value of both singular entries at the evaluation point.
    pub fn singular_value(&self) -> Option<Rat> {
        self.pair().map(|sp| self.base[sp.first().index()].clone())
    }

    /// Entry of `T(v + z)`, with `x`, `y` in place of the singular entries.
    pub fn entry(&self, z: &[i32], p: Position) -> EntryDiff {
        let shift = if p.row == self.n { 0 } else { z[p.index()] };
        if let Some(sp) = self.pair() {
            if p == sp.first() {
                return EntryDiff { constant: Rat::from(shift), x: 1, y: 0 };
            }
            if p == sp.second() {
                return EntryDiff { constant: Rat::from(shift), x: 0, y: 1 };
            }
        }
        EntryDiff::constant(&self.base[p.index()] + &Rat::from(shift))
    }

    /// Concrete entry of `T(v̄ + z)`.
    pub fn value(&self, z: &[i32], p: Position) -> Rat {
        let shift = if p.row == self.n { 0 } else { z[p.index()] };
        &self.base[p.index()] + &Rat::from(shift)
    }

    /// `a_k` of `T(v + z)`.
    pub fn weight(&self, z: &[i32], k: usize) -> EntryDiff {
        let mut a = EntryDiff::constant(Rat::from(k as i64));
        for i in 1..=k {
            a = a.add(&self.entry(z, Position::new(k, i)));
        }
        for i in 1..k {
            a = a.sub(&self.entry(z, Position::new(k - 1, i)));
        }
        a
    }

    /// Brief human-readable summary.
    pub fn summary(&self) -> String {
        let sing = match self.singular {
            Singularity::Generic => "generic".to_string(),
            Singularity::Pair(p) => format!("singular {p}"),
        };
        let m = match self.mutation {
            Some(m) => format!(", mutation {m}"),
            None => String::new(),
        };
        format!("n={} {} {} C={}{}", self.n, self.system.name(), sing, self.relations, m)
    }
}

/// `a_k = Σ l_{k,i} - Σ l_{k-1,i} + k` for a concrete tableau.
pub fn weight_exponent(k: usize, t: &Tableau) -> EntryDiff {
    let mut a = Rat::from(k as i64);
    for i in 1..=k {
        a += &t.entry(Position::new(k, i));
    }
    for i in 1..k {
        a -= &t.entry(Position::new(k - 1, i));
    }
    EntryDiff::constant(a)
}

fn product(sys: NumberSystem, factors: impl Iterator<Item = EntryDiff>) -> FieldElement {
    factors.fold(FieldElement::one(sys), |acc, d| acc.mul(&bracket(sys, &d)))
}

/// Unevaluated Gelfand-Tsetlin coefficient of the `e_k` (or `f_k`) summand
/// moving column `r` of row `k`.
pub fn raw_coeff(spec: &ModuleSpec, raise: bool, k: usize, r: usize, z: &[i32]) -> Result<FieldElement> {
    let sys = spec.system;
    let lkr = spec.entry(z, Position::new(k, r));
    let num = if raise {
        product(sys, (1..=k + 1).map(|i| spec.entry(z, Position::new(k + 1, i)).sub(&lkr)))
    } else {
        product(sys, (1..k).map(|i| spec.entry(z, Position::new(k - 1, i)).sub(&lkr)))
    };
    if num.is_zero() {
        return Ok(num);
    }
    let den = product(sys, (1..=k).filter(|&i| i != r).map(|i| spec.entry(z, Position::new(k, i)).sub(&lkr)));
    let c = num.div(&den)?;
    Ok(if raise { c.neg() } else { c })
}

/// `g T(v + z)` over the field of rational functions, gated on targets.
fn expand(spec: &ModuleSpec, g: &Generator, z: &[i32]) -> Result<Vec<(FieldElement, Shift)>> {
    let sys = spec.system;
    match g {
        Generator::E(k) | Generator::F(k) => {
            let raise = matches!(g, Generator::E(_));
            let mut out = Vec::new();
            for r in 1..=*k {
                let mut w = z.to_vec();
                w[Position::new(*k, r).index()] += if raise { 1 } else { -1 };
                if spec.mutation != Some(Mutation::DropGate) && !spec.in_basis(&w) {
                    continue;
                }
                let mut c = raw_coeff(spec, raise, *k, r, z).map_err(|e| match e {
                    Error::DivisionByZero => Error::NonRealizable(format!(
                        "vanishing denominator in {g} at {}",
                        BasisVector::normal(z.to_vec())
                    )),
                    e => e,
                })?;
                if raise && spec.mutation == Some(Mutation::SignFlip { k: *k, j: r }) {
                    c = c.neg();
                }
                if !c.is_zero() {
                    out.push((c, w));
                }
            }
            Ok(out)
        }
        Generator::QEps(k) => {
            let mut h = vec![0; spec.n];
            h[k - 1] = 1;
            expand(spec, &Generator::QH(h), z)
        }
        Generator::QH(h) => {
            let mut e = EntryDiff::constant(Rat::zero());
            for (r, &hr) in h.iter().enumerate() {
                if hr != 0 {
                    e = e.add(&spec.weight(z, r + 1).scale(hr as i32));
                }
            }
            let c = match sys {
                NumberSystem::Quantum => crate::exactalg::q_power(&e),
                NumberSystem::Classical => FieldElement::from_poly(sys, e.linear_poly()),
            };
            Ok(if c.is_zero() { Vec::new() } else { vec![(c, z.to_vec())] })
        }
    }
}

fn non_realizable(g: &str, b: &BasisVector, c: &FieldElement, e: Error) -> Error {
    match e {
        Error::PoleAtEvaluation(m) => Error::NonRealizable(format!("{g} on {b}: coefficient {c} has a pole ({m})")),
        e => e,
    }
}

/// Runs the action on an arbitrary representative `z` (not necessarily
/// canonical) and canonicalizes the output.
pub fn act_representative(g: &Generator, kind: Kind, z: &[i32], spec: &ModuleSpec) -> Result<ModuleElement> {
    g.validate(spec.n)?;
    let terms = expand(spec, g, z)?;
    evaluate_terms(spec, kind, z, terms, &g.to_string())
}

/// Turns `Σ c_w T(v + w)`, the symbolic image of the representative `z`,
/// into an element of `V_C(T(v̄))`: through `𝒟^v̄([x - y] ·)` for a
/// normal input and `𝒟^v̄(·)` for a derivative input.
pub(crate) fn evaluate_terms(
    spec: &ModuleSpec,
    kind: Kind,
    z: &[i32],
    terms: Vec<(FieldElement, Shift)>,
    label: &str,
) -> Result<ModuleElement> {
    let sys = spec.system;
    let mut out = ModuleElement::zero(sys);
    let (sp, c) = match (spec.pair(), spec.singular_value()) {
        (Some(sp), Some(c)) => (sp, c),
        _ => {
            if kind == Kind::Derivative {
                return Err(Error::InvalidSpec("derivative tableaux exist only for singular specs".into()));
            }
            for (coef, w) in terms {
                out.add_term(BasisVector::normal(w), coef);
            }
            return Ok(out);
        }
    };
    if kind == Kind::Derivative && sp.is_fixed(z) {
        return Ok(out);
    }
    let b = BasisVector { kind, z: z.to_vec() };
    for (coef, w) in terms {
        let target_kind = |k| canonical(&sp, BasisVector { kind: k, z: w.clone() });
        if !coef.has_xy() {
            if let Some((sign, bv)) = target_kind(kind) {
                out.add_term(bv, coef.scale(&Rat::from(sign)));
            }
            continue;
        }
        let f = if kind == Kind::Normal { coef.mul(&bracket_x_minus_y(sys)) } else { coef.clone() };
        let d = dv_operator(&f, &c).map_err(|e| non_realizable(label, &b, &coef, e))?;
        let v = f.evaluate_at_singular(&c).map_err(|e| non_realizable(label, &b, &coef, e))?;
        if let Some((sign, bv)) = target_kind(Kind::Normal) {
            out.add_term(bv, d.scale(&Rat::from(sign)));
        }
        if let Some((sign, bv)) = target_kind(Kind::Derivative) {
            out.add_term(bv, v.scale(&Rat::from(sign)));
        }
    }
    Ok(out)
}

/// Canonical representative and sign; `None` for a vanishing derivative
/// tableau.
pub fn canonical(sp: &SingularPair, b: BasisVector) -> Option<(i64, BasisVector)> {
    let (a, c) = (b.z[sp.first().index()], b.z[sp.second().index()]);
    match b.kind {
        Kind::Normal if a <= c => Some((1, b)),
        Kind::Normal => Some((1, BasisVector::normal(sp.tau(&b.z)))),
        Kind::Derivative if a > c => Some((1, b)),
        Kind::Derivative if a == c => None,
        Kind::Derivative => Some((-1, BasisVector::derivative(sp.tau(&b.z)))),
    }
}

/// Canonicalizes `b` for the module; generic specs only have normal vectors.
pub fn canonicalize(spec: &ModuleSpec, b: BasisVector) -> Option<(i64, BasisVector)> {
    match spec.pair() {
        Some(sp) => canonical(&sp, b),
        None => Some((1, b)),
    }
}

pub fn act(g: &Generator, b: &BasisVector, spec: &ModuleSpec) -> Result<ModuleElement> {
    act_representative(g, b.kind, &b.z, spec)
}

/// Applies `w[0]` first, then `w[1]`, and so on.
pub fn act_word(w: &[Generator], v: &ModuleElement, spec: &ModuleSpec) -> Result<ModuleElement> {
    let mut cur = v.clone();
    for g in w {
        let mut next = ModuleElement::zero(spec.system);
        for (b, c) in cur.terms() {
            next.add_scaled(&act(g, b, spec)?, c);
        }
        cur = next;
    }
    Ok(cur)
}

/// A spec with a memo of generator actions on basis vectors.
pub struct Module {
    spec: ModuleSpec,
    cache: RefCell<ActCache>,
}

type ActKey = (Generator, BasisVector);

/// Two generations: when the young map fills up it becomes the old one
/// and the previous old one is dropped, so recently used entries survive.
#[derive(Default)]
struct ActCache {
    young: FxHashMap<ActKey, Rc<ModuleElement>>,
    old: FxHashMap<ActKey, Rc<ModuleElement>>,
}

const CACHE_GENERATION: usize = 400_000;

impl Module {
    pub fn new(spec: ModuleSpec) -> Self {
        Module { spec, cache: RefCell::new(ActCache::default()) }
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    pub fn act(&self, g: &Generator, b: &BasisVector) -> Result<ModuleElement> {
        Ok((*self.act_shared(g, b)?).clone())
    }

    fn act_shared(&self, g: &Generator, b: &BasisVector) -> Result<Rc<ModuleElement>> {
        let key = (g.clone(), b.clone());
        {
            let mut cache = self.cache.borrow_mut();
            if let Some(v) = cache.young.get(&key) {
                return Ok(v.clone());
            }
            if let Some(v) = cache.old.remove(&key) {
                cache.young.insert(key, v.clone());
                return Ok(v);
            }
        }
        let v = Rc::new(act(g, b, &self.spec)?);
        let mut cache = self.cache.borrow_mut();
        if cache.young.len() >= CACHE_GENERATION {
            cache.old = std::mem::take(&mut cache.young);
        }
        cache.young.insert(key, v.clone());
        Ok(v)
    }

    pub fn act_element(&self, g: &Generator, v: &ModuleElement) -> Result<ModuleElement> {
        let mut out = ModuleElement::zero(self.spec.system);
        for (b, c) in v.terms() {
            out.add_scaled(&*self.act_shared(g, b)?, c);
        }
        Ok(out)
    }

    pub fn act_word(&self, w: &[Generator], v: &ModuleElement) -> Result<ModuleElement> {
        let mut cur = v.clone();
        for g in w {
            cur = self.act_element(g, &cur)?;
        }
        Ok(cur)
    }

    /// Canonical basis vectors whose shifts lie in the window `‖z‖∞ ≤ B`.
    pub fn window(&self, bound: u32) -> Vec<BasisVector> {
        window(&self.spec, bound)
    }
}

/// Canonical basis vectors over the window, normal vectors first for each
/// shift.
pub fn window(spec: &ModuleSpec, bound: u32) -> Vec<BasisVector> {
    let t = spec.base_tableau();
    let mut out = Vec::new();
    for z in crate::tableaux::enumerate_window(spec.relations(), &t, bound) {
        match spec.pair() {
            None => out.push(BasisVector::normal(z)),
            Some(sp) => {
                let (a, c) = (z[sp.first().index()], z[sp.second().index()]);
                if a <= c {
                    out.push(BasisVector::normal(z));
                } else {
                    out.push(BasisVector::derivative(z));
                }
            }
        }
    }
    debug_assert!(out.iter().all(|b| b.z.len() == num_free_positions(spec.n)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{q_power, NumberSystem::*};

    fn r(a: i64, b: i64) -> Rat {
        Rat::new(a, b)
    }

    fn generic2() -> ModuleSpec {
        let t = Tableau::new(2, vec![r(1, 3), r(1, 2), r(-2, 5)]).unwrap();
        ModuleSpec::new(&t, RelationSet::empty(2), Quantum).unwrap()
    }

    #[test]
    fn qeps_scalar() {
        let s = generic2();
        let v = act(&Generator::QEps(1), &BasisVector::normal(vec![0]), &s).unwrap();
        let expected = q_power(&EntryDiff::constant(r(4, 3)));
        assert_eq!(v.coeff(&BasisVector::normal(vec![0])), Some(&expected));
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn raising_in_rank_one() {
        let s = generic2();
        let v = act(&Generator::E(1), &BasisVector::normal(vec![0]), &s).unwrap();
        let d1 = EntryDiff::constant(&r(1, 2) - &r(1, 3));
        let d2 = EntryDiff::constant(&r(-2, 5) - &r(1, 3));
        let expected = bracket(Quantum, &d1).mul(&bracket(Quantum, &d2)).neg();
        assert_eq!(v.coeff(&BasisVector::normal(vec![1])), Some(&expected));
        let f = act(&Generator::F(1), &BasisVector::normal(vec![0]), &s).unwrap();
        assert!(f.coeff(&BasisVector::normal(vec![-1])).unwrap().is_one());
    }

    #[test]
    fn weight_difference() {
        let t = Tableau::new(3, vec![r(1, 3), r(1, 2), r(1, 5), r(2, 7), r(3, 11), r(5, 13)]).unwrap();
        let a1 = weight_exponent(1, &t);
        assert_eq!(a1.constant, &r(1, 3) + &Rat::one());
        let diff = weight_exponent(2, &t).sub(&weight_exponent(3, &t));
        // 2(l21+l22) - l11 - (l31+l32+l33) - 1, up to the ε-shift
        let direct = &(&(&(&r(1, 2) + &r(1, 5)) * &Rat::from_int(2)) - &r(1, 3))
            - &(&(&(&r(2, 7) + &r(3, 11)) + &r(5, 13)) + &Rat::one());
        assert_eq!(diff.constant, direct);
    }

    #[test]
    fn generator_round_trip() {
        for g in [Generator::E(2), Generator::F(1), Generator::QEps(3), Generator::QH(vec![1, -2, 0])] {
            assert_eq!(g.to_string().parse::<Generator>().unwrap(), g);
        }
    }
}
