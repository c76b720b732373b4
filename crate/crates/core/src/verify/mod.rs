//! Verification suites: defining relations, representative compatibility,
//! the `𝒟^v̄` calculus, Gelfand-Tsetlin structure, finite-dimensional
//! cross-checks and irreducibility evidence.

pub mod appendix;
pub mod oracle;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rustc_hash::FxHashMap;

use crate::action::{act, act_representative, BasisVector, Generator, Kind, Module, ModuleElement, ModuleSpec, Mutation};
use crate::error::{Error, Result};
use crate::exactalg::{FieldElement, NumberSystem, QExp, Rat};
use crate::gtcenter::{block_report, central_shifted};
use crate::tableaux::{is_maximal_for, Position, RelationSet, Tableau};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub vector: Option<BasisVector>,
    pub relation: String,
    pub residual: Option<ModuleElement>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub spec: String,
    pub bound: Option<u32>,
    pub seed: Option<u64>,
    pub status: Status,
    /// Number of individual identities confirmed.
    pub checked: u64,
    pub counterexample: Option<Counterexample>,
    pub notes: Vec<String>,
    pub elapsed_ms: u128,
}

impl CheckReport {
    fn start(name: &str, spec: String, bound: Option<u32>, seed: Option<u64>) -> Self {
        CheckReport {
            name: name.to_string(),
            spec,
            bound,
            seed,
            status: Status::Pass,
            checked: 0,
            counterexample: None,
            notes: Vec::new(),
            elapsed_ms: 0,
        }
    }

    fn fail(&mut self, vector: Option<&BasisVector>, relation: impl Into<String>, residual: Option<ModuleElement>, detail: Option<String>) {
        self.status = Status::Fail;
        if self.counterexample.is_none() {
            self.counterexample = Some(Counterexample { vector: vector.cloned(), relation: relation.into(), residual, detail });
        }
    }

    fn skip(mut self, why: &str) -> Self {
        self.status = Status::Skipped;
        self.notes.push(why.to_string());
        self
    }

    fn done(mut self, t: Instant) -> Self {
        self.elapsed_ms = t.elapsed().as_millis();
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[report]")?;
        writeln!(f, "check = {}", self.name)?;
        writeln!(f, "spec = {}", self.spec)?;
        if let Some(b) = self.bound {
            writeln!(f, "bound = {b}")?;
        }
        if let Some(s) = self.seed {
            writeln!(f, "seed = {s}")?;
        }
        writeln!(f, "status = {}", self.status)?;
        writeln!(f, "checked = {}", self.checked)?;
        writeln!(f, "elapsed_ms = {}", self.elapsed_ms)?;
        for n in &self.notes {
            writeln!(f, "note = {n}")?;
        }
        if let Some(c) = &self.counterexample {
            writeln!(f, "[counterexample]")?;
            if let Some(v) = &c.vector {
                writeln!(f, "vector = {v}")?;
            }
            writeln!(f, "relation = {}", c.relation)?;
            if let Some(d) = &c.detail {
                writeln!(f, "detail = {d}")?;
            }
            if let Some(r) = &c.residual {
                writeln!(f, "residual:")?;
                for line in r.to_string().lines() {
                    writeln!(f, "  {line}")?;
                }
            }
        }
        Ok(())
    }
}

/// `Σ c_i w_i`, each word written in algebraic order (rightmost letter acts
/// first). The relation holds on `v` when the combination annihilates it.
#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub name: String,
    pub terms: Vec<(FieldElement, Vec<Generator>)>,
}

impl RelationInstance {
    pub fn residual(&self, module: &Module, v: &ModuleElement) -> Result<ModuleElement> {
        let mut out = ModuleElement::zero(v.system());
        for (c, w) in &self.terms {
            let order: Vec<Generator> = w.iter().rev().cloned().collect();
            out.add_scaled(&module.act_word(&order, v)?, c);
        }
        Ok(out)
    }
}

fn q_pow(e: i64) -> FieldElement {
    FieldElement::q_power(QExp::from_integer(e))
}

fn unit(n: usize, k: usize) -> Vec<i64> {
    let mut h = vec![0; n];
    h[k - 1] = 1;
    h
}

fn simple_root(n: usize, k: usize) -> Vec<i64> {
    let mut h = unit(n, k);
    h[k] = -1;
    h
}

/// Cartan elements used in the weight relations: every `ε_k` and one mixed
/// vector.
fn cartan_sample(n: usize) -> Vec<Vec<i64>> {
    let mut hs: Vec<Vec<i64>> = (1..=n).map(|k| unit(n, k)).collect();
    if n >= 2 {
        let mut h = vec![0; n];
        h[0] = 2;
        h[1] = -1;
        h[n - 1] += 1;
        hs.push(h);
    }
    hs
}

/// Instances of every defining relation of the algebra for height `n`.
pub fn relation_instances(n: usize, sys: NumberSystem) -> Vec<RelationInstance> {
    use Generator::*;
    let one = FieldElement::one(sys);
    let int = |v: i64| FieldElement::from_int(sys, v);
    let quantum = sys == NumberSystem::Quantum;
    let neg = |h: &[i64]| h.iter().map(|v| -v).collect::<Vec<_>>();
    let add = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
    let mut out = Vec::new();
    let mut push = |name: String, terms: Vec<(FieldElement, Vec<Generator>)>| out.push(RelationInstance { name, terms });

    let hs = cartan_sample(n);
    if quantum {
        push("q^0 = 1".into(), vec![(one.clone(), vec![QH(vec![0; n])]), (one.neg(), vec![])]);
    } else {
        push("H(0) = 0".into(), vec![(one.clone(), vec![QH(vec![0; n])])]);
    }
    for w in hs.windows(2) {
        let (h, g) = (&w[0], &w[1]);
        let name = format!("qh({h:?}) qh({g:?}) = qh(sum)");
        if quantum {
            push(name, vec![(one.clone(), vec![QH(h.clone()), QH(g.clone())]), (one.neg(), vec![QH(add(h, g))])]);
        } else {
            push(
                name,
                vec![(one.clone(), vec![QH(h.clone())]), (one.clone(), vec![QH(g.clone())]), (one.neg(), vec![QH(add(h, g))])],
            );
        }
    }

    for k in 1..n {
        for h in &hs {
            let pairing = h[k - 1] - h[k];
            for (g, sign, label) in [(E(k), 1, "e"), (F(k), -1, "f")] {
                let name = format!("weight of {label}{k} under qh({h:?})");
                if quantum {
                    push(
                        name,
                        vec![
                            (one.clone(), vec![QH(h.clone()), g.clone(), QH(neg(h))]),
                            (q_pow(sign * pairing).neg(), vec![g.clone()]),
                        ],
                    );
                } else {
                    push(
                        name,
                        vec![
                            (one.clone(), vec![QH(h.clone()), g.clone()]),
                            (one.neg(), vec![g.clone(), QH(h.clone())]),
                            (int(-sign * pairing), vec![g.clone()]),
                        ],
                    );
                }
            }
        }
    }

    for k in 1..n {
        for l in 1..n {
            let mut terms = vec![(one.clone(), vec![E(k), F(l)]), (one.neg(), vec![F(l), E(k)])];
            if k == l {
                let a = simple_root(n, k);
                if quantum {
                    let d = q_pow(1).sub(&q_pow(-1)).inv().expect("q - 1/q is non-zero");
                    terms.push((d.neg(), vec![QH(a.clone())]));
                    terms.push((d, vec![QH(neg(&a))]));
                } else {
                    terms.push((one.neg(), vec![QH(a)]));
                }
            }
            push(format!("commutator e{k} f{l}"), terms);
        }
    }

    let serre = if quantum { q_pow(1).add(&q_pow(-1)) } else { int(2) };
    for i in 1..n {
        for j in 1..n {
            if i.abs_diff(j) != 1 {
                continue;
            }
            for (label, g) in [("e", E as fn(usize) -> Generator), ("f", F)] {
                push(
                    format!("serre {label}{i} {label}{j}"),
                    vec![
                        (one.clone(), vec![g(i), g(i), g(j)]),
                        (serre.neg(), vec![g(i), g(j), g(i)]),
                        (one.clone(), vec![g(j), g(i), g(i)]),
                    ],
                );
            }
        }
    }

    for i in 1..n {
        for j in i + 2..n {
            for (label, g) in [("e", E as fn(usize) -> Generator), ("f", F)] {
                push(
                    format!("distant {label}{i} {label}{j}"),
                    vec![(one.clone(), vec![g(i), g(j)]), (one.neg(), vec![g(j), g(i)])],
                );
            }
        }
    }
    out
}

/// Every relation instance annihilates every window basis vector.
pub fn check_defining_relations(spec: &ModuleSpec, bound: u32) -> CheckReport {
    let t = Instant::now();
    let mut rep = CheckReport::start("relations", spec.summary(), Some(bound), None);
    let module = Module::new(spec.clone());
    let instances = relation_instances(spec.n(), spec.system());
    let window = module.window(bound);
    rep.notes.push(format!("{} window vectors, {} relation instances", window.len(), instances.len()));
    for b in &window {
        let v = ModuleElement::basis(spec.system(), b.clone());
        for inst in &instances {
            match inst.residual(&module, &v) {
                Ok(r) if r.is_zero() => rep.checked += 1,
                Ok(r) => {
                    rep.fail(Some(b), inst.name.clone(), Some(r), None);
                    return rep.done(t);
                }
                Err(e) => {
                    rep.fail(Some(b), inst.name.clone(), None, Some(e.to_string()));
                    return rep.done(t);
                }
            }
        }
    }
    rep.done(t)
}

fn generators(n: usize) -> Vec<Generator> {
    let mut g = Vec::new();
    for k in 1..n {
        g.push(Generator::E(k));
        g.push(Generator::F(k));
    }
    for k in 1..=n {
        g.push(Generator::QEps(k));
    }
    g
}

/// The action computed from `z` and from `τ(z)` agree on normal vectors
/// and differ by a sign on derivative vectors.
pub fn check_compatibility(spec: &ModuleSpec, bound: u32) -> CheckReport {
    let t = Instant::now();
    let rep = CheckReport::start("compatibility", spec.summary(), Some(bound), None);
    let Some(sp) = spec.pair() else {
        return rep.skip("generic spec: every tableau has a single representative").done(t);
    };
    let mut rep = rep;
    for b in crate::action::window(spec, bound) {
        let tz = sp.tau(&b.z);
        for g in generators(spec.n()) {
            let outcome = (|| -> Result<Option<ModuleElement>> {
                let from_z = act_representative(&g, b.kind, &b.z, spec)?;
                let from_tz = act_representative(&g, b.kind, &tz, spec)?;
                let diff = match b.kind {
                    Kind::Normal => from_z.sub(&from_tz),
                    Kind::Derivative => from_z.add(&from_tz),
                };
                Ok(if diff.is_zero() { None } else { Some(diff) })
            })();
            let label = match b.kind {
                Kind::Normal => format!("{g} from z and tau(z) agree"),
                Kind::Derivative => format!("{g} from z and tau(z) are opposite"),
            };
            match outcome {
                Ok(None) => rep.checked += 1,
                Ok(Some(d)) => {
                    rep.fail(Some(&b), label, Some(d), None);
                    return rep.done(t);
                }
                Err(e) => {
                    rep.fail(Some(&b), label, None, Some(e.to_string()));
                    return rep.done(t);
                }
            }
        }
    }
    rep.done(t)
}

fn row_values(spec: &ModuleSpec, z: &[i32], m: usize) -> Vec<Rat> {
    (1..=m).map(|i| spec.value(z, Position::new(m, i))).collect()
}

/// Eigenvalue equations against the shuffle oracle, the nilpotent part on
/// derivative vectors, and block dimensions.
pub fn check_gamma(spec: &ModuleSpec, bound: u32) -> CheckReport {
    let t = Instant::now();
    let mut rep = CheckReport::start("gamma", spec.summary(), Some(bound), None);
    let sys = spec.system();
    let window = crate::action::window(spec, bound);
    let singular_row = spec.pair().map(|sp| sp.row);
    for b in &window {
        for m in 1..=spec.n() {
            let row = row_values(spec, &b.z, m);
            for k in 0..=m {
                let g = oracle::gamma_reference(sys, k, &row);
                let v = ModuleElement::basis(sys, b.clone());
                let res = (|| -> Result<Option<(String, ModuleElement)>> {
                    let once = central_shifted(m, k, &g, &v, spec)?;
                    match b.kind {
                        Kind::Normal => {
                            Ok((!once.is_zero()).then(|| (format!("c{m}{k} - gamma{m}{k} annihilates"), once)))
                        }
                        Kind::Derivative => {
                            let twice = central_shifted(m, k, &g, &once, spec)?;
                            if !twice.is_zero() {
                                return Ok(Some((format!("(c{m}{k} - gamma{m}{k})^2 annihilates"), twice)));
                            }
                            let nilpotent = singular_row == Some(m) && 1 <= k && k < m;
                            if once.is_zero() == nilpotent {
                                let what = if nilpotent { "is non-zero" } else { "annihilates" };
                                return Ok(Some((format!("c{m}{k} - gamma{m}{k} {what}"), once)));
                            }
                            Ok(None)
                        }
                    }
                })();
                match res {
                    Ok(None) => rep.checked += 1,
                    Ok(Some((label, r))) => {
                        rep.fail(Some(b), label, Some(r), None);
                        return rep.done(t);
                    }
                    Err(e) => {
                        rep.fail(Some(b), format!("c{m}{k}"), None, Some(e.to_string()));
                        return rep.done(t);
                    }
                }
            }
        }
    }

    let blocks = match block_report(spec, bound) {
        Ok(b) => b,
        Err(e) => {
            rep.fail(None, "block report", None, Some(e.to_string()));
            return rep.done(t);
        }
    };
    let mut dims: FxHashMap<usize, usize> = FxHashMap::default();
    for blk in &blocks {
        *dims.entry(blk.dimension()).or_default() += 1;
        let first = &blk.members[0];
        let expected = match spec.pair() {
            None => 1,
            Some(sp) if sp.is_fixed(&first.z) => 1,
            Some(_) => 2,
        };
        if blk.dimension() != expected || blk.max_jordan() > 2 {
            let members: Vec<String> = blk.members.iter().map(|m| m.to_string()).collect();
            rep.fail(
                Some(first),
                format!("block of dimension {expected} with Jordan cells of size at most 2"),
                None,
                Some(format!("block {} has members {} and Jordan sizes {:?}", blk.key, members.join(" "), blk.jordan)),
            );
            return rep.done(t);
        }
        rep.checked += 1;
    }
    let mut d: Vec<_> = dims.into_iter().collect();
    d.sort();
    rep.notes.push(format!("{} blocks, (dimension, count) = {:?}", blocks.len(), d));
    rep.done(t)
}

/// The module with `C = S` whose highest pattern has top row `top`.
pub fn finite_dimensional_spec(top: &[i64], sys: NumberSystem) -> Result<ModuleSpec> {
    let n = top.len();
    if n == 0 || top.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidSpec(format!("top row {top:?} is not dominant")));
    }
    let rows: Vec<Vec<Rat>> =
        (1..=n).rev().map(|k| (1..=k).map(|i| Rat::from_int(top[i - 1] - i as i64)).collect()).collect();
    let t = Tableau::from_rows(&rows)?;
    ModuleSpec::new(&t, RelationSet::standard(n), sys)
}

/// Basis size against pattern enumeration and the Weyl product, closure of
/// the action, and the highest pattern being killed by every `e_k`.
pub fn check_finite_dimensional(top: &[i64], sys: NumberSystem, mutation: Option<Mutation>) -> CheckReport {
    let t = Instant::now();
    let spec = match finite_dimensional_spec(top, sys) {
        Ok(s) => s.with_mutation(mutation),
        Err(e) => {
            let mut rep = CheckReport::start("findim", format!("top row {top:?}"), None, None);
            rep.fail(None, "construct module", None, Some(e.to_string()));
            return rep.done(t);
        }
    };
    let bound = (top[0] - top[top.len() - 1]) as u32;
    let mut rep = CheckReport::start("findim", spec.summary(), Some(bound), None);
    let basis = crate::action::window(&spec, bound);
    let patterns = oracle::count_patterns(top);
    let weyl = oracle::weyl_dimension(top);
    rep.notes.push(format!("basis {} patterns {} weyl {}", basis.len(), patterns, weyl));
    if basis.len() as u64 != patterns || Rat::from_int(patterns as i64) != weyl {
        rep.fail(None, "basis size equals the Weyl dimension", None, Some(rep.notes[0].clone()));
        return rep.done(t);
    }
    rep.checked += 1;
    let n = spec.n();
    for b in &basis {
        for g in generators(n) {
            match act(&g, b, &spec) {
                Ok(v) => {
                    let escaped = v.support().find(|w| !spec.in_basis(&w.z)).cloned();
                    if let Some(out) = escaped {
                        let detail = format!("{g} on {b} reaches {out}");
                        rep.fail(Some(b), format!("{g} stays in the basis"), Some(v), Some(detail));
                        return rep.done(t);
                    }
                    if b.z.iter().all(|&s| s == 0) && matches!(g, Generator::E(_)) && !v.is_zero() {
                        rep.fail(Some(b), format!("{g} kills the highest pattern"), Some(v), None);
                        return rep.done(t);
                    }
                    rep.checked += 1;
                }
                Err(e) => {
                    rep.fail(Some(b), format!("{g} stays in the basis"), None, Some(e.to_string()));
                    return rep.done(t);
                }
            }
        }
    }
    rep.done(t)
}

/// Whether every relation-free difference between neighbouring rows is
/// non-integral, with `C` maximal for the base tableau.
pub fn irreducibility_predicate(spec: &ModuleSpec) -> bool {
    let t = spec.base_tableau();
    let c = spec.relations();
    if !is_maximal_for(&t, c) {
        return false;
    }
    let n = spec.n();
    for r in 2..=n {
        for s in 1..=r {
            for u in 1..r {
                let (p, q) = (Position::new(r, s), Position::new(r - 1, u));
                if c.supports(p) && c.supports(q) {
                    continue;
                }
                if (&t.entry(p) - &t.entry(q)).is_integer() {
                    return false;
                }
            }
        }
    }
    true
}

/// The exact irreducibility hypothesis together with strong connectivity of
/// the window's generator graph, the latter being evidence only.
pub fn irreducibility_evidence(spec: &ModuleSpec, bound: u32) -> CheckReport {
    let t = Instant::now();
    let mut rep = CheckReport::start("irreducible", spec.summary(), Some(bound), None);
    let predicate = irreducibility_predicate(spec);
    let window = crate::action::window(spec, bound);
    let mut graph = DiGraph::<(), ()>::new();
    let index: FxHashMap<BasisVector, _> = window.iter().map(|b| (b.clone(), graph.add_node(()))).collect();
    let mut closed = true;
    for b in &window {
        for k in 1..spec.n() {
            for g in [Generator::E(k), Generator::F(k)] {
                match act(&g, b, spec) {
                    Ok(v) => {
                        for w in v.support() {
                            match index.get(w) {
                                Some(&j) => {
                                    graph.update_edge(index[b], j, ());
                                }
                                None => closed = false,
                            }
                        }
                    }
                    Err(e) => {
                        rep.fail(Some(b), format!("{g} is defined"), None, Some(e.to_string()));
                        return rep.done(t);
                    }
                }
            }
        }
    }
    let inner = bound.saturating_sub(1) as i32;
    let interior: Vec<_> = window
        .iter()
        .filter(|b| closed || b.z.iter().all(|s| s.abs() <= inner))
        .map(|b| index[b])
        .collect();
    let sccs = tarjan_scc(&graph);
    let mut comp = vec![0usize; graph.node_count()];
    for (i, scc) in sccs.iter().enumerate() {
        for v in scc {
            comp[v.index()] = i;
        }
    }
    let connected = interior.windows(2).all(|w| comp[w[0].index()] == comp[w[1].index()]);
    rep.notes.push(format!("hypothesis {}", if predicate { "holds" } else { "fails" }));
    rep.notes.push(format!(
        "{} of {} vectors tested, {} window, connectivity {} (evidence only)",
        interior.len(),
        window.len(),
        if closed { "closed" } else { "open" },
        if connected { "holds" } else { "fails" }
    ));
    rep.checked = interior.len() as u64;
    if predicate && !connected {
        let b = window.iter().find(|b| index.get(*b).map(|i| comp[i.index()]) != interior.first().map(|i| comp[i.index()]));
        rep.fail(b, "hypothesis holds but the window graph is not strongly connected", None, None);
    }
    rep.done(t)
}

/// The pole-free identities and the pole-pair identities on seeded samples.
pub fn check_appendix(sys: NumberSystem, samples: usize, seed: u64) -> CheckReport {
    let t = Instant::now();
    let mut rep = CheckReport::start("appendix", format!("{} sampler, {samples} samples", sys.name()), None, Some(seed));
    let mut s = appendix::Sampler::new(sys, seed);
    let mut outcomes: Vec<appendix::Outcome> = Vec::new();
    let mut errors = Vec::new();
    for _ in 0..samples {
        match appendix::single_sample(&mut s) {
            Ok(o) => outcomes.extend(o),
            Err(e) => errors.push(e.to_string()),
        }
        for anchored in [false, true] {
            match appendix::PoleFamily::sample(&mut s, anchored).and_then(|p| p.check()) {
                Ok(o) => outcomes.extend(o),
                Err(e) => errors.push(e.to_string()),
            }
        }
    }
    let mut tally: Vec<(&str, usize, usize)> = Vec::new();
    for o in &outcomes {
        let i = match tally.iter().position(|c| c.0 == o.identity) {
            Some(i) => i,
            None => {
                tally.push((o.identity, 0, 0));
                tally.len() - 1
            }
        };
        if o.failure.is_none() {
            tally[i].1 += 1;
            rep.checked += 1;
        } else {
            tally[i].2 += 1;
        }
    }
    for (name, ok, bad) in &tally {
        rep.notes.push(format!("{name}: {ok} pass, {bad} fail"));
    }
    if let Some(e) = errors.first() {
        rep.fail(None, "sampling", None, Some(format!("{} errors, first: {e}", errors.len())));
    } else if let Some(o) = outcomes.iter().find(|o| o.failure.is_some()) {
        rep.fail(None, o.identity, None, o.failure.clone());
    }
    rep.done(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Relations,
    Compatibility,
    Appendix,
    Gamma,
    Findim,
    Irreducible,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "relations" => Suite::Relations,
            "compatibility" => Suite::Compatibility,
            "appendix" => Suite::Appendix,
            "gamma" => Suite::Gamma,
            "findim" => Suite::Findim,
            "irreducible" => Suite::Irreducible,
            "all" => Suite::All,
            _ => return Err(Error::InvalidSpec(format!("unknown suite {s:?}"))),
        })
    }
}

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_SAMPLES: usize = 100;

/// The integral top row `λ` when the module is the highest pattern of a
/// finite-dimensional module.
pub fn highest_weight(spec: &ModuleSpec) -> Option<Vec<i64>> {
    let n = spec.n();
    if spec.relations() != &RelationSet::standard(n) {
        return None;
    }
    let top: Vec<i64> = (1..=n)
        .map(|i| (&spec.base()[Position::new(n, i).index()] + &Rat::from_int(i as i64)).to_i64())
        .collect::<Option<_>>()?;
    let expected = finite_dimensional_spec(&top, spec.system()).ok()?;
    (expected.base() == spec.base()).then_some(top)
}

pub fn run_suite(spec: &ModuleSpec, suite: Suite, bound: u32, seed: u64) -> Vec<CheckReport> {
    let all = suite == Suite::All;
    let mut out = Vec::new();
    if all || suite == Suite::Relations {
        out.push(check_defining_relations(spec, bound));
    }
    if all || suite == Suite::Compatibility {
        out.push(check_compatibility(spec, bound));
    }
    if all || suite == Suite::Appendix {
        out.push(check_appendix(spec.system(), DEFAULT_SAMPLES, seed));
    }
    if all || suite == Suite::Gamma {
        out.push(check_gamma(spec, bound));
    }
    if all || suite == Suite::Findim {
        out.push(match highest_weight(spec) {
            Some(top) => check_finite_dimensional(&top, spec.system(), spec.mutation()),
            None => CheckReport::start("findim", spec.summary(), None, None)
                .skip("needs C = S and the highest pattern of an integral dominant top row"),
        });
    }
    if all || suite == Suite::Irreducible {
        out.push(irreducibility_evidence(spec, bound));
    }
    out
}
