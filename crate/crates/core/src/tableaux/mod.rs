//! Gelfand-Tsetlin tableaux over a relation set: realization tests,
//! maximal relation sets, singular-pair detection and window enumeration.

mod relations;

use std::fmt;

pub use relations::{
    num_free_positions, num_positions, universe, AdmissibilityReport, Condition, Position, Relation,
    RelationSet, Succ, Violation,
};

use crate::error::{Error, Result};
use crate::exactalg::Rat;

/// Shift vector over rows `1..n-1`, indexed by [`Position::index`].
pub type Shift = Vec<i32>;

/// `T(v̄ + z)`: rational base entries on every position and an integer
/// shift on the non-top rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tableau {
    n: usize,
    base: Vec<Rat>,
    shift: Shift,
}

impl Tableau {
    pub fn new(n: usize, base: Vec<Rat>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("height must be positive".into()));
        }
        if base.len() != num_positions(n) {
            return Err(Error::InvalidSpec(format!(
                "expected {} base entries for n = {n}, got {}",
                num_positions(n),
                base.len()
            )));
        }
        Ok(Tableau { n, base, shift: vec![0; num_free_positions(n)] })
    }

    /// Builds from rows listed top (row n) to bottom (row 1).
    pub fn from_rows(rows: &[Vec<Rat>]) -> Result<Self> {
        let n = rows.len();
        let mut base = vec![Rat::zero(); num_positions(n)];
        for (t, row) in rows.iter().enumerate() {
            let r = n - t;
            if row.len() != r {
                return Err(Error::InvalidSpec(format!("row {r} needs {r} entries, got {}", row.len())));
            }
            for (c, v) in row.iter().enumerate() {
                base[Position::new(r, c + 1).index()] = v.clone();
            }
        }
        Tableau::new(n, base)
    }

    pub fn with_shift(&self, shift: Shift) -> Self {
        assert_eq!(shift.len(), num_free_positions(self.n));
        Tableau { n: self.n, base: self.base.clone(), shift }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &[Rat] {
        &self.base
    }

    pub fn shift(&self) -> &[i32] {
        &self.shift
    }

    pub fn shift_at(&self, p: Position) -> i32 {
        if p.row == self.n {
            0
        } else {
            self.shift[p.index()]
        }
    }

    pub fn entry(&self, p: Position) -> Rat {
        &self.base[p.index()] + &Rat::from(self.shift_at(p))
    }

    pub fn holds(&self, r: &Relation) -> bool {
        let d = &self.entry(r.lhs) - &self.entry(r.rhs);
        d.is_integer() && if r.strict { d.signum() > 0 } else { d.signum() >= 0 }
    }

    /// Same-row pairs `(k, i < j)` whose difference is an integer.
    fn integral_pairs(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for k in 1..=self.n {
            for i in 1..=k {
                for j in i + 1..=k {
                    let d = &self.entry(Position::new(k, i)) - &self.entry(Position::new(k, j));
                    if d.is_integer() {
                        out.push((k, i, j));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in (1..=self.n).rev() {
            let row: Vec<String> = (1..=r).map(|c| self.entry(Position::new(r, c)).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// The distinguished same-row pair `(row, i < j)` of a singular tableau.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SingularPair {
    pub row: usize,
    pub i: usize,
    pub j: usize,
}

impl SingularPair {
    pub fn first(&self) -> Position {
        Position::new(self.row, self.i)
    }

    pub fn second(&self) -> Position {
        Position::new(self.row, self.j)
    }

    /// `τ` on shift vectors: swaps the two singular coordinates.
    pub fn tau(&self, z: &[i32]) -> Shift {
        let mut w = z.to_vec();
        w.swap(self.first().index(), self.second().index());
        w
    }

    pub fn is_fixed(&self, z: &[i32]) -> bool {
        z[self.first().index()] == z[self.second().index()]
    }
}

impl fmt::Display for SingularPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {} cols {} {}", self.row, self.i, self.j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Singularity {
    Generic,
    Pair(SingularPair),
}

impl Singularity {
    pub fn pair(&self) -> Option<SingularPair> {
        match self {
            Singularity::Generic => None,
            Singularity::Pair(p) => Some(*p),
        }
    }
}

struct Classified {
    relations_hold: bool,
    /// Integral same-row pairs outside the support, rows below n.
    outside: Vec<SingularPair>,
    /// Integral same-row pairs that are neither in one component nor
    /// candidates for a singular pair.
    stray: Vec<(usize, usize, usize)>,
}

fn classify(t: &Tableau, c: &RelationSet) -> Classified {
    let relations_hold = c.relations().iter().all(|r| t.holds(r));
    let mut outside = Vec::new();
    let mut stray = Vec::new();
    for (k, i, j) in t.integral_pairs() {
        let (a, b) = (Position::new(k, i), Position::new(k, j));
        match (c.component_of(a), c.component_of(b)) {
            (Some(x), Some(y)) if x == y => {}
            (None, None) if k < t.n => outside.push(SingularPair { row: k, i, j }),
            _ => stray.push((k, i, j)),
        }
    }
    Classified { relations_hold, outside, stray }
}

/// Whether `T` realizes `C`: every relation holds integrally and integral
/// same-row differences stay inside a single component.
pub fn satisfies(t: &Tableau, c: &RelationSet) -> bool {
    let cl = classify(t, c);
    cl.relations_hold && cl.outside.is_empty() && cl.stray.is_empty()
}

/// Like [`satisfies`], but tolerating integral pairs outside the support.
pub fn satisfies_singular(t: &Tableau, c: &RelationSet) -> bool {
    let cl = classify(t, c);
    cl.relations_hold && cl.stray.is_empty()
}

/// Every relation of the universe that `T` satisfies.
pub fn maximal_relation_set(t: &Tableau) -> RelationSet {
    let rels = universe(t.n).into_iter().filter(|r| t.holds(r)).collect();
    RelationSet::new(t.n, rels).expect("universe relations are valid")
}

/// Whether `C` is maximal for `T` in the sense that `C` implies every
/// relation of the universe satisfied by `T`.
pub fn is_maximal_for(t: &Tableau, c: &RelationSet) -> bool {
    satisfies_singular(t, c) && c.implies(&maximal_relation_set(t))
}

pub fn detect_singular_pair(t: &Tableau, c: &RelationSet) -> Result<Singularity> {
    let cl = classify(t, c);
    if !cl.relations_hold {
        return Err(Error::NonRealizable(format!("tableau violates a relation of {c}")));
    }
    if let Some((k, i, j)) = cl.stray.first() {
        return Err(Error::NonRealizable(format!(
            "integral difference between ({k},{i}) and ({k},{j}) crosses components"
        )));
    }
    match cl.outside.as_slice() {
        [] => Ok(Singularity::Generic),
        [p] => Ok(Singularity::Pair(*p)),
        ps => Err(Error::MultiplySingular(
            ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "),
        )),
    }
}

/// Makes the two singular base entries equal; the difference is an integer
/// and moves into the orbit's shift coordinates.
pub fn normalize_singular(base: &mut [Rat], sp: &SingularPair) {
    base[sp.second().index()] = base[sp.first().index()].clone();
}

/// Compiled membership test for the orbit `{T(v̄ + z)}` restricted to `C`.
#[derive(Clone, Debug)]
pub struct Membership {
    /// `(lhs shift index, rhs shift index, base difference, strict)`;
    /// `None` base difference means the relation can never hold.
    checks: Vec<(Option<usize>, Option<usize>, Option<i64>, bool)>,
}

impl Membership {
    pub fn new(c: &RelationSet, base: &[Rat]) -> Self {
        let n = c.n();
        let idx = |p: Position| if p.row == n { None } else { Some(p.index()) };
        let checks = c
            .relations()
            .iter()
            .map(|r| {
                let d = &base[r.lhs.index()] - &base[r.rhs.index()];
                let d = if d.is_integer() { d.to_i64() } else { None };
                (idx(r.lhs), idx(r.rhs), d, r.strict)
            })
            .collect();
        Membership { checks }
    }

    pub fn contains(&self, z: &[i32]) -> bool {
        self.checks.iter().all(|&(a, b, d, strict)| match d {
            None => false,
            Some(d) => {
                let v = d + a.map_or(0, |i| z[i] as i64) - b.map_or(0, |i| z[i] as i64);
                if strict {
                    v > 0
                } else {
                    v >= 0
                }
            }
        })
    }
}

/// Membership of `T(v̄ + z)` in `B_C(T(v̄))`; the singular positions are
/// never constrained, so only concrete entries are consulted.
pub fn in_basis(t: &Tableau, c: &RelationSet, _sp: &Singularity) -> bool {
    Membership::new(c, &t.base).contains(&t.shift)
}

/// All shifts with `‖z‖∞ ≤ B` inside the basis, in lexicographic order.
pub fn enumerate_window(c: &RelationSet, t: &Tableau, bound: u32) -> Vec<Shift> {
    let m = Membership::new(c, &t.base);
    let dim = num_free_positions(t.n);
    let b = bound as i32;
    let mut out = Vec::new();
    let mut z = vec![-b; dim];
    loop {
        if m.contains(&z) {
            out.push(z.clone());
        }
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if z[i] < b {
                z[i] += 1;
                break;
            }
            z[i] = -b;
        }
    }
}

/// Every admissible subset of the relation universe, in subset order.
pub fn enumerate_admissible(n: usize) -> Result<Vec<RelationSet>> {
    if n > 3 {
        return Err(Error::SizeLimit(format!("admissible enumeration supports n <= 3, got {n}")));
    }
    if n == 0 {
        return Err(Error::InvalidSpec("height must be positive".into()));
    }
    let u = universe(n);
    let mut out = Vec::new();
    for mask in 0u64..(1 << u.len()) {
        let rels = (0..u.len()).filter(|b| mask >> b & 1 == 1).map(|b| u[b]).collect();
        let c = RelationSet::new(n, rels)?;
        if c.is_admissible().admissible {
            out.push(c);
        }
    }
    Ok(out)
}
