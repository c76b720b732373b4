//! Positions, the relation universe and relation sets with cached closures.

use std::fmt;

use crate::error::{Error, Result};

/// A cell `(row, col)` of a height-`n` tableau, `1 ≤ col ≤ row ≤ n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub fn new(row: usize, col: usize) -> Self {
        Position { row, col }
    }

    /// Row-major index counting from row 1.
    pub fn index(self) -> usize {
        self.row * (self.row - 1) / 2 + self.col - 1
    }

    pub fn from_index(idx: usize) -> Self {
        let mut row = 1;
        while row * (row + 1) / 2 <= idx {
            row += 1;
        }
        Position { row, col: idx - row * (row - 1) / 2 + 1 }
    }

    pub fn valid(self, n: usize) -> bool {
        self.row >= 1 && self.row <= n && self.col >= 1 && self.col <= self.row
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

pub fn num_positions(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Number of shifted positions (rows `1..n-1`).
pub fn num_free_positions(n: usize) -> usize {
    n * (n - 1) / 2
}

/// `lhs ≥ rhs` or `lhs > rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    pub lhs: Position,
    pub rhs: Position,
    pub strict: bool,
}

impl Relation {
    pub fn weak(lhs: Position, rhs: Position) -> Self {
        Relation { lhs, rhs, strict: false }
    }

    pub fn strict(lhs: Position, rhs: Position) -> Self {
        Relation { lhs, rhs, strict: true }
    }

    /// Whether the relation belongs to the universe for height `n`.
    pub fn in_universe(&self, n: usize) -> bool {
        let (a, b) = (self.lhs, self.rhs);
        if !a.valid(n) || !b.valid(n) {
            return false;
        }
        if self.strict {
            a.row + 1 == b.row
        } else {
            a.row == b.row + 1 || (a.row == n && b.row == n && a.col != b.col)
        }
    }

    pub fn is_top_row(&self) -> bool {
        self.lhs.row == self.rhs.row
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.strict { ">" } else { ">=" };
        write!(f, "[{},{}] {op} [{},{}]", self.lhs.row, self.lhs.col, self.rhs.row, self.rhs.col)
    }
}

/// All relations for height `n`: first `(i,j) ≥ (i-1,j')`, then
/// `(i-1,j') > (i,j)`, then top-row `(n,i) ≥ (n,j)`.
pub fn universe(n: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for i in 2..=n {
        for j in 1..=i {
            for jp in 1..i {
                out.push(Relation::weak(Position::new(i, j), Position::new(i - 1, jp)));
            }
        }
    }
    for i in 2..=n {
        for j in 1..=i {
            for jp in 1..i {
                out.push(Relation::strict(Position::new(i - 1, jp), Position::new(i, j)));
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push(Relation::weak(Position::new(n, i), Position::new(n, j)));
            }
        }
    }
    out
}

/// Outcome of a closure query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Succ {
    None,
    Weak,
    Strict,
}

/// A subset of the relation universe with its components and closures.
#[derive(Clone, Debug)]
pub struct RelationSet {
    n: usize,
    relations: Vec<Relation>,
    /// Component label per position (positions outside the support: None).
    comp_of: Vec<Option<usize>>,
    /// Relation indices per component.
    components: Vec<Vec<usize>>,
    /// `reach[p]` has bit `r` iff `p ≽ r` (chain of at least one step).
    reach: Vec<u64>,
    /// `sreach[p]` has bit `r` iff `p ≻ r`.
    sreach: Vec<u64>,
}

impl PartialEq for RelationSet {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.relations == o.relations
    }
}

impl Eq for RelationSet {}

impl RelationSet {
    pub fn new(n: usize, mut relations: Vec<Relation>) -> Result<Self> {
        if n == 0 || num_positions(n) > 64 {
            return Err(Error::InvalidSpec(format!("unsupported height {n}")));
        }
        for r in &relations {
            if !r.in_universe(n) {
                return Err(Error::InvalidSpec(format!("relation {r} is not allowed for n = {n}")));
            }
        }
        relations.sort();
        relations.dedup();
        let np = num_positions(n);
        let mut parent: Vec<usize> = (0..np).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let mut adj = vec![0u64; np];
        let mut used = vec![false; np];
        for r in &relations {
            let (a, b) = (r.lhs.index(), r.rhs.index());
            adj[a] |= 1 << b;
            used[a] = true;
            used[b] = true;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let mut label = vec![usize::MAX; np];
        let mut comp_of = vec![None; np];
        let mut count = 0;
        for p in 0..np {
            if used[p] {
                let root = find(&mut parent, p);
                if label[root] == usize::MAX {
                    label[root] = count;
                    count += 1;
                }
                comp_of[p] = Some(label[root]);
            }
        }
        let mut components = vec![Vec::new(); count];
        for (i, r) in relations.iter().enumerate() {
            components[comp_of[r.lhs.index()].unwrap()].push(i);
        }
        let mut reach = adj.clone();
        for k in 0..np {
            for i in 0..np {
                if reach[i] >> k & 1 == 1 {
                    reach[i] |= reach[k];
                }
            }
        }
        let refl: Vec<u64> = (0..np).map(|p| reach[p] | 1 << p).collect();
        let mut sreach = vec![0u64; np];
        for p in 0..np {
            for r in relations.iter().filter(|r| r.strict) {
                if refl[p] >> r.lhs.index() & 1 == 1 {
                    sreach[p] |= refl[r.rhs.index()];
                }
            }
        }
        Ok(RelationSet { n, relations, comp_of, components, reach, sreach })
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, Vec::new()).expect("empty set is valid")
    }

    /// `{(i+1,j) ≥ (i,j) > (i+1,j+1)}`, the finite-dimensional pattern set.
    pub fn standard(n: usize) -> Self {
        let mut rels = Vec::new();
        for i in 1..n {
            for j in 1..=i {
                rels.push(Relation::weak(Position::new(i + 1, j), Position::new(i, j)));
                rels.push(Relation::strict(Position::new(i, j), Position::new(i + 1, j + 1)));
            }
        }
        Self::new(n, rels).expect("standard set is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn contains(&self, r: &Relation) -> bool {
        self.relations.binary_search(r).is_ok()
    }

    /// Whether `p` is in the support 𝔙(C).
    pub fn supports(&self, p: Position) -> bool {
        self.comp_of[p.index()].is_some()
    }

    pub fn component_of(&self, p: Position) -> Option<usize> {
        self.comp_of[p.index()]
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn component_relations(&self, c: usize) -> impl Iterator<Item = &Relation> {
        self.components[c].iter().map(move |&i| &self.relations[i])
    }

    /// Positions of component `c`, sorted.
    pub fn component_positions(&self, c: usize) -> Vec<Position> {
        (0..num_positions(self.n))
            .filter(|&p| self.comp_of[p] == Some(c))
            .map(Position::from_index)
            .collect()
    }

    pub fn succ_relation(&self, p: Position, r: Position) -> Succ {
        let (pi, ri) = (p.index(), r.index());
        if self.sreach[pi] >> ri & 1 == 1 {
            Succ::Strict
        } else if self.reach[pi] >> ri & 1 == 1 {
            Succ::Weak
        } else {
            Succ::None
        }
    }

    /// Whether every `≽`/`≻` of `other` also holds in `self`.
    pub fn implies(&self, other: &RelationSet) -> bool {
        let np = num_positions(self.n);
        (0..np).all(|p| {
            other.reach[p] & !self.reach[p] == 0 && other.sreach[p] & !self.sreach[p] == 0
        })
    }

    pub fn is_admissible(&self) -> AdmissibilityReport {
        check_admissible(self)
    }
}

impl fmt::Display for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.relations.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, r) in self.relations.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// same-row `≻` against column order
    Order,
    /// top-row `≽` against column order
    TopOrder,
    /// a cross
    Cross,
    /// an unbridged same-row pair
    Bridge,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Order => "(i) strict same-row order",
            Condition::TopOrder => "(ii) top-row order",
            Condition::Cross => "(iii) cross",
            Condition::Bridge => "(iv) bridging",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub component: usize,
    pub witness: Vec<Position>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {} violated in component {} at", self.condition, self.component + 1)?;
        for p in &self.witness {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub violations: Vec<Violation>,
}

fn check_admissible(c: &RelationSet) -> AdmissibilityReport {
    let n = c.n;
    let mut violations = Vec::new();
    for comp in 0..c.num_components() {
        let pos = c.component_positions(comp);
        for &p in &pos {
            for &r in &pos {
                if p.row != r.row {
                    continue;
                }
                let s = c.succ_relation(p, r);
                if s == Succ::Strict && p.col >= r.col {
                    violations.push(Violation { condition: Condition::Order, component: comp, witness: vec![p, r] });
                }
                if p.row == n && s != Succ::None && p.col >= r.col {
                    violations.push(Violation { condition: Condition::TopOrder, component: comp, witness: vec![p, r] });
                }
            }
        }
        let rels: Vec<&Relation> = c.component_relations(comp).collect();
        for a in &rels {
            // (k,i) ≥ (k-1,t)
            if a.strict || a.is_top_row() {
                continue;
            }
            for b in &rels {
                // (k-1,s) > (k,j)
                if !b.strict || b.lhs.row != a.rhs.row || b.rhs.row != a.lhs.row {
                    continue;
                }
                let (i, t, s, j) = (a.lhs.col, a.rhs.col, b.lhs.col, b.rhs.col);
                if i < j && s < t {
                    violations.push(Violation {
                        condition: Condition::Cross,
                        component: comp,
                        witness: vec![a.lhs, a.rhs, b.lhs, b.rhs],
                    });
                }
            }
        }
        for &p in &pos {
            for &r in &pos {
                if p.row != r.row || p.row >= n || p.col >= r.col {
                    continue;
                }
                if !bridged(c, p.row, p.col, r.col) {
                    violations.push(Violation { condition: Condition::Bridge, component: comp, witness: vec![p, r] });
                }
            }
        }
    }
    AdmissibilityReport { admissible: violations.is_empty(), violations }
}

fn bridged(c: &RelationSet, k: usize, i: usize, j: usize) -> bool {
    let has = |r: Relation| c.contains(&r);
    let p = |row, col| Position::new(row, col);
    for s in 1..=k + 1 {
        if !has(Relation::strict(p(k, i), p(k + 1, s))) {
            continue;
        }
        if has(Relation::weak(p(k + 1, s), p(k, j))) && k >= 2 {
            for t in 1..k {
                if has(Relation::weak(p(k, i), p(k - 1, t))) && has(Relation::strict(p(k - 1, t), p(k, j))) {
                    return true;
                }
            }
        }
        for t in s + 1..=k + 1 {
            if has(Relation::weak(p(k + 1, t), p(k, j))) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: usize, c: usize) -> Position {
        Position::new(r, c)
    }

    #[test]
    fn universe_sizes() {
        assert_eq!(universe(2).len(), 6);
        assert_eq!(universe(3).len(), 22);
        assert_eq!(universe(4).len(), 52);
        assert!(universe(4).iter().all(|r| r.in_universe(4)));
    }

    #[test]
    fn position_indexing_round_trips() {
        for i in 0..num_positions(5) {
            assert_eq!(Position::from_index(i).index(), i);
        }
    }

    #[test]
    fn closure_strictness() {
        let c = RelationSet::new(2, vec![Relation::weak(p(2, 1), p(1, 1)), Relation::strict(p(1, 1), p(2, 2))]).unwrap();
        assert_eq!(c.succ_relation(p(2, 1), p(2, 2)), Succ::Strict);
        assert_eq!(c.succ_relation(p(2, 2), p(2, 1)), Succ::None);
        let e = RelationSet::empty(3);
        assert_eq!(e.succ_relation(p(2, 1), p(1, 1)), Succ::None);
        let w = RelationSet::new(3, vec![Relation::weak(p(3, 1), p(2, 1)), Relation::weak(p(2, 1), p(1, 1))]).unwrap();
        assert_eq!(w.succ_relation(p(3, 1), p(1, 1)), Succ::Weak);
    }

    #[test]
    fn standard_and_empty_are_admissible() {
        for n in 2..=5 {
            assert!(RelationSet::standard(n).is_admissible().admissible, "n={n}");
            assert!(RelationSet::empty(n).is_admissible().admissible);
            assert_eq!(RelationSet::standard(n).num_components(), 1);
        }
    }

    #[test]
    fn cross_is_rejected() {
        let c = RelationSet::new(2, vec![Relation::weak(p(2, 1), p(1, 1)), Relation::strict(p(1, 1), p(2, 2))]).unwrap();
        assert!(c.is_admissible().admissible);
        let split = RelationSet::new(3, vec![Relation::weak(p(3, 1), p(2, 2)), Relation::strict(p(2, 1), p(3, 2))]).unwrap();
        assert_eq!(split.num_components(), 2);
        assert!(split.is_admissible().admissible);
        let x = RelationSet::new(
            3,
            vec![
                Relation::weak(p(3, 1), p(2, 2)),
                Relation::strict(p(2, 1), p(3, 2)),
                Relation::strict(p(2, 2), p(3, 2)),
            ],
        )
        .unwrap();
        let rep = x.is_admissible();
        assert!(!rep.admissible);
        assert!(rep.violations.iter().any(|v| v.condition == Condition::Cross));
    }

    #[test]
    fn foreign_relation_rejected() {
        assert!(RelationSet::new(3, vec![Relation::weak(p(3, 1), p(1, 1))]).is_err());
        assert!(RelationSet::new(3, vec![Relation::weak(p(2, 1), p(2, 2))]).is_err());
    }
}
