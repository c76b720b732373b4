//! A deliberately naive admissibility check: components by union-find,
//! closures by Floyd-Warshall inside each component, and conditions (i) to
//! (iv) read off one by one. Shares nothing with the library except the
//! `Relation` and `Position` types.

use qgt_core::tableaux::{Position, Relation};

const NONE: u8 = 0;
const WEAK: u8 = 1;
const STRICT: u8 = 2;

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

fn key(p: Position) -> usize {
    p.row * 8 + p.col
}

/// The relation set split into its connected components.
pub fn components(rels: &[Relation]) -> Vec<Vec<Relation>> {
    let mut parent: Vec<usize> = (0..64).collect();
    for r in rels {
        let (a, b) = (find(&mut parent, key(r.lhs)), find(&mut parent, key(r.rhs)));
        parent[a] = b;
    }
    let mut groups: Vec<(usize, Vec<Relation>)> = Vec::new();
    for r in rels {
        let root = find(&mut parent, key(r.lhs));
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => g.1.push(*r),
            None => groups.push((root, vec![*r])),
        }
    }
    groups.into_iter().map(|g| g.1).collect()
}

fn indecomposable_admissible(n: usize, rels: &[Relation]) -> bool {
    let mut v: Vec<Position> = Vec::new();
    for r in rels {
        for p in [r.lhs, r.rhs] {
            if !v.contains(&p) {
                v.push(p);
            }
        }
    }
    let m = v.len();
    let at = |p: Position| v.iter().position(|&q| q == p).unwrap();
    let mut rel = vec![vec![NONE; m]; m];
    for r in rels {
        let (a, b) = (at(r.lhs), at(r.rhs));
        rel[a][b] = rel[a][b].max(if r.strict { STRICT } else { WEAK });
    }
    for k in 0..m {
        for a in 0..m {
            for b in 0..m {
                if rel[a][k] != NONE && rel[k][b] != NONE {
                    rel[a][b] = rel[a][b].max(rel[a][k]).max(rel[k][b]);
                }
            }
        }
    }
    for a in 0..m {
        for b in 0..m {
            let (p, r) = (v[a], v[b]);
            if p.row != r.row || p.col < r.col {
                continue;
            }
            // (i) and (ii)
            if rel[a][b] == STRICT || (p.row == n && rel[a][b] != NONE) {
                return false;
            }
        }
    }
    // (iii)
    for a in rels {
        for b in rels {
            let first = !a.strict && a.lhs.row == a.rhs.row + 1;
            let second = b.strict && b.lhs.row == a.rhs.row && b.rhs.row == a.lhs.row;
            if first && second && a.lhs.col < b.rhs.col && b.lhs.col < a.rhs.col {
                return false;
            }
        }
    }
    // (iv)
    let has = |lhs: (usize, usize), rhs: (usize, usize), strict: bool| {
        rels.contains(&Relation { lhs: Position::new(lhs.0, lhs.1), rhs: Position::new(rhs.0, rhs.1), strict })
    };
    for p in &v {
        for r in &v {
            if p.row != r.row || p.row >= n || p.col >= r.col {
                continue;
            }
            let (k, i, j) = (p.row, p.col, r.col);
            let mut ok = false;
            for s in 1..=n {
                for t in 1..=n {
                    let first = k >= 2
                        && has((k, i), (k + 1, s), true)
                        && has((k + 1, s), (k, j), false)
                        && has((k, i), (k - 1, t), false)
                        && has((k - 1, t), (k, j), true);
                    let second = s < t && has((k, i), (k + 1, s), true) && has((k + 1, t), (k, j), false);
                    ok |= first || second;
                }
            }
            if !ok {
                return false;
            }
        }
    }
    true
}

pub fn admissible(n: usize, rels: &[Relation]) -> bool {
    components(rels).iter().all(|c| indecomposable_admissible(n, c))
}
