//! The Gelfand-Tsetlin subalgebra: eigenvalues `γ_mk`, their action on
//! normal and derivative tableaux, character keys and Jordan blocks.

use std::collections::BTreeMap;
use std::fmt;

use crate::action::{evaluate_terms, BasisVector, Kind, ModuleElement, ModuleSpec, Mutation};
use crate::error::{Error, Result};
use crate::exactalg::{
    q_pochhammer_factorial, EntryDiff, Exps, FieldElement, LaurentPoly, NumberSystem, QExp, Rat,
};
use crate::tableaux::{Position, Tableau};

/// `γ_mk` of a row given by its (possibly symbolic) entries.
///
/// Quantum: `(k)!(m-k)! q^{k(k+1)+m(m-3)/2} Σ_S q^{Σ_S l - Σ_{S^c} l}` over
/// `k`-subsets `S`, the factorials taken in `q^{-2}`. Classical:
/// `½ Σ_S (Σ_S l - Σ_{S^c} l)²`.
pub fn gamma_row(sys: NumberSystem, k: usize, row: &[EntryDiff]) -> Result<FieldElement> {
    let m = row.len();
    if k > m {
        return Err(Error::InvalidSpec(format!("gamma index k = {k} exceeds m = {m}")));
    }
    let signed: Vec<EntryDiff> = subsets(m, k)
        .map(|s| {
            (0..m).fold(EntryDiff::constant(Rat::zero()), |acc, i| {
                if s >> i & 1 == 1 {
                    acc.add(&row[i])
                } else {
                    acc.sub(&row[i])
                }
            })
        })
        .collect();
    match sys {
        NumberSystem::Quantum => {
            let mut terms: Vec<(Exps, Rat)> = signed.iter().map(|u| (u.exps(), Rat::one())).collect();
            terms.sort();
            let sum = FieldElement::from_poly(sys, LaurentPoly::from_terms(terms));
            let (k, m) = (k as i64, m as i64);
            let e = QExp::from_integer(k * (k + 1) + m * (m - 3) / 2);
            Ok(q_pochhammer_factorial(sys, k)?
                .mul(&q_pochhammer_factorial(sys, m - k)?)
                .mul(&FieldElement::q_power(e))
                .mul(&sum))
        }
        NumberSystem::Classical => {
            let mut acc = FieldElement::zero(sys);
            for u in &signed {
                let l = FieldElement::from_poly(sys, u.linear_poly());
                acc = acc.add(&l.mul(&l));
            }
            Ok(acc.scale(&Rat::new(1, 2)))
        }
    }
}

fn subsets(m: usize, k: usize) -> impl Iterator<Item = u32> {
    (0u32..(1 << m)).filter(move |s| s.count_ones() as usize == k)
}

/// `γ_mk(L)` for a concrete tableau.
pub fn gamma(sys: NumberSystem, m: usize, k: usize, t: &Tableau) -> Result<FieldElement> {
    if m == 0 || m > t.n() {
        if m == 0 && k == 0 {
            return gamma_row(sys, 0, &[]);
        }
        return Err(Error::InvalidSpec(format!("gamma row {m} out of range")));
    }
    let row: Vec<EntryDiff> = (1..=m).map(|i| EntryDiff::constant(t.entry(Position::new(m, i)))).collect();
    gamma_row(sys, k, &row)
}

/// `γ_mk(v + z)` with `x`, `y` in the singular positions.
pub fn gamma_symbolic(spec: &ModuleSpec, m: usize, k: usize, z: &[i32]) -> Result<FieldElement> {
    let row: Vec<EntryDiff> = (1..=m).map(|i| spec.entry(z, Position::new(m, i))).collect();
    let g = gamma_row(spec.system(), k, &row)?;
    Ok(match spec.mutation() {
        Some(Mutation::GammaPrefactor) => match spec.system() {
            NumberSystem::Quantum => g.mul(&FieldElement::q_power(QExp::from_integer(1))),
            NumberSystem::Classical => g.scale(&Rat::from_int(2)),
        },
        _ => g,
    })
}

/// `γ_mk(v̄ + z)`, free of `x`, `y`.
pub fn gamma_at(spec: &ModuleSpec, m: usize, k: usize, z: &[i32]) -> Result<FieldElement> {
    let g = gamma_symbolic(spec, m, k, z)?;
    match spec.singular_value() {
        Some(c) if g.has_xy() => g.evaluate_at_singular(&c),
        _ => Ok(g),
    }
}

/// `c_mk` on a basis vector: `𝒟^v̄([x - y] γ T(v + z))` on normal vectors,
/// `𝒟^v̄(γ T(v + z))` on derivative ones.
pub fn act_central(m: usize, k: usize, b: &BasisVector, spec: &ModuleSpec) -> Result<ModuleElement> {
    if m == 0 || m > spec.n() || k > m {
        return Err(Error::InvalidSpec(format!("central element c_{m}{k} is not defined for n = {}", spec.n())));
    }
    let g = gamma_symbolic(spec, m, k, &b.z)?;
    evaluate_terms(spec, b.kind, &b.z, vec![(g, b.z.clone())], &format!("c{m}{k}"))
}

/// Labels the generalized eigenspace of a basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterKey(pub Vec<(LaurentPoly, LaurentPoly)>);

impl fmt::Display for CharacterKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(n, d)| if d.is_one() { n.to_string() } else { format!("({n})/({d})") })
            .collect();
        write!(f, "<{}>", parts.join("; "))
    }
}

/// Evaluated `γ_mk(v̄ + z)` for `1 ≤ k ≤ m ≤ n`; the classical key also
/// carries the power sums of every row, since the quadratic `γ` alone does
/// not separate rows.
pub fn character_key(b: &BasisVector, spec: &ModuleSpec) -> Result<CharacterKey> {
    let mut out = Vec::new();
    for m in 1..=spec.n() {
        for k in 1..=m {
            out.push(gamma_at(spec, m, k, &b.z)?.canonical_parts());
        }
        if spec.system() == NumberSystem::Classical {
            let row: Vec<Rat> = (1..=m).map(|i| spec.value(&b.z, Position::new(m, i))).collect();
            for p in 1..=m as i32 {
                let s = row.iter().fold(Rat::zero(), |acc, v| &acc + &v.pow(p));
                out.push((LaurentPoly::constant(s), LaurentPoly::one()));
            }
        }
    }
    Ok(CharacterKey(out))
}

#[derive(Clone, Debug)]
pub struct Block {
    pub key: CharacterKey,
    pub members: Vec<BasisVector>,
    /// `(m, k, size)`: the least power of `c_mk - γ_mk` killing the block;
    /// 3 stands for "more than 2".
    pub jordan: Vec<(usize, usize, usize)>,
}

impl Block {
    pub fn dimension(&self) -> usize {
        self.members.len()
    }

    pub fn max_jordan(&self) -> usize {
        self.jordan.iter().map(|j| j.2).max().unwrap_or(1)
    }
}

/// `(c_mk - γ) v`.
pub fn central_shifted(m: usize, k: usize, gamma: &FieldElement, v: &ModuleElement, spec: &ModuleSpec) -> Result<ModuleElement> {
    let mut out = ModuleElement::zero(spec.system());
    for (b, c) in v.terms() {
        out.add_scaled(&act_central(m, k, b, spec)?, c);
    }
    Ok(out.sub(&v.scale(gamma)))
}

/// Groups the window basis by character key and measures Jordan sizes.
pub fn block_report(spec: &ModuleSpec, bound: u32) -> Result<Vec<Block>> {
    let mut groups: BTreeMap<CharacterKey, Vec<BasisVector>> = BTreeMap::new();
    for b in crate::action::window(spec, bound) {
        groups.entry(character_key(&b, spec)?).or_default().push(b);
    }
    let mut out = Vec::new();
    for (key, members) in groups {
        let mut jordan = Vec::new();
        let z = &members[0].z;
        for m in 1..=spec.n() {
            for k in 1..=m {
                let g = gamma_at(spec, m, k, z)?;
                let mut size = 1;
                for b in &members {
                    let v = ModuleElement::basis(spec.system(), b.clone());
                    let once = central_shifted(m, k, &g, &v, spec)?;
                    if once.is_zero() {
                        continue;
                    }
                    let twice = central_shifted(m, k, &g, &once, spec)?;
                    size = size.max(if twice.is_zero() { 2 } else { 3 });
                }
                jordan.push((m, k, size));
            }
        }
        out.push(Block { key, members, jordan });
    }
    Ok(out)
}

pub fn kind_label(k: Kind) -> &'static str {
    match k {
        Kind::Normal => "T",
        Kind::Derivative => "DT",
    }
}
