use std::collections::BTreeMap;
use std::fmt;

use super::BasisVector;
use crate::exactalg::{FieldElement, NumberSystem};

/// Finite linear combination of basis vectors; zero coefficients are never
/// stored.
#[derive(Clone, Debug)]
pub struct ModuleElement {
    system: NumberSystem,
    terms: BTreeMap<BasisVector, FieldElement>,
}

impl ModuleElement {
    pub fn zero(system: NumberSystem) -> Self {
        ModuleElement { system, terms: BTreeMap::new() }
    }

    pub fn basis(system: NumberSystem, b: BasisVector) -> Self {
        let mut v = Self::zero(system);
        v.terms.insert(b, FieldElement::one(system));
        v
    }

    pub fn system(&self) -> NumberSystem {
        self.system
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisVector, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &BasisVector) -> Option<&FieldElement> {
        self.terms.get(b)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, b: BasisVector, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&b);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    /// `self += c · v`.
    pub fn add_scaled(&mut self, v: &ModuleElement, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (b, x) in &v.terms {
            self.add_term(b.clone(), if unit { x.clone() } else { x.mul(c) });
        }
    }

    pub fn add(&self, o: &ModuleElement) -> ModuleElement {
        let mut out = self.clone();
        out.add_scaled(o, &FieldElement::one(self.system));
        out
    }

    pub fn sub(&self, o: &ModuleElement) -> ModuleElement {
        let mut out = self.clone();
        out.add_scaled(o, &FieldElement::one(self.system).neg());
        out
    }

    pub fn scale(&self, c: &FieldElement) -> ModuleElement {
        let mut out = ModuleElement::zero(self.system);
        out.add_scaled(self, c);
        out
    }

    /// Basis vectors in the support.
    pub fn support(&self) -> impl Iterator<Item = &BasisVector> {
        self.terms.keys()
    }
}

impl PartialEq for ModuleElement {
    fn eq(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{b}: {c}")?;
        }
        Ok(())
    }
}
