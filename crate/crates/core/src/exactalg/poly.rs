//! Sparse Laurent polynomials in Q (rational exponents), X and Y.
//!
//! In the classical number system the same container holds ordinary
//! polynomials in x and y; the Q exponent is then always zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use super::rat::Rat;

/// Exponent of Q.
pub type QExp = Ratio<i64>;

/// Exponent triple of a monomial, ordered lexicographically by (x, y, q).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Exps {
    pub x: i32,
    pub y: i32,
    pub q: QExp,
}

impl Default for Exps {
    fn default() -> Self {
        Exps::ZERO
    }
}

impl Exps {
    pub const ZERO: Exps = Exps { x: 0, y: 0, q: Ratio::new_raw(0, 1) };

    pub fn new(q: QExp, x: i32, y: i32) -> Exps {
        Exps { x, y, q }
    }

    pub fn q(q: QExp) -> Exps {
        Exps { x: 0, y: 0, q }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0 && self.q.is_zero()
    }

    pub fn has_xy(&self) -> bool {
        self.x != 0 || self.y != 0
    }

    pub fn scale(&self, k: i32) -> Exps {
        Exps { x: self.x * k, y: self.y * k, q: self.q * k as i64 }
    }

    pub fn min_each(&self, o: &Exps) -> Exps {
        Exps { x: self.x.min(o.x), y: self.y.min(o.y), q: self.q.min(o.q) }
    }

    pub fn max_each(&self, o: &Exps) -> Exps {
        Exps { x: self.x.max(o.x), y: self.y.max(o.y), q: self.q.max(o.q) }
    }

    pub fn swap_xy(&self) -> Exps {
        Exps { x: self.y, y: self.x, q: self.q }
    }

    /// Componentwise `self <= o`.
    pub fn le_all(&self, o: &Exps) -> bool {
        self.x <= o.x && self.y <= o.y && self.q <= o.q
    }
}

impl Add for Exps {
    type Output = Exps;
    fn add(self, o: Exps) -> Exps {
        Exps { x: self.x + o.x, y: self.y + o.y, q: self.q + o.q }
    }
}

impl Sub for Exps {
    type Output = Exps;
    fn sub(self, o: Exps) -> Exps {
        Exps { x: self.x - o.x, y: self.y - o.y, q: self.q - o.q }
    }
}

impl Neg for Exps {
    type Output = Exps;
    fn neg(self) -> Exps {
        Exps { x: -self.x, y: -self.y, q: -self.q }
    }
}

/// A single term `coeff * Q^q * X^x * Y^y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: Rat,
    pub exps: Exps,
}

/// Terms sorted by strictly increasing exponents, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: Vec<(Exps, Rat)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(Exps::ZERO, c)
    }

    pub fn monomial(e: Exps, c: Rat) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(e, c)] }
        }
    }

    /// Builds a polynomial from unsorted, possibly repeated terms.
    pub fn from_terms(mut terms: Vec<(Exps, Rat)>) -> Self {
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Exps, Rat)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        LaurentPoly { terms: out }
    }

    pub fn terms(&self) -> &[(Exps, Rat)] {
        &self.terms
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(e, c)| Monomial { coeff: c.clone(), exps: *e })
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

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    /// Constant value if the polynomial has no non-trivial monomials.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(e, c)] if e.is_zero() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn has_xy(&self) -> bool {
        self.terms.iter().any(|(e, _)| e.has_xy())
    }

    pub fn lowest(&self) -> Option<&(Exps, Rat)> {
        self.terms.first()
    }

    pub fn highest(&self) -> Option<&(Exps, Rat)> {
        self.terms.last()
    }

    pub fn min_exps(&self) -> Exps {
        let mut it = self.terms.iter();
        let first = it.next().map(|t| t.0).unwrap_or(Exps::ZERO);
        it.fold(first, |m, t| m.min_each(&t.0))
    }

    pub fn max_exps(&self) -> Exps {
        let mut it = self.terms.iter();
        let first = it.next().map(|t| t.0).unwrap_or(Exps::ZERO);
        it.fold(first, |m, t| m.max_each(&t.0))
    }

    /// Least common denominator of all Q exponents.
    pub fn q_denominator(&self) -> i64 {
        self.terms
            .iter()
            .fold(1i64, |acc, t| {
                let d = *t.0.q.denom();
                if acc % d == 0 {
                    acc
                } else {
                    acc.lcm(&d)
                }
            })
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect() }
    }

    /// Multiplies by `c * M^e`; ordering is preserved because monomial
    /// multiplication is order-compatible.
    pub fn mul_monomial(&self, e: Exps, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(f, k)| (*f + e, k * c)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = &a[i].1 + &b[j].1;
                    if !s.is_zero() {
                        out.push((a[i].0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        LaurentPoly { terms: out }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_monomial(o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_monomial(self.terms[0].0, &self.terms[0].1);
        }
        let r = num_integer::lcm(self.q_denominator(), o.q_denominator());
        let a = IntPoly::new(self, r);
        let b = IntPoly::new(o, r);
        if let (Some((ia, da)), Some((ib, db))) = (a.scaled(), b.scaled()) {
            if let Some(out) = int_mul(&a, &ia, &b, &ib, da as i128 * db as i128) {
                return out;
            }
        }
        if !self.has_xy() && !o.has_xy() {
            let (lo_a, lo_b) = (a.terms[0].0 .2, b.terms[0].0 .2);
            let span = (a.terms.last().unwrap().0 .2 - lo_a) + (b.terms.last().unwrap().0 .2 - lo_b);
            let mut dense = vec![Rat::zero(); span as usize + 1];
            for (ka, ca) in &a.terms {
                for (kb, cb) in &b.terms {
                    dense[(ka.2 - lo_a + kb.2 - lo_b) as usize] += &(ca * cb);
                }
            }
            let terms = dense
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (Exps::q(Ratio::new(i as i64 + lo_a + lo_b, r)), c))
                .collect();
            return LaurentPoly { terms };
        }
        let mut prods = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                prods.push(((ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2), ca * cb));
            }
        }
        prods.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        let mut out: Vec<(Key, Rat)> = Vec::with_capacity(prods.len());
        for (k, c) in prods {
            match out.last_mut() {
                Some(last) if last.0 == k => last.1 += &c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        IntPoly { terms: out, r }.into_poly()
    }

    /// `self · ∏ fs`, converting to integer coefficients once when every
    /// operand is a polynomial in Q alone.
    pub fn mul_many(&self, fs: &[&LaurentPoly]) -> Self {
        if fs.is_empty() || self.is_zero() {
            return self.clone();
        }
        if self.has_xy() || fs.iter().any(|f| f.has_xy() || f.is_zero()) {
            return fs.iter().fold(self.clone(), |acc, f| acc.mul(f));
        }
        let r = fs.iter().fold(self.q_denominator(), |acc, f| {
            let d = f.q_denominator();
            if acc % d == 0 {
                acc
            } else {
                acc.lcm(&d)
            }
        });
        let dense = |p: &LaurentPoly| -> Option<(i64, Vec<i128>, i128)> {
            let ip = IntPoly::new(p, r);
            let (ints, den) = ip.scaled()?;
            let lo = ip.terms[0].0 .2;
            let mut v = vec![0i128; (ip.terms.last().unwrap().0 .2 - lo) as usize + 1];
            for ((k, _), c) in ip.terms.iter().zip(ints) {
                v[(k.2 - lo) as usize] = c as i128;
            }
            Some((lo, v, den as i128))
        };
        let run = || -> Option<LaurentPoly> {
            let (mut lo, mut acc, mut den) = dense(self)?;
            for f in fs {
                let (flo, fv, fden) = dense(f)?;
                let mut out = vec![0i128; acc.len() + fv.len() - 1];
                for (i, &a) in acc.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    for (j, &b) in fv.iter().enumerate() {
                        if b != 0 {
                            out[i + j] = out[i + j].checked_add(a.checked_mul(b)?)?;
                        }
                    }
                }
                acc = out;
                lo += flo;
                den = den.checked_mul(fden)?;
            }
            let terms = acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .map(|(i, c)| ((0, 0, lo + i as i64), Rat::from_i128(c, den)))
                .collect();
            Some(IntPoly { terms, r }.into_poly())
        };
        run().unwrap_or_else(|| fs.iter().fold(self.clone(), |acc, f| acc.mul(f)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Applies an exponent map to every term and re-collects.
    pub fn map_exps(&self, f: impl Fn(Exps) -> Exps) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (f(*e), c.clone())).collect())
    }

    pub fn swap_xy(&self) -> Self {
        self.map_exps(|e| e.swap_xy())
    }

    /// Euler-type derivation `wx·X∂_X + wy·Y∂_Y`.
    pub fn euler(&self, wx: i32, wy: i32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let k = wx * e.x + wy * e.y;
                (k != 0).then(|| (*e, c * &Rat::from(k)))
            })
            .collect();
        LaurentPoly { terms }
    }

    /// Ordinary derivation `wx·∂_x + wy·∂_y` (classical system).
    pub fn partial(&self, wx: i32, wy: i32) -> Self {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if wx != 0 && e.x != 0 {
                terms.push((Exps { x: e.x - 1, ..*e }, c * &Rat::from(wx * e.x)));
            }
            if wy != 0 && e.y != 0 {
                terms.push((Exps { y: e.y - 1, ..*e }, c * &Rat::from(wy * e.y)));
            }
        }
        Self::from_terms(terms)
    }

    /// Exact division in the Laurent ring; `None` if `d` does not divide.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.terms.len() == 1 {
            let (e, c) = &d.terms[0];
            return Some(self.mul_monomial(-*e, &c.recip()));
        }
        let r = num_integer::lcm(self.q_denominator(), d.q_denominator());
        let a = IntPoly::new(self, r);
        let b = IntPoly::new(d, r);
        if let (Some((ia, da)), Some((ib, db))) = (a.scaled(), b.scaled()) {
            if ib.last().is_some_and(|l| l.abs() == 1) {
                if let Some(q) = int_div(&a, &ia, &b, &ib) {
                    return q.map(|q| {
                        let terms = q.into_iter().map(|(k, c)| (k, Rat::from_i128(c * db as i128, da as i128))).collect();
                        IntPoly { terms, r }.into_poly()
                    });
                }
            }
        }
        if !self.has_xy() && !d.has_xy() {
            return dense_div(&a, &b).map(|q| q.into_poly());
        }
        let (lt_k, lt_c) = b.terms.last().unwrap().clone();
        let low_bound = sub_key(a.terms[0].0, b.terms[0].0);
        // Newton polytope of the quotient lies in this box.
        let (a_lo, a_hi) = a.bounds();
        let (b_lo, b_hi) = b.bounds();
        let box_lo = sub_key(a_lo, b_hi);
        let box_hi = sub_key(a_hi, b_lo);
        let inside = |k: Key| box_lo.0 <= k.0 && k.0 <= box_hi.0 && box_lo.1 <= k.1 && k.1 <= box_hi.1 && box_lo.2 <= k.2 && k.2 <= box_hi.2;
        let inv_lt = lt_c.recip();
        let mut rem: BTreeMap<Key, Rat> = a.terms.into_iter().collect();
        let mut quot = Vec::new();
        while let Some((k, c)) = rem.iter().next_back().map(|(k, c)| (*k, c.clone())) {
            let qk = sub_key(k, lt_k);
            if qk < low_bound || !inside(qk) {
                return None;
            }
            let qc = &c * &inv_lt;
            for (dk, dc) in &b.terms {
                let key = (qk.0 + dk.0, qk.1 + dk.1, qk.2 + dk.2);
                let delta = &qc * dc;
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= &delta;
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quot.push((qk, qc));
        }
        quot.reverse();
        Some(IntPoly { terms: quot, r }.into_poly())
    }

    /// Renders in the canonical text syntax, highest term first.
    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, classical: bool) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if !e.q.is_zero() {
                if e.q.is_integer() {
                    write!(f, " * Q^({})", e.q.numer())?;
                } else {
                    write!(f, " * Q^({}/{})", e.q.numer(), e.q.denom())?;
                }
            }
            let (xn, yn) = if classical { ("x", "y") } else { ("X", "Y") };
            if e.x != 0 {
                write!(f, " * {xn}^{}", e.x)?;
            }
            if e.y != 0 {
                write!(f, " * {yn}^{}", e.y)?;
            }
        }
        Ok(())
    }

    pub fn display(&self, classical: bool) -> PolyDisplay<'_> {
        PolyDisplay { p: self, classical }
    }

    /// True when some term has a negative x or y exponent.
    pub fn has_negative_xy(&self) -> bool {
        self.terms.iter().any(|(e, _)| e.x < 0 || e.y < 0)
    }

    /// True when every Q exponent is non-negative.
    pub fn q_nonnegative(&self) -> bool {
        self.terms.iter().all(|(e, _)| !e.q.is_negative())
    }
}

pub struct PolyDisplay<'a> {
    p: &'a LaurentPoly,
    classical: bool,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.p.fmt_with(f, self.classical)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

/// `(x, y, q·r)`: exponents over a common Q-root `r`. The tuple order
/// agrees with the order of [`Exps`].
type Key = (i32, i32, i64);

fn sub_key(a: Key, b: Key) -> Key {
    (a.0 - b.0, a.1 - b.1, a.2 - b.2)
}

struct IntPoly {
    terms: Vec<(Key, Rat)>,
    r: i64,
}

impl IntPoly {
    fn new(p: &LaurentPoly, r: i64) -> Self {
        let terms = p
            .terms
            .iter()
            .map(|(e, c)| ((e.x, e.y, e.q.numer() * (r / e.q.denom())), c.clone()))
            .collect();
        IntPoly { terms, r }
    }

    /// Coefficients as integers over one common denominator.
    fn scaled(&self) -> Option<(Vec<i64>, i64)> {
        let mut den: i64 = 1;
        for (_, c) in &self.terms {
            let (_, d) = c.to_small()?;
            if den % d != 0 {
                den = den.lcm(&d);
            }
            if den > 1 << 40 {
                return None;
            }
        }
        self.terms
            .iter()
            .map(|(_, c)| {
                let (n, d) = c.to_small().unwrap();
                n.checked_mul(den / d)
            })
            .collect::<Option<Vec<i64>>>()
            .map(|v| (v, den))
    }

    fn bounds(&self) -> (Key, Key) {
        let mut lo = self.terms[0].0;
        let mut hi = lo;
        for (k, _) in &self.terms {
            lo = (lo.0.min(k.0), lo.1.min(k.1), lo.2.min(k.2));
            hi = (hi.0.max(k.0), hi.1.max(k.1), hi.2.max(k.2));
        }
        (lo, hi)
    }

    fn into_poly(self) -> LaurentPoly {
        let r = self.r;
        let q = |k: i64| {
            if r == 1 {
                return Ratio::from_integer(k);
            }
            let g = (k.unsigned_abs()).gcd(&(r as u64)) as i64;
            Ratio::new_raw(k / g, r / g)
        };
        LaurentPoly { terms: self.terms.into_iter().map(|(k, c)| (Exps::new(q(k.2), k.0, k.1), c)).collect() }
    }
}

/// Product over the integers; `None` on overflow.
fn int_mul(a: &IntPoly, ia: &[i64], b: &IntPoly, ib: &[i64], den: i128) -> Option<LaurentPoly> {
    let univariate = a.terms.iter().chain(&b.terms).all(|(k, _)| k.0 == 0 && k.1 == 0);
    let finish = |terms: Vec<(Key, i128)>| {
        let terms = terms.into_iter().filter(|t| t.1 != 0).map(|(k, c)| (k, Rat::from_i128(c, den))).collect();
        IntPoly { terms, r: a.r }.into_poly()
    };
    if univariate {
        let (lo_a, lo_b) = (a.terms[0].0 .2, b.terms[0].0 .2);
        let span = (a.terms.last().unwrap().0 .2 - lo_a) + (b.terms.last().unwrap().0 .2 - lo_b);
        let mut dense = vec![0i128; span as usize + 1];
        for ((ka, _), &ca) in a.terms.iter().zip(ia) {
            for ((kb, _), &cb) in b.terms.iter().zip(ib) {
                let slot = &mut dense[(ka.2 - lo_a + kb.2 - lo_b) as usize];
                *slot = slot.checked_add(ca as i128 * cb as i128)?;
            }
        }
        return Some(finish(dense.into_iter().enumerate().map(|(i, c)| ((0, 0, i as i64 + lo_a + lo_b), c)).collect()));
    }
    let mut prods = Vec::with_capacity(a.terms.len() * b.terms.len());
    for ((ka, _), &ca) in a.terms.iter().zip(ia) {
        for ((kb, _), &cb) in b.terms.iter().zip(ib) {
            prods.push(((ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2), ca as i128 * cb as i128));
        }
    }
    prods.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    let mut out: Vec<(Key, i128)> = Vec::with_capacity(prods.len());
    for (k, c) in prods {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 = last.1.checked_add(c)?,
            _ => out.push((k, c)),
        }
    }
    Some(finish(out))
}

/// Division by a divisor with leading coefficient ±1 over the integers.
/// The outer `None` means overflow, the inner one a non-zero remainder.
#[allow(clippy::type_complexity)]
fn int_div(a: &IntPoly, ia: &[i64], b: &IntPoly, ib: &[i64]) -> Option<Option<Vec<(Key, i128)>>> {
    let lt = *ib.last().unwrap() as i128;
    let lt_k = b.terms.last().unwrap().0;
    let univariate = a.terms.iter().chain(&b.terms).all(|(k, _)| k.0 == 0 && k.1 == 0);
    if univariate {
        let (a_lo, b_lo) = (a.terms[0].0 .2, b.terms[0].0 .2);
        let a_deg = (a.terms.last().unwrap().0 .2 - a_lo) as usize;
        let b_deg = (lt_k.2 - b_lo) as usize;
        if b_deg > a_deg {
            return Some(None);
        }
        let mut rem = vec![0i128; a_deg + 1];
        for ((k, _), &c) in a.terms.iter().zip(ia) {
            rem[(k.2 - a_lo) as usize] = c as i128;
        }
        let div: Vec<(usize, i128)> = b.terms.iter().zip(ib).map(|((k, _), &c)| ((k.2 - b_lo) as usize, c as i128)).collect();
        let mut quot = Vec::new();
        for i in (0..=a_deg - b_deg).rev() {
            let c = rem[i + b_deg];
            if c == 0 {
                continue;
            }
            let qc = c * lt;
            for &(j, dc) in &div {
                rem[i + j] = rem[i + j].checked_sub(qc.checked_mul(dc)?)?;
            }
            quot.push(((0, 0, i as i64 + a_lo - b_lo), qc));
        }
        if rem[..b_deg].iter().any(|&c| c != 0) {
            return Some(None);
        }
        quot.reverse();
        return Some(Some(quot));
    }
    let low_bound = sub_key(a.terms[0].0, b.terms[0].0);
    let (a_lo, a_hi) = a.bounds();
    let (b_lo, b_hi) = b.bounds();
    let box_lo = sub_key(a_lo, b_hi);
    let box_hi = sub_key(a_hi, b_lo);
    let inside = |k: Key| {
        box_lo.0 <= k.0 && k.0 <= box_hi.0 && box_lo.1 <= k.1 && k.1 <= box_hi.1 && box_lo.2 <= k.2 && k.2 <= box_hi.2
    };
    let mut rem: BTreeMap<Key, i128> = a.terms.iter().zip(ia).map(|((k, _), &c)| (*k, c as i128)).collect();
    let mut quot = Vec::new();
    while let Some((&k, &c)) = rem.iter().next_back() {
        let qk = sub_key(k, lt_k);
        if qk < low_bound || !inside(qk) {
            return Some(None);
        }
        let qc = c * lt;
        for ((dk, _), &dc) in b.terms.iter().zip(ib) {
            let key = (qk.0 + dk.0, qk.1 + dk.1, qk.2 + dk.2);
            let delta = qc.checked_mul(dc as i128)?;
            let v = rem.entry(key).or_insert(0);
            *v = v.checked_sub(delta)?;
            if *v == 0 {
                rem.remove(&key);
            }
        }
        quot.push((qk, qc));
    }
    quot.reverse();
    Some(Some(quot))
}

/// Long division of univariate Laurent polynomials in `Q^(1/r)`.
fn dense_div(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    let (a_lo, b_lo) = (a.terms[0].0 .2, b.terms[0].0 .2);
    let a_deg = (a.terms.last().unwrap().0 .2 - a_lo) as usize;
    let b_deg = (b.terms.last().unwrap().0 .2 - b_lo) as usize;
    if b_deg > a_deg {
        return None;
    }
    let mut rem = vec![Rat::zero(); a_deg + 1];
    for (k, c) in &a.terms {
        rem[(k.2 - a_lo) as usize] = c.clone();
    }
    let div: Vec<(usize, &Rat)> = b.terms.iter().map(|(k, c)| ((k.2 - b_lo) as usize, c)).collect();
    let inv_lt = b.terms.last().unwrap().1.recip();
    let mut quot = vec![Rat::zero(); a_deg - b_deg + 1];
    for i in (0..=a_deg - b_deg).rev() {
        let c = &rem[i + b_deg];
        if c.is_zero() {
            continue;
        }
        let qc = c * &inv_lt;
        for &(j, dc) in &div {
            let t = &qc * dc;
            rem[i + j] -= &t;
        }
        quot[i] = qc;
    }
    if rem[..b_deg].iter().any(|c| !c.is_zero()) {
        return None;
    }
    let shift = a_lo - b_lo;
    let terms =
        quot.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| ((0, 0, i as i64 + shift), c)).collect();
    Some(IntPoly { terms, r: a.r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qx(q: i64, x: i32, y: i32) -> Exps {
        Exps::new(Ratio::from_integer(q), x, y)
    }

    fn p(ts: &[(i64, i32, i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(ts.iter().map(|&(q, x, y, c)| (qx(q, x, y), Rat::from_int(c))).collect())
    }

    #[test]
    fn merge_cancels() {
        let a = p(&[(1, 0, 0, 1), (-1, 0, 0, -1)]);
        let b = p(&[(-1, 0, 0, 1), (1, 0, 0, -1)]);
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn exact_division_multivariate() {
        // (X^2 - Y^2) / (X - Y) = X + Y
        let n = p(&[(0, 2, 0, 1), (0, 0, 2, -1)]);
        let d = p(&[(0, 1, 0, 1), (0, 0, 1, -1)]);
        assert_eq!(n.exact_div(&d).unwrap(), p(&[(0, 1, 0, 1), (0, 0, 1, 1)]));
        // X^2 + Y^2 is not divisible by X - Y
        let m = p(&[(0, 2, 0, 1), (0, 0, 2, 1)]);
        assert!(m.exact_div(&d).is_none());
    }

    #[test]
    fn exact_division_fractional_q() {
        let half = Ratio::new(1, 2);
        let u = Exps::q(half);
        // (Q - 1) / (Q^(1/2) - 1) = Q^(1/2) + 1
        let n = p(&[(1, 0, 0, 1), (0, 0, 0, -1)]);
        let d = LaurentPoly::from_terms(vec![(u, Rat::one()), (Exps::ZERO, Rat::from_int(-1))]);
        let qt = n.exact_div(&d).unwrap();
        assert_eq!(qt, LaurentPoly::from_terms(vec![(u, Rat::one()), (Exps::ZERO, Rat::one())]));
    }

    #[test]
    fn display_canonical() {
        let t = LaurentPoly::monomial(Exps::new(Ratio::new(5, 2), 1, -2), Rat::new(-3, 2));
        assert_eq!(t.to_string(), "-3/2 * Q^(5/2) * X^1 * Y^-2");
    }
}
