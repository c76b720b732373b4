//! Random rational functions smooth on the diagonal and the identities of
//! the `𝒟^v̄` calculus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exactalg::{
    bracket, bracket_x_minus_y, dv_operator, EntryDiff, Exps, FieldElement, LaurentPoly, NumberSystem, QExp, Rat,
};

pub struct Sampler {
    sys: NumberSystem,
    rng: ChaCha8Rng,
}

// Points and bracket constants share the denominator 4: mixing unrelated
// denominators forces roots of Q of large order and slows every product.
const POINTS: [(i64, i64); 5] = [(0, 1), (1, 2), (-1, 2), (3, 2), (1, 1)];

impl Sampler {
    pub fn new(sys: NumberSystem, seed: u64) -> Self {
        Sampler { sys, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn point(&mut self) -> Rat {
        let (a, b) = *POINTS.choose(&mut self.rng).unwrap();
        Rat::new(a, b)
    }

    fn numerator(&mut self, max_terms: usize) -> LaurentPoly {
        let terms = self.rng.gen_range(1..=max_terms);
        let mut out = Vec::new();
        for _ in 0..terms {
            let c = loop {
                let c = self.rng.gen_range(-3i64..=3);
                if c != 0 {
                    break c;
                }
            };
            let e = match self.sys {
                NumberSystem::Quantum => Exps::new(
                    QExp::from_integer(self.rng.gen_range(-2..=2)),
                    self.rng.gen_range(-2..=2),
                    self.rng.gen_range(-2..=2),
                ),
                NumberSystem::Classical => {
                    Exps::new(QExp::from_integer(0), self.rng.gen_range(0..=2), self.rng.gen_range(0..=2))
                }
            };
            out.push((e, Rat::from_int(c)));
        }
        LaurentPoly::from_terms(out)
    }

    /// A random element whose denominator does not vanish at `x = y = c`
    /// for any sample point `c`.
    pub fn smooth(&mut self) -> FieldElement {
        self.element(4, 2)
    }

    /// A smaller smooth element; the pole families multiply several of
    /// these together.
    pub fn smooth_light(&mut self) -> FieldElement {
        self.element(2, 1)
    }

    fn element(&mut self, max_terms: usize, max_brackets: usize) -> FieldElement {
        let sys = self.sys;
        let mut f = FieldElement::from_poly(sys, self.numerator(max_terms));
        for _ in 0..self.rng.gen_range(0..=max_brackets) {
            let d = match self.rng.gen_range(0..3) {
                0 => EntryDiff { constant: Rat::from_int(*[-2, -1, 1, 2].choose(&mut self.rng).unwrap()), x: 1, y: -1 },
                1 => EntryDiff { constant: Rat::new(1, 4), x: 1, y: 1 },
                _ => EntryDiff { constant: Rat::new(1, 4), x: 0, y: 1 },
            };
            f = f.div(&bracket(sys, &d)).expect("non-zero bracket");
        }
        f
    }

    /// A smooth element that does not vanish at the point.
    pub fn smooth_nonvanishing(&mut self, c: &Rat) -> FieldElement {
        loop {
            let f = self.smooth_light();
            if !f.evaluate_at_singular(c).map(|v| v.is_zero()).unwrap_or(true) {
                return f;
            }
        }
    }
}

/// One evaluated identity; `failure` carries the sample and both sides.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub identity: &'static str,
    pub failure: Option<String>,
}

fn ev(f: &FieldElement, c: &Rat) -> Result<FieldElement> {
    f.evaluate_at_singular(c)
}

fn check(name: &'static str, lhs: FieldElement, rhs: FieldElement, ctx: &dyn Fn() -> String) -> Outcome {
    let failure = (lhs != rhs).then(|| format!("{}: lhs {lhs}, rhs {rhs}", ctx()));
    Outcome { identity: name, failure }
}

/// The single-function identities and the symmetric-factor formula on one
/// random sample.
pub fn single_sample(s: &mut Sampler) -> Result<Vec<Outcome>> {
    let sys = s.sys;
    let c = s.point();
    let f = s.smooth();
    let g = s.smooth();
    let b = bracket_x_minus_y(sys);
    let ft = f.tau_swap();
    let ctx = || format!("c = {c}, f = {f}, g = {g}");
    let mut out = Vec::new();
    let dv = |h: &FieldElement| dv_operator(h, &c);
    out.push(check("dv antisymmetry", dv(&ft)?, dv(&f)?.neg(), &ctx));
    out.push(check("dv kills symmetric", dv(&f.add(&ft))?, FieldElement::zero(sys), &ctx));
    let h = f.sub(&ft).div(&b)?;
    out.push(check("divided difference", ev(&h, &c)?, dv(&f)?.scale(&Rat::from_int(2)), &ctx));
    out.push(check("ev through bracket", ev(&f, &c)?, dv(&b.mul(&f))?, &ctx));
    out.push(check(
        "dv product rule",
        dv(&f.mul(&g))?,
        dv(&f)?.mul(&ev(&g, &c)?).add(&ev(&f, &c)?.mul(&dv(&g)?)),
        &ctx,
    ));
    out.push(check("bracket tau invariance", dv(&b.mul(&f))?, dv(&b.mul(&ft))?, &ctx));
    let gs = g.add(&g.tau_swap());
    out.push(check("symmetric factor", dv(&f)?.mul(&dv(&b.mul(&gs))?), dv(&f.mul(&gs))?, &ctx));
    Ok(out)
}

const GENERAL: [&str; 5] = [
    "pole pair: smoothness hypotheses",
    "pole pair: dv of tau sum vanishes",
    "pole pair: dv identity",
    "pole pair: ev identity",
    "pole pair: ev companion identity",
];

const ANCHORED: [&str; 5] = [
    "anchored pole pair: smoothness hypotheses",
    "anchored pole pair: dv of tau sum vanishes",
    "anchored pole pair: dv identity",
    "anchored pole pair: ev identity",
    "anchored pole pair: ev companion identity",
];

/// A pair `(f_m, g_m)`, `m = 1, 2`, with `[x - y] g_m` smooth and non-zero
/// on the diagonal, `Σ f_m g_m` smooth and `𝒟^v̄(Σ f_m g_m^τ) = 0`.
pub struct PoleFamily {
    pub anchored: bool,
    pub c: Rat,
    pub f: [FieldElement; 2],
    pub g: [FieldElement; 2],
}

impl PoleFamily {
    /// With `anchored`, additionally `ev(Σ f_m g_m^τ) = 0`.
    pub fn sample(s: &mut Sampler, anchored: bool) -> Result<Self> {
        let sys = s.sys;
        let c = s.point();
        let b = bracket_x_minus_y(sys);
        let f1 = s.smooth_light();
        let gb1 = s.smooth_nonvanishing(&c);
        let gb2 = s.smooth_nonvanishing(&c);
        let a0 = s.smooth_light();
        let (gb1t, gb2t) = (gb1.tau_swap(), gb2.tau_swap());
        let w = gb1t.mul(&gb2).sub(&gb1.mul(&gb2t)).div(&b)?;
        let fw = f1.mul(&w).div(&gb2)?;
        let mut a0 = a0;
        if anchored {
            // shift ev(A) so that ev(f1 W / ḡ2 + A) = 0
            let target = ev(&fw, &c)?.add(&ev(&a0, &c)?);
            a0 = a0.sub(&target);
        }
        let c0 = dv_operator(&fw.add(&a0.mul(&gb2t).div(&gb2)?), &c)?.neg();
        let a = a0.add(&c0.mul(&b).mul(&gb2).div(&gb2t)?);
        let f2 = b.mul(&a).sub(&f1.mul(&gb1)).div(&gb2)?;
        Ok(PoleFamily { anchored, c, f: [f1, f2], g: [gb1.div(&b)?, gb2.div(&b)?] })
    }

    fn sum_fg(&self) -> FieldElement {
        self.f[0].mul(&self.g[0]).add(&self.f[1].mul(&self.g[1]))
    }

    fn sum_fgt(&self) -> FieldElement {
        self.f[0].mul(&self.g[0].tau_swap()).add(&self.f[1].mul(&self.g[1].tau_swap()))
    }

    /// Checks the hypotheses, identity (i), the evaluated form (ii), and
    /// the unconditional evaluated companion
    /// `2 Σ ev(f_m) 𝒟^v̄([x-y] g_m) = ev(Σ f_m g_m) + ev(Σ f_m g_m^τ)`.
    pub fn check(&self) -> Result<Vec<Outcome>> {
        let c = &self.c;
        let system = self.f[0].system();
        let b = bracket_x_minus_y(system);
        let ctx = || format!("c = {c}, f1 = {}, f2 = {}, g1 = {}, g2 = {}", self.f[0], self.f[1], self.g[0], self.g[1]);
        let mut out = Vec::new();
        let names = if self.anchored { &ANCHORED } else { &GENERAL };
        let gb: Vec<FieldElement> = self.g.iter().map(|g| b.mul(g)).collect();
        let s = self.sum_fg();
        let st = self.sum_fgt();
        let ev_s = ev(&s, c);
        for m in 0..2 {
            let smooth = !ev(&gb[m], c)?.is_zero() && ev(&self.f[m], c).is_ok() && ev_s.is_ok();
            out.push(Outcome { identity: names[0], failure: (!smooth).then(ctx) });
        }
        let ev_s = ev_s?;
        out.push(check(names[1], dv_operator(&st, c)?, FieldElement::zero(system), &ctx));
        let two = Rat::from_int(2);
        let mut lhs1 = FieldElement::zero(system);
        let mut lhs2 = FieldElement::zero(system);
        let mut lhs3 = FieldElement::zero(system);
        for m in 0..2 {
            let (df, dg) = (dv_operator(&self.f[m], c)?, dv_operator(&gb[m], c)?);
            lhs1 = lhs1.add(&df.mul(&dg));
            lhs2 = lhs2.add(&df.mul(&ev(&gb[m], c)?));
            lhs3 = lhs3.add(&ev(&self.f[m], c)?.mul(&dg));
        }
        out.push(check(names[2], lhs1.scale(&two), dv_operator(&s, c)?, &ctx));
        out.push(check(names[3], lhs2.scale(&two), ev_s.clone(), &ctx));
        out.push(check(names[4], lhs3.scale(&two), ev_s.add(&ev(&st, c)?), &ctx));
        Ok(out)
    }
}
