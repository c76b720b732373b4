//! Exact coefficient field: Laurent polynomials in Q, X = q^x, Y = q^y,
//! quantum numbers, Euler derivatives and the singular evaluation
//! functional `dv`.

pub mod cyclo;
pub mod field;
pub mod poly;
pub mod rat;

use std::fmt;

use num_rational::Ratio;

pub use field::{Atom, FieldElement, NumberSystem};
pub use poly::{Exps, LaurentPoly, Monomial, QExp};
pub use rat::Rat;

use crate::error::{Error, Result};
use field::to_qexp;

/// Affine expression `constant + x·x + y·y` in the two singular variables.
///
/// Differences of tableau entries have `x, y ∈ {-1, 0, 1}`; sums of entries
/// (weights) may carry larger coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EntryDiff {
    pub constant: Rat,
    pub x: i32,
    pub y: i32,
}

impl EntryDiff {
    pub fn constant(c: Rat) -> Self {
        EntryDiff { constant: c, x: 0, y: 0 }
    }

    pub fn is_symbolic(&self) -> bool {
        self.x != 0 || self.y != 0
    }

    pub fn neg(&self) -> Self {
        EntryDiff { constant: -&self.constant, x: -self.x, y: -self.y }
    }

    pub fn add(&self, o: &Self) -> Self {
        EntryDiff { constant: &self.constant + &o.constant, x: self.x + o.x, y: self.y + o.y }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i32) -> Self {
        EntryDiff { constant: &self.constant * &Rat::from(k), x: self.x * k, y: self.y * k }
    }

    /// Value at x = y = c.
    pub fn at(&self, c: &Rat) -> Rat {
        &self.constant + &(c * &Rat::from(self.x + self.y))
    }

    /// Exponent triple of `Q^d`.
    pub fn exps(&self) -> Exps {
        Exps::new(to_qexp(&self.constant), self.x, self.y)
    }

    /// `d` as a polynomial in x, y (classical system).
    pub fn linear_poly(&self) -> LaurentPoly {
        LaurentPoly::from_terms(vec![
            (Exps::ZERO, self.constant.clone()),
            (Exps::new(Ratio::from_integer(0), 1, 0), Rat::from(self.x)),
            (Exps::new(Ratio::from_integer(0), 0, 1), Rat::from(self.y)),
        ])
    }
}

impl fmt::Display for EntryDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (k, v) in [(self.x, "x"), (self.y, "y")] {
            match k {
                0 => {}
                1 => write!(f, " + {v}")?,
                -1 => write!(f, " - {v}")?,
                k => write!(f, " + {k}{v}")?,
            }
        }
        Ok(())
    }
}

/// Singular variable selector for Euler derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Quantum number `[d]_q = (q^d - q^-d)/(q - q^-1)`; the classical system
/// returns `d` itself.
pub fn bracket(sys: NumberSystem, d: &EntryDiff) -> FieldElement {
    match sys {
        NumberSystem::Classical => FieldElement::from_poly(sys, d.linear_poly()),
        NumberSystem::Quantum => {
            let m = d.exps();
            if m.is_zero() {
                return FieldElement::zero(sys);
            }
            let one = FieldElement::one(sys);
            // M^-1 (M^2 - 1) / (Q^-1 (Q^2 - 1))
            let num = FieldElement::monomial(sys, m.scale(2), Rat::one()).sub(&one);
            let den = FieldElement::q_power(Ratio::from_integer(2)).sub(&one);
            let shift = FieldElement::monomial(sys, Exps::q(Ratio::from_integer(1)) - m, Rat::one());
            num.mul(&shift).div(&den).expect("q^2 - 1 is non-zero")
        }
    }
}

/// `(t)_{q^-2} = (q^-2t - 1)/(q^-2 - 1)`; classical `t`.
pub fn q_number_inv_sq(sys: NumberSystem, t: i64) -> FieldElement {
    match sys {
        NumberSystem::Classical => FieldElement::from_int(sys, t),
        NumberSystem::Quantum => {
            if t == 0 {
                return FieldElement::zero(sys);
            }
            let one = FieldElement::one(sys);
            let num = FieldElement::q_power(Ratio::from_integer(-2 * t)).sub(&one);
            let den = FieldElement::q_power(Ratio::from_integer(-2)).sub(&one);
            num.div(&den).expect("q^-2 - 1 is non-zero")
        }
    }
}

/// `(1)_{q^-2} (2)_{q^-2} ⋯ (m)_{q^-2}`.
pub fn q_pochhammer_factorial(sys: NumberSystem, m: i64) -> Result<FieldElement> {
    if m < 0 {
        return Err(Error::NegativeArgument(m));
    }
    Ok((1..=m).fold(FieldElement::one(sys), |acc, t| acc.mul(&q_number_inv_sq(sys, t))))
}

/// `Q^d` for an affine exponent (quantum system).
pub fn q_power(d: &EntryDiff) -> FieldElement {
    FieldElement::monomial(NumberSystem::Quantum, d.exps(), Rat::one())
}

/// `X∂_X f` or `Y∂_Y f` (classical: `∂_x f` or `∂_y f`).
pub fn euler_derivative(f: &FieldElement, var: Var) -> FieldElement {
    match var {
        Var::X => f.derivation(1, 0),
        Var::Y => f.derivation(0, 1),
    }
}

pub fn tau_swap(f: &FieldElement) -> FieldElement {
    f.tau_swap()
}

pub fn evaluate_at_singular(f: &FieldElement, c: &Rat) -> Result<FieldElement> {
    f.evaluate_at_singular(c)
}

/// The functional `dv`: quantum `((Q - Q^-1)/4)·ev((X∂_X - Y∂_Y) f)`,
/// classical `½·ev((∂_x - ∂_y) f)`.
pub fn dv_operator(f: &FieldElement, c: &Rat) -> Result<FieldElement> {
    let sys = f.system();
    let d = f.derivation(1, -1).evaluate_at_singular(c)?;
    Ok(d.mul(&dv_prefactor(sys)))
}

pub fn dv_prefactor(sys: NumberSystem) -> FieldElement {
    match sys {
        NumberSystem::Classical => FieldElement::from_rat(sys, Rat::new(1, 2)),
        NumberSystem::Quantum => FieldElement::q_power(Ratio::from_integer(1))
            .sub(&FieldElement::q_power(Ratio::from_integer(-1)))
            .scale(&Rat::new(1, 4)),
    }
}

/// `[x - y]` in the given system.
pub fn bracket_x_minus_y(sys: NumberSystem) -> FieldElement {
    bracket(sys, &EntryDiff { constant: Rat::zero(), x: 1, y: -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    const QU: NumberSystem = NumberSystem::Quantum;
    const CL: NumberSystem = NumberSystem::Classical;

    fn q(e: i64) -> FieldElement {
        FieldElement::q_power(Ratio::from_integer(e))
    }

    fn xy(x: i32, y: i32) -> FieldElement {
        FieldElement::monomial(QU, Exps::new(Ratio::from_integer(0), x, y), Rat::one())
    }

    fn c(v: i64) -> EntryDiff {
        EntryDiff::constant(Rat::from_int(v))
    }

    #[test]
    fn bracket_small_values() {
        assert_eq!(bracket(QU, &c(2)), q(1).add(&q(-1)));
        assert!(bracket(QU, &c(0)).is_zero());
        assert_eq!(bracket(QU, &c(-3)), bracket(QU, &c(3)).neg());
        assert_eq!(bracket(QU, &c(1)), FieldElement::one(QU));
        let three = q(2).add(&q(0)).add(&q(-2));
        assert_eq!(bracket(QU, &c(3)), three);
    }

    #[test]
    fn bracket_of_x_minus_y() {
        let b = bracket_x_minus_y(QU);
        let expected = xy(1, -1).sub(&xy(-1, 1)).div(&q(1).sub(&q(-1))).unwrap();
        assert_eq!(b, expected);
        assert!(evaluate_at_singular(&b, &Rat::from_int(3)).unwrap().is_zero());
        assert_eq!(tau_swap(&b), b.neg());
    }

    #[test]
    fn factorials() {
        assert!(q_pochhammer_factorial(QU, 0).unwrap().is_one());
        assert!(q_pochhammer_factorial(QU, 1).unwrap().is_one());
        assert_eq!(q_pochhammer_factorial(QU, 2).unwrap(), q(0).add(&q(-2)));
        assert_eq!(q_pochhammer_factorial(QU, -1).unwrap_err(), Error::NegativeArgument(-1));
        assert_eq!(q_pochhammer_factorial(CL, 4).unwrap().as_rat(), Some(Rat::from_int(24)));
    }

    #[test]
    fn euler_derivatives() {
        let f = xy(3, -1);
        assert_eq!(euler_derivative(&f, Var::X), f.scale(&Rat::from_int(3)));
        let g = xy(1, -1).sub(&xy(-1, 1));
        let d = euler_derivative(&g, Var::X).sub(&euler_derivative(&g, Var::Y));
        assert_eq!(d, xy(1, -1).add(&xy(-1, 1)).scale(&Rat::from_int(2)));
        assert!(euler_derivative(&q(5), Var::X).is_zero());
    }

    #[test]
    fn evaluation_cancels_common_factor() {
        let f = xy(1, 0).sub(&xy(0, 1));
        let r = f.div(&f).unwrap();
        assert!(evaluate_at_singular(&r, &Rat::from_int(2)).unwrap().is_one());
        assert!(evaluate_at_singular(&xy(1, -1), &Rat::new(1, 3)).unwrap().is_one());
    }

    #[test]
    fn pole_is_reported() {
        let f = FieldElement::one(QU).div(&bracket_x_minus_y(QU)).unwrap();
        assert!(matches!(evaluate_at_singular(&f, &Rat::zero()), Err(Error::PoleAtEvaluation(_))));
    }

    #[test]
    fn dv_of_bracket_is_one() {
        for sys in [QU, CL] {
            let b = bracket_x_minus_y(sys);
            assert!(dv_operator(&b, &Rat::new(1, 2)).unwrap().is_one());
        }
    }

    #[test]
    fn classical_bracket_is_linear() {
        let d = EntryDiff { constant: Rat::from_int(2), x: 1, y: 0 };
        let b = bracket(CL, &d);
        assert_eq!(evaluate_at_singular(&b, &Rat::from_int(5)).unwrap().as_rat(), Some(Rat::from_int(7)));
    }
}
