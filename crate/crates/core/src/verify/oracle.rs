//! Independent reference computations: eigenvalues by literal shuffle
//! enumeration, pattern counts and the Weyl dimension product.

use itertools::Itertools;

use crate::exactalg::{Exps, FieldElement, LaurentPoly, NumberSystem, QExp, Rat};

/// `(t)_{q^-2} = 1 + q^-2 + ⋯ + q^-2(t-1)` as a polynomial.
fn q_integer(t: i64) -> LaurentPoly {
    LaurentPoly::from_terms((0..t).map(|s| (Exps::q(QExp::from_integer(-2 * s)), Rat::one())).collect())
}

fn to_qexp(r: &Rat) -> QExp {
    let (n, d) = r.to_small().expect("small exponent");
    QExp::new(n, d)
}

/// `γ_mk` of a concrete row, enumerating all of `S_m` and keeping the
/// shuffles.
pub fn gamma_reference(sys: NumberSystem, k: usize, row: &[Rat]) -> FieldElement {
    let m = row.len();
    let shuffles = (0..m).permutations(m).filter(|p| {
        p[..k].windows(2).all(|w| w[0] < w[1]) && p[k..].windows(2).all(|w| w[0] < w[1])
    });
    let exponent = |p: &Vec<usize>| {
        let mut e = Rat::zero();
        for (pos, &i) in p.iter().enumerate() {
            if pos < k {
                e += &row[i];
            } else {
                e -= &row[i];
            }
        }
        e
    };
    match sys {
        NumberSystem::Quantum => {
            let mut sum = LaurentPoly::zero();
            for p in shuffles {
                sum = sum.add(&LaurentPoly::monomial(Exps::q(to_qexp(&exponent(&p))), Rat::one()));
            }
            let mut pre = LaurentPoly::one();
            for t in (1..=k as i64).chain(1..=(m - k) as i64) {
                pre = pre.mul(&q_integer(t));
            }
            let (ki, mi) = (k as i64, m as i64);
            let shift = Exps::q(QExp::from_integer(ki * (ki + 1) + mi * (mi - 3) / 2));
            FieldElement::from_poly(sys, sum.mul(&pre).mul_monomial(shift, &Rat::one()))
        }
        NumberSystem::Classical => {
            let mut acc = Rat::zero();
            for p in shuffles {
                let u = exponent(&p);
                acc += &(&u * &u);
            }
            FieldElement::from_rat(sys, &acc * &Rat::new(1, 2))
        }
    }
}

/// Number of integral interlacing patterns with top row `λ`.
pub fn count_patterns(top: &[i64]) -> u64 {
    if top.len() <= 1 {
        return 1;
    }
    let mut total = 0;
    let mut below = vec![0i64; top.len() - 1];
    fn rec(top: &[i64], below: &mut Vec<i64>, i: usize, total: &mut u64) {
        if i == below.len() {
            *total += count_patterns(below);
            return;
        }
        for v in top[i + 1]..=top[i] {
            below[i] = v;
            rec(top, below, i + 1, total);
        }
    }
    rec(top, &mut below, 0, &mut total);
    total
}

/// `∏_{i<j} (λ_i - λ_j + j - i)/(j - i)`.
pub fn weyl_dimension(top: &[i64]) -> Rat {
    let n = top.len();
    let mut d = Rat::one();
    for i in 0..n {
        for j in i + 1..n {
            d *= &Rat::new(top[i] - top[j] + (j - i) as i64, (j - i) as i64);
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_counts_match_weyl() {
        for top in [vec![2, 1, 0], vec![3, 0], vec![2, 2, 0, -1], vec![4, 1, 1]] {
            assert_eq!(Rat::from_int(count_patterns(&top) as i64), weyl_dimension(&top));
        }
        assert_eq!(count_patterns(&[2, 1, 0]), 8);
    }
}
