//! Cyclotomic polynomials and the substitution rules used to keep
//! denominators factored.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Prime factors with multiplicity, ascending.
pub fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn totient(m: u32) -> u32 {
    let mut ps = prime_factors(m);
    ps.dedup();
    ps.iter().fold(m, |acc, p| acc / p * (p - 1))
}

/// Φ_m(1): zero for m = 1, p for prime powers p^k, otherwise 1.
pub fn value_at_one(m: u32) -> i64 {
    if m == 1 {
        return 0;
    }
    let mut ps = prime_factors(m);
    ps.dedup();
    if ps.len() == 1 {
        ps[0] as i64
    } else {
        1
    }
}

/// Coefficients of Φ_m, constant term first.
pub fn cyclotomic(m: u32) -> Arc<Vec<i64>> {
    assert!(m >= 1);
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&m) {
        return c.clone();
    }
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m) {
        if d == m {
            continue;
        }
        num = div_monic(&num, &cyclotomic(d));
    }
    let out = Arc::new(num);
    cache.lock().unwrap().insert(m, out.clone());
    out
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, dc) in den.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Orders m' with Φ_m(u^t) = ∏ Φ_{m'}(u).
pub fn refine_orders(m: u32, t: u32) -> Vec<u32> {
    let mut orders = vec![m];
    for p in prime_factors(t) {
        let mut next = Vec::with_capacity(orders.len() * 2);
        for o in orders {
            next.push(o * p);
            if o % p != 0 {
                next.push(o);
            }
        }
        orders = next;
    }
    orders
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A prime `p ≡ 1 (mod m)` above 2^30 with the powers `ζ^0, …, ζ^(m-1)`
/// of a primitive `m`-th root of unity modulo `p`.
pub struct RootTable {
    pub p: u64,
    pub powers: Vec<u64>,
}

pub fn root_mod_prime(m: u32) -> Arc<RootTable> {
    thread_local! {
        static CACHE: RefCell<HashMap<u32, Arc<RootTable>>> = RefCell::new(HashMap::new());
    }
    if let Some(r) = CACHE.with(|c| c.borrow().get(&m).cloned()) {
        return r;
    }
    let m64 = m as u64;
    let mut p = (1u64 << 30) / m64 * m64 + 1;
    while !is_prime(p) {
        p += m64;
    }
    let mut qs = prime_factors(m);
    qs.dedup();
    let zeta = (2..)
        .map(|a| pow_mod(a, (p - 1) / m64, p))
        .find(|&z| qs.iter().all(|&q| pow_mod(z, m64 / q as u64, p) != 1))
        .expect("a primitive root exists");
    let powers = std::iter::successors(Some(1u64), |&x| Some(mul_mod(x, zeta, p))).take(m as usize).collect();
    let table = Arc::new(RootTable { p, powers });
    CACHE.with(|c| c.borrow_mut().insert(m, table.clone()));
    table
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic(1), vec![-1, 1]);
        assert_eq!(*cyclotomic(2), vec![1, 1]);
        assert_eq!(*cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12).len() as u32 - 1, totient(12));
    }

    #[test]
    fn refinement_degrees_add_up() {
        for m in 1..20 {
            for t in 1..13 {
                let deg: u32 = refine_orders(m, t).iter().map(|&o| totient(o)).sum();
                assert_eq!(deg, totient(m) * t, "m={m} t={t}");
            }
        }
    }

    #[test]
    fn value_at_one_matches_polynomial() {
        for m in 1..40 {
            let s: i64 = cyclotomic(m).iter().sum();
            assert_eq!(s, value_at_one(m));
        }
    }

    #[test]
    fn roots_are_primitive() {
        for m in [1u32, 2, 6, 12, 22, 66] {
            let t = root_mod_prime(m);
            let (p, z) = (t.p, t.powers[1 % m as usize]);
            assert_eq!((p - 1) % m as u64, 0);
            assert_eq!(pow_mod(z, m as u64, p), 1);
            let phi: u64 = cyclotomic(m).iter().rev().fold(0u64, |acc, &c| {
                let c = c.rem_euclid(p as i64) as u64;
                (mul_mod(acc, z, p) + c) % p
            });
            assert_eq!(phi, 0, "m = {m}");
        }
    }
}
