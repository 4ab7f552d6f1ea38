//! q-numbers, Gaussian binomials and cyclotomic reduction.
//!
//! A primitive N-th root of unity is modelled algebraically as the class of
//! `q` in ℤ[q]/Φ_N(q). "Vanishes at a primitive root" then becomes a
//! decidable remainder test, and no division by `[k]_q` is ever needed.

mod qpoly;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

pub use qpoly::QPoly;

use crate::{Error, Result};

/// `[k]_q = 1 + q + ... + q^(k-1)`; zero for `k = 0`.
pub fn q_number(k: usize) -> QPoly {
    QPoly::from_i64s(&vec![1; k])
}

/// `[k]_q! = [1]_q [2]_q ... [k]_q`.
pub fn q_factorial(k: usize) -> QPoly {
    (1..=k).map(q_number).product()
}

/// Gaussian binomial coefficient, built row by row from
/// `C(n, k) = C(n-1, k-1) + q^k C(n-1, k)` so that no division is involved.
///
/// Out-of-range `k` gives zero.
pub fn q_binomial(n: usize, k: i64) -> QPoly {
    if k < 0 || k as u64 > n as u64 {
        return QPoly::zero();
    }
    let k = k as usize;
    let mut row = vec![QPoly::one()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let left = if j > 0 {
                row[j - 1].clone()
            } else {
                QPoly::zero()
            };
            let right = row.get(j).map(|c| c.shift(j)).unwrap_or_default();
            next.push(left + right);
        }
        row = next;
    }
    row.swap_remove(k)
}

/// The factorial quotient `[n]_q! / ([n-k]_q! [k]_q!)` by exact polynomial
/// division. Kept as an independent check on [`q_binomial`].
pub fn q_binomial_by_division(n: usize, k: usize) -> Result<QPoly> {
    if k > n {
        return Ok(QPoly::zero());
    }
    let denominator = &q_factorial(n - k) * &q_factorial(k);
    q_factorial(n).exact_div(&denominator)
}

pub fn divisors(n: usize) -> Vec<usize> {
    let mut divs: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    divs.sort_unstable();
    divs
}

/// `q^n - 1`.
pub fn q_pow_minus_one(n: usize) -> QPoly {
    &QPoly::q_pow(n) - &QPoly::one()
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<usize, QPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, QPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Φ_n(q), obtained by dividing `q^n - 1` by Φ_d for every proper divisor d.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn cyclotomic(n: usize) -> QPoly {
    assert!(n >= 1, "cyclotomic polynomial index must be positive");
    if let Some(phi) = cyclotomic_cache().lock().unwrap().get(&n) {
        return phi.clone();
    }
    let mut phi = q_pow_minus_one(n);
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        phi = phi
            .exact_div(&cyclotomic(d))
            .expect("cyclotomic factors divide q^n - 1 exactly");
    }
    cyclotomic_cache().lock().unwrap().insert(n, phi.clone());
    phi
}

/// Euler's totient, by trial division.
pub fn totient(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// The quotient ring ℤ[q]/Φ_n(q) with `n >= 2`, where `q` behaves as a
/// primitive n-th root of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloModulus {
    n: usize,
    phi: QPoly,
}

impl CycloModulus {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::ModulusTooSmall(n));
        }
        Ok(CycloModulus {
            n,
            phi: cyclotomic(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phi(&self) -> &QPoly {
        &self.phi
    }

    /// Remainder modulo Φ_n; integral because Φ_n is monic.
    pub fn reduce(&self, p: &QPoly) -> QPoly {
        p.div_rem(&self.phi)
            .expect("division by a monic polynomial stays integral")
            .1
    }
}

pub fn reduce(p: &QPoly, m: &CycloModulus) -> QPoly {
    m.reduce(p)
}
