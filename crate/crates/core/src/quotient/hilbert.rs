//! Local Hilbert symbols `(a, b)_v` for nonzero integers.

use std::fmt;

use crate::error::{HyperError, Result};
use crate::rational::{is_prime, prime_factors};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

fn split(a: i64, p: i64) -> (u32, i64) {
    let mut a = a;
    let mut k = 0;
    while a % p == 0 {
        a /= p;
        k += 1;
    }
    (k, a)
}

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Legendre symbol of a unit `u` modulo an odd prime, by Euler's criterion.
fn legendre(u: i64, p: u64) -> i8 {
    let r = u.rem_euclid(p as i64) as u128;
    if pow_mod(r, (p as u128 - 1) / 2, p as u128) == 1 {
        1
    } else {
        -1
    }
}

/// `(a, b)_v`: `+1` iff `z^2 = a x^2 + b y^2` has a nontrivial solution over
/// the completion at `v`.
pub fn hilbert_symbol(a: i64, b: i64, place: Place) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(HyperError::InvalidArgument("Hilbert symbol needs nonzero arguments".into()));
    }
    match place {
        Place::Infinity => Ok(if a < 0 && b < 0 { -1 } else { 1 }),
        Place::Prime(p) if !is_prime(p) => Err(HyperError::NotPrime(p)),
        Place::Prime(2) => {
            let (alpha, u) = split(a, 2);
            let (beta, v) = split(b, 2);
            // eps(u) = (u-1)/2 mod 2, omega(u) = (u^2-1)/8 mod 2
            let eps = |u: i64| u32::from(u.rem_euclid(4) == 3);
            let omega = |u: i64| u32::from(matches!(u.rem_euclid(8), 3 | 5));
            let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Prime(p) => {
            let (alpha, u) = split(a, p as i64);
            let (beta, v) = split(b, p as i64);
            let eps = ((p - 1) / 2 % 2) as u32;
            let mut s: i8 = if (alpha * beta * eps) % 2 == 0 { 1 } else { -1 };
            if beta % 2 == 1 {
                s *= legendre(u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(v, p);
            }
            Ok(s)
        }
    }
}

/// The places where `(a, b)_v` can be `-1`: infinity, 2 and the odd primes dividing `ab`.
pub fn hilbert_places(a: i64, b: i64) -> Vec<Place> {
    let mut primes = prime_factors(a.unsigned_abs());
    primes.extend(prime_factors(b.unsigned_abs()));
    primes.push(2);
    primes.sort_unstable();
    primes.dedup();
    std::iter::once(Place::Infinity).chain(primes.into_iter().map(Place::Prime)).collect()
}

/// Product of `(a, b)_v` over [`hilbert_places`]; equals `+1` for all `a, b`.
pub fn hilbert_product(a: i64, b: i64) -> Result<i8> {
    hilbert_places(a, b).into_iter().try_fold(1i8, |acc, v| Ok(acc * hilbert_symbol(a, b, v)?))
}
