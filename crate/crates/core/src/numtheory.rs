//! Elementary number theory over the integers: prime-power recognition,
//! divisor functions, Legendre and local Hilbert symbols, and the
//! auxiliary-prime search used to pin down rational quaternion algebras.
//!
//! Everything here works at "desk scale": primality is trial division and
//! factorisation is naive, which is plenty for `q` in the low thousands.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};

/// Smallest `q` for which the closed-form decomposition is available.
pub const MIN_Q: u64 = 4;

/// A prime power `q = p^m`, with `p` prime and `m >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    q: u64,
    p: u64,
    m: u32,
}

impl PrimePower {
    /// Recognises any prime power `q >= 2`, without the `q >= 4` gate applied
    /// by [`factor_prime_power`].
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        let p = smallest_prime_factor(q);
        let mut rest = q;
        let mut m = 0;
        while rest % p == 0 {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrimePower(q));
        }
        Ok(PrimePower { q, p, m })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `p = 2`.
    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    pub fn is_odd(&self) -> bool {
        !self.is_even()
    }

    /// `q mod 4`.
    pub fn residue_mod4(&self) -> u64 {
        self.q % 4
    }

    /// Whether `q` is a perfect square, i.e. `m` is even.
    pub fn is_square(&self) -> bool {
        self.m % 2 == 0
    }

    /// `δ = (-1)^((q-1)/2)` for odd `q`; `None` when `q` is even.
    pub fn delta(&self) -> Option<i64> {
        if self.is_even() {
            None
        } else if self.q % 4 == 1 {
            Some(1)
        } else {
            Some(-1)
        }
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "{}", self.q)
        } else {
            write!(f, "{} = {}^{}", self.q, self.p, self.m)
        }
    }
}

/// Validates `q` as a prime power in the supported range `q >= 4`.
pub fn factor_prime_power(q: u64) -> Result<PrimePower> {
    let pp = PrimePower::new(q)?;
    if q < MIN_Q {
        return Err(Error::QTooSmall(q));
    }
    Ok(pp)
}

/// All prime powers in `lo..=hi`, ascending, including those below `MIN_Q`.
pub fn prime_powers_between(lo: u64, hi: u64) -> Vec<PrimePower> {
    (lo.max(2)..=hi)
        .filter_map(|q| PrimePower::new(q).ok())
        .collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

fn smallest_prime_factor(n: u64) -> u64 {
    debug_assert!(n >= 2);
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// Prime factorisation as `(prime, exponent)` pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    while n > 1 {
        let p = smallest_prime_factor(n);
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        out.push((p, e));
    }
    out
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi is defined for n >= 1");
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Number of positive divisors.
pub fn tau(n: u64) -> u64 {
    assert!(n >= 1, "tau is defined for n >= 1");
    factorize(n)
        .into_iter()
        .map(|(_, e)| u64::from(e) + 1)
        .product()
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors is defined for n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = u128::from(m);
    let mut acc: u128 = 1 % m128;
    let mut b = u128::from(base % m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(a/p)` via Euler's criterion.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::PNotOddPrime(p));
    }
    let r = i128::from(a).rem_euclid(i128::from(p)) as u64;
    Ok(match pow_mod(r, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// A place of `Q`: a finite prime or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => f.write_str("∞"),
        }
    }
}

/// The integer `n` with the same square class as the nonzero rational `x`,
/// with every square factor removed.
pub fn squarefree_class(x: Rational64) -> i64 {
    assert!(*x.numer() != 0, "square class of zero is undefined");
    // n/d and n*d differ by the square d^2.
    let n = i128::from(*x.numer()) * i128::from(*x.denom());
    let sf = squarefree_part_i128(n);
    i64::try_from(sf).expect("squarefree part exceeds i64")
}

/// Squarefree part of a nonzero integer, keeping the sign.
pub fn squarefree_part(n: i64) -> i64 {
    assert!(n != 0, "squarefree part of zero is undefined");
    squarefree_part_i128(i128::from(n)) as i64
}

fn squarefree_part_i128(n: i128) -> i128 {
    let sign = n.signum();
    let mut rest = n.unsigned_abs();
    let mut out: u128 = 1;
    let mut d: u128 = 2;
    while d * d <= rest {
        let mut e = 0;
        while rest % d == 0 {
            rest /= d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    out *= rest;
    sign * out as i128
}

/// Splits `x = p^alpha * u` with `p ∤ u`.
fn split_valuation(mut x: i64, p: i64) -> (u32, i64) {
    let mut alpha = 0;
    while x % p == 0 {
        x /= p;
        alpha += 1;
    }
    (alpha, x)
}

/// `ε(u) = (u-1)/2 mod 2` for odd `u`.
fn eps(u: i64) -> u32 {
    if u.rem_euclid(4) == 1 {
        0
    } else {
        1
    }
}

/// `ω(u) = (u²-1)/8 mod 2` for odd `u`.
fn omega(u: i64) -> u32 {
    match u.rem_euclid(8) {
        1 | 7 => 0,
        _ => 1,
    }
}

/// Local Hilbert symbol `(a, b)_v` of two nonzero rationals.
///
/// Both arguments are first reduced to squarefree integer representatives of
/// their square classes; the symbol only depends on those.
///
/// # Panics
///
/// Panics if `a` or `b` is zero, or if `place` carries a non-prime.
pub fn hilbert_symbol(a: impl Into<Rational64>, b: impl Into<Rational64>, place: Place) -> i8 {
    let a = squarefree_class(a.into());
    let b = squarefree_class(b.into());
    match place {
        Place::Infinite => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) => {
            assert!(is_prime(p), "{p} is not a prime place");
            let pi = p as i64;
            let (alpha, u) = split_valuation(a, pi);
            let (beta, v) = split_valuation(b, pi);
            if p == 2 {
                let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
                if e % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else {
                let mut sign: i8 = if (alpha * beta) % 2 == 1 && p % 4 == 3 {
                    -1
                } else {
                    1
                };
                // Units at p have nonzero Legendre symbol; p is an odd prime here.
                if beta % 2 == 1 {
                    sign *= legendre_symbol(u, p).expect("odd prime");
                }
                if alpha % 2 == 1 {
                    sign *= legendre_symbol(v, p).expect("odd prime");
                }
                sign
            }
        }
    }
}

/// The places where `(a, b)_Q` ramifies. Only `∞`, `2` and primes dividing
/// `ab` can appear, so those are the only ones examined.
pub fn ramified_places(a: i64, b: i64) -> BTreeSet<Place> {
    assert!(a != 0 && b != 0, "Hilbert symbols need nonzero arguments");
    let a = squarefree_part(a);
    let b = squarefree_part(b);
    let mut candidates: BTreeSet<u64> = BTreeSet::from([2]);
    for x in [a, b] {
        candidates.extend(factorize(x.unsigned_abs()).into_iter().map(|(p, _)| p));
    }
    candidates
        .into_iter()
        .map(Place::Finite)
        .chain(std::iter::once(Place::Infinite))
        .filter(|&v| hilbert_symbol(a, b, v) == -1)
        .collect()
}

/// Smallest prime `ℓ ≡ 3 (mod 4)` that is a non-residue modulo `p`, for a
/// prime `p ≡ 1 (mod 4)`. Searches below `100·p`.
pub fn find_ell(p: u64) -> Result<u64> {
    find_ell_with_bound(p, p.saturating_mul(100))
}

pub fn find_ell_with_bound(p: u64, bound: u64) -> Result<u64> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(Error::InvalidArgument(format!(
            "find_ell needs a prime p ≡ 1 (mod 4), got {p}"
        )));
    }
    (3..bound)
        .step_by(4)
        .find(|&l| is_prime(l) && legendre_symbol(l as i64, p) == Ok(-1))
        .ok_or(Error::SearchExhausted { p, bound })
}

/// `gcd` on `u64`, re-exported for callers that only need this one helper.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}
