//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored at a modulus `N` as its coordinates in the power
//! basis `1, ζ_N, …, ζ_N^{φ(N)-1}`, i.e. as a polynomial reduced modulo the
//! `N`-th cyclotomic polynomial. Reduction modulo `Φ_N` (rather than
//! `x^N - 1`) makes the representation canonical at a fixed modulus.
//!
//! Moduli are kept small: every value starts life at the modulus of the root
//! of unity that produced it, binary operations move to the `lcm` of their
//! operands, and any result that turns out to be rational drops back to
//! modulus 1. Moduli `≡ 2 (mod 4)` are never used since `Q(ζ_{2m}) = Q(ζ_m)`
//! for odd `m`.
//!
//! The coefficient type is generic; [`crate::Cyclotomic`] fixes it to exact
//! big rationals, which is what everything downstream relies on.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};
use crate::fields::NumberField;
use crate::numtheory::{self, euler_phi, factorize, gcd, lcm, PrimePower};

/// Coefficient field for [`CyclotomicNumber`].
pub trait Scalar:
    Clone + PartialEq + fmt::Debug + Num + Neg<Output = Self> + FromPrimitive
{
}

impl<T> Scalar for T where T: Clone + PartialEq + fmt::Debug + Num + Neg<Output = T> + FromPrimitive {}

fn scalar<T: Scalar>(v: i64) -> T {
    T::from_i64(v).expect("small integers are representable")
}

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Arc<[i64]> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<[i64]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(poly) = cache.read().expect("poisoned cache").get(&n) {
        return poly.clone();
    }
    let poly: Arc<[i64]> = compute_cyclotomic_polynomial(n).into();
    cache
        .write()
        .expect("poisoned cache")
        .insert(n, poly.clone());
    poly
}

fn compute_cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // Φ_n(x) = Φ_rad(n)(x^(n/rad(n))), and for squarefree r
    // Φ_r(x) = Π_{d|r} (x^d - 1)^μ(r/d).
    let rad: u64 = factorize(n).into_iter().map(|(p, _)| p).product();
    let stretch = (n / rad) as usize;
    let divs = numtheory::divisors(rad);
    let mut poly: Vec<i128> = vec![1];
    for &d in &divs {
        if numtheory::mobius(rad / d) == 1 {
            // multiply by x^d - 1
            let d = d as usize;
            let mut next = vec![0i128; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                next[i + d] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &divs {
        if numtheory::mobius(rad / d) == -1 {
            // exact division by x^d - 1, from the top down
            let d = d as usize;
            let deg = poly.len() - 1;
            let mut quot = vec![0i128; deg - d + 1];
            let mut rem = poly.clone();
            for i in (d..=deg).rev() {
                let c = rem[i];
                if c != 0 {
                    quot[i - d] = c;
                    rem[i] -= c;
                    rem[i - d] += c;
                }
            }
            debug_assert!(rem.iter().all(|&c| c == 0));
            poly = quot;
        }
    }
    let mut out = vec![0i64; (poly.len() - 1) * stretch + 1];
    for (i, c) in poly.into_iter().enumerate() {
        out[i * stretch] = i64::try_from(c).expect("cyclotomic coefficient overflow");
    }
    out
}

/// Units of `Z/N`, ascending.
pub fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&k| gcd(k, n) == 1).collect()
}

/// A small generating set of `(Z/N)^×`.
pub fn unit_group_generators(n: u64) -> Vec<u64> {
    let all = units(n);
    let mut reached: BTreeSet<u64> = BTreeSet::from([1 % n.max(1)]);
    let mut gens = Vec::new();
    for &k in &all {
        if reached.contains(&k) {
            continue;
        }
        gens.push(k);
        // close the subgroup under multiplication by the generators so far
        let mut frontier: Vec<u64> = reached.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = x * g % n;
                if reached.insert(y) {
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

/// The automorphism `ζ_N ↦ ζ_N^k` of `Q(ζ_N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaloisElement {
    modulus: u64,
    exponent: u64,
}

impl GaloisElement {
    pub fn new(modulus: u64, k: i64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let exponent = k.rem_euclid(modulus as i64) as u64;
        if gcd(exponent, modulus) != 1 && modulus != 1 {
            return Err(Error::InvalidArgument(format!(
                "{k} is not a unit modulo {modulus}"
            )));
        }
        Ok(GaloisElement { modulus, exponent })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn compose(&self, other: &GaloisElement) -> Result<GaloisElement> {
        if self.modulus != other.modulus {
            return Err(Error::IncompatibleModulus {
                value: other.modulus,
                galois: self.modulus,
            });
        }
        Ok(GaloisElement {
            modulus: self.modulus,
            exponent: self.exponent * other.exponent % self.modulus,
        })
    }
}

/// An element of `Q(ζ_N)` with coefficients in `T`.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber<T> {
    modulus: u64,
    coeffs: Vec<T>,
}

fn normal_modulus(n: u64) -> u64 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

/// Reduces a dense polynomial in `ζ_N` modulo `Φ_N`, in place.
fn reduce_mod_phi<T: Scalar>(coeffs: &mut Vec<T>, n: u64) {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    let terms: Vec<(usize, i64)> = phi[..deg]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j, c))
        .collect();
    for i in (deg..coeffs.len()).rev() {
        if coeffs[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut coeffs[i], T::zero());
        // x^deg = -Σ φ_j x^j
        for &(j, pj) in &terms {
            let slot = &mut coeffs[i - deg + j];
            let cur = std::mem::replace(slot, T::zero());
            *slot = match pj {
                1 => cur - c.clone(),
                -1 => cur + c.clone(),
                _ => cur - c.clone() * scalar::<T>(pj),
            };
        }
    }
    coeffs.truncate(deg);
    coeffs.resize(deg, T::zero());
}

impl<T: Scalar> CyclotomicNumber<T> {
    /// Builds an element from a (not necessarily reduced) coefficient vector
    /// in powers of `ζ_N`.
    pub fn from_power_coeffs(modulus: u64, coeffs: Vec<T>) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let target = normal_modulus(modulus);
        let mut dense = if target == modulus {
            coeffs
        } else {
            // ζ_{2m} = -ζ_m^((m+1)/2) for odd m
            let m = target;
            let step = (m + 1) / 2;
            let mut dense = vec![T::zero(); m as usize];
            for (i, c) in coeffs.into_iter().enumerate() {
                let e = (i as u64 * step % m) as usize;
                let v = std::mem::replace(&mut dense[e], T::zero());
                dense[e] = if i % 2 == 0 { v + c } else { v - c };
            }
            dense
        };
        fold_mod_n(&mut dense, target);
        reduce_mod_phi(&mut dense, target);
        CyclotomicNumber {
            modulus: target,
            coeffs: dense,
        }
        .normalized()
    }

    pub fn from_scalar(c: T) -> Self {
        CyclotomicNumber {
            modulus: 1,
            coeffs: vec![c],
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_scalar(scalar(v))
    }

    pub fn zero() -> Self {
        Self::from_scalar(T::zero())
    }

    pub fn one() -> Self {
        Self::from_scalar(T::one())
    }

    /// `ζ_N^k`.
    pub fn root(n: u64, k: i64) -> Self {
        assert!(n >= 1, "modulus must be positive");
        let e = k.rem_euclid(n as i64) as u64;
        // ζ_n^e = ζ_{n/g}^{e/g}
        let g = gcd(e, n);
        let (n, e) = (n / g, e / g);
        let mut coeffs = vec![T::zero(); n as usize];
        coeffs[e as usize] = T::one();
        Self::from_power_coeffs(n, coeffs)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Power-basis coordinates at [`Self::modulus`].
    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.modulus == 1
    }

    pub fn rational_value(&self) -> Option<&T> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    fn normalized(mut self) -> Self {
        if self.modulus != 1 && self.coeffs[1..].iter().all(|c| c.is_zero()) {
            self.coeffs.truncate(1);
            self.modulus = 1;
        }
        self
    }

    /// The same element written at modulus `n`, a multiple of the current one.
    pub fn embed(&self, n: u64) -> Result<Self> {
        let n = normal_modulus(n);
        if n % self.modulus != 0 {
            return Err(Error::IncompatibleModulus {
                value: self.modulus,
                galois: n,
            });
        }
        Ok(self.embed_unchecked(n))
    }

    fn embed_unchecked(&self, n: u64) -> Self {
        if n == self.modulus {
            return self.clone();
        }
        if self.is_rational() {
            let mut coeffs = vec![T::zero(); euler_phi(n) as usize];
            coeffs[0] = self.coeffs[0].clone();
            return CyclotomicNumber { modulus: n, coeffs };
        }
        let stride = (n / self.modulus) as usize;
        let mut dense = vec![T::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            dense[i * stride] = c.clone();
        }
        reduce_mod_phi(&mut dense, n);
        CyclotomicNumber {
            modulus: n,
            coeffs: dense,
        }
    }

    /// Coefficient vectors of both operands at their common modulus.
    fn aligned(&self, other: &Self) -> (u64, Vec<T>, Vec<T>) {
        if self.modulus == other.modulus {
            return (self.modulus, self.coeffs.clone(), other.coeffs.clone());
        }
        let n = normal_modulus(lcm(self.modulus, other.modulus));
        (
            n,
            self.embed_unchecked(n).coeffs,
            other.embed_unchecked(n).coeffs,
        )
    }

    fn scale(&self, c: &T) -> Self {
        CyclotomicNumber {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
        .normalized()
    }

    /// `σ_k`, acting as `ζ_M ↦ ζ_M^k` on this element's own modulus `M`.
    /// `k` must be a unit modulo `M`.
    pub fn galois(&self, k: i64) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        let m = self.modulus;
        let k = k.rem_euclid(m as i64) as u64;
        debug_assert_eq!(gcd(k, m), 1, "σ_k needs a unit exponent");
        let mut dense = vec![T::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[(i as u64 * k % m) as usize] = c.clone();
            }
        }
        reduce_mod_phi(&mut dense, m);
        CyclotomicNumber {
            modulus: m,
            coeffs: dense,
        }
        .normalized()
    }

    /// Applies `σ`; this element must live in a subfield `Q(ζ_M)` with `M`
    /// dividing the modulus of `σ`.
    pub fn apply(&self, sigma: &GaloisElement) -> Result<Self> {
        if sigma.modulus % self.modulus != 0 {
            return Err(Error::IncompatibleModulus {
                value: self.modulus,
                galois: sigma.modulus,
            });
        }
        Ok(self.galois(sigma.exponent as i64))
    }

    /// Complex conjugation, `σ_{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(c) = self.rational_value() {
            return Some(Self::from_scalar(T::one() / c.clone()));
        }
        let phi: Vec<T> = cyclotomic_polynomial(self.modulus)
            .iter()
            .map(|&c| scalar(c))
            .collect();
        let inverse = poly_inverse_mod(&self.coeffs, &phi)?;
        Some(Self::from_power_coeffs(self.modulus, inverse))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn fold_mod_n<T: Scalar>(dense: &mut Vec<T>, n: u64) {
    let n = n as usize;
    if dense.len() > n {
        let tail: Vec<T> = dense.drain(n..).collect();
        for (i, c) in tail.into_iter().enumerate() {
            let slot = &mut dense[i % n];
            let cur = std::mem::replace(slot, T::zero());
            *slot = cur + c;
        }
    }
    dense.resize(n.max(1), T::zero());
}

fn trim<T: Scalar>(p: &mut Vec<T>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_is_zero<T: Scalar>(p: &[T]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_divrem<T: Scalar>(num: &[T], den: &[T]) -> (Vec<T>, Vec<T>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let mut den = den.to_vec();
    trim(&mut den);
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    if rem.len() < den.len() {
        return (vec![T::zero()], rem);
    }
    let mut quot = vec![T::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = rem[i].clone() / lead.clone();
        for (j, dj) in den.iter().enumerate() {
            let slot = &mut rem[i - dd + j];
            let cur = std::mem::replace(slot, T::zero());
            *slot = cur - c.clone() * dj.clone();
        }
        quot[i - dd] = c;
    }
    rem.truncate(dd.max(1));
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

fn poly_mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let slot = &mut out[i + j];
            let cur = std::mem::replace(slot, T::zero());
            *slot = cur + x.clone() * y.clone();
        }
    }
    out
}

fn poly_sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(T::zero);
            let y = b.get(i).cloned().unwrap_or_else(T::zero);
            x - y
        })
        .collect()
}

/// Inverse of `a` modulo the irreducible `m` by the extended Euclidean
/// algorithm.
fn poly_inverse_mod<T: Scalar>(a: &[T], m: &[T]) -> Option<Vec<T>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![T::zero()], vec![T::one()]);
    while !poly_is_zero(&r1) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    trim(&mut r0);
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].clone();
    Some(s0.into_iter().map(|x| x / c.clone()).collect())
}

impl<T: Scalar> PartialEq for CyclotomicNumber<T> {
    fn eq(&self, other: &Self) -> bool {
        if self.modulus == other.modulus {
            return self.coeffs == other.coeffs;
        }
        // Normalised rationals never equal an irrational element.
        if self.is_rational() || other.is_rational() {
            return false;
        }
        let (_, a, b) = self.aligned(other);
        a == b
    }
}

impl<T: Scalar> Add for &CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;

    fn add(self, rhs: Self) -> CyclotomicNumber<T> {
        if rhs.is_rational() && !self.is_rational() {
            let mut out = self.clone();
            let c = std::mem::replace(&mut out.coeffs[0], T::zero());
            out.coeffs[0] = c + rhs.coeffs[0].clone();
            return out;
        }
        if self.is_rational() && !rhs.is_rational() {
            return rhs + self;
        }
        let (n, a, b) = self.aligned(rhs);
        CyclotomicNumber {
            modulus: n,
            coeffs: a.into_iter().zip(b).map(|(x, y)| x + y).collect(),
        }
        .normalized()
    }
}

impl<T: Scalar> Sub for &CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;

    fn sub(self, rhs: Self) -> CyclotomicNumber<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;

    fn neg(self) -> CyclotomicNumber<T> {
        CyclotomicNumber {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<T: Scalar> Mul for &CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;

    fn mul(self, rhs: Self) -> CyclotomicNumber<T> {
        if let Some(c) = rhs.rational_value() {
            return self.scale(c);
        }
        if let Some(c) = self.rational_value() {
            return rhs.scale(c);
        }
        // Multiply the sparse native representations in exponent space modulo
        // the lcm and reduce once, instead of embedding both operands first.
        let n = normal_modulus(lcm(self.modulus, rhs.modulus));
        let (sa, sb) = ((n / self.modulus) as usize, (n / rhs.modulus) as usize);
        let len = n as usize;
        let mut dense = vec![T::zero(); len];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let slot = &mut dense[(i * sa + j * sb) % len];
                let cur = std::mem::replace(slot, T::zero());
                *slot = cur + x.clone() * y.clone();
            }
        }
        reduce_mod_phi(&mut dense, n);
        CyclotomicNumber {
            modulus: n,
            coeffs: dense,
        }
        .normalized()
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<T: Scalar> $tr for CyclotomicNumber<T> {
            type Output = CyclotomicNumber<T>;

            fn $method(self, rhs: Self) -> CyclotomicNumber<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<T: Scalar> Neg for CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;

    fn neg(self) -> CyclotomicNumber<T> {
        -&self
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for CyclotomicNumber<T> {
    /// Power-basis rendering such as `1/2 + 3*z5^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let root = match i {
                0 => String::new(),
                1 => format!("z{}", self.modulus),
                _ => format!("z{}^{}", self.modulus, i),
            };
            match (i, mag.as_str()) {
                (0, _) => f.write_str(&mag)?,
                (_, "1") => f.write_str(&root)?,
                _ => write!(f, "{mag}*{root}")?,
            }
        }
        Ok(())
    }
}

/// `Σ_{t=1}^{p-1} (t/p) ζ_p^t`, whose square is `(-1)^((p-1)/2)·p`.
pub fn gauss_sum<T: Scalar>(p: u64) -> Result<CyclotomicNumber<T>> {
    if p == 2 || !numtheory::is_prime(p) {
        return Err(Error::PNotOddPrime(p));
    }
    let mut coeffs = vec![T::zero(); p as usize];
    for t in 1..p {
        coeffs[t as usize] = scalar(i64::from(numtheory::legendre_symbol(t as i64, p)?));
    }
    Ok(CyclotomicNumber::from_power_coeffs(p, coeffs))
}

/// An exact square root of `δq`, `δ = (-1)^((q-1)/2)`, for odd `q`.
pub fn sqrt_delta_q<T: Scalar>(q: &PrimePower) -> Result<CyclotomicNumber<T>> {
    if q.is_even() {
        return Err(Error::InvalidArgument(format!(
            "sqrt(δq) needs odd q, got {}",
            q.q()
        )));
    }
    let p = q.p();
    let half = q.m() / 2;
    let factor = CyclotomicNumber::<T>::from_integer(p.pow(half) as i64);
    if q.is_square() {
        Ok(factor)
    } else {
        Ok(&factor * &gauss_sum::<T>(p)?)
    }
}

/// Smallest modulus hosting every character value of `SL2(q)`/`PSL2(q)`:
/// `lcm(q-1, q+1, p)` for odd `q`, `lcm(q-1, q+1)` for even `q`.
pub fn working_modulus(q: &PrimePower) -> u64 {
    let base = lcm(q.q() - 1, q.q() + 1);
    let n = if q.is_odd() { lcm(base, q.p()) } else { base };
    normal_modulus(n)
}

/// The units `k` modulo `n` for which `σ_k` fixes every value. Each value
/// must live at a modulus dividing `n`.
pub fn fixing_exponents<T: Scalar>(values: &[CyclotomicNumber<T>], n: u64) -> Result<Vec<u64>> {
    // Stabilisers are computed once per distinct modulus, then pulled back.
    let mut by_modulus: HashMap<u64, Vec<&CyclotomicNumber<T>>> = HashMap::new();
    for v in values {
        if v.is_rational() {
            continue;
        }
        if n % v.modulus != 0 {
            return Err(Error::IncompatibleModulus {
                value: v.modulus,
                galois: n,
            });
        }
        by_modulus.entry(v.modulus).or_default().push(v);
    }
    let stabilizers: Vec<(u64, BTreeSet<u64>)> = by_modulus
        .into_iter()
        .map(|(m, vals)| {
            let stab = units(m)
                .into_iter()
                .filter(|&k| vals.iter().all(|v| v.galois(k as i64) == **v))
                .collect();
            (m, stab)
        })
        .collect();
    Ok(units(n)
        .into_iter()
        .filter(|&k| stabilizers.iter().all(|(m, s)| s.contains(&(k % m))))
        .collect())
}

/// Identifies the fixed field of a subgroup `H ⊆ (Z/N)^×` among the fields
/// that occur here: `Q`, quadratic fields and real cyclotomic fields.
pub fn fixed_field(n: u64, subgroup: &[u64]) -> Result<NumberField> {
    let n = normal_modulus(n);
    let h: BTreeSet<u64> = subgroup.iter().map(|&k| k % n).collect();
    let all = units(n);
    if all.len() % h.len().max(1) != 0 || !h.iter().all(|k| all.binary_search(k).is_ok()) {
        return Err(Error::InvalidArgument(format!(
            "not a subgroup of (Z/{n})^×"
        )));
    }
    let degree = (all.len() / h.len()) as u64;
    if degree == 1 {
        return Ok(NumberField::Rationals);
    }
    let conductor = numtheory::divisors(n)
        .into_iter()
        .find(|&c| {
            all.iter()
                .filter(|&&k| k % c == 1 % c)
                .all(|k| h.contains(k))
        })
        .expect("n itself always qualifies");
    let has_minus_one = h.contains(&(n - 1));
    let plus_minus_one = h
        .iter()
        .all(|&k| k % conductor == 1 % conductor || k % conductor == conductor - 1);
    if has_minus_one && plus_minus_one && conductor >= 3 {
        return NumberField::RealCyclotomic(conductor).canonical();
    }
    if degree == 2 {
        let d = quadratic_from_conductor(conductor, has_minus_one).ok_or_else(|| {
            Error::MalformedDescriptor(format!(
                "no quadratic field of conductor {conductor} with the observed signature"
            ))
        })?;
        return NumberField::Quadratic(d).canonical();
    }
    Err(Error::MalformedDescriptor(format!(
        "fixed field of degree {degree} and conductor {conductor} is not quadratic or real cyclotomic"
    )))
}

/// The squarefree `d` with `Q(√d)` of conductor `c`, real iff `real`.
fn quadratic_from_conductor(c: u64, real: bool) -> Option<i64> {
    let c = c as i64;
    let d = if c % 2 == 1 {
        if c % 4 == 1 {
            c
        } else {
            -c
        }
    } else if c % 8 == 0 {
        if real {
            c / 4
        } else {
            -c / 4
        }
    } else if c % 4 == 0 {
        let s = c / 4;
        if s % 4 == 3 {
            s
        } else {
            -s
        }
    } else {
        return None;
    };
    (numtheory::squarefree_part(d) == d && (d > 0) == real).then_some(d)
}

/// Convenience for the exact instantiation.
pub type ExactCyclotomic = CyclotomicNumber<BigRational>;

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type C = ExactCyclotomic;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(v: i64) -> C {
        C::from_integer(v)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(&*cyclotomic_polynomial(1), &[-1, 1]);
        assert_eq!(&*cyclotomic_polynomial(2), &[1, 1]);
        assert_eq!(&*cyclotomic_polynomial(5), &[1, 1, 1, 1, 1]);
        assert_eq!(&*cyclotomic_polynomial(8), &[1, 0, 0, 0, 1]);
        assert_eq!(&*cyclotomic_polynomial(12), &[1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient outside {-1, 0, 1}.
        assert!(cyclotomic_polynomial(105).contains(&-2));
        for n in 1..200 {
            assert_eq!(cyclotomic_polynomial(n).len() as u64 - 1, euler_phi(n));
        }
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(C::root(8, 4), int(-1));
        assert_eq!(C::root(5, 0), int(1));
        assert_eq!(&C::root(3, 1) + &C::root(3, 2), int(-1));
        assert_eq!(&C::root(8, 1) * &C::root(8, 3), int(-1));
        // ζ_6 = -ζ_3^2, stored at modulus 3
        assert_eq!(C::root(6, 1).modulus(), 3);
        assert_eq!(C::root(6, 1), -C::root(3, 2));
        assert_eq!(C::root(6, 1).pow(6), int(1));
        assert_eq!(C::root(12, 3), C::root(4, 1));
        assert_eq!(C::root(10, 5), int(-1));
    }

    #[test]
    fn real_parts_of_fifth_roots() {
        let a = &C::root(5, 1) + &C::root(5, -1);
        let b = &C::root(5, 2) + &C::root(5, -2);
        assert_eq!(&a + &b, int(-1));
        assert_eq!(&a * &b, int(-1));
        assert_eq!(a.galois(2), b);
        assert_eq!(a.conj(), a);
    }

    #[test]
    fn mixed_moduli_embed_through_lcm() {
        let i = C::root(4, 1);
        let w = C::root(3, 1);
        let prod = &i * &w;
        assert_eq!(prod.modulus(), 12);
        assert_eq!(prod, C::root(12, 7));
        let half = C::from_scalar(q(1, 2));
        assert_eq!(half.galois(5), half);
        assert_eq!(i.embed(8).unwrap(), C::root(8, 2));
        assert!(matches!(i.embed(6), Err(Error::IncompatibleModulus { .. })));
    }

    #[test]
    fn galois_apply_checks_modulus() {
        let x = &C::root(5, 1) + &C::root(5, -1);
        let s = GaloisElement::new(5, 2).unwrap();
        assert_eq!(x.apply(&s).unwrap(), &C::root(5, 2) + &C::root(5, 3));
        let wide = GaloisElement::new(15, 2).unwrap();
        assert_eq!(x.apply(&wide).unwrap(), x.apply(&s).unwrap());
        let bad = GaloisElement::new(7, 3).unwrap();
        assert_eq!(
            x.apply(&bad),
            Err(Error::IncompatibleModulus {
                value: 5,
                galois: 7
            })
        );
        assert!(GaloisElement::new(12, 3).is_err());
        assert_eq!(
            GaloisElement::new(12, 5)
                .unwrap()
                .compose(&GaloisElement::new(12, 7).unwrap())
                .unwrap()
                .exponent(),
            11
        );
    }

    #[test]
    fn gauss_sums_square_to_signed_p() {
        for p in (3..100).filter(|&p| numtheory::is_prime(p)) {
            let g = gauss_sum::<BigRational>(p).unwrap();
            let expected = if p % 4 == 1 { p as i64 } else { -(p as i64) };
            assert_eq!(&g * &g, int(expected), "p = {p}");
        }
        assert_eq!(
            gauss_sum::<BigRational>(3).unwrap(),
            &C::root(3, 1) - &C::root(3, 2)
        );
        assert_eq!(gauss_sum::<BigRational>(9), Err(Error::PNotOddPrime(9)));
    }

    #[test]
    fn sqrt_delta_q_examples() {
        let s7 = sqrt_delta_q::<BigRational>(&PrimePower::new(7).unwrap()).unwrap();
        assert_eq!(&s7 * &s7, int(-7));
        let s9 = sqrt_delta_q::<BigRational>(&PrimePower::new(9).unwrap()).unwrap();
        assert_eq!(s9, int(3));
        let s27 = sqrt_delta_q::<BigRational>(&PrimePower::new(27).unwrap()).unwrap();
        assert_eq!(&s27 * &s27, int(-27));
        assert!(sqrt_delta_q::<BigRational>(&PrimePower::new(8).unwrap()).is_err());
    }

    #[test]
    fn fixing_exponent_examples() {
        let x = &C::root(5, 1) + &C::root(5, -1);
        assert_eq!(fixing_exponents(&[x], 5).unwrap(), vec![1, 4]);
        let half = C::from_scalar(q(1, 2));
        assert_eq!(fixing_exponents(&[half], 12).unwrap(), units(12));
        assert_eq!(fixing_exponents(&[C::root(8, 1)], 8).unwrap(), vec![1]);
        assert!(fixing_exponents(&[C::root(7, 1)], 12).is_err());
    }

    #[test]
    fn fixed_fields_are_identified() {
        let n = 840;
        let field_of =
            |x: &C| fixed_field(n, &fixing_exponents(std::slice::from_ref(x), n).unwrap()).unwrap();
        assert_eq!(field_of(&int(3)), NumberField::Rationals);
        let cos5 = &C::root(5, 1) + &C::root(5, -1);
        assert_eq!(field_of(&cos5), NumberField::Quadratic(5));
        let cos7 = &C::root(7, 1) + &C::root(7, -1);
        assert_eq!(field_of(&cos7), NumberField::RealCyclotomic(7));
        let s7 = sqrt_delta_q::<BigRational>(&PrimePower::new(7).unwrap()).unwrap();
        assert_eq!(field_of(&s7), NumberField::Quadratic(-7));
        assert_eq!(field_of(&C::root(4, 1)), NumberField::Quadratic(-1));
        let cos8 = &C::root(8, 1) + &C::root(8, -1);
        assert_eq!(field_of(&cos8), NumberField::Quadratic(2));
        let isqrt2 = &C::root(8, 1) + &C::root(8, 3);
        assert_eq!(field_of(&isqrt2), NumberField::Quadratic(-2));
        let cos24 = &C::root(24, 1) + &C::root(24, -1);
        assert_eq!(field_of(&cos24), NumberField::RealCyclotomic(24));
    }

    #[test]
    fn unit_group_generators_generate() {
        for n in [5u64, 8, 12, 48, 840] {
            let gens = unit_group_generators(n);
            let mut reached = BTreeSet::from([1u64]);
            let mut frontier = vec![1u64];
            while let Some(x) = frontier.pop() {
                for g in &gens {
                    if reached.insert(x * g % n) {
                        frontier.push(x * g % n);
                    }
                }
            }
            assert_eq!(reached.len() as u64, euler_phi(n), "n = {n}");
        }
    }

    #[test]
    fn floating_point_coefficients_track_the_exact_identities() {
        // 1 + ζ5 + ... + ζ5^4 = 0 also holds with f64 coefficients.
        let s = (0..5).fold(CyclotomicNumber::<f64>::zero(), |acc, k| {
            &acc + &CyclotomicNumber::root(5, k)
        });
        assert!(s.is_zero());
        let w = CyclotomicNumber::<f64>::root(7, 3);
        let prod = &w * &w.inv().unwrap();
        assert!((prod.coefficients()[0] - 1.0).abs() < 1e-12);
    }

    fn small_element(modulus: u64) -> impl Strategy<Value = C> {
        let phi = euler_phi(modulus) as usize;
        prop::collection::vec((-4i64..=4, 1i64..=3), phi).prop_map(move |cs| {
            C::from_power_coeffs(modulus, cs.into_iter().map(|(n, d)| q(n, d)).collect())
        })
    }

    fn any_element() -> impl Strategy<Value = C> {
        prop::sample::select(vec![3u64, 4, 5, 7, 8, 9, 12, 15]).prop_flat_map(small_element)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in any_element(), b in any_element(), c in any_element()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), int(1));
            }
        }

        #[test]
        fn galois_is_a_ring_homomorphism(a in small_element(15), b in small_element(15), k in prop::sample::select(units(15))) {
            let k = k as i64;
            prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
            prop_assert_eq!((&a + &b).galois(k), &a.galois(k) + &b.galois(k));
        }

        #[test]
        fn galois_permutes_primitive_roots(n in prop::sample::select(vec![5u64, 8, 9, 12, 20]), k in 0usize..8) {
            let us = units(n);
            let k = us[k % us.len()] as i64;
            let images: BTreeSet<i64> = us
                .iter()
                .map(|&e| {
                    let image = C::root(n, e as i64).galois(k);
                    us.iter().map(|&f| f as i64).find(|&f| C::root(n, f) == image).expect("primitive image")
                })
                .collect();
            prop_assert_eq!(images.len(), us.len());
        }

        #[test]
        fn fixing_exponents_form_a_subgroup(a in small_element(12)) {
            let h = fixing_exponents(&[a], 24).unwrap();
            prop_assert!(h.contains(&1));
            for &x in &h {
                for &y in &h {
                    prop_assert!(h.contains(&(x * y % 24)));
                }
            }
        }

        #[test]
        fn embedding_preserves_equality(a in small_element(12), b in small_element(12)) {
            let (ea, eb) = (a.embed(24).unwrap(), b.embed(24).unwrap());
            prop_assert_eq!(a == b, ea == eb);
            prop_assert_eq!(&ea * &eb, &a * &b);
        }
    }
}
