//! Brute-force ground truth: arithmetic in `GF(p^m)`, explicit enumeration of
//! `SL2(q)` and `PSL2(q)`, and conjugacy classes computed as orbits.
//!
//! Field elements are `u32` codes whose base-`p` digits are the polynomial
//! coefficients (constant term first). Matrices pack four codes into a `u64`
//! so that comparing the packed words is lexicographic comparison of
//! `(a, b, c, d)`.

use std::collections::{BTreeMap, HashMap};

use crate::chartab::{class_list, ClassTag};
use crate::decomposition::GroupKind;
use crate::error::{Error, Result};
use crate::numtheory::{gcd, is_prime, PrimePower};

/// Largest field that [`gf_construct`] will build.
pub const FIELD_BOUND: u64 = 1 << 14;

/// Largest group that [`enumerate_group`] will list.
pub const GROUP_BOUND: u64 = 200_000;

/// `GF(p^m) = F_p[x]/(f)`, with log/exp tables for multiplication.
#[derive(Debug, Clone)]
pub struct GaloisField {
    p: u32,
    m: u32,
    size: u32,
    /// Monic modulus, constant term first, leading 1 included.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Builds `GF(p^m)` over the lexicographically smallest monic irreducible
/// polynomial of degree `m`.
pub fn gf_construct(p: u64, m: u32) -> Result<GaloisField> {
    let (p32, _) = check_field_params(p, m)?;
    let f = irreducible_polynomials(p, m)?
        .into_iter()
        .next()
        .expect("irreducible polynomials exist in every degree");
    build(p32, m, f)
}

fn check_field_params(p: u64, m: u32) -> Result<(u32, u64)> {
    if !is_prime(p) || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "GF({p}^{m}) is not a field order"
        )));
    }
    let size = p.checked_pow(m).unwrap_or(u64::MAX);
    if size > FIELD_BOUND {
        return Err(Error::BoundExceeded {
            what: "field size",
            value: size,
            bound: FIELD_BOUND,
        });
    }
    Ok((p as u32, size))
}

/// All monic irreducible polynomials of degree `m` over `F_p`, in
/// lexicographic order (highest non-leading coefficient most significant).
/// For `m = 1` only `x` is returned, giving the prime field itself.
pub fn irreducible_polynomials(p: u64, m: u32) -> Result<Vec<Vec<u32>>> {
    let (p, size) = check_field_params(p, m)?;
    if m == 1 {
        return Ok(vec![vec![0, 1]]);
    }
    Ok((0..size as u32)
        .map(|code| {
            let mut f = digits(code, p, m);
            f.push(1);
            f
        })
        .filter(|f| is_irreducible(f, p))
        .collect())
}

impl GaloisField {
    /// `GF(p^m)` over a caller-chosen monic irreducible `f` (constant term
    /// first, leading 1 included).
    pub fn with_polynomial(p: u64, modulus: &[u32]) -> Result<GaloisField> {
        let m = modulus.len().saturating_sub(1) as u32;
        let (p32, _) = check_field_params(p, m)?;
        let monic = modulus.last() == Some(&1) && modulus.iter().all(|&c| c < p32);
        if !monic || (m > 1 && !is_irreducible(modulus, p32)) {
            return Err(Error::InvalidArgument(format!(
                "{modulus:?} is not a monic irreducible polynomial over F_{p}"
            )));
        }
        build(p32, m, modulus.to_vec())
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> u64 {
        self.size as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Polynomial coefficients of `x`, constant term first.
    pub fn coefficients(&self, x: u32) -> Vec<u32> {
        digits(x, self.p, self.m)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p + c % self.p)
    }

    /// The class of `x^i`, an `F_p`-basis element.
    pub fn basis(&self, i: u32) -> u32 {
        self.p.pow(i)
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    pub fn add(&self, x: u32, y: u32) -> u32 {
        if self.p == 2 {
            return x ^ y;
        }
        let (mut x, mut y, mut out, mut place) = (x, y, 0, 1);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, x: u32) -> u32 {
        if self.p == 2 {
            return x;
        }
        let (mut x, mut out, mut place) = (x, 0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let e = self.log[x as usize] + self.log[y as usize];
        self.exp[(e % (self.size - 1)) as usize]
    }

    /// `None` for zero.
    pub fn inv(&self, x: u32) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let n = self.size - 1;
        Some(self.exp[((n - self.log[x as usize]) % n) as usize])
    }

    /// A fixed generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        self.exp[1 % (self.size as usize - 1)]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size
    }
}

fn digits(mut code: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

/// Remainder of `a` modulo the monic `f`, coefficients mod `p`.
fn poly_rem(mut a: Vec<u32>, f: &[u32], p: u32) -> Vec<u32> {
    let df = f.len() - 1;
    while a.len() > df {
        let lead = a.pop().expect("nonempty");
        if lead != 0 {
            let shift = a.len() - df;
            for (i, &c) in f[..df].iter().enumerate() {
                let t = &mut a[shift + i];
                *t = (*t + (p - lead) * c % p) % p;
            }
        }
    }
    a
}

fn poly_mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(prod, f, p);
    r.resize(f.len() - 1, 0);
    r
}

/// No monic factor of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() as u32 - 1;
    (1..=deg / 2).all(|d| {
        (0..p.pow(d)).all(|code| {
            let mut g = digits(code, p, d);
            g.push(1);
            poly_rem(f.to_vec(), &g, p).iter().any(|&c| c != 0)
        })
    })
}

fn build(p: u32, m: u32, modulus: Vec<u32>) -> Result<GaloisField> {
    let size = p.pow(m);
    let n = size - 1;
    let encode = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &d| acc * p + d);
    // In GF(2) the only unit is 1; elsewhere 1 never generates.
    let candidates = if size == 2 { 1..2 } else { 2..size };
    for g in candidates {
        let base = digits(g, p, m);
        let mut exp = Vec::with_capacity(n as usize);
        let mut cur = digits(1, p, m);
        let mut primitive = true;
        for k in 0..n {
            let code = encode(&cur);
            if code == 1 && k > 0 {
                primitive = false;
                break;
            }
            exp.push(code);
            cur = poly_mul_mod(&cur, &base, &modulus, p);
        }
        if !primitive {
            continue;
        }
        let mut log = vec![0u32; size as usize];
        for (k, &c) in exp.iter().enumerate() {
            log[c as usize] = k as u32;
        }
        return Ok(GaloisField {
            p,
            m,
            size,
            modulus,
            exp,
            log,
        });
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

/// A 2×2 matrix over a [`GaloisField`], packed as `a:b:c:d` in 16-bit lanes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2(u64);

impl Mat2 {
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Mat2 {
        Mat2((a as u64) << 48 | (b as u64) << 32 | (c as u64) << 16 | d as u64)
    }

    pub fn identity() -> Mat2 {
        Mat2::new(1, 0, 0, 1)
    }

    pub fn entries(self) -> [u32; 4] {
        let w = self.0;
        [
            (w >> 48) as u32 & 0xffff,
            (w >> 32) as u32 & 0xffff,
            (w >> 16) as u32 & 0xffff,
            w as u32 & 0xffff,
        ]
    }

    pub fn packed(self) -> u64 {
        self.0
    }

    pub fn mul(self, rhs: Mat2, f: &GaloisField) -> Mat2 {
        let [a, b, c, d] = self.entries();
        let [e, g, h, k] = rhs.entries();
        Mat2::new(
            f.add(f.mul(a, e), f.mul(b, h)),
            f.add(f.mul(a, g), f.mul(b, k)),
            f.add(f.mul(c, e), f.mul(d, h)),
            f.add(f.mul(c, g), f.mul(d, k)),
        )
    }

    pub fn det(self, f: &GaloisField) -> u32 {
        let [a, b, c, d] = self.entries();
        f.sub(f.mul(a, d), f.mul(b, c))
    }

    pub fn trace(self, f: &GaloisField) -> u32 {
        let [a, _, _, d] = self.entries();
        f.add(a, d)
    }

    pub fn neg(self, f: &GaloisField) -> Mat2 {
        let [a, b, c, d] = self.entries();
        Mat2::new(f.neg(a), f.neg(b), f.neg(c), f.neg(d))
    }

    /// Inverse of a determinant-one matrix.
    pub fn inv_sl(self, f: &GaloisField) -> Mat2 {
        let [a, b, c, d] = self.entries();
        Mat2::new(d, f.neg(b), f.neg(c), a)
    }

    /// The lexicographically smaller of `±M`.
    pub fn projective(self, f: &GaloisField) -> Mat2 {
        self.min(self.neg(f))
    }
}

fn order_check(kind: GroupKind, q: &PrimePower) -> Result<u64> {
    let order = kind.order(q);
    if order > GROUP_BOUND {
        return Err(Error::BoundExceeded {
            what: "group order",
            value: order,
            bound: GROUP_BOUND,
        });
    }
    Ok(order)
}

/// The default field for `q`.
pub fn field_for(q: &PrimePower) -> Result<GaloisField> {
    gf_construct(q.p(), q.m())
}

/// Lists `SL2(q)`, or one canonical representative per coset of `±I` for
/// `PSL2(q)`, sorted.
pub fn enumerate_group(kind: GroupKind, q_raw: u64) -> Result<Vec<Mat2>> {
    let q = PrimePower::new(q_raw)?;
    order_check(kind, &q)?;
    enumerate_group_in(&field_for(&q)?, kind)
}

/// As [`enumerate_group`], over an explicit field.
pub fn enumerate_group_in(f: &GaloisField, kind: GroupKind) -> Result<Vec<Mat2>> {
    let q = PrimePower::new(f.size())?;
    let kind = kind.normalized(&q);
    order_check(kind, &q)?;
    let mut out = Vec::with_capacity(kind.order(&q) as usize);
    for a in f.elements() {
        match f.inv(a) {
            Some(ai) => {
                for b in f.elements() {
                    for c in f.elements() {
                        let d = f.mul(f.add(1, f.mul(b, c)), ai);
                        out.push(Mat2::new(a, b, c, d));
                    }
                }
            }
            None => {
                for b in f.elements().skip(1) {
                    let c = f.neg(f.inv(b).expect("nonzero"));
                    for d in f.elements() {
                        out.push(Mat2::new(a, b, c, d));
                    }
                }
            }
        }
    }
    if kind == GroupKind::PSL2 && q.is_odd() {
        out.retain(|&x| x.projective(f) == x);
    }
    out.sort();
    Ok(out)
}

/// One conjugacy class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInfo {
    pub representative: Mat2,
    pub size: u64,
    /// Element order in the group (in `PSL2`, order modulo `±I`).
    pub element_order: u64,
}

/// Conjugacy classes of one group, by orbit partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassData {
    pub kind: GroupKind,
    pub q: PrimePower,
    pub order: u64,
    pub classes: Vec<ClassInfo>,
}

impl ClassData {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class sizes, ascending.
    pub fn size_multiset(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.classes.iter().map(|c| c.size).collect();
        v.sort();
        v
    }

    /// `(size, element order)` pairs, ascending.
    pub fn signature(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = self
            .classes
            .iter()
            .map(|c| (c.size, c.element_order))
            .collect();
        v.sort();
        v
    }

    /// The class equation, plus every size dividing the order.
    pub fn class_equation_holds(&self) -> bool {
        self.classes.iter().map(|c| c.size).sum::<u64>() == self.order
            && self.classes.iter().all(|c| self.order % c.size == 0)
    }
}

pub fn conjugacy_classes(kind: GroupKind, q_raw: u64) -> Result<ClassData> {
    let q = PrimePower::new(q_raw)?;
    order_check(kind, &q)?;
    conjugacy_classes_in(&field_for(&q)?, kind)
}

/// As [`conjugacy_classes`], over an explicit field.
pub fn conjugacy_classes_in(f: &GaloisField, kind: GroupKind) -> Result<ClassData> {
    let q = PrimePower::new(f.size())?;
    let kind = kind.normalized(&q);
    let elements = enumerate_group_in(f, kind)?;
    let projective = kind == GroupKind::PSL2 && q.is_odd();
    let canon = |x: Mat2| if projective { x.projective(f) } else { x };
    let index: HashMap<Mat2, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();

    // Elementary matrices over an F_p-basis generate SL2(q).
    let gens: Vec<(Mat2, Mat2)> = (0..f.m())
        .flat_map(|i| {
            let t = f.basis(i);
            [Mat2::new(1, t, 0, 1), Mat2::new(1, 0, t, 1)]
        })
        .map(|g| (g, g.inv_sl(f)))
        .collect();

    let mut seen = vec![false; elements.len()];
    let mut classes = Vec::new();
    for start in 0..elements.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut size = 1u64;
        let mut stack = vec![elements[start]];
        while let Some(x) = stack.pop() {
            for &(g, gi) in &gens {
                let y = canon(g.mul(x, f).mul(gi, f));
                let k = index[&y];
                if !seen[k] {
                    seen[k] = true;
                    size += 1;
                    stack.push(y);
                }
            }
        }
        let representative = elements[start];
        classes.push(ClassInfo {
            representative,
            size,
            element_order: element_order(representative, f, projective),
        });
    }
    Ok(ClassData {
        kind,
        q,
        order: elements.len() as u64,
        classes,
    })
}

fn element_order(x: Mat2, f: &GaloisField, projective: bool) -> u64 {
    let one = Mat2::identity();
    let minus_one = one.neg(f);
    let mut y = x;
    let mut k = 1;
    while y != one && !(projective && y == minus_one) {
        y = y.mul(x, f);
        k += 1;
    }
    k
}

/// Number of conjugacy classes: `q+1` (even `q`), `(q+5)/2` (odd `PSL2`),
/// `q+4` (odd `SL2`).
pub fn expected_class_count(kind: GroupKind, q: &PrimePower) -> u64 {
    let qv = q.q();
    match kind.normalized(q) {
        _ if q.is_even() => qv + 1,
        GroupKind::PSL2 => (qv + 5) / 2,
        GroupKind::SL2 => qv + 4,
    }
}

/// Element order predicted for a class family of the character tables.
fn predicted_order(kind: GroupKind, q: &PrimePower, tag: ClassTag) -> u64 {
    let qv = q.q();
    let p = q.p();
    let projective = kind == GroupKind::PSL2 && q.is_odd();
    match tag {
        ClassTag::Identity => 1,
        ClassTag::MinusIdentity => 2,
        ClassTag::N | ClassTag::NPrime => p,
        ClassTag::MinusN | ClassTag::MinusNPrime => 2 * p,
        ClassTag::S(a) if projective => (qv - 1) / 2 / gcd(a, (qv - 1) / 2),
        ClassTag::T(b) if projective => (qv + 1) / 2 / gcd(b, (qv + 1) / 2),
        ClassTag::S(a) => (qv - 1) / gcd(a, qv - 1),
        ClassTag::T(b) => (qv + 1) / gcd(b, qv + 1),
    }
}

/// Brute-force class data checked against the character-table class list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCheck {
    pub kind: GroupKind,
    pub q: PrimePower,
    pub order: u64,
    pub expected_order: u64,
    pub class_count: usize,
    pub expected_class_count: u64,
    pub class_equation: bool,
    /// Size multisets agree; `None` below the range of the tables.
    pub sizes_match: Option<bool>,
    /// `(size, element order)` multisets agree; `None` as above.
    pub labels_match: Option<bool>,
}

impl ClassCheck {
    pub fn passed(&self) -> bool {
        self.order == self.expected_order
            && self.class_count as u64 == self.expected_class_count
            && self.class_equation
            && self.sizes_match != Some(false)
            && self.labels_match != Some(false)
    }
}

pub fn verify_class_data(kind: GroupKind, q_raw: u64) -> Result<ClassCheck> {
    let data = conjugacy_classes(kind, q_raw)?;
    Ok(check_against_tables(&data))
}

pub fn check_against_tables(data: &ClassData) -> ClassCheck {
    let (kind, q) = (data.kind, data.q);
    let (sizes_match, labels_match) = match class_list(kind, q.q()) {
        Ok(list) => {
            let mut sizes: Vec<u64> = list.iter().map(|c| c.size).collect();
            sizes.sort();
            let mut sig: Vec<(u64, u64)> = list
                .iter()
                .map(|c| (c.size, predicted_order(kind, &q, c.tag)))
                .collect();
            sig.sort();
            (
                Some(sizes == data.size_multiset()),
                Some(sig == data.signature()),
            )
        }
        Err(_) => (None, None),
    };
    ClassCheck {
        kind,
        q,
        order: data.order,
        expected_order: kind.order(&q),
        class_count: data.class_count(),
        expected_class_count: expected_class_count(kind, &q),
        class_equation: data.class_equation_holds(),
        sizes_match,
        labels_match,
    }
}

/// Class count and size multiset, for comparing different field models.
pub fn class_statistics(data: &ClassData) -> (usize, BTreeMap<u64, usize>) {
    let mut hist = BTreeMap::new();
    for c in &data.classes {
        *hist.entry(c.size).or_insert(0) += 1;
    }
    (data.class_count(), hist)
}
