//! Closed-form Wedderburn decompositions of `Q[SL2(q)]` and `Q[PSL2(q)]`,
//! together with the counts of simple rational modules.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fields::{
    render_sum, DivisionAlgebra, Notation, NumberField, Quaternion, QuaternionParam,
    SimpleComponent,
};
use crate::numtheory::{divisors, euler_phi, factor_prime_power, find_ell, tau, PrimePower};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    SL2,
    PSL2,
}

impl GroupKind {
    /// `SL2(q) = PSL2(q)` for even `q`; the even case is always reported as
    /// `PSL2`.
    pub fn normalized(self, q: &PrimePower) -> GroupKind {
        if q.is_even() {
            GroupKind::PSL2
        } else {
            self
        }
    }

    /// `|G|`: `q(q²-1)`, halved for `PSL2` with odd `q`.
    pub fn order(self, q: &PrimePower) -> u64 {
        let full = q.q() * (q.q() * q.q() - 1);
        match self.normalized(q) {
            GroupKind::PSL2 if q.is_odd() => full / 2,
            _ => full,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::SL2 => "SL2",
            GroupKind::PSL2 => "PSL2",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupKind> {
        match s.to_ascii_lowercase().as_str() {
            "sl2" => Ok(GroupKind::SL2),
            "psl2" => Ok(GroupKind::PSL2),
            _ => Err(Error::InvalidArgument(format!("unknown group {s:?}"))),
        }
    }
}

/// Divisors above 2 that index the principal and complementary series
/// components. `a`/`b` come from `q+1`/`q-1` (halved for odd `q`); the primed
/// sets hold the remaining divisors of `q±1` and are only used for odd `SL2`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DivisorSets {
    pub a: Vec<u64>,
    pub a_prime: Vec<u64>,
    pub b: Vec<u64>,
    pub b_prime: Vec<u64>,
}

fn divisors_above_two(n: u64) -> Vec<u64> {
    divisors(n).into_iter().filter(|&d| d > 2).collect()
}

fn primed(full: u64, half: u64) -> Vec<u64> {
    divisors_above_two(full)
        .into_iter()
        .filter(|d| half % d != 0)
        .collect()
}

pub fn divisor_sets(kind: GroupKind, q: &PrimePower) -> DivisorSets {
    let q_val = q.q();
    if q.is_even() {
        return DivisorSets {
            a: divisors_above_two(q_val + 1),
            b: divisors_above_two(q_val - 1),
            ..Default::default()
        };
    }
    let (plus, minus) = ((q_val + 1) / 2, (q_val - 1) / 2);
    let mut sets = DivisorSets {
        a: divisors_above_two(plus),
        b: divisors_above_two(minus),
        ..Default::default()
    };
    if kind == GroupKind::SL2 {
        sets.a_prime = primed(q_val + 1, plus);
        sets.b_prime = primed(q_val - 1, minus);
    }
    sets
}

/// A full decomposition `⊕ k_i × M_{n_i}(D_i)` with its bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedderburnDecomposition {
    pub group: GroupKind,
    pub q: PrimePower,
    pub group_order: u64,
    pub components: Vec<SimpleComponent>,
    pub notes: Vec<String>,
}

impl WedderburnDecomposition {
    /// `Σ dim_Q` over all components, with multiplicity.
    pub fn total_dim(&self) -> u64 {
        self.components.iter().map(SimpleComponent::dim_q).sum()
    }

    /// Number of simple components counted with multiplicity.
    pub fn component_count(&self) -> u64 {
        self.components.iter().map(|c| c.multiplicity).sum()
    }

    /// Components with multiplicities expanded into repeated single entries.
    pub fn expanded(&self) -> Vec<SimpleComponent> {
        self.components
            .iter()
            .flat_map(|c| {
                std::iter::repeat_n(
                    SimpleComponent::single(c.n, c.division.clone()),
                    c.multiplicity as usize,
                )
            })
            .collect()
    }

    pub fn render(&self, notation: Notation) -> String {
        render_sum(&self.components, notation)
    }
}

impl fmt::Display for WedderburnDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Notation::Unicode))
    }
}

fn field(f: NumberField) -> DivisionAlgebra {
    DivisionAlgebra::field(f).expect("fields built here are well formed")
}

fn real_cyclotomic(d: u64) -> DivisionAlgebra {
    field(NumberField::RealCyclotomic(d))
}

/// `((ζ_d-ζ_d^-1)², b)` over `Q(ζ_d+ζ_d^-1)`.
fn zeta_quaternion(d: u64, b: i64) -> DivisionAlgebra {
    let h = Quaternion::new(
        NumberField::RealCyclotomic(d),
        QuaternionParam::ZetaDifferenceSquared(d),
        b,
    )
    .expect("the principal and complementary quaternion algebras are division algebras");
    DivisionAlgebra::Quaternion(h)
}

/// Sorts and merges identical components into multiplicities.
fn canonicalize(mut components: Vec<SimpleComponent>) -> Vec<SimpleComponent> {
    components.sort();
    let mut merged: Vec<SimpleComponent> = Vec::with_capacity(components.len());
    for c in components {
        match merged.last_mut() {
            Some(last) if last.n == c.n && last.division == c.division => {
                last.multiplicity += c.multiplicity;
            }
            _ => merged.push(c),
        }
    }
    merged
}

/// The closed-form decomposition of `Q[G]` for `G = SL2(q)` or `PSL2(q)`.
pub fn decompose(kind: GroupKind, q_raw: u64) -> Result<WedderburnDecomposition> {
    let q = factor_prime_power(q_raw)?;
    let kind = kind.normalized(&q);
    let qv = q.q();
    let qi = qv as i64;
    let sets = divisor_sets(kind, &q);
    let rationals = || field(NumberField::Rationals);
    let mut notes = Vec::new();

    let mut components = vec![
        SimpleComponent::single(1, rationals()),
        SimpleComponent::single(qv, rationals()),
    ];
    components.extend(
        sets.a
            .iter()
            .map(|&d| SimpleComponent::single(qv - 1, real_cyclotomic(d))),
    );
    components.extend(
        sets.b
            .iter()
            .map(|&d| SimpleComponent::single(qv + 1, real_cyclotomic(d))),
    );

    if q.is_odd() {
        let p = q.p() as i64;
        // Q(√δq) in squarefree form: q ≡ 3 (mod 4) forces an odd exponent.
        let sqrt_delta_q = || field(NumberField::Quadratic(if qv % 4 == 3 { -p } else { p }));
        match kind {
            GroupKind::PSL2 => {
                if qv % 4 == 3 {
                    components.push(SimpleComponent::single((qv - 1) / 2, sqrt_delta_q()));
                } else if !q.is_square() {
                    components.push(SimpleComponent::single((qv + 1) / 2, sqrt_delta_q()));
                } else {
                    components.push(SimpleComponent::new(2, (qv + 1) / 2, rationals()));
                }
            }
            GroupKind::SL2 => {
                components.extend(
                    sets.a_prime
                        .iter()
                        .map(|&d| SimpleComponent::single((qv - 1) / 2, zeta_quaternion(d, -qi))),
                );
                components.extend(
                    sets.b_prime
                        .iter()
                        .map(|&d| SimpleComponent::single((qv + 1) / 2, zeta_quaternion(d, -1))),
                );
                if qv % 4 == 3 {
                    components.push(SimpleComponent::single((qv - 1) / 2, sqrt_delta_q()));
                    components.push(SimpleComponent::single((qv + 1) / 2, sqrt_delta_q()));
                } else if !q.is_square() {
                    let d_prime = Quaternion::new(
                        NumberField::Quadratic(p),
                        QuaternionParam::Integer(-1),
                        -1,
                    )?;
                    components.push(SimpleComponent::single(
                        (qv - 1) / 4,
                        DivisionAlgebra::Quaternion(d_prime),
                    ));
                    components.push(SimpleComponent::single((qv + 1) / 2, sqrt_delta_q()));
                } else {
                    let (a, note) = if p % 4 == 3 {
                        (
                            -1,
                            format!(
                                "D'' = (-1, -{p})_Q since p = 3 (mod 4); it ramifies exactly at {{{p}, inf}}"
                            ),
                        )
                    } else {
                        let ell = find_ell(p as u64)? as i64;
                        (
                            -ell,
                            format!(
                                "D'' = (-{ell}, -{p})_Q since p = 1 (mod 4), with l = {ell} the least prime = 3 (mod 4) that is a non-residue mod {p}; (-1, -{p})_Q would split at {p}"
                            ),
                        )
                    };
                    notes.push(note);
                    let d_second = Quaternion::over_rationals(a, -p)?;
                    components.push(SimpleComponent::new(
                        2,
                        (qv - 1) / 4,
                        DivisionAlgebra::Quaternion(d_second),
                    ));
                    components.push(SimpleComponent::new(2, (qv + 1) / 2, rationals()));
                }
            }
        }
    }

    Ok(WedderburnDecomposition {
        group: kind,
        q,
        group_order: kind.order(&q),
        components: canonicalize(components),
        notes,
    })
}

/// `|Irr_Q(G)|`, the number of simple rational modules.
pub fn rational_irr_count(kind: GroupKind, q: &PrimePower) -> u64 {
    let qv = q.q();
    if q.is_even() {
        return tau(qv - 1) + tau(qv + 1);
    }
    let square_extra = u64::from(qv % 4 == 1 && q.is_square());
    match kind {
        GroupKind::PSL2 => tau((qv - 1) / 2) + tau((qv + 1) / 2) + square_extra,
        GroupKind::SL2 => tau(qv - 1) + tau(qv + 1) + 2 * square_extra,
    }
}

/// Dimensions of the simple rational modules, as `dimension ↦ count`.
pub fn simple_module_dimensions(kind: GroupKind, q: &PrimePower) -> BTreeMap<u64, u64> {
    let kind = kind.normalized(q);
    let qv = q.q();
    let sets = divisor_sets(kind, q);
    let mut dims: Vec<u64> = vec![1, qv];
    dims.extend(sets.a.iter().map(|&d| (qv - 1) * euler_phi(d) / 2));
    dims.extend(sets.b.iter().map(|&d| (qv + 1) * euler_phi(d) / 2));
    dims.extend(sets.a_prime.iter().map(|&d| (qv - 1) * euler_phi(d)));
    dims.extend(sets.b_prime.iter().map(|&d| (qv + 1) * euler_phi(d)));
    if q.is_odd() {
        let square = qv % 4 == 1 && q.is_square();
        match kind {
            GroupKind::PSL2 if qv % 4 == 3 => dims.push(qv - 1),
            GroupKind::PSL2 if !square => dims.push(qv + 1),
            GroupKind::PSL2 => dims.extend([(qv + 1) / 2; 2]),
            GroupKind::SL2 if qv % 4 == 3 => dims.extend([qv - 1, qv + 1]),
            GroupKind::SL2 if !square => dims.extend([2 * (qv - 1), qv + 1]),
            GroupKind::SL2 => dims.extend([qv - 1, qv - 1, (qv + 1) / 2, (qv + 1) / 2]),
        }
    }
    let mut out = BTreeMap::new();
    for d in dims {
        *out.entry(d).or_insert(0) += 1;
    }
    out
}

/// Outcome of checking a decomposition against `|G|` and `|Irr_Q(G)|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionAudit {
    pub total_dim: u64,
    pub group_order: u64,
    pub component_count: u64,
    pub rational_irr_count: u64,
    pub dims_match: bool,
    pub count_match: bool,
}

impl DimensionAudit {
    pub fn passed(&self) -> bool {
        self.dims_match && self.count_match
    }

    /// `|G| - Σ dims`; positive when components are missing.
    pub fn deficit(&self) -> i128 {
        i128::from(self.group_order) - i128::from(self.total_dim)
    }
}

impl fmt::Display for DimensionAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: dimension sum {} vs order {}, {} components vs {} rational irreducibles",
            if self.passed() { "pass" } else { "fail" },
            self.total_dim,
            self.group_order,
            self.component_count,
            self.rational_irr_count
        )?;
        if !self.dims_match {
            write!(f, " (deficit {})", self.deficit())?;
        }
        Ok(())
    }
}

pub fn dimension_audit(w: &WedderburnDecomposition) -> DimensionAudit {
    let total_dim = w.total_dim();
    let component_count = w.component_count();
    let expected = rational_irr_count(w.group, &w.q);
    DimensionAudit {
        total_dim,
        group_order: w.group_order,
        component_count,
        rational_irr_count: expected,
        dims_match: total_dim == w.group_order,
        count_match: component_count == expected,
    }
}

/// Whether `{(q-1)/2·φ(d) : 1 < d | q+1}` and `{(q+1)/2·φ(e) : 1 < e | q-1}`
/// are disjoint. Both sides are doubled so even `q` stays in the integers.
pub fn series_dimensions_disjoint(q: &PrimePower) -> bool {
    let qv = q.q();
    let principal: std::collections::BTreeSet<u64> = divisors(qv + 1)
        .into_iter()
        .filter(|&d| d > 1)
        .map(|d| (qv - 1) * euler_phi(d))
        .collect();
    divisors(qv - 1)
        .into_iter()
        .filter(|&e| e > 1)
        .all(|e| !principal.contains(&((qv + 1) * euler_phi(e))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{prime_powers_between, Place};
    use std::collections::BTreeSet;

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    fn dims(w: &WedderburnDecomposition) -> Vec<u64> {
        let mut v: Vec<u64> = w.expanded().iter().map(SimpleComponent::dim_q).collect();
        v.sort();
        v
    }

    #[test]
    fn divisor_set_examples() {
        let s = divisor_sets(GroupKind::SL2, &pp(13));
        assert_eq!(s.a, vec![7]);
        assert_eq!(s.a_prime, vec![14]);
        assert_eq!(s.b, vec![3, 6]);
        assert_eq!(s.b_prime, vec![4, 12]);
        let s = divisor_sets(GroupKind::PSL2, &pp(7));
        assert_eq!((s.a, s.b), (vec![4], vec![3]));
        assert!(s.a_prime.is_empty() && s.b_prime.is_empty());
        let s = divisor_sets(GroupKind::PSL2, &pp(4));
        assert_eq!((s.a, s.b), (vec![5], vec![3]));
    }

    #[test]
    fn psl2_7() {
        let w = decompose(GroupKind::PSL2, 7).unwrap();
        assert_eq!(w.to_string(), "Q ⊕ M_3(Q(√-7)) ⊕ M_6(Q) ⊕ M_7(Q) ⊕ M_8(Q)");
        assert_eq!(dims(&w), vec![1, 18, 36, 49, 64]);
        assert_eq!(w.group_order, 168);
    }

    #[test]
    fn psl2_9() {
        let w = decompose(GroupKind::PSL2, 9).unwrap();
        assert_eq!(
            w.to_string(),
            "Q ⊕ 2 × M_5(Q) ⊕ M_8(Q(√5)) ⊕ M_9(Q) ⊕ M_10(Q)"
        );
        assert_eq!(w.total_dim(), 360);
    }

    #[test]
    fn sl2_5() {
        let w = decompose(GroupKind::SL2, 5).unwrap();
        assert_eq!(
            w.to_string(),
            "Q ⊕ (-1, -1 | Q(√5)) ⊕ M_2((-3, -5 | Q)) ⊕ M_3((-1, -1 | Q)) ⊕ M_3(Q(√5)) ⊕ M_4(Q) ⊕ M_5(Q)"
        );
        assert_eq!(dims(&w), vec![1, 8, 16, 16, 18, 25, 36]);
    }

    #[test]
    fn sl2_square_cases_pick_a_ramified_second_algebra() {
        let w = decompose(GroupKind::SL2, 9).unwrap();
        let quats: Vec<_> = w
            .components
            .iter()
            .filter_map(|c| match &c.division {
                DivisionAlgebra::Quaternion(h) if c.multiplicity == 2 => Some(h.clone()),
                _ => None,
            })
            .collect();
        assert_eq!(quats.len(), 1);
        assert_eq!(
            quats[0].ramified(),
            Some(&BTreeSet::from([Place::Finite(3), Place::Infinite]))
        );
        assert_eq!(w.notes.len(), 1);
        let w = decompose(GroupKind::SL2, 25).unwrap();
        assert!(w.to_string().contains("2 × M_6((-3, -5 | Q))"), "{w}");
        assert_eq!(w.total_dim(), 25 * 624);
    }

    #[test]
    fn even_sl2_is_psl2() {
        let a = decompose(GroupKind::SL2, 8).unwrap();
        let b = decompose(GroupKind::PSL2, 8).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.group, GroupKind::PSL2);
    }

    #[test]
    fn a5_two_ways() {
        let a = decompose(GroupKind::PSL2, 4).unwrap();
        let b = decompose(GroupKind::PSL2, 5).unwrap();
        assert_eq!(a.components, b.components);
        assert_eq!(a.to_string(), "Q ⊕ M_3(Q(√5)) ⊕ M_4(Q) ⊕ M_5(Q)");
    }

    #[test]
    fn rejects_bad_q() {
        assert_eq!(decompose(GroupKind::SL2, 12), Err(Error::NotPrimePower(12)));
        assert_eq!(decompose(GroupKind::PSL2, 3), Err(Error::QTooSmall(3)));
    }

    #[test]
    fn counts() {
        assert_eq!(rational_irr_count(GroupKind::PSL2, &pp(4)), 4);
        assert_eq!(rational_irr_count(GroupKind::PSL2, &pp(9)), 6);
        assert_eq!(rational_irr_count(GroupKind::SL2, &pp(5)), 7);
        assert_eq!(rational_irr_count(GroupKind::SL2, &pp(9)), 10);
    }

    #[test]
    fn module_dimension_examples() {
        let m = simple_module_dimensions(GroupKind::PSL2, &pp(4));
        assert_eq!(m, BTreeMap::from([(1, 1), (4, 1), (5, 1), (6, 1)]));
        let m = simple_module_dimensions(GroupKind::PSL2, &pp(9));
        assert_eq!(
            m,
            BTreeMap::from([(1, 1), (5, 2), (9, 1), (10, 1), (16, 1)])
        );
        let m = simple_module_dimensions(GroupKind::SL2, &pp(5));
        assert_eq!(
            m,
            BTreeMap::from([(1, 1), (4, 1), (5, 1), (6, 1), (8, 2), (12, 1)])
        );
    }

    #[test]
    fn module_dimensions_agree_with_components() {
        // The simple module of M_n(D) is D^n, of Q-dimension n·m²·[F:Q].
        for q in prime_powers_between(4, 200) {
            for kind in [GroupKind::SL2, GroupKind::PSL2] {
                let w = decompose(kind, q.q()).unwrap();
                let mut from_components = BTreeMap::new();
                for c in &w.components {
                    let f = c.division.center().degree().unwrap();
                    *from_components
                        .entry(c.n * c.index().pow(2) * f)
                        .or_insert(0) += c.multiplicity;
                }
                assert_eq!(
                    from_components,
                    simple_module_dimensions(kind, &q),
                    "{kind} {q}"
                );
            }
        }
    }

    #[test]
    fn audits_pass_and_negative_control_fails() {
        for q in prime_powers_between(4, 199) {
            for kind in [GroupKind::SL2, GroupKind::PSL2] {
                let w = decompose(kind, q.q()).unwrap();
                let audit = dimension_audit(&w);
                assert!(audit.passed(), "{kind}({q}): {audit}");
            }
        }
        let mut w = decompose(GroupKind::PSL2, 7).unwrap();
        let removed = w.components.remove(1);
        let audit = dimension_audit(&w);
        assert!(!audit.passed());
        assert_eq!(audit.deficit(), removed.dim_q() as i128);
    }

    #[test]
    fn psl_signatures_occur_in_sl() {
        for q in prime_powers_between(5, 200)
            .into_iter()
            .filter(|q| q.is_odd())
        {
            let sl = decompose(GroupKind::SL2, q.q()).unwrap().expanded();
            let mut pool = sl.clone();
            for c in decompose(GroupKind::PSL2, q.q()).unwrap().expanded() {
                let pos = pool
                    .iter()
                    .position(|x| *x == c)
                    .unwrap_or_else(|| panic!("{c} of PSL2({q}) missing from SL2({q})"));
                pool.remove(pos);
            }
        }
    }

    #[test]
    fn exactly_one_trivial_and_one_steinberg_component() {
        for q in prime_powers_between(4, 200) {
            for kind in [GroupKind::SL2, GroupKind::PSL2] {
                let w = decompose(kind, q.q()).unwrap().expanded();
                let q_field = DivisionAlgebra::Field(NumberField::Rationals);
                let ones = w
                    .iter()
                    .filter(|c| c.n == 1 && c.division == q_field)
                    .count();
                let steinberg = w.iter().filter(|c| c.n == q.q()).count();
                assert_eq!((ones, steinberg), (1, 1), "{kind}({q})");
            }
        }
    }

    #[test]
    fn rational_center_quaternions_are_division_algebras() {
        for q in prime_powers_between(5, 2000)
            .into_iter()
            .filter(|q| q.is_odd())
        {
            let w = decompose(GroupKind::SL2, q.q()).unwrap();
            for c in &w.components {
                if let DivisionAlgebra::Quaternion(h) = &c.division {
                    if h.center() == NumberField::Rationals {
                        let ram = h.ramified().expect("rational center carries ramification");
                        assert!(!ram.is_empty() && ram.len() % 2 == 0, "SL2({q}): {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn series_disjointness_small() {
        for q in prime_powers_between(4, 1000) {
            assert!(series_dimensions_disjoint(&q), "q = {q}");
        }
        // q = 3 is the one exception: q+1 = 4 and q-1 = 2 are both powers of 2,
        // and φ(4)·2 = φ(2)·4.
        assert!(!series_dimensions_disjoint(&pp(3)));
        assert!(series_dimensions_disjoint(&pp(2)));
    }
}
