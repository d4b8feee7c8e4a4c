//! Symbolic descriptors for the centers and division algebras that occur in
//! the decomposition, with canonical forms and `Q`-dimension bookkeeping.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cyclotomic::ExactCyclotomic;
use crate::error::{Error, Result};
use crate::numtheory::{euler_phi, ramified_places, squarefree_part, Place};

/// Output notation for the text renderings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Notation {
    #[default]
    Unicode,
    Ascii,
}

/// The centers appearing in the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumberField {
    Rationals,
    /// `Q(√d)` for a squarefree `d ∉ {0, 1}`.
    Quadratic(i64),
    /// `Q(ζ_d + ζ_d^-1)`.
    RealCyclotomic(u64),
}

impl NumberField {
    /// Canonical form: real cyclotomic fields of degree 1 or 2 are rewritten
    /// as `Q` or `Q(√d)`, and conductors `≡ 2 (mod 4)` are halved.
    pub fn canonical(&self) -> Result<NumberField> {
        match *self {
            NumberField::Rationals => Ok(NumberField::Rationals),
            NumberField::Quadratic(d) => {
                if d == 0 || d == 1 || squarefree_part(d) != d {
                    Err(Error::MalformedDescriptor(format!(
                        "Q(√{d}) needs a squarefree d other than 0 and 1"
                    )))
                } else {
                    Ok(NumberField::Quadratic(d))
                }
            }
            NumberField::RealCyclotomic(d) => {
                if d < 3 {
                    return Err(Error::MalformedDescriptor(format!(
                        "real cyclotomic conductor {d} is below 3"
                    )));
                }
                let d = if d % 4 == 2 { d / 2 } else { d };
                Ok(match d {
                    3 | 4 => NumberField::Rationals,
                    // ζ_5+ζ_5^-1 = (-1+√5)/2, ζ_8+ζ_8^-1 = √2, ζ_12+ζ_12^-1 = √3
                    5 => NumberField::Quadratic(5),
                    8 => NumberField::Quadratic(2),
                    12 => NumberField::Quadratic(3),
                    _ => NumberField::RealCyclotomic(d),
                })
            }
        }
    }

    /// `[F : Q]`.
    pub fn degree(&self) -> Result<u64> {
        match *self {
            NumberField::Rationals => Ok(1),
            NumberField::Quadratic(_) => self.canonical().map(|_| 2),
            NumberField::RealCyclotomic(d) if d < 3 => Err(Error::MalformedDescriptor(format!(
                "real cyclotomic conductor {d} is below 3"
            ))),
            NumberField::RealCyclotomic(d) => Ok(euler_phi(d) / 2),
        }
    }

    /// Conductor for real cyclotomic fields, field discriminant magnitude for
    /// quadratic ones.
    fn size_invariant(&self) -> u64 {
        match *self {
            NumberField::Rationals => 1,
            NumberField::Quadratic(d) => {
                let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
                disc.unsigned_abs()
            }
            NumberField::RealCyclotomic(d) => d,
        }
    }

    fn sort_key(&self) -> (u64, u64, i64) {
        let degree = self.degree().unwrap_or(u64::MAX);
        let sign = match *self {
            NumberField::Quadratic(d) => d.signum(),
            _ => 0,
        };
        (degree, self.size_invariant(), sign)
    }

    pub fn render(&self, notation: Notation) -> String {
        match (*self, notation) {
            (NumberField::Rationals, _) => "Q".into(),
            (NumberField::Quadratic(d), Notation::Unicode) => format!("Q(√{d})"),
            (NumberField::Quadratic(d), Notation::Ascii) => format!("Q(sqrt({d}))"),
            (NumberField::RealCyclotomic(d), Notation::Unicode) => format!("Q(ζ_{d}+ζ_{d}^-1)"),
            (NumberField::RealCyclotomic(d), Notation::Ascii) => {
                format!("Q(zeta_{d}+zeta_{d}^-1)")
            }
        }
    }
}

impl Ord for NumberField {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for NumberField {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Notation::Unicode))
    }
}

pub fn field_canonical(f: &NumberField) -> Result<NumberField> {
    f.canonical()
}

pub fn field_degree(f: &NumberField) -> Result<u64> {
    f.degree()
}

/// First slot of a quaternion symbol `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuaternionParam {
    Integer(i64),
    /// `(ζ_d - ζ_d^-1)²`, an element of `Q(ζ_d + ζ_d^-1)`.
    ZetaDifferenceSquared(u64),
}

impl QuaternionParam {
    /// The exact value of `(ζ_d - ζ_d^-1)² = ζ_d² + ζ_d^-2 - 2`.
    pub fn value(&self) -> ExactCyclotomic {
        match *self {
            QuaternionParam::Integer(a) => ExactCyclotomic::from_integer(a),
            QuaternionParam::ZetaDifferenceSquared(d) => {
                let z = &ExactCyclotomic::root(d, 1) - &ExactCyclotomic::root(d, -1);
                &z * &z
            }
        }
    }

    pub fn render(&self, notation: Notation) -> String {
        match (*self, notation) {
            (QuaternionParam::Integer(a), _) => a.to_string(),
            (QuaternionParam::ZetaDifferenceSquared(d), Notation::Unicode) => {
                format!("(ζ_{d}-ζ_{d}^-1)^2")
            }
            (QuaternionParam::ZetaDifferenceSquared(d), Notation::Ascii) => {
                format!("(zeta_{d}-zeta_{d}^-1)^2")
            }
        }
    }
}

/// A quaternion division algebra `(a, b)_F`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quaternion {
    center: NumberField,
    a: QuaternionParam,
    b: i64,
    ramified: Option<BTreeSet<Place>>,
}

impl Quaternion {
    /// `(a, b)_Q`, with both entries reduced to squarefree representatives.
    /// Fails if the algebra is split, since it would not be a division algebra.
    pub fn over_rationals(a: i64, b: i64) -> Result<Quaternion> {
        if a == 0 || b == 0 {
            return Err(Error::MalformedDescriptor(
                "quaternion parameters must be nonzero".into(),
            ));
        }
        let (a, b) = (squarefree_part(a), squarefree_part(b));
        let ramified = ramified_places(a, b);
        if ramified.is_empty() {
            return Err(Error::MalformedDescriptor(format!(
                "({a}, {b})_Q is split, not a division algebra"
            )));
        }
        Ok(Quaternion {
            center: NumberField::Rationals,
            a: QuaternionParam::Integer(a),
            b,
            ramified: Some(ramified),
        })
    }

    /// `(a, b)_F`. When `F` canonicalises to `Q` the first entry is evaluated
    /// exactly and the algebra is checked through its ramification; over
    /// larger centers the data stays symbolic.
    pub fn new(center: NumberField, a: QuaternionParam, b: i64) -> Result<Quaternion> {
        let center = center.canonical()?;
        if b == 0 {
            return Err(Error::MalformedDescriptor(
                "quaternion parameters must be nonzero".into(),
            ));
        }
        if center == NumberField::Rationals {
            let value = a.value();
            let a = value
                .rational_value()
                .filter(|r| r.is_integer())
                .and_then(|r| r.to_integer().to_i64())
                .ok_or_else(|| {
                    Error::MalformedDescriptor(format!(
                        "{} is not a rational integer",
                        a.render(Notation::Unicode)
                    ))
                })?;
            return Quaternion::over_rationals(a, b);
        }
        let a = match a {
            QuaternionParam::Integer(v) if v != 0 => QuaternionParam::Integer(squarefree_part(v)),
            QuaternionParam::Integer(_) => {
                return Err(Error::MalformedDescriptor(
                    "quaternion parameters must be nonzero".into(),
                ))
            }
            other => other,
        };
        Ok(Quaternion {
            center,
            a,
            b: squarefree_part(b),
            ramified: None,
        })
    }

    pub fn center(&self) -> NumberField {
        self.center
    }

    pub fn a(&self) -> QuaternionParam {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// Ramified places, known only for rational centers.
    pub fn ramified(&self) -> Option<&BTreeSet<Place>> {
        self.ramified.as_ref()
    }

    pub fn render(&self, notation: Notation) -> String {
        format!(
            "({}, {} | {})",
            self.a.render(notation),
            self.b,
            self.center.render(notation)
        )
    }
}

/// Index over `Q` of the rational quaternion algebra `(a, b)_Q`: 1 if split,
/// 2 otherwise.
pub fn quaternion_index_over_q(a: i64, b: i64) -> u64 {
    if ramified_places(a, b).is_empty() {
        1
    } else {
        2
    }
}

/// The division algebra `D` of a simple component `M_n(D)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivisionAlgebra {
    Field(NumberField),
    Quaternion(Quaternion),
}

impl DivisionAlgebra {
    pub fn field(f: NumberField) -> Result<DivisionAlgebra> {
        Ok(DivisionAlgebra::Field(f.canonical()?))
    }

    pub fn center(&self) -> NumberField {
        match self {
            DivisionAlgebra::Field(f) => *f,
            DivisionAlgebra::Quaternion(h) => h.center,
        }
    }

    /// Schur index: the square root of `[D : Z(D)]`.
    pub fn index(&self) -> u64 {
        match self {
            DivisionAlgebra::Field(_) => 1,
            DivisionAlgebra::Quaternion(_) => 2,
        }
    }

    /// `[D : Q]`.
    pub fn dim_over_q(&self) -> u64 {
        let degree = self.center().degree().expect("canonical centers");
        self.index().pow(2) * degree
    }

    pub fn render(&self, notation: Notation) -> String {
        match self {
            DivisionAlgebra::Field(f) => f.render(notation),
            DivisionAlgebra::Quaternion(h) => h.render(notation),
        }
    }
}

impl fmt::Display for DivisionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Notation::Unicode))
    }
}

/// `multiplicity × M_n(D)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleComponent {
    pub multiplicity: u64,
    pub n: u64,
    pub division: DivisionAlgebra,
}

impl SimpleComponent {
    pub fn new(multiplicity: u64, n: u64, division: DivisionAlgebra) -> Self {
        assert!(multiplicity >= 1 && n >= 1, "empty component");
        SimpleComponent {
            multiplicity,
            n,
            division,
        }
    }

    pub fn single(n: u64, division: DivisionAlgebra) -> Self {
        SimpleComponent::new(1, n, division)
    }

    /// `Q`-dimension of one copy, `n²·[D : Q]`.
    pub fn dim_each(&self) -> u64 {
        self.n * self.n * self.division.dim_over_q()
    }

    /// `Q`-dimension of all copies together.
    pub fn dim_q(&self) -> u64 {
        self.multiplicity * self.dim_each()
    }

    pub fn index(&self) -> u64 {
        self.division.index()
    }

    /// Canonical ordering key: size, then center, then index.
    fn sort_key(&self) -> (u64, NumberField, u64, &DivisionAlgebra) {
        (self.n, self.division.center(), self.index(), &self.division)
    }

    pub fn render(&self, notation: Notation) -> String {
        let body = if self.n == 1 {
            self.division.render(notation)
        } else {
            format!("M_{}({})", self.n, self.division.render(notation))
        };
        match (self.multiplicity, notation) {
            (1, _) => body,
            (k, Notation::Unicode) => format!("{k} × {body}"),
            (k, Notation::Ascii) => format!("{k} x {body}"),
        }
    }
}

impl Ord for SimpleComponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then(self.multiplicity.cmp(&other.multiplicity))
    }
}

impl PartialOrd for SimpleComponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SimpleComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Notation::Unicode))
    }
}

pub fn component_dim_q(c: &SimpleComponent) -> u64 {
    c.dim_q()
}

/// Joins components with `⊕` (or `+` in ASCII).
pub fn render_sum(components: &[SimpleComponent], notation: Notation) -> String {
    let sep = match notation {
        Notation::Unicode => " ⊕ ",
        Notation::Ascii => " + ",
    };
    components
        .iter()
        .map(|c| c.render(notation))
        .collect::<Vec<_>>()
        .join(sep)
}

/// Square class of a rational-valued `(ζ_d - ζ_d^-1)²`, if it is rational.
pub fn zeta_difference_square_class(d: u64) -> Option<i64> {
    let v = QuaternionParam::ZetaDifferenceSquared(d).value();
    let r = v.rational_value()?;
    let n: BigInt = r.numer() * r.denom();
    n.to_i64().map(squarefree_part)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_examples() {
        use NumberField::*;
        assert_eq!(RealCyclotomic(3).canonical(), Ok(Rationals));
        assert_eq!(RealCyclotomic(5).canonical(), Ok(Quadratic(5)));
        assert_eq!(RealCyclotomic(7).canonical(), Ok(RealCyclotomic(7)));
        assert_eq!(RealCyclotomic(6).canonical(), Ok(Rationals));
        assert_eq!(RealCyclotomic(10).canonical(), Ok(Quadratic(5)));
        assert_eq!(RealCyclotomic(14).canonical(), Ok(RealCyclotomic(7)));
        assert!(RealCyclotomic(2).canonical().is_err());
        assert!(Quadratic(4).canonical().is_err());
        assert!(Quadratic(1).canonical().is_err());
    }

    #[test]
    fn degrees() {
        use NumberField::*;
        assert_eq!(Rationals.degree(), Ok(1));
        assert_eq!(RealCyclotomic(16).degree(), Ok(4));
        assert_eq!(Quadratic(-7).degree(), Ok(2));
    }

    #[test]
    fn canonicalisation_is_idempotent_and_keeps_degree() {
        for d in 3..400u64 {
            let f = NumberField::RealCyclotomic(d);
            let c = f.canonical().unwrap();
            assert_eq!(c.canonical().unwrap(), c);
            assert_eq!(c.degree().unwrap(), f.degree().unwrap(), "d = {d}");
        }
    }

    #[test]
    fn component_dimensions() {
        let c = SimpleComponent::single(3, DivisionAlgebra::Field(NumberField::Quadratic(-7)));
        assert_eq!(component_dim_q(&c), 18);
        let h = Quaternion::over_rationals(-1, -1).unwrap();
        let c = SimpleComponent::single(2, DivisionAlgebra::Quaternion(h));
        assert_eq!(component_dim_q(&c), 16);
        let c = SimpleComponent::new(2, 5, DivisionAlgebra::Field(NumberField::Rationals));
        assert_eq!(component_dim_q(&c), 50);
    }

    #[test]
    fn quaternion_indices() {
        assert_eq!(quaternion_index_over_q(-1, -1), 2);
        assert_eq!(quaternion_index_over_q(1, 7), 1);
        assert_eq!(quaternion_index_over_q(-1, -5), 2);
        assert_eq!(
            ramified_places(-1, -5),
            BTreeSet::from([Place::Finite(2), Place::Infinite])
        );
        assert!(Quaternion::over_rationals(1, 7).is_err());
        assert!(Quaternion::over_rationals(-1, -3).is_ok());
    }

    #[test]
    fn zeta_differences_collapse_over_q() {
        assert_eq!(zeta_difference_square_class(3), Some(-3));
        assert_eq!(zeta_difference_square_class(4), Some(-1));
        assert_eq!(zeta_difference_square_class(6), Some(-3));
        assert_eq!(zeta_difference_square_class(5), None);
        let h = Quaternion::new(
            NumberField::RealCyclotomic(6),
            QuaternionParam::ZetaDifferenceSquared(6),
            -5,
        )
        .unwrap();
        assert_eq!(h.a(), QuaternionParam::Integer(-3));
        assert_eq!(h.b(), -5);
        assert_eq!(
            h.ramified(),
            Some(&BTreeSet::from([Place::Finite(5), Place::Infinite]))
        );
    }

    #[test]
    fn rendering() {
        let f = NumberField::Quadratic(-7);
        assert_eq!(f.render(Notation::Unicode), "Q(√-7)");
        assert_eq!(f.render(Notation::Ascii), "Q(sqrt(-7))");
        let g = NumberField::RealCyclotomic(7);
        assert_eq!(g.render(Notation::Unicode), "Q(ζ_7+ζ_7^-1)");
        assert_eq!(g.render(Notation::Ascii), "Q(zeta_7+zeta_7^-1)");
        let h = Quaternion::over_rationals(-1, -1).unwrap();
        let c = SimpleComponent::new(2, 3, DivisionAlgebra::Quaternion(h));
        assert_eq!(c.render(Notation::Unicode), "2 × M_3((-1, -1 | Q))");
        assert_eq!(c.render(Notation::Ascii), "2 x M_3((-1, -1 | Q))");
        let one = SimpleComponent::single(1, DivisionAlgebra::Field(NumberField::Rationals));
        assert_eq!(one.render(Notation::Unicode), "Q");
    }

    #[test]
    fn components_sort_by_size_then_center_then_index() {
        let q = DivisionAlgebra::Field(NumberField::Rationals);
        let h = DivisionAlgebra::Quaternion(Quaternion::over_rationals(-1, -1).unwrap());
        let k = DivisionAlgebra::Field(NumberField::Quadratic(5));
        let mut v = vec![
            SimpleComponent::single(3, k.clone()),
            SimpleComponent::single(3, h.clone()),
            SimpleComponent::single(3, q.clone()),
            SimpleComponent::single(1, q.clone()),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                SimpleComponent::single(1, q.clone()),
                SimpleComponent::single(3, q),
                SimpleComponent::single(3, h),
                SimpleComponent::single(3, k),
            ]
        );
    }
}
