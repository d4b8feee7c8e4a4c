//! Exact character tables of `SL2(q)` (odd `q`) and `PSL2(q)`, their Galois
//! orbits and Schur indices, and the decomposition rebuilt from them.
//!
//! Values use `ε = ζ_{q-1}`, `η₀ = ζ_{q+1}` and `ω = (1+√(δq))/2`, with
//! `√(δq)` realised by a Gauss sum.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::cyclotomic::{
    fixed_field, fixing_exponents, sqrt_delta_q, unit_group_generators, working_modulus,
};
use crate::decomposition::{GroupKind, WedderburnDecomposition};
use crate::error::{Error, Result};
use crate::fields::NumberField;
use crate::numtheory::{factor_prime_power, gcd, PrimePower};
use crate::{Cyclotomic, Rational};

/// Row labels of the tables. The principal and complementary series carry
/// their index so that parity-dependent Schur indices can be read off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharLabel {
    Trivial,
    Steinberg,
    /// `ψ_{q+1}^{(i)}`.
    Principal(u64),
    /// `ψ_{q-1}^{(j)}`.
    Complementary(u64),
    PlusPrime,
    PlusDoublePrime,
    MinusPrime,
    MinusDoublePrime,
}

impl CharLabel {
    /// `χ(1)`.
    pub fn degree(&self, q: u64) -> u64 {
        match self {
            CharLabel::Trivial => 1,
            CharLabel::Steinberg => q,
            CharLabel::Principal(_) => q + 1,
            CharLabel::Complementary(_) => q - 1,
            CharLabel::PlusPrime | CharLabel::PlusDoublePrime => (q + 1) / 2,
            CharLabel::MinusPrime | CharLabel::MinusDoublePrime => (q - 1) / 2,
        }
    }
}

impl fmt::Display for CharLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharLabel::Trivial => f.write_str("psi_1"),
            CharLabel::Steinberg => f.write_str("psi_q"),
            CharLabel::Principal(i) => write!(f, "psi_{{q+1}}^({i})"),
            CharLabel::Complementary(j) => write!(f, "psi_{{q-1}}^({j})"),
            CharLabel::PlusPrime => f.write_str("psi'_+"),
            CharLabel::PlusDoublePrime => f.write_str("psi''_+"),
            CharLabel::MinusPrime => f.write_str("psi'_-"),
            CharLabel::MinusDoublePrime => f.write_str("psi''_-"),
        }
    }
}

impl FromStr for CharLabel {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form back.
    fn from_str(s: &str) -> Result<CharLabel> {
        let unknown = || Error::UnknownLabel(s.to_string());
        let indexed = |prefix: &str| -> Option<u64> {
            s.strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')?
                .parse()
                .ok()
        };
        Ok(match s {
            "psi_1" => CharLabel::Trivial,
            "psi_q" => CharLabel::Steinberg,
            "psi'_+" => CharLabel::PlusPrime,
            "psi''_+" => CharLabel::PlusDoublePrime,
            "psi'_-" => CharLabel::MinusPrime,
            "psi''_-" => CharLabel::MinusDoublePrime,
            _ => {
                if let Some(i) = indexed("psi_{q+1}^") {
                    CharLabel::Principal(i)
                } else if let Some(j) = indexed("psi_{q-1}^") {
                    CharLabel::Complementary(j)
                } else {
                    return Err(unknown());
                }
            }
        })
    }
}

/// Conjugacy class families. `S(a)` is split semisimple, `T(b)` non-split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassTag {
    Identity,
    MinusIdentity,
    N,
    NPrime,
    MinusN,
    MinusNPrime,
    S(u64),
    T(u64),
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTag::Identity => f.write_str("I"),
            ClassTag::MinusIdentity => f.write_str("-I"),
            ClassTag::N => f.write_str("N"),
            ClassTag::NPrime => f.write_str("N'"),
            ClassTag::MinusN => f.write_str("-N"),
            ClassTag::MinusNPrime => f.write_str("-N'"),
            ClassTag::S(a) => write!(f, "S({a})"),
            ClassTag::T(b) => write!(f, "T({b})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassLabel {
    pub tag: ClassTag,
    pub size: u64,
}

/// A table entry with its exact value and a compact symbolic form.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: Cyclotomic,
    pub symbol: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterRow {
    pub label: CharLabel,
    pub entries: Vec<Entry>,
}

impl CharacterRow {
    pub fn degree(&self) -> u64 {
        let v = self.entries[0]
            .value
            .rational_value()
            .expect("degrees are integers");
        u64::try_from(v.to_integer()).expect("positive degree")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    pub group: GroupKind,
    pub q: PrimePower,
    pub classes: Vec<ClassLabel>,
    pub chars: Vec<CharacterRow>,
    /// Explains the symbols used in the entries.
    pub legend: Vec<String>,
}

impl CharacterTable {
    pub fn order(&self) -> u64 {
        self.group.order(&self.q)
    }

    pub fn value(&self, row: usize, col: usize) -> &Cyclotomic {
        &self.chars[row].entries[col].value
    }

    /// Aligned plain-text rendering.
    pub fn render(&self) -> String {
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["x".to_string()];
        header.extend(self.classes.iter().map(|c| c.tag.to_string()));
        grid.push(header);
        let mut sizes = vec!["|x^G|".to_string()];
        sizes.extend(self.classes.iter().map(|c| c.size.to_string()));
        grid.push(sizes);
        for row in &self.chars {
            let mut line = vec![row.label.to_string()];
            line.extend(row.entries.iter().map(|e| e.symbol.clone()));
            grid.push(line);
        }
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for (i, row) in grid.iter().enumerate() {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (s, &w))| {
                    if c == 0 {
                        format!("{s:<w$}")
                    } else {
                        format!("{s:>w$}")
                    }
                })
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
            if i == 1 {
                let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
                out.push_str(&"-".repeat(total));
                out.push('\n');
            }
        }
        for line in &self.legend {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

fn int(v: i64) -> Entry {
    Entry {
        value: Cyclotomic::from_integer(v),
        symbol: v.to_string(),
    }
}

fn zero() -> Entry {
    int(0)
}

fn sign(e: u64) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `z_m^e` in lowest terms, without coefficient.
fn root_symbol(n: u64, e: u64) -> String {
    let g = gcd(e % n, n);
    let (m, e) = (n / g, (e % n) / g);
    if e == 1 {
        format!("z{m}")
    } else {
        format!("z{m}^{e}")
    }
}

fn root_symbol_inverse(n: u64, e: u64) -> String {
    let g = gcd(e % n, n);
    let (m, e) = (n / g, (e % n) / g);
    format!("z{m}^-{e}")
}

fn rational_symbol(v: &Cyclotomic) -> Option<String> {
    v.rational_value().map(|r| {
        if r.is_integer() {
            r.to_integer().to_string()
        } else {
            r.to_string()
        }
    })
}

/// `c·(ζ_n^e + ζ_n^-e)`.
fn root_pair(n: u64, e: u64, c: i64) -> Entry {
    let e = e % n;
    let value = &(&Cyclotomic::root(n, e as i64) + &Cyclotomic::root(n, -(e as i64)))
        * &Cyclotomic::from_integer(c);
    let symbol = rational_symbol(&value).unwrap_or_else(|| {
        let (s, t) = (root_symbol(n, e), root_symbol_inverse(n, e));
        match c {
            1 => format!("{s}+{t}"),
            -1 => format!("-{s}-{t}"),
            _ => format!("{c}*({s}+{t})"),
        }
    });
    Entry { value, symbol }
}

/// `c·ζ_n^e`.
fn root_times(n: u64, e: u64, c: i64) -> Entry {
    let value = &Cyclotomic::root(n, e as i64) * &Cyclotomic::from_integer(c);
    let symbol = rational_symbol(&value).unwrap_or_else(|| {
        let s = root_symbol(n, e);
        match c {
            1 => s,
            -1 => format!("-{s}"),
            _ => format!("{c}*{s}"),
        }
    });
    Entry { value, symbol }
}

/// `ω`, `ω*` and their symbols.
struct Omega {
    w: Cyclotomic,
    w_star: Cyclotomic,
}

impl Omega {
    fn new(q: &PrimePower) -> Result<Omega> {
        let root = sqrt_delta_q::<Rational>(q)?;
        let half = Cyclotomic::from_scalar(Rational::new(BigInt::from(1), BigInt::from(2)));
        let one = Cyclotomic::one();
        Ok(Omega {
            w: &(&one + &root) * &half,
            w_star: &(&one - &root) * &half,
        })
    }

    /// `c·ω` (or `c·ω*` when `star`).
    fn entry(&self, star: bool, c: i64) -> Entry {
        let base = if star { &self.w_star } else { &self.w };
        let value = base * &Cyclotomic::from_integer(c);
        let name = if star { "w*" } else { "w" };
        let symbol = rational_symbol(&value).unwrap_or_else(|| match c {
            1 => name.to_string(),
            -1 => format!("-{name}"),
            _ => format!("{c}*{name}"),
        });
        Entry { value, symbol }
    }

    fn legend(q: &PrimePower) -> String {
        let dq = q.delta().expect("odd q") * q.q() as i64;
        format!("w = (1+sqrt({dq}))/2, w* = (1-sqrt({dq}))/2")
    }
}

const ROOT_LEGEND: &str = "zN = exp(2*pi*i/N)";

fn supported(kind: GroupKind, q_raw: u64) -> Result<(GroupKind, PrimePower)> {
    let q = match factor_prime_power(q_raw) {
        Err(Error::QTooSmall(q)) => {
            return Err(Error::UnsupportedQ {
                q,
                group: kind.name(),
                reason: "character tables are only available for q >= 4",
            })
        }
        other => other?,
    };
    Ok((kind.normalized(&q), q))
}

/// The conjugacy classes and their sizes, in table order.
pub fn class_list(kind: GroupKind, q_raw: u64) -> Result<Vec<ClassLabel>> {
    let (kind, q) = supported(kind, q_raw)?;
    let qv = q.q();
    let c = |tag, size| ClassLabel { tag, size };
    let mut out = vec![c(ClassTag::Identity, 1)];
    if q.is_even() {
        out.push(c(ClassTag::N, qv * qv - 1));
        out.extend((1..qv / 2).map(|a| c(ClassTag::S(a), qv * (qv + 1))));
        out.extend((1..=qv / 2).map(|b| c(ClassTag::T(b), qv * (qv - 1))));
        return Ok(out);
    }
    let half_unipotent = (qv * qv - 1) / 2;
    match kind {
        GroupKind::SL2 => {
            out.push(c(ClassTag::MinusIdentity, 1));
            for tag in [
                ClassTag::N,
                ClassTag::NPrime,
                ClassTag::MinusN,
                ClassTag::MinusNPrime,
            ] {
                out.push(c(tag, half_unipotent));
            }
            out.extend((1..=(qv - 3) / 2).map(|a| c(ClassTag::S(a), qv * (qv + 1))));
            out.extend((1..=(qv - 1) / 2).map(|b| c(ClassTag::T(b), qv * (qv - 1))));
        }
        GroupKind::PSL2 => {
            out.push(c(ClassTag::N, half_unipotent));
            out.push(c(ClassTag::NPrime, half_unipotent));
            if qv % 4 == 3 {
                out.extend((1..=(qv - 3) / 4).map(|a| c(ClassTag::S(a), qv * (qv + 1))));
                out.extend((1..=(qv - 3) / 4).map(|b| c(ClassTag::T(b), qv * (qv - 1))));
                out.push(c(ClassTag::T((qv + 1) / 4), qv * (qv - 1) / 2));
            } else {
                out.extend((1..=(qv - 5) / 4).map(|a| c(ClassTag::S(a), qv * (qv + 1))));
                out.push(c(ClassTag::S((qv - 1) / 4), qv * (qv + 1) / 2));
                out.extend((1..=(qv - 1) / 4).map(|b| c(ClassTag::T(b), qv * (qv - 1))));
            }
        }
    }
    Ok(out)
}

/// The row labels, in table order.
pub fn char_labels(kind: GroupKind, q_raw: u64) -> Result<Vec<CharLabel>> {
    let (kind, q) = supported(kind, q_raw)?;
    let qv = q.q();
    let mut out = vec![CharLabel::Trivial, CharLabel::Steinberg];
    if q.is_even() {
        out.extend((1..qv / 2).map(CharLabel::Principal));
        out.extend((1..=qv / 2).map(CharLabel::Complementary));
        return Ok(out);
    }
    match kind {
        GroupKind::SL2 => {
            out.extend((1..=(qv - 3) / 2).map(CharLabel::Principal));
            out.extend((1..=(qv - 1) / 2).map(CharLabel::Complementary));
            out.extend([
                CharLabel::PlusPrime,
                CharLabel::PlusDoublePrime,
                CharLabel::MinusPrime,
                CharLabel::MinusDoublePrime,
            ]);
        }
        GroupKind::PSL2 if qv % 4 == 3 => {
            out.extend((2..=(qv - 3) / 2).step_by(2).map(CharLabel::Principal));
            out.extend((2..=(qv - 3) / 2).step_by(2).map(CharLabel::Complementary));
            out.extend([CharLabel::MinusPrime, CharLabel::MinusDoublePrime]);
        }
        GroupKind::PSL2 => {
            out.extend((2..=(qv - 5) / 2).step_by(2).map(CharLabel::Principal));
            out.extend((2..=(qv - 1) / 2).step_by(2).map(CharLabel::Complementary));
            out.extend([CharLabel::PlusPrime, CharLabel::PlusDoublePrime]);
        }
    }
    Ok(out)
}

/// One table entry `χ(x)`.
fn entry(
    kind: GroupKind,
    q: &PrimePower,
    omega: Option<&Omega>,
    label: CharLabel,
    class: ClassTag,
) -> Entry {
    use CharLabel as L;
    use ClassTag as C;
    let qv = q.q();
    let qi = qv as i64;
    let (eps, eta) = (qv - 1, qv + 1);
    let delta = q.delta().unwrap_or(1);
    let omega = || omega.expect("odd q has ω");
    match (label, class) {
        (L::Trivial, _) => int(1),

        (L::Steinberg, C::Identity | C::MinusIdentity) => int(qi),
        (L::Steinberg, C::S(_)) => int(1),
        (L::Steinberg, C::T(_)) => int(-1),
        (L::Steinberg, _) => zero(),

        (L::Principal(_), C::Identity) => int(qi + 1),
        (L::Principal(i), C::MinusIdentity) => int(sign(i) * (qi + 1)),
        (L::Principal(_), C::N | C::NPrime) => int(1),
        (L::Principal(i), C::MinusN | C::MinusNPrime) => int(sign(i)),
        (L::Principal(k), C::S(a))
            if kind == GroupKind::PSL2 && qv % 4 == 1 && a == (qv - 1) / 4 =>
        {
            root_times(eps, (qv - 1) * k / 4, 2)
        }
        (L::Principal(i), C::S(a)) => root_pair(eps, a * i, 1),
        (L::Principal(_), C::T(_)) => zero(),

        (L::Complementary(_), C::Identity) => int(qi - 1),
        (L::Complementary(j), C::MinusIdentity) => int(sign(j) * (qi - 1)),
        (L::Complementary(_), C::N | C::NPrime) => int(-1),
        (L::Complementary(j), C::MinusN | C::MinusNPrime) => int(-sign(j)),
        (L::Complementary(_), C::S(_)) => zero(),
        (L::Complementary(j), C::T(b))
            if kind == GroupKind::PSL2 && qv % 4 == 3 && b == (qv + 1) / 4 =>
        {
            root_times(eta, (qv + 1) * j / 4, -2)
        }
        (L::Complementary(j), C::T(b)) => root_pair(eta, b * j, -1),

        (L::PlusPrime | L::PlusDoublePrime, C::Identity) => int((qi + 1) / 2),
        (L::PlusPrime | L::PlusDoublePrime, C::MinusIdentity) => int(delta * (qi + 1) / 2),
        (L::PlusPrime, C::N) | (L::PlusDoublePrime, C::NPrime) => omega().entry(false, 1),
        (L::PlusPrime, C::NPrime) | (L::PlusDoublePrime, C::N) => omega().entry(true, 1),
        (L::PlusPrime, C::MinusN) | (L::PlusDoublePrime, C::MinusNPrime) => {
            omega().entry(false, delta)
        }
        (L::PlusPrime, C::MinusNPrime) | (L::PlusDoublePrime, C::MinusN) => {
            omega().entry(true, delta)
        }
        (L::PlusPrime | L::PlusDoublePrime, C::S(a))
            if kind == GroupKind::PSL2 && a == (qv - 1) / 4 =>
        {
            int(sign((qv - 1) / 4))
        }
        (L::PlusPrime | L::PlusDoublePrime, C::S(a)) => int(sign(a)),
        (L::PlusPrime | L::PlusDoublePrime, C::T(_)) => zero(),

        (L::MinusPrime | L::MinusDoublePrime, C::Identity) => int((qi - 1) / 2),
        (L::MinusPrime | L::MinusDoublePrime, C::MinusIdentity) => int(-delta * (qi - 1) / 2),
        (L::MinusPrime, C::N) | (L::MinusDoublePrime, C::NPrime) => omega().entry(true, -1),
        (L::MinusPrime, C::NPrime) | (L::MinusDoublePrime, C::N) => omega().entry(false, -1),
        (L::MinusPrime, C::MinusN) | (L::MinusDoublePrime, C::MinusNPrime) => {
            omega().entry(true, delta)
        }
        (L::MinusPrime, C::MinusNPrime) | (L::MinusDoublePrime, C::MinusN) => {
            omega().entry(false, delta)
        }
        (L::MinusPrime | L::MinusDoublePrime, C::S(_)) => zero(),
        (L::MinusPrime | L::MinusDoublePrime, C::T(b))
            if kind == GroupKind::PSL2 && b == (qv + 1) / 4 =>
        {
            int(sign((qv + 5) / 4))
        }
        (L::MinusPrime | L::MinusDoublePrime, C::T(b)) => int(sign(b + 1)),
    }
}

/// Builds the exact character table of `SL2(q)` (odd `q`) or `PSL2(q)`.
pub fn build_table(kind: GroupKind, q_raw: u64) -> Result<CharacterTable> {
    let (kind, q) = supported(kind, q_raw)?;
    let classes = class_list(kind, q_raw)?;
    let labels = char_labels(kind, q_raw)?;
    let omega = if q.is_odd() {
        Some(Omega::new(&q)?)
    } else {
        None
    };
    let chars = labels
        .into_iter()
        .map(|label| CharacterRow {
            label,
            entries: classes
                .iter()
                .map(|c| entry(kind, &q, omega.as_ref(), label, c.tag))
                .collect(),
        })
        .collect();
    let mut legend = vec![ROOT_LEGEND.to_string()];
    if q.is_odd() {
        legend.push(Omega::legend(&q));
    }
    Ok(CharacterTable {
        group: kind,
        q,
        classes,
        chars,
        legend,
    })
}

/// Result of checking both orthogonality relations exactly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub relations_checked: usize,
    /// Row pairs violating `Σ |x^G| χ(x) ψ̄(x) = |G| δ_{χψ}`.
    pub row_failures: Vec<(CharLabel, CharLabel)>,
    /// Column pairs violating `Σ_χ χ(x) χ̄(y) = |C_G(x)| δ_{xy}`.
    pub column_failures: Vec<(ClassTag, ClassTag)>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.row_failures.is_empty() && self.column_failures.is_empty()
    }
}

pub fn verify_orthogonality(t: &CharacterTable) -> OrthogonalityReport {
    let order = t.order();
    let sizes: Vec<Cyclotomic> = t
        .classes
        .iter()
        .map(|c| Cyclotomic::from_integer(c.size as i64))
        .collect();
    let conj: Vec<Vec<Cyclotomic>> = t
        .chars
        .iter()
        .map(|r| r.entries.iter().map(|e| e.value.conj()).collect())
        .collect();
    let mut report = OrthogonalityReport::default();
    let rows = t.chars.len();
    let cols = t.classes.len();
    for i in 0..rows {
        for (j, conj_j) in conj.iter().enumerate().skip(i) {
            let mut acc = Cyclotomic::zero();
            for ((e, c), size) in t.chars[i].entries.iter().zip(conj_j).zip(&sizes) {
                let term = &e.value * c;
                if !term.is_zero() {
                    acc = &acc + &(&term * size);
                }
            }
            let expected = if i == j { order as i64 } else { 0 };
            report.relations_checked += 1;
            if acc != Cyclotomic::from_integer(expected) {
                report
                    .row_failures
                    .push((t.chars[i].label, t.chars[j].label));
            }
        }
    }
    for x in 0..cols {
        for y in x..cols {
            let mut acc = Cyclotomic::zero();
            for (row, conj_r) in t.chars.iter().zip(&conj) {
                let term = &row.entries[x].value * &conj_r[y];
                if !term.is_zero() {
                    acc = &acc + &term;
                }
            }
            let expected = if x == y {
                (order / t.classes[x].size) as i64
            } else {
                0
            };
            report.relations_checked += 1;
            if acc != Cyclotomic::from_integer(expected) {
                report
                    .column_failures
                    .push((t.classes[x].tag, t.classes[y].tag));
            }
        }
    }
    report
}

/// Schur index over `Q` of an irreducible character.
pub fn schur_index(kind: GroupKind, q: &PrimePower, label: &CharLabel) -> Result<u64> {
    let labels = char_labels(kind, q.q())?;
    if !labels.contains(label) {
        return Err(Error::UnknownLabel(format!(
            "{label} for {}({})",
            kind.normalized(q),
            q.q()
        )));
    }
    if kind.normalized(q) == GroupKind::PSL2 {
        return Ok(1);
    }
    Ok(match *label {
        CharLabel::Principal(i) if i % 2 == 1 => 2,
        CharLabel::Complementary(j) if j % 2 == 1 => 2,
        CharLabel::MinusPrime | CharLabel::MinusDoublePrime if q.q() % 4 == 1 => 2,
        _ => 1,
    })
}

/// One Galois conjugacy class of irreducible characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisOrbit {
    pub members: Vec<CharLabel>,
    pub degree: u64,
    pub field: NumberField,
    pub schur_index: u64,
}

impl GaloisOrbit {
    pub fn representative(&self) -> CharLabel {
        self.members[0]
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Partitions the rows into Galois orbits and identifies each character
/// field.
pub fn galois_orbits(t: &CharacterTable) -> Result<Vec<GaloisOrbit>> {
    let n = working_modulus(&t.q);
    let gens = unit_group_generators(n);
    let rows = t.chars.len();
    let mut orbit_of: Vec<Option<usize>> = vec![None; rows];
    let mut orbits = Vec::new();
    for start in 0..rows {
        if orbit_of[start].is_some() {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = Some(id);
        let mut members = vec![start];
        let mut frontier = vec![start];
        while let Some(r) = frontier.pop() {
            for &k in &gens {
                let image: Vec<Cyclotomic> = t.chars[r]
                    .entries
                    .iter()
                    .map(|e| e.value.galois(k as i64))
                    .collect();
                let target = (0..rows)
                    .find(|&s| {
                        t.chars[s]
                            .entries
                            .iter()
                            .zip(&image)
                            .all(|(e, v)| e.value == *v)
                    })
                    .ok_or_else(|| {
                        Error::MalformedDescriptor(format!(
                            "the image of {} under σ_{k} is not a row of the table",
                            t.chars[r].label
                        ))
                    })?;
                if orbit_of[target].is_none() {
                    orbit_of[target] = Some(id);
                    members.push(target);
                    frontier.push(target);
                }
            }
        }
        members.sort();
        let values: Vec<Cyclotomic> = t.chars[start]
            .entries
            .iter()
            .map(|e| e.value.clone())
            .collect();
        let field = fixed_field(n, &fixing_exponents(&values, n)?)?;
        let label = t.chars[start].label;
        orbits.push(GaloisOrbit {
            members: members.iter().map(|&m| t.chars[m].label).collect(),
            degree: t.chars[start].degree(),
            field,
            schur_index: schur_index(t.group, &t.q, &label)?,
        });
    }
    Ok(orbits)
}

/// `(n, Z(D), m)` for a simple component `M_n(D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub n: u64,
    pub center: NumberField,
    pub index: u64,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(n={}, center={}, index={})",
            self.n, self.center, self.index
        )
    }
}

/// The decomposition as seen from the character table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleDecomposition {
    pub group: GroupKind,
    pub q: PrimePower,
    pub orbits: Vec<GaloisOrbit>,
    pub signatures: Vec<Signature>,
}

pub fn oracle_decompose(kind: GroupKind, q_raw: u64) -> Result<OracleDecomposition> {
    let table = build_table(kind, q_raw)?;
    let orbits = galois_orbits(&table)?;
    let mut signatures: Vec<Signature> = orbits
        .iter()
        .map(|o| Signature {
            n: o.degree / o.schur_index,
            center: o.field,
            index: o.schur_index,
        })
        .collect();
    signatures.sort();
    Ok(OracleDecomposition {
        group: table.group,
        q: table.q,
        orbits,
        signatures,
    })
}

/// Multiset comparison of signatures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchReport {
    pub only_closed: Vec<Signature>,
    pub only_oracle: Vec<Signature>,
}

impl MatchReport {
    pub fn matched(&self) -> bool {
        self.only_closed.is_empty() && self.only_oracle.is_empty()
    }
}

impl fmt::Display for MatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.matched() {
            return f.write_str("match");
        }
        let list = |v: &[Signature]| {
            v.iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "mismatch: closed form only [{}], character table only [{}]",
            list(&self.only_closed),
            list(&self.only_oracle)
        )
    }
}

pub fn closed_signatures(w: &WedderburnDecomposition) -> Vec<Signature> {
    let mut v: Vec<Signature> = w
        .expanded()
        .iter()
        .map(|c| Signature {
            n: c.n,
            center: c.division.center(),
            index: c.index(),
        })
        .collect();
    v.sort();
    v
}

pub fn compare(closed: &WedderburnDecomposition, oracle: &OracleDecomposition) -> MatchReport {
    let mut counts: BTreeMap<Signature, i64> = BTreeMap::new();
    for s in closed_signatures(closed) {
        *counts.entry(s).or_default() += 1;
    }
    for s in &oracle.signatures {
        *counts.entry(*s).or_default() -= 1;
    }
    let mut report = MatchReport {
        only_closed: Vec::new(),
        only_oracle: Vec::new(),
    };
    for (s, c) in counts {
        for _ in 0..c.max(0) {
            report.only_closed.push(s);
        }
        for _ in 0..(-c).max(0) {
            report.only_oracle.push(s);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{decompose, rational_irr_count};
    use crate::numtheory::euler_phi;

    fn row(t: &CharacterTable, label: CharLabel) -> &CharacterRow {
        t.chars.iter().find(|r| r.label == label).unwrap()
    }

    #[test]
    fn psl2_4_steinberg_row() {
        let t = build_table(GroupKind::PSL2, 4).unwrap();
        let tags: Vec<String> = t.classes.iter().map(|c| c.tag.to_string()).collect();
        assert_eq!(tags, ["I", "N", "S(1)", "T(1)", "T(2)"]);
        let st: Vec<&str> = row(&t, CharLabel::Steinberg)
            .entries
            .iter()
            .map(|e| e.symbol.as_str())
            .collect();
        assert_eq!(st, ["4", "0", "1", "-1", "-1"]);
    }

    #[test]
    fn sl2_5_minus_prime_at_minus_identity() {
        let t = build_table(GroupKind::SL2, 5).unwrap();
        assert_eq!(
            row(&t, CharLabel::MinusPrime).entries[1].value,
            Cyclotomic::from_integer(-2)
        );
    }

    #[test]
    fn psl2_7_exceptional_entry() {
        let t = build_table(GroupKind::PSL2, 7).unwrap();
        let col = t
            .classes
            .iter()
            .position(|c| c.tag == ClassTag::T(2))
            .unwrap();
        assert_eq!(
            row(&t, CharLabel::Complementary(2)).entries[col].value,
            Cyclotomic::from_integer(2)
        );
    }

    #[test]
    fn symbols() {
        let t = build_table(GroupKind::PSL2, 4).unwrap();
        let p = row(&t, CharLabel::Complementary(1));
        assert_eq!(p.entries[3].symbol, "-z5-z5^-1");
        let t = build_table(GroupKind::PSL2, 11).unwrap();
        let m = row(&t, CharLabel::MinusPrime);
        assert_eq!(m.entries[1].symbol, "-w*");
        assert!(t.render().contains("w = (1+sqrt(-11))/2"));
    }

    #[test]
    fn class_sizes_sum_to_the_order() {
        for q in [4u64, 5, 7, 8, 9, 11, 13, 16, 17, 25, 27] {
            for kind in [GroupKind::SL2, GroupKind::PSL2] {
                let classes = class_list(kind, q).unwrap();
                let t = build_table(kind, q).unwrap();
                assert_eq!(classes.iter().map(|c| c.size).sum::<u64>(), t.order());
                assert_eq!(t.chars.len(), classes.len(), "{kind}({q}) is not square");
            }
        }
    }

    #[test]
    fn orthogonality_small() {
        for q in [4u64, 5, 7, 8, 9, 11, 13] {
            for kind in [GroupKind::SL2, GroupKind::PSL2] {
                let t = build_table(kind, q).unwrap();
                let r = verify_orthogonality(&t);
                assert!(r.passed(), "{kind}({q}): {r:?}");
            }
        }
    }

    #[test]
    fn corrupted_entry_is_reported() {
        let mut t = build_table(GroupKind::PSL2, 4).unwrap();
        t.chars[1].entries[2] = int(2);
        let r = verify_orthogonality(&t);
        assert!(!r.passed());
        assert!(r
            .row_failures
            .contains(&(CharLabel::Steinberg, CharLabel::Steinberg)));
    }

    #[test]
    fn orbit_examples() {
        let t = build_table(GroupKind::PSL2, 7).unwrap();
        let o = galois_orbits(&t).unwrap();
        let mut sizes: Vec<usize> = o.iter().map(GaloisOrbit::size).collect();
        sizes.sort();
        assert_eq!(sizes, [1, 1, 1, 1, 2]);
        let pair = o.iter().find(|x| x.size() == 2).unwrap();
        assert_eq!(pair.field, NumberField::Quadratic(-7));

        let t = build_table(GroupKind::PSL2, 4).unwrap();
        let o = galois_orbits(&t).unwrap();
        assert_eq!(o.len(), 4);
        let pair = o.iter().find(|x| x.size() == 2).unwrap();
        assert_eq!(pair.field, NumberField::Quadratic(5));
        assert_eq!(o[0].members, [CharLabel::Trivial]);
        assert_eq!(o[0].field, NumberField::Rationals);
    }

    #[test]
    fn complementary_orbit_sizes() {
        for q in [5u64, 7, 9, 11, 13, 17, 19] {
            let t = build_table(GroupKind::SL2, q).unwrap();
            for o in galois_orbits(&t).unwrap() {
                if let CharLabel::Complementary(j) = o.representative() {
                    let d = (q + 1) / gcd(q + 1, j);
                    assert_eq!(o.size() as u64, (euler_phi(d) / 2).max(1), "q={q} j={j}");
                }
            }
        }
    }

    #[test]
    fn schur_indices() {
        let q5 = PrimePower::new(5).unwrap();
        let q7 = PrimePower::new(7).unwrap();
        assert_eq!(
            schur_index(GroupKind::SL2, &q5, &CharLabel::Complementary(1)),
            Ok(2)
        );
        assert_eq!(
            schur_index(GroupKind::SL2, &q7, &CharLabel::MinusPrime),
            Ok(1)
        );
        assert_eq!(
            schur_index(GroupKind::SL2, &q5, &CharLabel::MinusPrime),
            Ok(2)
        );
        assert_eq!(
            schur_index(GroupKind::PSL2, &q7, &CharLabel::MinusPrime),
            Ok(1)
        );
        assert!(matches!(
            schur_index(GroupKind::PSL2, &q7, &CharLabel::PlusPrime),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn labels_round_trip() {
        for l in char_labels(GroupKind::SL2, 9).unwrap() {
            assert_eq!(l.to_string().parse::<CharLabel>(), Ok(l));
        }
        assert!("psi_7".parse::<CharLabel>().is_err());
    }

    #[test]
    fn oracle_examples() {
        let o = oracle_decompose(GroupKind::PSL2, 7).unwrap();
        let expect = |n, center, index| Signature { n, center, index };
        let mut want = vec![
            expect(1, NumberField::Rationals, 1),
            expect(7, NumberField::Rationals, 1),
            expect(3, NumberField::Quadratic(-7), 1),
            expect(6, NumberField::Rationals, 1),
            expect(8, NumberField::Rationals, 1),
        ];
        want.sort();
        assert_eq!(o.signatures, want);

        let o = oracle_decompose(GroupKind::SL2, 5).unwrap();
        assert_eq!(o.signatures.len(), 7);
        assert!(o.signatures.contains(&expect(2, NumberField::Rationals, 2)));
        assert!(o
            .signatures
            .contains(&expect(1, NumberField::Quadratic(5), 2)));

        let o = oracle_decompose(GroupKind::PSL2, 9).unwrap();
        assert_eq!(
            o.signatures
                .iter()
                .filter(|s| **s == expect(5, NumberField::Rationals, 1))
                .count(),
            2
        );
    }

    #[test]
    fn oracle_agrees_with_closed_form_small() {
        for q in [4u64, 5, 7, 8, 9, 11, 13, 16, 17] {
            for kind in [GroupKind::SL2, GroupKind::PSL2] {
                let closed = decompose(kind, q).unwrap();
                let oracle = oracle_decompose(kind, q).unwrap();
                assert_eq!(
                    oracle.orbits.len() as u64,
                    rational_irr_count(closed.group, &closed.q)
                );
                let r = compare(&closed, &oracle);
                assert!(r.matched(), "{kind}({q}): {r}");
                let total: u64 = oracle
                    .orbits
                    .iter()
                    .map(|o| o.size() as u64 * o.degree * o.degree)
                    .sum();
                assert_eq!(total, closed.group_order);
            }
        }
    }

    #[test]
    fn compare_reports_differences() {
        let closed = decompose(GroupKind::PSL2, 7).unwrap();
        let mut oracle = oracle_decompose(GroupKind::PSL2, 7).unwrap();
        oracle.signatures.pop();
        let r = compare(&closed, &oracle);
        assert!(!r.matched());
        assert_eq!(r.only_closed.len(), 1);
        assert!(r.only_oracle.is_empty());
    }

    #[test]
    fn rejects_small_q() {
        assert!(matches!(
            build_table(GroupKind::SL2, 3),
            Err(Error::UnsupportedQ { q: 3, .. })
        ));
        assert_eq!(
            build_table(GroupKind::SL2, 12),
            Err(Error::NotPrimePower(12))
        );
    }
}
