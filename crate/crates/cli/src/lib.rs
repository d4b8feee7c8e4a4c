//! Output documents and verification sweeps behind the `sl2w` binary.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sl2_wedderburn::chartab::{build_table, compare, oracle_decompose, verify_orthogonality};
use sl2_wedderburn::decomposition::{
    decompose, dimension_audit, rational_irr_count, simple_module_dimensions, GroupKind,
    WedderburnDecomposition,
};
use sl2_wedderburn::fields::{DivisionAlgebra, NumberField, QuaternionParam, SimpleComponent};
use sl2_wedderburn::groupsim::{verify_class_data, GROUP_BOUND};
use sl2_wedderburn::numtheory::{factor_prime_power, prime_powers_between, Place, MIN_Q};
use sl2_wedderburn::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

/// Largest `q` that `verify --level oracle` sends through the character-table
/// oracle. Beyond this the exact cyclotomic checks stop being quick.
pub const ORACLE_MAX_Q: u64 = 128;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema_version: String,
    pub group: String,
    pub q: u64,
    pub p: u64,
    pub m: u32,
    pub order: u64,
    pub components: Vec<ComponentDoc>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub multiplicity: u64,
    pub n: u64,
    pub division: DivisionDoc,
    #[serde(rename = "dim_over_Q")]
    pub dim_over_q: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisionDoc {
    /// `"field"` or `"quaternion"`.
    pub kind: String,
    pub center: CenterDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<ParamDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    pub index: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramified_places: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterDoc {
    /// `"Q"`, `"quadratic"` or `"real_cyclotomic"`.
    pub kind: String,
    /// The squarefree `d` of `Q(√d)`, or the conductor of `Q(ζ_d+ζ_d^-1)`.
    pub param: Option<i64>,
}

/// The first quaternion slot: an integer, or `(ζ_d-ζ_d^-1)²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamDoc {
    Integer { value: i64 },
    ZetaDifferenceSquared { d: u64 },
}

fn center_doc(f: NumberField) -> CenterDoc {
    let (kind, param) = match f {
        NumberField::Rationals => ("Q", None),
        NumberField::Quadratic(d) => ("quadratic", Some(d)),
        NumberField::RealCyclotomic(d) => ("real_cyclotomic", Some(d as i64)),
    };
    CenterDoc {
        kind: kind.to_string(),
        param,
    }
}

fn place_name(p: &Place) -> String {
    match p {
        Place::Finite(p) => p.to_string(),
        Place::Infinite => "inf".to_string(),
    }
}

fn component_doc(c: &SimpleComponent) -> ComponentDoc {
    let division = match &c.division {
        DivisionAlgebra::Field(f) => DivisionDoc {
            kind: "field".to_string(),
            center: center_doc(*f),
            a: None,
            b: None,
            index: 1,
            ramified_places: None,
        },
        DivisionAlgebra::Quaternion(h) => DivisionDoc {
            kind: "quaternion".to_string(),
            center: center_doc(h.center()),
            a: Some(match h.a() {
                QuaternionParam::Integer(value) => ParamDoc::Integer { value },
                QuaternionParam::ZetaDifferenceSquared(d) => ParamDoc::ZetaDifferenceSquared { d },
            }),
            b: Some(h.b()),
            index: 2,
            ramified_places: h.ramified().map(|s| s.iter().map(place_name).collect()),
        },
    };
    ComponentDoc {
        multiplicity: c.multiplicity,
        n: c.n,
        division,
        dim_over_q: c.dim_each(),
    }
}

impl OutputDocument {
    pub fn from_decomposition(w: &WedderburnDecomposition) -> OutputDocument {
        OutputDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            group: w.group.name().to_string(),
            q: w.q.q(),
            p: w.q.p(),
            m: w.q.m(),
            order: w.group_order,
            components: w.components.iter().map(component_doc).collect(),
            notes: w.notes.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsDocument {
    pub schema_version: String,
    pub group: String,
    pub q: u64,
    pub rational_irr_count: u64,
    pub module_dimensions: Vec<DimensionCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionCount {
    pub dimension: u64,
    pub count: u64,
}

impl CountsDocument {
    pub fn new(kind: GroupKind, q_raw: u64) -> Result<CountsDocument> {
        let q = factor_prime_power(q_raw)?;
        let kind = kind.normalized(&q);
        Ok(CountsDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            group: kind.name().to_string(),
            q: q_raw,
            rational_irr_count: rational_irr_count(kind, &q),
            module_dimensions: simple_module_dimensions(kind, &q)
                .into_iter()
                .map(|(dimension, count)| DimensionCount { dimension, count })
                .collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{}({}): {} rational irreducible representations\n",
            self.group, self.q, self.rational_irr_count
        );
        out.push_str("dimension  count\n");
        for d in &self.module_dimensions {
            let _ = writeln!(out, "{:>9}  {:>5}", d.dimension, d.count);
        }
        out
    }
}

/// Text form of a decomposition, with any notes on following lines.
pub fn render_decomposition(w: &WedderburnDecomposition, ascii: bool) -> String {
    let notation = if ascii {
        sl2_wedderburn::fields::Notation::Ascii
    } else {
        sl2_wedderburn::fields::Notation::Unicode
    };
    let mut out = w.render(notation);
    out.push('\n');
    for n in &w.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

/// Parses `A..B`, `A..=B` or a single `q`.
pub fn parse_q_range(s: &str) -> Result<RangeInclusive<u64>> {
    let bad = || Error::InvalidArgument(format!("expected a q range like 4..199, got {s:?}"));
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let q = parse(s)?;
            (q, q)
        }
    };
    if lo < MIN_Q {
        return Err(Error::QTooSmall(lo));
    }
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty q range {lo}..{hi}")));
    }
    Ok(lo..=hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VerifyLevel {
    /// Dimension and count audits of the closed form.
    Closed,
    /// Adds orthogonality and the character-table oracle.
    Oracle,
    /// Adds brute-force enumeration of the groups.
    Group,
}

impl FromStr for VerifyLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<VerifyLevel> {
        match s {
            "closed" => Ok(VerifyLevel::Closed),
            "oracle" => Ok(VerifyLevel::Oracle),
            "group" => Ok(VerifyLevel::Group),
            _ => Err(Error::InvalidArgument(format!("unknown level {s:?}"))),
        }
    }
}

/// Outcome of every check run for one `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QReport {
    pub q: u64,
    pub failures: Vec<String>,
    /// Checks that were requested but skipped because `q` is out of bounds.
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub level: VerifyLevel,
    pub reports: Vec<QReport>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.failures.is_empty())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            for f in &r.failures {
                let _ = writeln!(out, "FAIL q={}: {f}", r.q);
            }
        }
        let skipped: Vec<String> = self
            .reports
            .iter()
            .filter(|r| !r.skipped.is_empty())
            .map(|r| format!("{} ({})", r.q, r.skipped.join(", ")))
            .collect();
        if !skipped.is_empty() {
            let _ = writeln!(out, "skipped beyond bounds: {}", skipped.join("; "));
        }
        let failed = self
            .reports
            .iter()
            .filter(|r| !r.failures.is_empty())
            .count();
        let n = self.reports.len();
        if failed == 0 {
            let _ = writeln!(out, "{n} prime powers checked, all pass");
        } else {
            let _ = writeln!(out, "{n} prime powers checked, {failed} failed");
        }
        out
    }
}

fn kinds(q: u64) -> &'static [GroupKind] {
    if q % 2 == 0 {
        &[GroupKind::PSL2]
    } else {
        &[GroupKind::SL2, GroupKind::PSL2]
    }
}

fn check_q(q: u64, level: VerifyLevel) -> QReport {
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    for &kind in kinds(q) {
        let w = match decompose(kind, q) {
            Ok(w) => w,
            Err(e) => {
                failures.push(format!("{kind}: {e}"));
                continue;
            }
        };
        let a = dimension_audit(&w);
        if !a.dims_match {
            failures.push(format!(
                "{kind}: total dimension {} but |G| = {}",
                a.total_dim, a.group_order
            ));
        }
        if !a.count_match {
            failures.push(format!(
                "{kind}: {} components but {} rational irreducibles",
                a.component_count, a.rational_irr_count
            ));
        }
        if level >= VerifyLevel::Oracle {
            if q <= ORACLE_MAX_Q {
                match build_table(kind, q) {
                    Ok(t) => {
                        let r = verify_orthogonality(&t);
                        if !r.passed() {
                            failures.push(format!(
                                "{kind}: orthogonality fails for rows {:?} columns {:?}",
                                r.row_failures, r.column_failures
                            ));
                        }
                    }
                    Err(e) => failures.push(format!("{kind}: {e}")),
                }
                match oracle_decompose(kind, q) {
                    Ok(o) => {
                        let r = compare(&w, &o);
                        if !r.matched() {
                            failures.push(format!("{kind}: {r}"));
                        }
                    }
                    Err(e) => failures.push(format!("{kind}: {e}")),
                }
            } else {
                skipped.push(format!("{kind} oracle"));
            }
        }
        if level >= VerifyLevel::Group {
            if w.group_order <= GROUP_BOUND {
                match verify_class_data(kind, q) {
                    Ok(c) if c.passed() => {}
                    Ok(c) => failures.push(format!(
                        "{kind}: brute force found {} classes (expected {}), sizes match {:?}, labels match {:?}",
                        c.class_count, c.expected_class_count, c.sizes_match, c.labels_match
                    )),
                    Err(e) => failures.push(format!("{kind}: {e}")),
                }
            } else {
                skipped.push(format!("{kind} enumeration"));
            }
        }
    }
    QReport {
        q,
        failures,
        skipped,
    }
}

/// Runs the checks of `level` for every prime power in `range`, in
/// parallel. Reports come back ordered by `q`.
pub fn verify_sweep(range: RangeInclusive<u64>, level: VerifyLevel) -> SweepReport {
    let qs: Vec<u64> = prime_powers_between(*range.start(), *range.end())
        .into_iter()
        .map(|q| q.q())
        .collect();
    SweepReport {
        level,
        reports: qs.into_par_iter().map(|q| check_q(q, level)).collect(),
    }
}
