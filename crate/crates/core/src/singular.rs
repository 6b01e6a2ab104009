//! Singular vectors: exact null spaces of `a₋ ⊕ ã₋`, the closed forms, and the
//! coefficient recurrences they come from.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Generator, GradedDegree};
use crate::linalg::{proportionality, Matrix};
use crate::rational::{binomial, exact_sqrt, format_rational, int, pow, Rational};
use crate::verma::{
    act, action_matrix, enumerate_level, sectors_for_level, BasisIndex, ModuleVector,
    ModuleVectorRecord, VermaKind,
};

pub const DEFAULT_LEVEL_CAP: u32 = 16;
pub const DEFAULT_M_CAP: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingularError {
    #[error("level must be positive")]
    ZeroLevel,
    #[error("sector {sector} does not occur at level {level}")]
    SectorParity { level: u32, sector: GradedDegree },
    #[error("closed form needs r + 2M = 0 (r = {r}, M = {m})")]
    MrConstraint { r: String, m: u32 },
    #[error("closed form needs (r + 2M)^2 = λ (r = {r}, λ = {lambda}, M = {m})")]
    MrLambdaConstraint { r: String, lambda: String, m: u32 },
    #[error("χ11 exists only in M(r)")]
    Chi11InMrLambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosedFormKind {
    #[serde(rename = "chi01")]
    Chi01,
    #[serde(rename = "chi10")]
    Chi10,
    #[serde(rename = "chi11")]
    Chi11,
}

impl fmt::Display for ClosedFormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosedFormKind::Chi01 => "chi01",
            ClosedFormKind::Chi10 => "chi10",
            ClosedFormKind::Chi11 => "chi11",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedFormMatch {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "scalar-multiple")]
    ScalarMultiple,
    #[serde(rename = "mismatch")]
    Mismatch,
    #[serde(rename = "no-closed-form")]
    NoClosedForm,
}

impl fmt::Display for ClosedFormMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosedFormMatch::Exact => "exact",
            ClosedFormMatch::ScalarMultiple => "scalar-multiple",
            ClosedFormMatch::Mismatch => "mismatch",
            ClosedFormMatch::NoClosedForm => "no-closed-form",
        })
    }
}

/// `M` with `r + 2M = 0`, if any.
pub fn mr_constraint_m(r: &Rational) -> Option<u32> {
    let m = -r / int(2);
    (m.is_integer() && m >= Rational::zero()).then(|| m.to_integer().try_into().ok())?
}

/// All `M ≥ 0` with `(r + 2M)² = λ`, ascending.
pub fn lambda_constraint_ms(r: &Rational, lambda: &Rational) -> Vec<u32> {
    let Some(s) = exact_sqrt(lambda) else {
        return Vec::new();
    };
    let mut out: Vec<u32> = [s.clone(), -s]
        .iter()
        .filter_map(|root| mr_constraint_m(&(r - root)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// The `M` values for which `kind` carries closed-form singular vectors.
pub fn constraint_ms(kind: &VermaKind) -> Vec<u32> {
    match kind.lambda() {
        None => mr_constraint_m(kind.r()).into_iter().collect(),
        Some(l) => lambda_constraint_ms(kind.r(), l),
    }
}

fn check_constraint(kind: &VermaKind, which: ClosedFormKind, m: u32) -> Result<(), SingularError> {
    let s = kind.r() + int(2 * m as i64);
    match kind.lambda() {
        None if s.is_zero() => Ok(()),
        None => Err(SingularError::MrConstraint {
            r: format_rational(kind.r()),
            m,
        }),
        Some(_) if which == ClosedFormKind::Chi11 => Err(SingularError::Chi11InMrLambda),
        Some(l) if &(&s * &s) == l => Ok(()),
        Some(l) => Err(SingularError::MrLambdaConstraint {
            r: format_rational(kind.r()),
            lambda: format_rational(l),
            m,
        }),
    }
}

/// The closed-form singular vector `which` for parameter `M`.
pub fn closed_form(
    kind: &VermaKind,
    which: ClosedFormKind,
    m: u32,
) -> Result<ModuleVector, SingularError> {
    check_constraint(kind, which, m)?;
    let mi = m as i64;
    let mut terms: Vec<(BasisIndex, Rational)> = Vec::new();
    let two_pow = |e: i64| pow(&int(2), e as u32);
    match (kind.has_lambda(), which) {
        (false, ClosedFormKind::Chi01) => {
            for j in 0..=mi / 2 {
                terms.push((ket(0, 2 * (mi - 2 * j) + 1, 2 * j), two_pow(2 * j) * binomial(mi, 2 * j)));
            }
            for j in 0..=(mi - 1).div_euclid(2) {
                terms.push((ket(1, 2 * (mi - 2 * j - 1), 2 * j + 1), -two_pow(2 * j + 1) * binomial(mi, 2 * j + 1)));
            }
        }
        (false, ClosedFormKind::Chi10) => {
            for j in 0..=(mi - 1).div_euclid(2) {
                terms.push((ket(0, 2 * (mi - 2 * j - 1) + 1, 2 * j + 1), -two_pow(2 * j + 1) * binomial(mi, 2 * j + 1)));
            }
            for j in 0..=mi / 2 {
                terms.push((ket(1, 2 * (mi - 2 * j), 2 * j), two_pow(2 * j) * binomial(mi, 2 * j)));
            }
        }
        (false, ClosedFormKind::Chi11) => {
            for j in 0..=mi {
                let c = pow(&int(-4), j as u32) * binomial(mi, j);
                terms.push((ket(0, 4 * (mi - j), 2 * j + 1), int(-2) * &c));
                terms.push((ket(1, 4 * (mi - j) + 1, 2 * j), c));
            }
        }
        (true, which) => {
            let s = kind.r() + int(2 * mi);
            let sp = |e: i64| pow(&s, e.rem_euclid(2) as u32);
            for j in 0..=mi {
                let c = pow(&int(-2), j as u32) * binomial(mi, j);
                let (j0, j1) = (j.rem_euclid(2) as u8, (j + 1).rem_euclid(2) as u8);
                let k0 = 2 * (mi - j) + 1;
                let k1 = 2 * (mi - j);
                match which {
                    ClosedFormKind::Chi01 => {
                        terms.push((ket_b(0, k0, j, j0), &c * sp(j + 1)));
                        terms.push((ket_b(1, k1, j, j1), &c * sp(j)));
                    }
                    ClosedFormKind::Chi10 => {
                        terms.push((ket_b(0, k0, j, j1), &c * sp(j)));
                        terms.push((ket_b(1, k1, j, j0), &c * sp(j + 1)));
                    }
                    ClosedFormKind::Chi11 => unreachable!("rejected by the constraint check"),
                }
            }
        }
    }
    Ok(ModuleVector::from_terms(kind, terms).expect("indices match the module kind"))
}

fn ket(alpha: u8, k: i64, m: i64) -> BasisIndex {
    BasisIndex::new(alpha, k as u32, m as u32)
}

fn ket_b(alpha: u8, k: i64, m: i64, beta: u8) -> BasisIndex {
    BasisIndex::with_beta(alpha, k as u32, m as u32, beta)
}

/// Closed form expected in a given level and sector, if any.
pub fn applicable_closed_form(
    kind: &VermaKind,
    level: u32,
    sector: GradedDegree,
) -> Option<(ClosedFormKind, u32)> {
    for m in constraint_ms(kind) {
        if level == 2 * m + 1 {
            if sector == GradedDegree::new(0, 1) {
                return Some((ClosedFormKind::Chi01, m));
            }
            if sector == GradedDegree::new(1, 0) {
                return Some((ClosedFormKind::Chi10, m));
            }
        }
        if !kind.has_lambda() && level == 2 * (2 * m + 1) && sector == GradedDegree::new(1, 1) {
            return Some((ClosedFormKind::Chi11, m));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RtildeCheck {
    /// `c` with `R̃χ = c·χ'`, `None` when `R̃χ` is not proportional to the partner.
    pub computed: Option<Rational>,
    pub stated: Rational,
}

impl RtildeCheck {
    pub fn agrees(&self) -> bool {
        self.computed.as_ref() == Some(&self.stated)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularReport {
    pub kind: VermaKind,
    pub level: u32,
    pub sector: GradedDegree,
    /// Null-space basis in reduced row echelon form over the canonical order.
    pub nullspace: Vec<ModuleVector>,
    pub closed_form: Option<(ClosedFormKind, u32)>,
    pub closed_form_match: ClosedFormMatch,
    pub rtilde: Option<RtildeCheck>,
}

impl SingularReport {
    pub fn is_empty(&self) -> bool {
        self.nullspace.is_empty()
    }

    pub fn to_record(&self) -> SingularReportRecord {
        SingularReportRecord {
            kind: self.kind.tag().to_string(),
            r: format_rational(self.kind.r()),
            lambda: self.kind.lambda().map(format_rational),
            level: self.level,
            sector: self.sector.to_string(),
            nullspace: self.nullspace.iter().map(ModuleVector::to_record).collect(),
            closed_form: self.closed_form.map(|(w, _)| w),
            m: self.closed_form.map(|(_, m)| m),
            closed_form_match: self.closed_form_match,
            rtilde: self.rtilde.as_ref().map(|c| RtildeRecord {
                computed: c.computed.as_ref().map(format_rational),
                stated: format_rational(&c.stated),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularReportRecord {
    pub kind: String,
    pub r: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    pub level: u32,
    pub sector: String,
    pub nullspace: Vec<ModuleVectorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormKind>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub closed_form_match: ClosedFormMatch,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rtilde: Option<RtildeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RtildeRecord {
    pub computed: Option<String>,
    pub stated: String,
}

/// Matrix of `a₋ ⊕ ã₋` from the sector basis into `M_{N−1} ⊕ M_{N−1}`.
pub fn lowering_matrix(kind: &VermaKind, level: u32, sector_basis: &[BasisIndex]) -> Matrix {
    let below = enumerate_level(kind, level - 1).basis;
    let am = action_matrix(Generator::Am, kind, sector_basis, &below);
    let atm = action_matrix(Generator::Atm, kind, sector_basis, &below);
    am.vstack(&atm)
}

/// Singular vectors of `kind` at `level` in `sector`, compared with the closed forms.
pub fn find_singular(
    kind: &VermaKind,
    level: u32,
    sector: GradedDegree,
) -> Result<SingularReport, SingularError> {
    if level == 0 {
        return Err(SingularError::ZeroLevel);
    }
    if !sectors_for_level(level).contains(&sector) {
        return Err(SingularError::SectorParity { level, sector });
    }
    let basis = enumerate_level(kind, level).sector(sector);
    let mat = lowering_matrix(kind, level, &basis);
    let nullspace: Vec<ModuleVector> = mat
        .nullspace()
        .iter()
        .map(|coords| ModuleVector::from_coords(kind, &basis, coords))
        .collect();
    let closed = applicable_closed_form(kind, level, sector);
    let (closed_form_match, rtilde) = match closed {
        None if nullspace.is_empty() => (ClosedFormMatch::NoClosedForm, None),
        None => (ClosedFormMatch::Mismatch, None),
        Some((which, m)) => {
            let chi = closed_form(kind, which, m).expect("constraint holds by construction");
            let status = match nullspace.as_slice() {
                [v] if *v == chi => ClosedFormMatch::Exact,
                [v] if proportionality(&chi.coords(&basis), &v.coords(&basis))
                    .is_some_and(|c| !c.is_zero()) =>
                {
                    ClosedFormMatch::ScalarMultiple
                }
                _ => ClosedFormMatch::Mismatch,
            };
            let rt = match which {
                ClosedFormKind::Chi11 => None,
                _ => Some(rtilde_between(kind, which, m)),
            };
            (status, rt)
        }
    };
    Ok(SingularReport {
        kind: kind.clone(),
        level,
        sector,
        nullspace,
        closed_form: closed,
        closed_form_match,
        rtilde,
    })
}

/// Reports for every level `1..=max_level`, both sectors, ordered by (level, sector).
pub fn sweep(kind: &VermaKind, max_level: u32) -> Vec<SingularReport> {
    let mut out = Vec::new();
    for level in 1..=max_level {
        let mut sectors = sectors_for_level(level);
        sectors.sort();
        for sector in sectors {
            out.push(find_singular(kind, level, sector).expect("valid sector"));
        }
    }
    out
}

/// Expected `c` in `R̃χ₀₁ = c·χ₁₀`: `2M+1` in `M(r)`, `1−r` in `M(r,λ)`.
pub fn stated_rtilde_coefficient(kind: &VermaKind, m: u32) -> Rational {
    match kind.lambda() {
        None => int(2 * m as i64 + 1),
        Some(_) => int(1) - kind.r(),
    }
}

fn rtilde_between(kind: &VermaKind, which: ClosedFormKind, m: u32) -> RtildeCheck {
    let (from, to) = match which {
        ClosedFormKind::Chi01 => (ClosedFormKind::Chi01, ClosedFormKind::Chi10),
        _ => (ClosedFormKind::Chi10, ClosedFormKind::Chi01),
    };
    let chi = closed_form(kind, from, m).expect("constraint");
    let partner = closed_form(kind, to, m).expect("constraint");
    RtildeCheck {
        computed: vector_ratio(&act(Generator::Rt, &chi), &partner),
        stated: stated_rtilde_coefficient(kind, m),
    }
}

/// `c` with `u = c·v`.
pub fn vector_ratio(u: &ModuleVector, v: &ModuleVector) -> Option<Rational> {
    let mut idx: Vec<BasisIndex> = u.terms().map(|(i, _)| *i).collect();
    idx.extend(v.terms().map(|(i, _)| *i));
    idx.sort();
    idx.dedup();
    proportionality(&u.coords(&idx), &v.coords(&idx))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RtildeReport {
    pub kind: VermaKind,
    pub m: u32,
    pub chi01_to_chi10: RtildeCheck,
    pub chi10_to_chi01: RtildeCheck,
    /// `R̃χ₁₁ = 0`, only for `M(r)`.
    pub chi11_annihilated: Option<bool>,
}

impl RtildeReport {
    pub fn agrees_with_statement(&self) -> bool {
        self.chi01_to_chi10.agrees()
            && self.chi10_to_chi01.agrees()
            && self.chi11_annihilated.unwrap_or(true)
    }
}

pub fn verify_rtilde_relations(kind: &VermaKind, m: u32) -> Result<RtildeReport, SingularError> {
    check_constraint(kind, ClosedFormKind::Chi01, m)?;
    let chi11_annihilated = if kind.has_lambda() {
        None
    } else {
        let chi = closed_form(kind, ClosedFormKind::Chi11, m)?;
        Some(act(Generator::Rt, &chi).is_zero())
    };
    Ok(RtildeReport {
        kind: kind.clone(),
        m,
        chi01_to_chi10: rtilde_between(kind, ClosedFormKind::Chi01, m),
        chi10_to_chi01: rtilde_between(kind, ClosedFormKind::Chi10, m),
        chi11_annihilated,
    })
}

/// The coefficient systems of the singular-vector derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RecurrenceSystem {
    /// `χ₀₁` of `M(r)` at level `2M+1`.
    #[serde(rename = "mu-nu")]
    MuNu,
    /// `χ₁₀` of `M(r)` at level `2M+1`.
    #[serde(rename = "alpha-beta")]
    AlphaBeta,
    /// `χ₀₀` of `M(r)` at level `2M`.
    #[serde(rename = "rho-sigma")]
    RhoSigma,
    /// `χ₁₁` of `M(r)` at level `2M`.
    #[serde(rename = "gamma-delta")]
    GammaDelta,
    /// `χ₀₁` of `M(r,λ)` at level `2M+1`.
    #[serde(rename = "mu-nu-lambda")]
    MuNuLambda,
}

impl RecurrenceSystem {
    pub const ALL: [RecurrenceSystem; 5] = [
        RecurrenceSystem::MuNu,
        RecurrenceSystem::AlphaBeta,
        RecurrenceSystem::RhoSigma,
        RecurrenceSystem::GammaDelta,
        RecurrenceSystem::MuNuLambda,
    ];

    pub fn family_names(self) -> [&'static str; 2] {
        match self {
            RecurrenceSystem::MuNu | RecurrenceSystem::MuNuLambda => ["mu", "nu"],
            RecurrenceSystem::AlphaBeta => ["alpha", "beta"],
            RecurrenceSystem::RhoSigma => ["rho", "sigma"],
            RecurrenceSystem::GammaDelta => ["gamma", "delta"],
        }
    }

    pub fn level(self, m: u32) -> u32 {
        match self {
            RecurrenceSystem::RhoSigma | RecurrenceSystem::GammaDelta => 2 * m,
            _ => 2 * m + 1,
        }
    }

    pub fn sector(self) -> GradedDegree {
        match self {
            RecurrenceSystem::MuNu | RecurrenceSystem::MuNuLambda => GradedDegree::new(0, 1),
            RecurrenceSystem::AlphaBeta => GradedDegree::new(1, 0),
            RecurrenceSystem::RhoSigma => GradedDegree::new(0, 0),
            RecurrenceSystem::GammaDelta => GradedDegree::new(1, 1),
        }
    }

    /// Basis vectors carrying each unknown, family by family, ascending `j`.
    pub fn ansatz(self, m: u32) -> [Vec<BasisIndex>; 2] {
        let m = m as i64;
        // Empty when `hi < 0`.
        let upto = |hi: i64| 0..=hi;
        match self {
            RecurrenceSystem::MuNu => [
                upto(m / 2).map(|j| ket(0, 2 * (m - 2 * j) + 1, 2 * j)).collect(),
                upto((m - 1).div_euclid(2)).map(|j| ket(1, 2 * (m - 2 * j - 1), 2 * j + 1)).collect(),
            ],
            RecurrenceSystem::AlphaBeta => [
                upto((m - 1).div_euclid(2)).map(|j| ket(0, 2 * (m - 2 * j - 1) + 1, 2 * j + 1)).collect(),
                upto(m / 2).map(|j| ket(1, 2 * (m - 2 * j), 2 * j)).collect(),
            ],
            RecurrenceSystem::RhoSigma => [
                upto(m / 2).map(|j| ket(0, 2 * (m - 2 * j), 2 * j)).collect(),
                upto(m / 2 - 1).map(|j| ket(1, 2 * (m - 2 * j - 1) - 1, 2 * j + 1)).collect(),
            ],
            RecurrenceSystem::GammaDelta => [
                upto((m - 1).div_euclid(2)).map(|j| ket(0, 2 * (m - 2 * j - 1), 2 * j + 1)).collect(),
                upto((m - 1).div_euclid(2)).map(|j| ket(1, 2 * (m - 2 * j) - 1, 2 * j)).collect(),
            ],
            RecurrenceSystem::MuNuLambda => [
                upto(m).map(|j| ket_b(0, 2 * (m - j) + 1, j, j.rem_euclid(2) as u8)).collect(),
                upto(m).map(|j| ket_b(1, 2 * (m - j), j, (j + 1).rem_euclid(2) as u8)).collect(),
            ],
        }
    }
}

impl fmt::Display for RecurrenceSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecurrenceSystem::MuNu => "mu-nu",
            RecurrenceSystem::AlphaBeta => "alpha-beta",
            RecurrenceSystem::RhoSigma => "rho-sigma",
            RecurrenceSystem::GammaDelta => "gamma-delta",
            RecurrenceSystem::MuNuLambda => "mu-nu-lambda",
        })
    }
}

/// One linear relation: `Σ coeff · unknown(family, j) = 0`.
type Relation = Vec<(usize, i64, Rational)>;

struct Builder {
    sizes: [i64; 2],
    rows: Vec<Relation>,
}

impl Builder {
    fn rel(&mut self, terms: Vec<(usize, i64, Rational)>) {
        self.rows.push(terms);
    }

    fn matrix(&self) -> Matrix {
        let n = (self.sizes[0] + self.sizes[1]) as usize;
        let mut mat = Matrix::zeros(self.rows.len(), n);
        for (i, row) in self.rows.iter().enumerate() {
            for (fam, j, c) in row {
                // Unknowns outside the ansatz are zero.
                if *j < 0 || *j >= self.sizes[*fam] {
                    continue;
                }
                let col = if *fam == 0 { *j } else { self.sizes[0] + j } as usize;
                mat[(i, col)] += c;
            }
        }
        mat
    }
}

/// Assembles the relations of `system` as a matrix over the unknowns
/// (first family, then second, ascending `j`).
pub fn recurrence_matrix(system: RecurrenceSystem, m: u32, r: &Rational, lambda: Option<&Rational>) -> Matrix {
    let ans = system.ansatz(m);
    let mut b = Builder {
        sizes: [ans[0].len() as i64, ans[1].len() as i64],
        rows: Vec::new(),
    };
    let mi = m as i64;
    let k = mi / 2;
    let odd = mi % 2 == 1;
    let q = |x: i64| int(x);
    let rr = |x: i64| r + int(x);
    let lam = lambda.cloned().unwrap_or_else(Rational::one);
    let lp = |e: i64| if e.rem_euclid(2) == 1 { lam.clone() } else { Rational::one() };
    const F: usize = 0;
    const G: usize = 1;
    let top = if odd { k } else { k - 1 };
    match system {
        RecurrenceSystem::MuNu => {
            for j in 0..=top {
                b.rel(vec![(F, j, q(2 * (mi - 2 * j))), (G, j, q(2 * j + 1))]);
            }
            for j in 0..k {
                b.rel(vec![(F, j + 1, q(j + 1)), (G, j, -rr(mi + 2 * j + 1))]);
                b.rel(vec![(F, j + 1, q(j + 1)), (G, j, q(mi - 2 * j - 1))]);
            }
            if odd {
                b.rel(vec![(G, k, rr(2 * mi))]);
            }
            b.rel(vec![(F, 0, q(2) * rr(mi)), (G, 0, q(-1))]);
            for j in 1..=top {
                b.rel(vec![
                    (F, j, q(2) * rr(mi - 2 * j)),
                    (G, j, q(-(2 * j + 1))),
                    (G, j - 1, q(-8 * (mi - 2 * j + 1))),
                ]);
            }
            if !odd {
                b.rel(vec![(F, k, r.clone()), (G, k - 1, q(-4))]);
            }
        }
        RecurrenceSystem::AlphaBeta => {
            for j in 0..k {
                b.rel(vec![(F, j, q(mi - 2 * j - 1)), (G, j + 1, q(j + 1))]);
                b.rel(vec![(F, j, rr(mi - 2 * j - 1)), (G, j, q(-4 * (mi - 2 * j))), (G, j + 1, q(-(j + 1)))]);
            }
            for j in 0..=top {
                b.rel(vec![(F, j, q(-(2 * j + 1))), (G, j, q(2) * rr(mi + 2 * j))]);
                b.rel(vec![(F, j, q(2 * j + 1)), (G, j, q(2 * (mi - 2 * j)))]);
            }
            if !odd {
                b.rel(vec![(G, k, rr(2 * mi))]);
            } else {
                b.rel(vec![(F, k, r.clone()), (G, k, q(-4))]);
            }
        }
        RecurrenceSystem::RhoSigma => {
            for j in 0..k {
                b.rel(vec![(F, j, q(2 * (mi - 2 * j))), (G, j, q(-(2 * j + 1)))]);
            }
            for j in 1..=k {
                b.rel(vec![(F, j, q(j)), (G, j - 1, rr(mi + 2 * j - 1))]);
                b.rel(vec![(F, j, q(-j)), (G, j - 1, rr(mi - 2 * j - 1))]);
            }
            if odd {
                b.rel(vec![(F, k, q(1))]);
                b.rel(vec![(F, k, q(1)), (G, k - 1, q(4))]);
            }
            b.rel(vec![(F, 0, q(2 * mi)), (G, 0, q(1))]);
            for j in 1..k {
                b.rel(vec![
                    (F, j, q(2 * (mi - 2 * j))),
                    (G, j, q(2 * j + 1)),
                    (G, j - 1, q(8 * (mi - 2 * j))),
                ]);
            }
        }
        RecurrenceSystem::GammaDelta => {
            for j in 1..=top {
                b.rel(vec![(F, j - 1, q(mi - 2 * j + 1)), (G, j, q(-j))]);
                b.rel(vec![
                    (F, j - 1, q(mi - 2 * j + 1)),
                    (G, j - 1, q(4 * (mi - 2 * j + 1))),
                    (G, j, q(j)),
                ]);
                b.rel(vec![(G, j, q(j)), (G, j - 1, q(2 * (mi - 2 * j + 1)))]);
            }
            for j in 0..=top {
                b.rel(vec![(F, j, q(2 * j + 1)), (G, j, q(2) * rr(mi + 2 * j))]);
                b.rel(vec![(F, j, q(2 * j + 1)), (G, j, q(-2) * rr(mi - 2 * j - 2))]);
            }
            if !odd {
                b.rel(vec![(F, k - 1, q(1))]);
                b.rel(vec![(F, k - 1, q(1)), (G, k - 1, q(4))]);
            }
        }
        RecurrenceSystem::MuNuLambda => {
            b.rel(vec![(F, mi, lp(mi)), (G, mi, -rr(2 * mi))]);
            for j in 0..mi {
                b.rel(vec![(F, j + 1, q(j + 1)), (F, j, q(2) * lp(j)), (G, j, q(-2) * rr(mi + j))]);
                b.rel(vec![(F, j, q(2 * (mi - j))), (G, j + 1, q(j + 1))]);
                b.rel(vec![(F, j + 1, q(j + 1)), (G, j, q(2 * (mi - j)))]);
            }
            b.rel(vec![(F, 0, q(2) * rr(mi)), (G, 1, q(-1)), (G, 0, q(-2) * &lam)]);
            for j in 1..mi {
                b.rel(vec![
                    (F, j, q(2) * rr(mi - j)),
                    (G, j + 1, q(-(j + 1))),
                    (G, j - 1, q(-8 * (mi - j + 1))),
                    (G, j, q(-2) * lp(j + 1)),
                ]);
            }
            b.rel(vec![(F, mi, r.clone()), (G, mi - 1, q(-4)), (G, mi, -lp(mi + 1))]);
        }
    }
    b.matrix()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSolution {
    pub system: RecurrenceSystem,
    pub m: u32,
    /// Dimension of the solution space.
    pub dimension: usize,
    /// First solution, normalized so the first nonzero unknown in family order is 1;
    /// all zeros when the space is trivial.
    pub families: [Vec<Rational>; 2],
}

impl RecurrenceSolution {
    pub fn is_zero(&self) -> bool {
        self.dimension == 0
    }

    /// The solution as a module vector on the ansatz basis.
    pub fn to_vector(&self, kind: &VermaKind) -> ModuleVector {
        let ans = self.system.ansatz(self.m);
        let terms = ans
            .iter()
            .zip(&self.families)
            .flat_map(|(idx, vals)| idx.iter().copied().zip(vals.iter().cloned()));
        ModuleVector::from_terms(kind, terms).expect("ansatz matches kind")
    }
}

pub fn recurrence_solve(
    system: RecurrenceSystem,
    m: u32,
    r: &Rational,
    lambda: Option<&Rational>,
) -> RecurrenceSolution {
    let mat = recurrence_matrix(system, m, r, lambda);
    let ns = mat.nullspace();
    let n0 = system.ansatz(m)[0].len();
    let first = ns
        .first()
        .map(|v| normalize_first(v))
        .unwrap_or_else(|| vec![Rational::zero(); mat.cols()]);
    RecurrenceSolution {
        system,
        m,
        dimension: ns.len(),
        families: [first[..n0].to_vec(), first[n0..].to_vec()],
    }
}

fn normalize_first(v: &[Rational]) -> Vec<Rational> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let lead = lead.clone();
            v.iter().map(|x| x / &lead).collect()
        }
        None => v.to_vec(),
    }
}

/// Closed-form coefficients read off on the ansatz basis, normalized like
/// [`recurrence_solve`]. `None` when no closed form applies.
pub fn closed_form_coefficients(
    system: RecurrenceSystem,
    m: u32,
    kind: &VermaKind,
) -> Option<[Vec<Rational>; 2]> {
    let level = system.level(m);
    let (which, cm) = applicable_closed_form(kind, level, system.sector())?;
    let chi = closed_form(kind, which, cm).ok()?;
    let ans = system.ansatz(m);
    let flat: Vec<Rational> = ans.iter().flatten().map(|i| chi.coefficient(i)).collect();
    let flat = normalize_first(&flat);
    let n0 = ans[0].len();
    Some([flat[..n0].to_vec(), flat[n0..].to_vec()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn mr(r: i64) -> VermaKind {
        VermaKind::mr(int(r))
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn constraint_detection() {
        assert_eq!(mr_constraint_m(&int(-4)), Some(2));
        assert_eq!(mr_constraint_m(&int(0)), Some(0));
        assert_eq!(mr_constraint_m(&int(-3)), None);
        assert_eq!(mr_constraint_m(&int(2)), None);
        assert_eq!(lambda_constraint_ms(&int(0), &int(16)), vec![2]);
        assert_eq!(lambda_constraint_ms(&int(-3), &int(1)), vec![1, 2]);
        assert_eq!(lambda_constraint_ms(&frac(1, 2), &int(2)), Vec::<u32>::new());
    }

    #[test]
    fn small_cases_for_mr() {
        let r = find_singular(&mr(0), 1, GradedDegree::new(0, 1)).unwrap();
        assert_eq!(r.nullspace, vec![ModuleVector::basis(&mr(0), ket(0, 1, 0)).unwrap()]);
        assert_eq!(r.closed_form_match, ClosedFormMatch::Exact);

        let k = mr(-2);
        let r = find_singular(&k, 3, GradedDegree::new(0, 1)).unwrap();
        let expected =
            ModuleVector::from_terms(&k, [(ket(0, 3, 0), int(1)), (ket(1, 0, 1), int(-2))]).unwrap();
        assert_eq!(r.nullspace, vec![expected.clone()]);
        assert_eq!(closed_form(&k, ClosedFormKind::Chi01, 1).unwrap(), expected);

        let r = find_singular(&mr(0), 2, GradedDegree::new(1, 1)).unwrap();
        let chi11 = closed_form(&mr(0), ClosedFormKind::Chi11, 0).unwrap();
        assert_eq!(
            chi11,
            ModuleVector::from_terms(&mr(0), [(ket(0, 0, 1), int(-2)), (ket(1, 1, 0), int(1))]).unwrap()
        );
        assert_eq!(r.nullspace.len(), 1);
        assert_ne!(r.closed_form_match, ClosedFormMatch::Mismatch);

        let half = VermaKind::mr(frac(1, 2));
        for n in [1, 3, 5, 7] {
            for s in sectors_for_level(n) {
                assert!(find_singular(&half, n, s).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn small_cases_for_mr_lambda() {
        let k = VermaKind::mr_lambda(int(1), int(1)).unwrap();
        let r = find_singular(&k, 1, GradedDegree::new(0, 1)).unwrap();
        let expected =
            ModuleVector::from_terms(&k, [(ket_b(0, 1, 0, 0), int(1)), (ket_b(1, 0, 0, 1), int(1))]).unwrap();
        assert_eq!(r.nullspace, vec![expected]);
        let chi10 = closed_form(&k, ClosedFormKind::Chi10, 0).unwrap();
        assert_eq!(
            chi10,
            ModuleVector::from_terms(&k, [(ket_b(0, 1, 0, 1), int(1)), (ket_b(1, 0, 0, 0), int(1))]).unwrap()
        );
    }

    #[test]
    fn errors() {
        assert_eq!(
            find_singular(&mr(0), 2, GradedDegree::new(0, 1)).unwrap_err(),
            SingularError::SectorParity { level: 2, sector: GradedDegree::new(0, 1) }
        );
        assert_eq!(find_singular(&mr(0), 0, GradedDegree::ZERO).unwrap_err(), SingularError::ZeroLevel);
        assert!(matches!(
            closed_form(&mr(1), ClosedFormKind::Chi01, 0),
            Err(SingularError::MrConstraint { .. })
        ));
        let kl = VermaKind::mr_lambda(int(1), int(1)).unwrap();
        assert_eq!(closed_form(&kl, ClosedFormKind::Chi11, 0), Err(SingularError::Chi11InMrLambda));
        assert!(matches!(
            closed_form(&kl, ClosedFormKind::Chi01, 1),
            Err(SingularError::MrLambdaConstraint { .. })
        ));
    }

    #[test]
    fn rtilde_for_mr() {
        let rep = verify_rtilde_relations(&mr(-2), 1).unwrap();
        assert_eq!(rep.chi01_to_chi10.computed, Some(int(3)));
        assert_eq!(rep.chi10_to_chi01.computed, Some(int(3)));
        assert!(rep.agrees_with_statement());
        let rep = verify_rtilde_relations(&mr(0), 0).unwrap();
        assert_eq!(rep.chi11_annihilated, Some(true));
    }

    #[test]
    fn recurrence_examples() {
        let s = recurrence_solve(RecurrenceSystem::MuNu, 1, &int(-2), None);
        assert_eq!(s.dimension, 1);
        assert_eq!(s.families, [ints(&[1]), ints(&[-2])]);
        assert!(recurrence_solve(RecurrenceSystem::MuNu, 1, &int(0), None).is_zero());
        for m in 1..=4 {
            assert!(recurrence_solve(RecurrenceSystem::RhoSigma, m, &int(-3), None).is_zero());
        }
    }

    #[test]
    fn report_json_shape() {
        let rep = find_singular(&mr(-2), 3, GradedDegree::new(1, 0)).unwrap();
        let v = serde_json::to_value(rep.to_record()).unwrap();
        assert_eq!(v["sector"], "(1,0)");
        assert_eq!(v["closed_form"], "chi10");
        assert_eq!(v["rtilde"]["stated"], "3/1");
        assert_eq!(v["nullspace"][0]["terms"][0]["coeff"], "1/1");
    }
}
