//! The submodule `W = U(n⁺)ω` generated by the singular vectors, its word basis,
//! the membership of χ₁₁, quotient dimensions and the classification verdict.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::Generator;
use crate::linalg::{in_span, rank_of, reduced_row_basis, Matrix};
use crate::rational::{binomial, format_rational, int, pow, Rational};
use crate::singular::{closed_form, constraint_ms, ClosedFormKind, SingularError, DEFAULT_LEVEL_CAP};
use crate::verma::{act, act_word, action_matrix, enumerate_level, BasisIndex, ModuleVector, VermaKind};

/// Bound on `M` when scanning for the singular-vector constraints.
pub const DEFAULT_DETECTION_CAP: u32 = 32;

const RAISING: [Generator; 4] = [Generator::Ap, Generator::Atp, Generator::Lp, Generator::Ltp];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubmoduleError {
    #[error(transparent)]
    Singular(#[from] SingularError),
    #[error("word basis at M = {m}, q = {q} has rank {rank}, expected {expected}")]
    RankDeficient { m: u32, q: u32, expected: usize, rank: usize },
    #[error("coefficient matrix for M = {m} is singular")]
    SingularMatrix { m: u32 },
    #[error("χ11 is not a combination of the word vectors for M = {m}")]
    NotInSpan { m: u32 },
}

/// `ω = span{χ₀₁, χ₁₀}` for parameter `M`.
pub fn omega(kind: &VermaKind, m: u32) -> Result<[ModuleVector; 2], SubmoduleError> {
    Ok([
        closed_form(kind, ClosedFormKind::Chi01, m)?,
        closed_form(kind, ClosedFormKind::Chi10, m)?,
    ])
}

fn repeat(word: &[Generator], n: u32) -> Vec<Generator> {
    (0..n).flat_map(|_| word.iter().copied()).collect()
}

/// The `q + 1` creation words spanning `W_{2M+1+q}` when applied to ω.
pub fn wbasis_words(q: u32) -> Vec<Vec<Generator>> {
    use Generator::{Ap, Atp};
    let mut words = Vec::new();
    for j in 0..=q / 2 {
        let mut w = repeat(&[Atp, Ap], j);
        w.extend(repeat(&[Ap], q - 2 * j));
        words.push(w);
    }
    for j in 1..=q / 2 {
        let mut w = repeat(&[Ap, Atp], j);
        w.extend(repeat(&[Ap], q - 2 * j));
        words.push(w);
    }
    if q % 2 == 1 {
        let mut w = repeat(&[Atp, Ap], (q - 1) / 2);
        w.push(Atp);
        words.push(w);
    }
    words
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmoduleLevel {
    pub kind: VermaKind,
    pub m: u32,
    pub q: u32,
    pub basis: Vec<ModuleVector>,
}

impl SubmoduleLevel {
    pub fn level(&self) -> u32 {
        2 * self.m + 1 + self.q
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Every word of [`wbasis_words`] applied to χ₀₁ and to χ₁₀, without a rank check.
pub fn wbasis_vectors(kind: &VermaKind, m: u32, q: u32) -> Result<Vec<ModuleVector>, SubmoduleError> {
    let om = omega(kind, m)?;
    let words = wbasis_words(q);
    Ok(om
        .iter()
        .flat_map(|chi| words.iter().map(move |w| act_word(w, chi)))
        .collect())
}

/// Exact rank of a family of vectors at one level.
pub fn family_rank(kind: &VermaKind, level: u32, vectors: &[ModuleVector]) -> usize {
    let basis = enumerate_level(kind, level).basis;
    let rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.coords(&basis)).collect();
    rank_of(basis.len(), &rows)
}

/// The word basis of `W_{2M+1+q}`, rejected unless it has full rank `2(q+1)`.
pub fn submodule_basis(kind: &VermaKind, m: u32, q: u32) -> Result<SubmoduleLevel, SubmoduleError> {
    let basis = wbasis_vectors(kind, m, q)?;
    let expected = 2 * (q as usize + 1);
    let rank = family_rank(kind, 2 * m + 1 + q, &basis);
    if rank != expected || basis.len() != expected {
        return Err(SubmoduleError::RankDeficient { m, q, expected, rank });
    }
    Ok(SubmoduleLevel {
        kind: kind.clone(),
        m,
        q,
        basis,
    })
}

/// Spans of `U(n⁺)·gens` level by level, as RREF rows over the canonical basis.
///
/// Each level is the span of the generators living there together with the images of
/// the levels below under `a₊, ã₊, L₊, L̃₊`; nothing about the word basis is assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanTower {
    pub kind: VermaKind,
    pub levels: BTreeMap<u32, Vec<Vec<Rational>>>,
}

impl SpanTower {
    pub fn build(kind: &VermaKind, gens: &[ModuleVector], max_level: u32) -> SpanTower {
        let mut levels: BTreeMap<u32, Vec<Vec<Rational>>> = BTreeMap::new();
        let mut bases: BTreeMap<u32, Vec<BasisIndex>> = BTreeMap::new();
        for level in 0..=max_level {
            let here = enumerate_level(kind, level).basis;
            let mut rows: Vec<Vec<Rational>> = gens
                .iter()
                .filter(|v| v.level() == Some(level))
                .map(|v| v.coords(&here))
                .collect();
            for g in RAISING {
                let w = g.ad_weight() as u32;
                let Some(below) = level.checked_sub(w) else { continue };
                let Some(span) = levels.get(&below) else { continue };
                if span.is_empty() {
                    continue;
                }
                let mat = action_matrix(g, kind, &bases[&below], &here);
                rows.extend(span.iter().map(|r| mat.mul_vec(r)));
            }
            levels.insert(level, reduced_row_basis(here.len(), &rows));
            bases.insert(level, here);
        }
        SpanTower {
            kind: kind.clone(),
            levels,
        }
    }

    pub fn dim(&self, level: u32) -> usize {
        self.levels.get(&level).map_or(0, Vec::len)
    }

    pub fn contains(&self, v: &ModuleVector) -> bool {
        let Some(level) = v.level() else { return true };
        let basis = enumerate_level(&self.kind, level).basis;
        let span = self.levels.get(&level).cloned().unwrap_or_default();
        in_span(basis.len(), &span, &v.coords(&basis))
    }

    /// Basis indices not used as pivots by `W_N`: a canonical complement, i.e. a
    /// basis of the quotient level.
    pub fn quotient_complement(&self, level: u32) -> Vec<BasisIndex> {
        let basis = enumerate_level(&self.kind, level).basis;
        let pivots = self.pivots(level);
        basis
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !pivots.contains(i))
            .map(|(_, b)| b)
            .collect()
    }

    fn pivots(&self, level: u32) -> Vec<usize> {
        self.levels
            .get(&level)
            .map(|rows| rows.iter().filter_map(|r| r.iter().position(|x| !x.is_zero())).collect())
            .unwrap_or_default()
    }

    /// Matrix sending `M_N` onto the coordinates of `M_N / W_N` along the complement.
    fn quotient_map(&self, level: u32) -> Matrix {
        let n = self.kind.level_dim(level);
        let rows = self.levels.get(&level).cloned().unwrap_or_default();
        let pivots = self.pivots(level);
        let free: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        Matrix::from_fn(free.len(), n, |i, j| {
            let f = free[i];
            let direct = if f == j { int(1) } else { Rational::zero() };
            match pivots.iter().position(|&p| p == j) {
                Some(k) => direct - &rows[k][f],
                None => direct,
            }
        })
    }

    /// `dim{v ∈ M_N : a₋v, ã₋v ∈ W_{N−1}} − dim W_N`: singular vectors of the
    /// quotient at level `N ≥ 1`. Zero at every level means `M/W` has none.
    pub fn quotient_singular_dim(&self, level: u32) -> usize {
        assert!(level >= 1);
        let here = enumerate_level(&self.kind, level).basis;
        let below = enumerate_level(&self.kind, level - 1).basis;
        let q = self.quotient_map(level - 1);
        let am = q.mul(&action_matrix(Generator::Am, &self.kind, &here, &below));
        let atm = q.mul(&action_matrix(Generator::Atm, &self.kind, &here, &below));
        let kernel = here.len() - am.vstack(&atm).rank();
        kernel - self.dim(level)
    }
}

/// `W` of a module with singular vectors: generated by ω for every admissible `M`.
pub fn generating_vectors(kind: &VermaKind) -> Vec<ModuleVector> {
    constraint_ms(kind)
        .into_iter()
        .flat_map(|m| omega(kind, m).expect("constraint holds").into_iter())
        .collect()
}

/// Raising images of the word basis at offset `q` stay in the span of the word basis
/// at the target offset, which must be at most `q_max`.
pub fn word_basis_closed(kind: &VermaKind, m: u32, q: u32, q_max: u32) -> Result<bool, SubmoduleError> {
    let from = wbasis_vectors(kind, m, q)?;
    for g in RAISING {
        let tq = q + g.ad_weight() as u32;
        if tq > q_max {
            continue;
        }
        let level = 2 * m + 1 + tq;
        let basis = enumerate_level(kind, level).basis;
        let span: Vec<Vec<Rational>> = wbasis_vectors(kind, m, tq)?
            .iter()
            .map(|v| v.coords(&basis))
            .collect();
        for w in &from {
            if !in_span(basis.len(), &span, &act(g, w).coords(&basis)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `2^{2j+1−p}·C(M, 2j−p)` (zero outside the binomial range).
pub fn expected_coefficient_entry(m: u32, j: u32, p: u32) -> Rational {
    let e = 2 * j as i64 - p as i64;
    if e < 0 || e > m as i64 {
        return Rational::zero();
    }
    pow(&int(2), (e + 1) as u32) * binomial(m as i64, e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chi11Membership {
    pub m: u32,
    /// `v_p`: the pair of word vectors that `c_p` multiplies, summed.
    pub vectors: Vec<ModuleVector>,
    /// Row `j`: coefficients of `|1,4(M−j)+1,2j⟩` in each `v_p`.
    pub matrix: Matrix,
    pub rhs: Vec<Rational>,
    pub determinant: Rational,
    pub coefficients: Vec<Rational>,
    /// `χ₁₁ − Σ c_p v_p`.
    pub residual: ModuleVector,
}

/// Writes χ₁₁ of `M(−2M)` as a combination of vectors of `U(n⁺)ω`.
pub fn chi11_membership(m: u32) -> Result<Chi11Membership, SubmoduleError> {
    use Generator::{Ap, Atp, Ltp};
    let kind = VermaKind::mr(int(-2 * m as i64));
    let [chi01, chi10] = omega(&kind, m)?;
    let chi11 = closed_form(&kind, ClosedFormKind::Chi11, m)?;
    let word = |lead: &[Generator], n_ap: u32, n_ltp: u32| -> Vec<Generator> {
        let mut w = lead.to_vec();
        w.extend(repeat(&[Ap], n_ap));
        w.extend(repeat(&[Ltp], n_ltp));
        w
    };
    let mut vectors = Vec::new();
    for p in 0..=m {
        let k = p / 2;
        let v = if p % 2 == 0 {
            act_word(&word(&[Atp], 2 * (m - 2 * k), 2 * k), &chi01)
                .add(&act_word(&word(&[], 2 * (m - 2 * k) + 1, 2 * k), &chi10))
        } else {
            act_word(&word(&[], 2 * (m - 2 * k) - 1, 2 * k + 1), &chi01)
                .add(&act_word(&word(&[Atp], 2 * (m - 2 * k - 1), 2 * k + 1), &chi10))
        };
        vectors.push(v);
    }
    let n = m as usize + 1;
    let row_ket = |j: usize| BasisIndex::new(1, 4 * (m - j as u32) + 1, 2 * j as u32);
    let matrix = Matrix::from_fn(n, n, |j, p| vectors[p].coefficient(&row_ket(j)));
    let rhs: Vec<Rational> = (0..n).map(|j| chi11.coefficient(&row_ket(j))).collect();
    let determinant = matrix.determinant();
    if determinant.is_zero() {
        return Err(SubmoduleError::SingularMatrix { m });
    }
    let (coefficients, _) = matrix.solve(&rhs).ok_or(SubmoduleError::SingularMatrix { m })?;
    let combo = vectors
        .iter()
        .zip(&coefficients)
        .fold(ModuleVector::zero(&kind), |acc, (v, c)| acc.add(&v.scale(c)));
    let residual = chi11.sub(&combo);
    if !residual.is_zero() {
        return Err(SubmoduleError::NotInSpan { m });
    }
    Ok(Chi11Membership {
        m,
        vectors,
        matrix,
        rhs,
        determinant,
        coefficients,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "i",
            Case::II => "ii",
            Case::III => "iii",
            Case::IV => "iv",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(n) => write!(f, "{n}"),
            Dimension::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Dimension {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Dimension::Finite(n) => s.serialize_u64(*n),
            Dimension::Infinite => s.serialize_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelDims {
    pub level: u32,
    pub verma_dim: usize,
    pub submodule_dim: usize,
    pub quotient_dim: usize,
}

/// Per-level dimensions of `M̌`, `W` and `M̌/W` for levels `0..=max_level`.
pub fn quotient_dims(kind: &VermaKind, max_level: u32) -> Vec<LevelDims> {
    let tower = SpanTower::build(kind, &generating_vectors(kind), max_level);
    dims_from_tower(kind, &tower, max_level)
}

fn dims_from_tower(kind: &VermaKind, tower: &SpanTower, max_level: u32) -> Vec<LevelDims> {
    (0..=max_level)
        .map(|level| {
            let verma_dim = kind.level_dim(level);
            let submodule_dim = tower.dim(level);
            LevelDims {
                level,
                verma_dim,
                submodule_dim,
                quotient_dim: verma_dim - submodule_dim,
            }
        })
        .collect()
}

/// Quotient dimension predicted by the word-basis count: `2M − q` (clamped at zero)
/// in `M(r)` and `4M + 2` in `M(r,λ)` at level `2M+1+q`; the Verma dimension below.
pub fn predicted_quotient_dim(kind: &VermaKind, m: u32, level: u32) -> usize {
    if level < 2 * m + 1 {
        return kind.level_dim(level);
    }
    let q = (level - 2 * m - 1) as i64;
    if kind.has_lambda() {
        4 * m as usize + 2
    } else {
        (2 * m as i64 - q).max(0) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub detection_cap: u32,
    pub level_cap: u32,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            detection_cap: DEFAULT_DETECTION_CAP,
            level_cap: DEFAULT_LEVEL_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationVerdict {
    pub kind: VermaKind,
    pub case: Case,
    /// Smallest admissible `M`.
    pub m: Option<u32>,
    /// Further admissible `M` (only possible in `M(r,λ)`); their ω is included in `W`.
    pub other_ms: Vec<u32>,
    pub dimension: Dimension,
    pub per_level: Vec<LevelDims>,
    /// Every generator of `W` is annihilated by `a₋` and `ã₋`.
    pub singular_vectors_verified: bool,
    /// Levels at which `M̌/W` still has a singular vector.
    pub quotient_singular_levels: Vec<u32>,
}

impl ClassificationVerdict {
    pub fn to_record(&self) -> VerdictRecord {
        VerdictRecord {
            kind: self.kind.tag().to_string(),
            r: format_rational(self.kind.r()),
            lambda: self.kind.lambda().map(format_rational),
            case: self.case,
            m: self.m,
            other_ms: self.other_ms.clone(),
            dimension: self.dimension,
            per_level: self.per_level.clone(),
            singular_vectors_verified: self.singular_vectors_verified,
            quotient_singular_levels: self.quotient_singular_levels.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictRecord {
    pub kind: String,
    pub r: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    pub case: Case,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub other_ms: Vec<u32>,
    pub dimension: Dimension,
    pub per_level: Vec<LevelDims>,
    pub singular_vectors_verified: bool,
    pub quotient_singular_levels: Vec<u32>,
}

/// Decides which case of the classification applies and backs it with computed
/// dimensions. The table stops at the first empty quotient level when the quotient
/// provably terminates there, and otherwise runs to `level_cap`; `Infinite` means
/// "no termination up to the cap".
pub fn classify_module(kind: &VermaKind, opts: &ClassifyOptions) -> ClassificationVerdict {
    let ms: Vec<u32> = constraint_ms(kind)
        .into_iter()
        .filter(|&m| m <= opts.detection_cap)
        .collect();
    let m = ms.first().copied();
    let case = match (kind.has_lambda(), m.is_some()) {
        (false, false) => Case::I,
        (false, true) => Case::II,
        (true, false) => Case::III,
        (true, true) => Case::IV,
    };
    let gens: Vec<ModuleVector> = ms
        .iter()
        .flat_map(|&m| omega(kind, m).expect("constraint holds").into_iter())
        .collect();
    // Two consecutive empty quotient levels mean every higher level lies in W too,
    // since each raising generator moves up by one or two levels.
    let tower_top = match (case, m) {
        (Case::II, Some(m)) => 4 * m + 2,
        _ => opts.level_cap,
    };
    let singular_vectors_verified = gens
        .iter()
        .all(|v| act(Generator::Am, v).is_zero() && act(Generator::Atm, v).is_zero());
    let tower = SpanTower::build(kind, &gens, tower_top);
    let mut per_level = dims_from_tower(kind, &tower, tower_top);
    let terminates = per_level
        .windows(2)
        .position(|w| w[0].quotient_dim == 0 && w[1].quotient_dim == 0);
    if let Some(end) = terminates {
        per_level.truncate(end + 1);
    }
    let quotient_singular_levels = per_level
        .iter()
        .skip(1)
        .filter(|d| d.quotient_dim > 0 && tower.quotient_singular_dim(d.level) > 0)
        .map(|d| d.level)
        .collect();
    let dimension = match terminates {
        Some(_) => Dimension::Finite(per_level.iter().map(|d| d.quotient_dim as u64).sum()),
        None => Dimension::Infinite,
    };
    ClassificationVerdict {
        kind: kind.clone(),
        case,
        m,
        other_ms: ms.iter().skip(1).copied().collect(),
        dimension,
        per_level,
        singular_vectors_verified,
        quotient_singular_levels,
    }
}
