//! Lowest-weight Verma modules `M(r)` and `M(r,λ)`.
//!
//! Basis vectors are `|α,k,m⟩ = ã₊^α a₊^k L̃₊^m |0⟩` and, for `M(r,λ)`,
//! `|α,k,m;β⟩` built on the two-dimensional lowest weight space `{|0⟩, |1⟩}`.
//! Generators act through closed formulas in `(α,k,m,β)`; `L₊` and `L₋` are
//! realised as `−ã₊²/2` and `a₋²/2`.
//!
//! The λ-term of `a₋|1,k,m;β⟩` carries a factor `2(−1)^{k+1}λ^β`. The variant
//! with coefficient `(−1)^{k+1}λ^β` is kept as [`FormulaSet::Unscaled`]; it
//! violates `[ã₊, a₋] = 2R̃` on `M(r,λ)` and exists only so that the
//! discrepancy stays checkable.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraElement, Generator, GradedDegree, StructureTable};
use crate::rational::{format_rational, frac, int, sign, Pretty, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VermaError {
    #[error("M(r,λ) requires λ ≠ 0")]
    ZeroLambda,
    #[error("vectors belong to different Verma modules")]
    MixedKind,
    #[error("basis index {0} does not belong to this module")]
    ForeignIndex(BasisIndex),
}

/// Which Verma module, with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VermaKind {
    Mr { r: Rational },
    MrLambda { r: Rational, lambda: Rational },
}

impl VermaKind {
    pub fn mr(r: Rational) -> Self {
        VermaKind::Mr { r }
    }

    pub fn mr_lambda(r: Rational, lambda: Rational) -> Result<Self, VermaError> {
        if lambda.is_zero() {
            return Err(VermaError::ZeroLambda);
        }
        Ok(VermaKind::MrLambda { r, lambda })
    }

    pub fn r(&self) -> &Rational {
        match self {
            VermaKind::Mr { r } | VermaKind::MrLambda { r, .. } => r,
        }
    }

    pub fn lambda(&self) -> Option<&Rational> {
        match self {
            VermaKind::Mr { .. } => None,
            VermaKind::MrLambda { lambda, .. } => Some(lambda),
        }
    }

    pub fn has_lambda(&self) -> bool {
        matches!(self, VermaKind::MrLambda { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            VermaKind::Mr { .. } => "Mr",
            VermaKind::MrLambda { .. } => "MrLambda",
        }
    }

    /// `dim M_N` : `N+1` for `M(r)`, `2(N+1)` for `M(r,λ)`.
    pub fn level_dim(&self, level: u32) -> usize {
        let n = level as usize + 1;
        if self.has_lambda() {
            2 * n
        } else {
            n
        }
    }

    fn owns(&self, idx: &BasisIndex) -> bool {
        idx.beta.is_some() == self.has_lambda()
    }
}

impl fmt::Display for VermaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VermaKind::Mr { r } => write!(f, "M({})", Pretty(r)),
            VermaKind::MrLambda { r, lambda } => write!(f, "M({},{})", Pretty(r), Pretty(lambda)),
        }
    }
}

/// `|α,k,m⟩` or `|α,k,m;β⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub alpha: u8,
    pub k: u32,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<u8>,
}

impl BasisIndex {
    pub fn new(alpha: u8, k: u32, m: u32) -> Self {
        BasisIndex {
            alpha,
            k,
            m,
            beta: None,
        }
    }

    pub fn with_beta(alpha: u8, k: u32, m: u32, beta: u8) -> Self {
        BasisIndex {
            alpha,
            k,
            m,
            beta: Some(beta),
        }
    }

    pub fn level(&self) -> u32 {
        self.alpha as u32 + self.k + 2 * self.m
    }

    /// `(α+m+β, k+m+β) mod 2`, with `β = 0` in `M(r)`.
    pub fn degree(&self) -> GradedDegree {
        let b = self.beta.unwrap_or(0) as i64;
        GradedDegree::from_ints(
            self.alpha as i64 + self.m as i64 + b,
            self.k as i64 + self.m as i64 + b,
        )
    }

    fn sort_key(&self) -> (u32, u32, u32, u8, Option<u8>) {
        (self.level(), self.m, self.k, self.alpha, self.beta)
    }
}

/// Levels first; inside a level ascending `m`, then `k`, then `α`, then `β`.
impl Ord for BasisIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for BasisIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.beta {
            None => write!(f, "|{},{},{}⟩", self.alpha, self.k, self.m),
            Some(b) => write!(f, "|{},{},{};{}⟩", self.alpha, self.k, self.m, b),
        }
    }
}

/// Finite rational combination of basis vectors of one Verma module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleVector {
    kind: VermaKind,
    terms: BTreeMap<BasisIndex, Rational>,
}

impl ModuleVector {
    pub fn zero(kind: &VermaKind) -> Self {
        ModuleVector {
            kind: kind.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(kind: &VermaKind, idx: BasisIndex) -> Result<Self, VermaError> {
        let mut v = Self::zero(kind);
        v.add_term(idx, Rational::one())?;
        Ok(v)
    }

    pub fn from_terms(
        kind: &VermaKind,
        terms: impl IntoIterator<Item = (BasisIndex, Rational)>,
    ) -> Result<Self, VermaError> {
        let mut v = Self::zero(kind);
        for (i, c) in terms {
            v.add_term(i, c)?;
        }
        Ok(v)
    }

    /// Coordinates on an ordered basis; indices outside `basis` must carry zero weight.
    pub fn from_coords(kind: &VermaKind, basis: &[BasisIndex], coords: &[Rational]) -> Self {
        let mut v = Self::zero(kind);
        for (i, c) in basis.iter().zip(coords) {
            v.push(*i, c.clone());
        }
        v
    }

    pub fn add_term(&mut self, idx: BasisIndex, c: Rational) -> Result<(), VermaError> {
        if !self.kind.owns(&idx) {
            return Err(VermaError::ForeignIndex(idx));
        }
        self.push(idx, c);
        Ok(())
    }

    fn push(&mut self, idx: BasisIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(idx).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn kind(&self) -> &VermaKind {
        &self.kind
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &BasisIndex) -> Rational {
        self.terms.get(idx).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coords(&self, basis: &[BasisIndex]) -> Vec<Rational> {
        basis.iter().map(|i| self.coefficient(i)).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.kind);
        for (i, x) in &self.terms {
            out.push(*i, x * c);
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, VermaError> {
        if self.kind != other.kind {
            return Err(VermaError::MixedKind);
        }
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.push(*i, c.clone());
        }
        Ok(out)
    }

    /// Sum of vectors from the same module. Panics on mixed kinds.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("adding vectors of different modules")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Common level of all terms; `None` for zero or mixed vectors.
    pub fn level(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(BasisIndex::level);
        let first = it.next()?;
        it.all(|l| l == first).then_some(first)
    }

    pub fn degree(&self) -> Option<GradedDegree> {
        let mut it = self.terms.keys().map(BasisIndex::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Scales so that the coefficient of the canonically first index is 1.
    pub fn normalized(&self) -> Self {
        match self.terms.values().next() {
            Some(lead) => self.scale(&(Rational::one() / lead)),
            None => self.clone(),
        }
    }

    pub fn to_record(&self) -> ModuleVectorRecord {
        ModuleVectorRecord {
            kind: self.kind.tag().to_string(),
            r: format_rational(self.kind.r()),
            lambda: self.kind.lambda().map(format_rational),
            terms: self
                .terms
                .iter()
                .map(|(i, c)| TermRecord {
                    alpha: i.alpha,
                    k: i.k,
                    m: i.m,
                    beta: i.beta,
                    coeff: format_rational(c),
                })
                .collect(),
        }
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (i, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{i}")?;
            } else {
                write!(f, "({}){i}", Pretty(c))?;
            }
        }
        Ok(())
    }
}

/// Wire form of a module vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleVectorRecord {
    pub kind: String,
    pub r: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub alpha: u8,
    pub k: u32,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<u8>,
    pub coeff: String,
}

/// Basis of one weight space `M_N`, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSpace {
    pub kind: VermaKind,
    pub level: u32,
    pub basis: Vec<BasisIndex>,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The basis vectors of the given degree, in canonical order.
    pub fn sector(&self, degree: GradedDegree) -> Vec<BasisIndex> {
        self.basis
            .iter()
            .copied()
            .filter(|b| b.degree() == degree)
            .collect()
    }

    /// The two degrees occurring at this level.
    pub fn sectors(&self) -> [GradedDegree; 2] {
        sectors_for_level(self.level)
    }
}

/// `{(0,0),(1,1)}` at even levels, `{(0,1),(1,0)}` at odd ones.
pub fn sectors_for_level(level: u32) -> [GradedDegree; 2] {
    if level.is_multiple_of(2) {
        [GradedDegree::new(0, 0), GradedDegree::new(1, 1)]
    } else {
        [GradedDegree::new(0, 1), GradedDegree::new(1, 0)]
    }
}

/// All basis indices with `α + k + 2m = N`.
pub fn enumerate_level(kind: &VermaKind, level: u32) -> WeightSpace {
    let mut basis = Vec::with_capacity(kind.level_dim(level));
    for m in 0..=level / 2 {
        for alpha in 0..=1u8 {
            let used = alpha as u32 + 2 * m;
            if used > level {
                continue;
            }
            let k = level - used;
            match kind {
                VermaKind::Mr { .. } => basis.push(BasisIndex::new(alpha, k, m)),
                VermaKind::MrLambda { .. } => {
                    basis.push(BasisIndex::with_beta(alpha, k, m, 0));
                    basis.push(BasisIndex::with_beta(alpha, k, m, 1));
                }
            }
        }
    }
    basis.sort();
    WeightSpace {
        kind: kind.clone(),
        level,
        basis,
    }
}

/// Builds the image of one basis vector term by term, dropping indices with
/// negative `k` or `m`.
struct Image<'a> {
    kind: &'a VermaKind,
    beta: Option<u8>,
    out: Vec<(BasisIndex, Rational)>,
}

impl Image<'_> {
    fn put(&mut self, alpha: i64, k: i64, m: i64, c: Rational) {
        self.put_beta(alpha, k, m, self.beta, c);
    }

    /// Term with the lowest-weight label flipped, `β ↦ β+1 mod 2`.
    fn put_flip(&mut self, alpha: i64, k: i64, m: i64, c: Rational) {
        let b = self.beta.map(|b| 1 - b);
        self.put_beta(alpha, k, m, b, c);
    }

    fn put_beta(&mut self, alpha: i64, k: i64, m: i64, beta: Option<u8>, c: Rational) {
        if k < 0 || m < 0 || c.is_zero() {
            return;
        }
        self.out.push((
            BasisIndex {
                alpha: alpha.rem_euclid(2) as u8,
                k: k as u32,
                m: m as u32,
                beta,
            },
            c,
        ));
    }

    /// `λ^β`.
    fn lambda_pow(&self) -> Rational {
        match (self.kind.lambda(), self.beta) {
            (Some(l), Some(1)) => l.clone(),
            _ => Rational::one(),
        }
    }
}

/// Which coefficient the λ-term of `a₋|1,k,m;β⟩` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormulaSet {
    /// `2(−1)^{k+1}λ^β`, consistent with the defining relations.
    #[default]
    Corrected,
    /// `(−1)^{k+1}λ^β`.
    Unscaled,
}

/// Action of a generator on a single basis vector.
pub fn act_on_basis(g: Generator, idx: &BasisIndex, kind: &VermaKind) -> Vec<(BasisIndex, Rational)> {
    act_on_basis_with(FormulaSet::Corrected, g, idx, kind)
}

pub fn act_on_basis_with(
    set: FormulaSet,
    g: Generator,
    idx: &BasisIndex,
    kind: &VermaKind,
) -> Vec<(BasisIndex, Rational)> {
    use Generator::*;
    match g {
        Lp => {
            // L₊ = −ã₊²/2
            let once = act_table(set, Atp, idx, kind);
            collect_twice(set, Atp, once, kind, &frac(-1, 2))
        }
        Lm => {
            // L₋ = a₋²/2
            let once = act_table(set, Am, idx, kind);
            collect_twice(set, Am, once, kind, &frac(1, 2))
        }
        _ => act_table(set, g, idx, kind),
    }
}

fn collect_twice(
    set: FormulaSet,
    g: Generator,
    once: Vec<(BasisIndex, Rational)>,
    kind: &VermaKind,
    factor: &Rational,
) -> Vec<(BasisIndex, Rational)> {
    let mut acc: BTreeMap<BasisIndex, Rational> = BTreeMap::new();
    for (i, c) in once {
        for (j, d) in act_table(set, g, &i, kind) {
            *acc.entry(j).or_insert_with(Rational::zero) += &c * d * factor;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn act_table(
    set: FormulaSet,
    g: Generator,
    idx: &BasisIndex,
    kind: &VermaKind,
) -> Vec<(BasisIndex, Rational)> {
    use Generator::*;
    let r = kind.r();
    let lam = kind.has_lambda();
    let a = idx.alpha as i64;
    let k = idx.k as i64;
    let m = idx.m as i64;
    let kb = k % 2;
    let (qk, qkb, qm) = (int(k), int(kb), int(m));
    let even_k = int(k - kb);
    let mut img = Image {
        kind,
        beta: idx.beta,
        out: Vec::with_capacity(4),
    };
    let lp = img.lambda_pow();

    match (g, a) {
        (R, _) => img.put(a, k, m, r + int(a + k + 2 * m)),

        (Rt, 0) => {
            img.put(0, k + 2, m - 1, sign(k) * &qm);
            img.put(0, k - 2, m + 1, sign(k) * int(2) * &even_k);
            img.put(1, k - 1, m, qkb.clone());
            if lam {
                img.put_flip(0, k, m, sign(k) * &lp);
            }
        }
        (Rt, _) => {
            img.put(1, k + 2, m - 1, sign(k + 1) * &qm);
            img.put(1, k - 2, m + 1, sign(k + 1) * int(2) * &even_k);
            img.put(0, k + 1, m, int(1 + kb));
            if lam {
                img.put_flip(1, k, m, sign(k + 1) * &lp);
            }
        }

        (Atp, _) => img.put(a + 1, k + 2 * a, m, sign(a)),
        (Ap, _) => {
            img.put(a, k + 1, m, Rational::one());
            img.put(0, k, m + 1, sign(k + 1) * int(4 * a));
        }
        (Ltp, _) => img.put(a, k, m + 1, sign(a + k)),

        (Atm, 0) => {
            img.put(1, k - 2, m, -even_k.clone());
            img.put(0, k + 1, m - 1, sign(k) * &qm);
            if lam {
                img.put_flip(0, k - 1, m, int(-2) * &qkb * &lp);
            }
        }
        (Atm, _) => {
            img.put(0, k, m, int(2) * r + int(k + kb + 4 * m));
            img.put(1, k + 1, m - 1, sign(k + 1) * &qm);
            if lam {
                img.put_flip(1, k - 1, m, int(2) * &qkb * &lp);
            }
        }

        (Am, 0) => {
            img.put(0, k - 1, m, &qk + (int(2) * r - int(1)) * &qkb);
            img.put(1, k, m - 1, sign(k + 1) * &qm);
        }
        (Am, _) => {
            img.put(1, k - 1, m, &qk + (int(2) * r - int(3)) * &qkb);
            img.put(0, k + 2, m - 1, sign(k + 1) * &qm);
            img.put(0, k - 2, m + 1, sign(k + 1) * int(4) * &even_k);
            if lam {
                let factor = match set {
                    FormulaSet::Corrected => int(2),
                    FormulaSet::Unscaled => int(1),
                };
                img.put_flip(0, k, m, sign(k + 1) * factor * &lp);
            }
        }

        (Ltm, 0) => {
            img.put(0, k, m - 1, sign(k) * &qm * (r + int(k + m - 1)));
            img.put(0, k - 4, m + 1, sign(k) * &even_k * (&even_k - int(2)));
            img.put(1, k - 3, m, &qkb * int(k - 1));
            if lam {
                img.put_flip(0, k - 2, m, sign(k) * &even_k * &lp);
            }
        }
        (Ltm, _) => {
            img.put(1, k, m - 1, sign(k + 1) * &qm * (r + int(k + m)));
            img.put(1, k - 4, m + 1, sign(k + 1) * &even_k * (&even_k - int(2)));
            img.put(
                0,
                k - 1,
                m,
                int(2) * (r - int(1)) * &qkb + int(kb + 1) * &qk,
            );
            if lam {
                img.put_flip(1, k - 2, m, sign(k + 1) * &even_k * &lp);
            }
        }

        (Lp | Lm, _) => unreachable!("handled through the quadratic realisation"),
    }
    img.out
}

/// Linear extension of the generator action.
pub fn act(g: Generator, v: &ModuleVector) -> ModuleVector {
    act_with(FormulaSet::Corrected, g, v)
}

pub fn act_with(set: FormulaSet, g: Generator, v: &ModuleVector) -> ModuleVector {
    let mut out = ModuleVector::zero(&v.kind);
    for (idx, c) in &v.terms {
        for (j, d) in act_on_basis_with(set, g, idx, &v.kind) {
            out.push(j, c * d);
        }
    }
    out
}

/// Applies a word of generators right-to-left: `word = [g1, g2]` gives `g1·g2·v`.
pub fn act_word(word: &[Generator], v: &ModuleVector) -> ModuleVector {
    word.iter().rev().fold(v.clone(), |acc, g| act(*g, &acc))
}

/// Action of an algebra element.
pub fn act_of_element(x: &AlgebraElement, v: &ModuleVector) -> ModuleVector {
    act_of_element_with(FormulaSet::Corrected, x, v)
}

pub fn act_of_element_with(set: FormulaSet, x: &AlgebraElement, v: &ModuleVector) -> ModuleVector {
    let mut out = ModuleVector::zero(&v.kind);
    for (g, c) in x.terms() {
        let img = act_with(set, g, v);
        for (j, d) in img.terms {
            out.push(j, c * d);
        }
    }
    out
}

/// `g1·g2·v − (−1)^{deg g1·deg g2} g2·g1·v − ⟦g1,g2⟧·v`; zero for a representation.
pub fn representation_residual(
    table: &StructureTable,
    g1: Generator,
    g2: Generator,
    v: &ModuleVector,
) -> ModuleVector {
    representation_residual_with(FormulaSet::Corrected, table, g1, g2, v)
}

pub fn representation_residual_with(
    set: FormulaSet,
    table: &StructureTable,
    g1: Generator,
    g2: Generator,
    v: &ModuleVector,
) -> ModuleVector {
    let s = sign(g1.degree().dot(g2.degree()) as i64);
    let lhs = act_with(set, g1, &act_with(set, g2, v));
    let swapped = act_with(set, g2, &act_with(set, g1, v)).scale(&s);
    lhs.sub(&swapped)
        .sub(&act_of_element_with(set, table.get(g1, g2), v))
}

/// Outcome of a sweep of [`representation_residual`] over generator pairs and basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationCheck {
    pub evaluations: usize,
    pub failures: Vec<(Generator, Generator, BasisIndex, ModuleVector)>,
}

impl RepresentationCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every generator pair on every basis vector of levels `0..=max_level`.
pub fn check_representation(kind: &VermaKind, max_level: u32) -> RepresentationCheck {
    check_representation_with(FormulaSet::Corrected, kind, max_level)
}

pub fn check_representation_with(
    set: FormulaSet,
    kind: &VermaKind,
    max_level: u32,
) -> RepresentationCheck {
    let table = StructureTable::standard();
    let mut check = RepresentationCheck {
        evaluations: 0,
        failures: Vec::new(),
    };
    for level in 0..=max_level {
        for idx in enumerate_level(kind, level).basis {
            let v = ModuleVector::basis(kind, idx).expect("enumerated index belongs to kind");
            for g1 in Generator::ALL {
                for g2 in Generator::ALL {
                    check.evaluations += 1;
                    let res = representation_residual_with(set, &table, g1, g2, &v);
                    if !res.is_zero() {
                        check.failures.push((g1, g2, idx, res));
                    }
                }
            }
        }
    }
    check
}

/// Matrix of `g` from level `N` to level `N + adWeight(g)`, columns indexed by `from`.
pub fn action_matrix(
    g: Generator,
    kind: &VermaKind,
    from: &[BasisIndex],
    to: &[BasisIndex],
) -> crate::linalg::Matrix {
    let pos: BTreeMap<BasisIndex, usize> = to.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let mut mat = crate::linalg::Matrix::zeros(to.len(), from.len());
    for (j, idx) in from.iter().enumerate() {
        for (t, c) in act_on_basis(g, idx, kind) {
            let i = *pos
                .get(&t)
                .unwrap_or_else(|| panic!("{g} maps {idx} outside the target basis to {t}"));
            mat[(i, j)] += c;
        }
    }
    mat
}
