//! Finite-dimensional modules over the Cartan subalgebra `h = span{R, R̃}`.
//!
//! An [`HModule`] is the chain `|k⟩ = R̃^k|0⟩`, `k < n`, truncated by
//! `R̃|n−1⟩ = Σ c_j |j⟩` over the indices of the right parity. [`classify`]
//! splits any such module into the irreducibles `ν(r)` and `ν(r,λ)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rank_of, reduced_row_basis, Matrix};
use crate::rational::{int, Rational};

pub const DEFAULT_DIM_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("module dimension must be positive")]
    ZeroDimension,
    #[error("n = {n} needs {expected} coefficients c, got {got}")]
    CoefficientCount { n: usize, expected: usize, got: usize },
    #[error("n = {n} exceeds the dimension cap {cap}")]
    DimensionCap { n: usize, cap: usize },
}

/// Number of truncation coefficients for an `n`-dimensional chain.
pub fn expected_c_len(n: usize) -> usize {
    if n <= 1 {
        0
    } else if n % 2 == 1 {
        (n - 1) / 2
    } else {
        n / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HModule {
    pub dim: usize,
    pub r: Rational,
    /// `c_1, c_3, …` for odd `n`; `c_0, c_2, …` for even `n`.
    pub c: Vec<Rational>,
    pub mat_r: Matrix,
    pub mat_rt: Matrix,
}

pub fn build_h_module(n: usize, r: Rational, c: Vec<Rational>) -> Result<HModule, CartanError> {
    build_h_module_capped(n, r, c, usize::MAX)
}

pub fn build_h_module_capped(
    n: usize,
    r: Rational,
    c: Vec<Rational>,
    cap: usize,
) -> Result<HModule, CartanError> {
    if n == 0 {
        return Err(CartanError::ZeroDimension);
    }
    if n > cap {
        return Err(CartanError::DimensionCap { n, cap });
    }
    let expected = expected_c_len(n);
    if c.len() != expected {
        return Err(CartanError::CoefficientCount {
            n,
            expected,
            got: c.len(),
        });
    }
    let mut rt = Matrix::zeros(n, n);
    for k in 0..n - 1 {
        rt[(k + 1, k)] = Rational::one();
    }
    let first = if n % 2 == 1 { 1 } else { 0 };
    for (j, cj) in c.iter().enumerate() {
        rt[(first + 2 * j, n - 1)] = cj.clone();
    }
    Ok(HModule {
        dim: n,
        mat_r: Matrix::identity(n).scale(&r),
        r,
        c,
        mat_rt: rt,
    })
}

/// Chain whose truncation polynomial `t^h − Σ_j c_j t^j` is `Π (t − t_i)`,
/// `h = ⌊n/2⌋`. For odd `n` this is the polynomial of the sub-chain `|1⟩…|n−1⟩`.
pub fn h_module_from_roots(n: usize, r: Rational, roots: &[Rational]) -> Result<HModule, CartanError> {
    let expected = expected_c_len(n);
    if roots.len() != expected {
        return Err(CartanError::CoefficientCount {
            n,
            expected,
            got: roots.len(),
        });
    }
    let mut poly = vec![Rational::one()];
    for t in roots {
        let mut next = vec![Rational::zero(); poly.len() + 1];
        for (i, p) in poly.iter().enumerate() {
            next[i + 1] += p;
            next[i] -= p * t;
        }
        poly = next;
    }
    poly.pop();
    build_h_module(n, r, poly.into_iter().map(|x| -x).collect())
}

impl HModule {
    /// `0` for `|k⟩` of degree (0,0), `1` for (1,1).
    pub fn parities(&self) -> Vec<u8> {
        (0..self.dim).map(|k| (k % 2) as u8).collect()
    }

    /// Coefficients, lowest degree first, of `t^{n/2} − Σ c_{2j} t^j` (even `n` only).
    pub fn t_polynomial(&self) -> Option<Vec<Rational>> {
        if self.dim % 2 == 1 {
            return None;
        }
        let mut p: Vec<Rational> = self.c.iter().map(|x| -x).collect();
        p.push(Rational::one());
        Some(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IrreducibleKind {
    #[serde(rename = "nu_r")]
    NuR,
    #[serde(rename = "nu_r_lambda")]
    NuRLambda,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibleHModule {
    pub kind: IrreducibleKind,
    #[serde(with = "crate::rational::serde_pq")]
    pub r: Rational,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::rational::serde_pq::option"
    )]
    pub lambda: Option<Rational>,
}

impl IrreducibleHModule {
    pub fn nu_r(r: Rational) -> Self {
        IrreducibleHModule {
            kind: IrreducibleKind::NuR,
            r,
            lambda: None,
        }
    }

    pub fn nu_r_lambda(r: Rational, lambda: Rational) -> Self {
        assert!(!lambda.is_zero(), "ν(r,λ) needs λ ≠ 0");
        IrreducibleHModule {
            kind: IrreducibleKind::NuRLambda,
            r,
            lambda: Some(lambda),
        }
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            IrreducibleKind::NuR => 1,
            IrreducibleKind::NuRLambda => 2,
        }
    }

    /// The module itself as a chain: `ν(r)` is `n = 1`, `ν(r,λ)` is `n = 2, c = [λ]`.
    pub fn to_h_module(&self) -> HModule {
        match &self.lambda {
            None => build_h_module(1, self.r.clone(), vec![]),
            Some(l) => build_h_module(2, self.r.clone(), vec![l.clone()]),
        }
        .expect("valid irreducible chain")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubspaceRoute {
    /// Odd `n > 1`: `span{|1⟩, …, |n−1⟩}`.
    OddChain,
    /// Even `n`: `span{w, R̃w}` from a rational root `t` of the t-polynomial,
    /// or `span{R̃w}` when `t = 0`.
    TRoot(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantSubspace {
    Found {
        basis: Vec<Vec<Rational>>,
        route: SubspaceRoute,
    },
    Irreducible,
    /// Even `n` whose t-polynomial has no rational root.
    NoRationalSubspace,
}

/// Proper nonzero `R̃`-invariant subspace of an h-module, if one exists over ℚ.
pub fn find_invariant_subspace(m: &HModule) -> InvariantSubspace {
    let n = m.dim;
    if n == 1 {
        return InvariantSubspace::Irreducible;
    }
    if n % 2 == 1 {
        let basis = (1..n).map(|k| unit(n, k)).collect();
        return InvariantSubspace::Found {
            basis,
            route: SubspaceRoute::OddChain,
        };
    }
    let poly = m.t_polynomial().expect("even n");
    let roots = rational_roots(&poly);
    let t = match roots.iter().find(|t| !t.is_zero()).or(roots.first()) {
        Some(t) => t.clone(),
        None => return InvariantSubspace::NoRationalSubspace,
    };
    let w00 = chain_eigenvector(m, &t);
    let w11 = m.mat_rt.mul_vec(&w00);
    let basis = if t.is_zero() { vec![w11] } else { vec![w00, w11] };
    if basis.len() == n {
        return InvariantSubspace::Irreducible;
    }
    InvariantSubspace::Found {
        basis,
        route: SubspaceRoute::TRoot(t),
    }
}

/// `w = Σ λ_{2j}|2j⟩` with `λ_{n−2} = 1` and `R̃²w = t·w`.
fn chain_eigenvector(m: &HModule, t: &Rational) -> Vec<Rational> {
    let n = m.dim;
    let half = n / 2;
    let mut lam = vec![Rational::zero(); half];
    lam[half - 1] = Rational::one();
    if t.is_zero() {
        // λ_{2j−2} = −c_{2j}
        for j in 1..half {
            lam[j - 1] = -&m.c[j];
        }
    } else {
        // λ_0 = c_0/t, λ_{2j} = (λ_{2j−2} + c_{2j})/t
        lam[0] = &m.c[0] / t;
        for j in 1..half {
            lam[j] = (&lam[j - 1] + &m.c[j]) / t;
        }
        debug_assert!(lam[half - 1].is_one(), "t is not a root");
    }
    let mut w = vec![Rational::zero(); n];
    for (j, l) in lam.into_iter().enumerate() {
        w[2 * j] = l;
    }
    w
}

fn unit(n: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[k] = Rational::one();
    v
}

/// True when `mat·S ⊆ S`.
pub fn is_invariant(mat: &Matrix, basis: &[Vec<Rational>]) -> bool {
    let n = mat.cols();
    let dim = rank_of(n, basis);
    basis.iter().all(|v| {
        let mut all = basis.to_vec();
        all.push(mat.mul_vec(v));
        rank_of(n, &all) == dim
    })
}

/// Brute-force search: the `R̃`-cyclic span of every homogeneous vector with
/// coefficients in `−bound..=bound`. Returns the first proper nonzero one.
pub fn cyclic_subspace_search(
    mat: &Matrix,
    parities: &[u8],
    bound: i64,
) -> Option<Vec<Vec<Rational>>> {
    let n = mat.cols();
    for p in [0u8, 1] {
        let idx: Vec<usize> = (0..n).filter(|&i| parities[i] == p).collect();
        let width = (2 * bound + 1) as usize;
        let total = width.checked_pow(idx.len() as u32)?;
        for code in 1..total {
            let mut v = vec![Rational::zero(); n];
            let mut c = code;
            for &i in &idx {
                v[i] = int((c % width) as i64 - bound);
                c /= width;
            }
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            let span = cyclic_span(mat, v);
            if span.len() < n {
                return Some(span);
            }
        }
    }
    None
}

fn cyclic_span(mat: &Matrix, v: Vec<Rational>) -> Vec<Vec<Rational>> {
    let n = mat.cols();
    let mut vecs = vec![v];
    loop {
        let next = mat.mul_vec(vecs.last().expect("nonempty"));
        let before = rank_of(n, &vecs);
        vecs.push(next);
        if rank_of(n, &vecs) == before {
            vecs.pop();
            return reduced_row_basis(n, &vecs);
        }
    }
}

/// Distinct rational roots of `Σ p_i t^i`, ascending.
pub fn rational_roots(poly: &[Rational]) -> Vec<Rational> {
    let mut p = poly.to_vec();
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let shift = p.iter().position(|x| !x.is_zero()).expect("nonzero polynomial");
    if shift > 0 {
        roots.push(Rational::zero());
        p.drain(..shift);
    }
    if p.len() > 1 {
        let den = p
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = p.iter().map(|x| (x * &den).to_integer()).collect();
        for q in divisors(ints.last().expect("nonempty")) {
            for a in divisors(&ints[0]) {
                for s in [-1, 1] {
                    let cand = Rational::new(&a * BigInt::from(s), q.clone());
                    if !roots.contains(&cand) && horner(&p, &cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

fn horner(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Coefficients of `det(t·I − A)`, lowest degree first (Faddeev–LeVerrier).
pub fn characteristic_polynomial(a: &Matrix) -> Vec<Rational> {
    let n = a.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add_identity(&coeffs[n - k + 1]);
        coeffs[n - k] = -a.mul(&m).trace() / int(k as i64);
    }
    coeffs
}

trait AddIdentity {
    fn add_identity(self, c: &Rational) -> Self;
}

impl AddIdentity for Matrix {
    fn add_identity(mut self, c: &Rational) -> Self {
        for i in 0..self.rows() {
            self[(i, i)] += c;
        }
        self
    }
}

/// One piece of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constituent {
    pub kind: ConstituentKind,
    #[serde(with = "crate::rational::serde_pq")]
    pub r: Rational,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::rational::serde_pq::option"
    )]
    pub lambda: Option<Rational>,
    pub dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstituentKind {
    #[serde(rename = "nu_r")]
    NuR,
    #[serde(rename = "nu_r_lambda")]
    NuRLambda,
    /// No rational invariant subspace could be exhibited.
    #[serde(rename = "unresolved")]
    Unresolved,
}

impl Constituent {
    pub fn irreducible(&self) -> Option<IrreducibleHModule> {
        match self.kind {
            ConstituentKind::NuR => Some(IrreducibleHModule::nu_r(self.r.clone())),
            ConstituentKind::NuRLambda => Some(IrreducibleHModule::nu_r_lambda(
                self.r.clone(),
                self.lambda.clone().expect("λ present"),
            )),
            ConstituentKind::Unresolved => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanReport {
    pub dim: usize,
    #[serde(with = "crate::rational::serde_pq")]
    pub r: Rational,
    pub constituents: Vec<Constituent>,
}

impl CartanReport {
    pub fn fully_resolved(&self) -> bool {
        self.constituents
            .iter()
            .all(|c| c.kind != ConstituentKind::Unresolved)
    }
}

/// A composition factor together with the matrix of `R̃` on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub constituent: Constituent,
    pub mat_rt: Matrix,
    pub parities: Vec<u8>,
}

pub fn classify(m: &HModule) -> CartanReport {
    CartanReport {
        dim: m.dim,
        r: m.r.clone(),
        constituents: classify_blocks(m).into_iter().map(|b| b.constituent).collect(),
    }
}

/// Composition series of the module, bottom first.
pub fn classify_blocks(m: &HModule) -> Vec<Block> {
    let mut out = Vec::new();
    split(&m.r, m.mat_rt.clone(), m.parities(), &mut out);
    out
}

/// Recursively splits a graded `R̃`-module `(T, parities)` along invariant subspaces.
fn split(r: &Rational, t: Matrix, parities: Vec<u8>, out: &mut Vec<Block>) {
    let n = t.rows();
    if n == 0 {
        return;
    }
    let sub = match graded_invariant_subspace(&t, &parities) {
        Split::Irreducible(kind, lambda) => {
            out.push(Block {
                constituent: Constituent {
                    kind,
                    r: r.clone(),
                    lambda,
                    dim: n,
                },
                mat_rt: t,
                parities,
            });
            return;
        }
        Split::Unresolved => {
            out.push(Block {
                constituent: Constituent {
                    kind: ConstituentKind::Unresolved,
                    r: r.clone(),
                    lambda: None,
                    dim: n,
                },
                mat_rt: t,
                parities,
            });
            return;
        }
        Split::Sub(basis) => basis,
    };
    let s = sub.len();
    // Complete to a basis with unit vectors, first pivot wins.
    let mut cols = sub.clone();
    for k in 0..n {
        let e = unit(n, k);
        let mut trial = cols.clone();
        trial.push(e.clone());
        if rank_of(n, &trial) == trial.len() {
            cols = trial;
        }
        if cols.len() == n {
            break;
        }
    }
    let p = Matrix::from_rows(n, &cols).transpose();
    let pinv = p.inverse().expect("completed basis");
    let tt = pinv.mul(&t).mul(&p);
    let par: Vec<u8> = cols.iter().map(|v| vector_parity(v, &parities)).collect();
    let block = |lo: usize, hi: usize| Matrix::from_fn(hi - lo, hi - lo, |i, j| tt[(lo + i, lo + j)].clone());
    split(r, block(0, s), par[..s].to_vec(), out);
    split(r, block(s, n), par[s..].to_vec(), out);
}

fn vector_parity(v: &[Rational], parities: &[u8]) -> u8 {
    let i = v.iter().position(|x| !x.is_zero()).expect("nonzero vector");
    parities[i]
}

enum Split {
    Sub(Vec<Vec<Rational>>),
    Irreducible(ConstituentKind, Option<Rational>),
    Unresolved,
}

fn graded_invariant_subspace(t: &Matrix, parities: &[u8]) -> Split {
    let n = t.rows();
    if n == 1 {
        return Split::Irreducible(ConstituentKind::NuR, None);
    }
    // A homogeneous kernel vector spans a copy of ν(r).
    for p in [0u8, 1] {
        let idx: Vec<usize> = (0..n).filter(|&i| parities[i] == p).collect();
        if idx.is_empty() {
            continue;
        }
        let restricted = Matrix::from_fn(n, idx.len(), |i, j| t[(i, idx[j])].clone());
        if let Some(kv) = restricted.nullspace().into_iter().next() {
            let mut v = vec![Rational::zero(); n];
            for (j, &i) in idx.iter().enumerate() {
                v[i] = kv[j].clone();
            }
            return Split::Sub(vec![v]);
        }
    }
    // R̃ invertible: an eigenvector w of R̃² gives span{w, R̃w}.
    let even: Vec<usize> = (0..n).filter(|&i| parities[i] == 0).collect();
    let t2 = t.mul(t);
    let a = Matrix::from_fn(even.len(), even.len(), |i, j| t2[(even[i], even[j])].clone());
    let Some(lambda) = rational_roots(&characteristic_polynomial(&a)).into_iter().next() else {
        return Split::Unresolved;
    };
    if n == 2 {
        return Split::Irreducible(ConstituentKind::NuRLambda, Some(lambda));
    }
    let shifted = a.sub(&Matrix::identity(even.len()).scale(&lambda));
    let ev = shifted.nullspace().into_iter().next().expect("eigenvalue has an eigenvector");
    let mut w = vec![Rational::zero(); n];
    for (j, &i) in even.iter().enumerate() {
        w[i] = ev[j].clone();
    }
    let tw = t.mul_vec(&w);
    Split::Sub(vec![w, tw])
}
