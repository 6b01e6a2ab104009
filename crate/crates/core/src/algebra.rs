//! The ℤ₂×ℤ₂-graded extension of osp(1|2): grading group, generators,
//! structure constants and the general Lie bracket.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, int, parse_rational, sign, Rational};

/// An element of ℤ₂ × ℤ₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradedDegree {
    pub a1: u8,
    pub a2: u8,
}

impl GradedDegree {
    pub const ZERO: GradedDegree = GradedDegree { a1: 0, a2: 0 };
    pub const ALL: [GradedDegree; 4] = [
        GradedDegree::new(0, 0),
        GradedDegree::new(0, 1),
        GradedDegree::new(1, 0),
        GradedDegree::new(1, 1),
    ];

    pub const fn new(a1: u8, a2: u8) -> Self {
        GradedDegree {
            a1: a1 & 1,
            a2: a2 & 1,
        }
    }

    /// Reduces arbitrary integers mod 2.
    pub fn from_ints(a1: i64, a2: i64) -> Self {
        GradedDegree::new(a1.rem_euclid(2) as u8, a2.rem_euclid(2) as u8)
    }

    /// `a·b = a₁b₁ + a₂b₂ mod 2`.
    pub fn dot(self, other: GradedDegree) -> u8 {
        (self.a1 * other.a1 + self.a2 * other.a2) & 1
    }

    /// Total parity `a₁ + a₂ mod 2`; `(0,0)` and `(1,1)` are even.
    pub fn parity(self) -> u8 {
        (self.a1 + self.a2) & 1
    }
}

impl Add for GradedDegree {
    type Output = GradedDegree;
    fn add(self, rhs: GradedDegree) -> GradedDegree {
        GradedDegree::new(self.a1 ^ rhs.a1, self.a2 ^ rhs.a2)
    }
}

impl fmt::Display for GradedDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a1, self.a2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse graded degree {0:?} (expected e.g. \"(0,1)\" or \"01\")")]
pub struct ParseDegreeError(String);

impl FromStr for GradedDegree {
    type Err = ParseDegreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits: Vec<char> = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | ',' | ' '))
            .collect();
        match bits.as_slice() {
            [a, b] if matches!(a, '0' | '1') && matches!(b, '0' | '1') => Ok(GradedDegree::new(
                (*a == '1') as u8,
                (*b == '1') as u8,
            )),
            _ => Err(ParseDegreeError(s.to_string())),
        }
    }
}

/// Basis of the algebra. `Rt`, `Ltp`, `Ltm`, `Atp`, `Atm` are the tilded generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    R,
    Rt,
    Lp,
    Lm,
    Ltp,
    Ltm,
    Ap,
    Am,
    Atp,
    Atm,
}

impl Generator {
    pub const ALL: [Generator; 10] = [
        Generator::R,
        Generator::Rt,
        Generator::Lp,
        Generator::Lm,
        Generator::Ltp,
        Generator::Ltm,
        Generator::Ap,
        Generator::Am,
        Generator::Atp,
        Generator::Atm,
    ];

    pub fn degree(self) -> GradedDegree {
        use Generator::*;
        match self {
            R | Lp | Lm => GradedDegree::new(0, 0),
            Ap | Am => GradedDegree::new(0, 1),
            Atp | Atm => GradedDegree::new(1, 0),
            Rt | Ltp | Ltm => GradedDegree::new(1, 1),
        }
    }

    /// Eigenvalue of `ad R`.
    pub fn ad_weight(self) -> i64 {
        use Generator::*;
        match self {
            Lp | Ltp => 2,
            Ap | Atp => 1,
            R | Rt => 0,
            Am | Atm => -1,
            Lm | Ltm => -2,
        }
    }

    pub fn name(self) -> &'static str {
        use Generator::*;
        match self {
            R => "R",
            Rt => "Rt",
            Lp => "Lp",
            Lm => "Lm",
            Ltp => "Ltp",
            Ltm => "Ltm",
            Ap => "ap",
            Am => "am",
            Atp => "atp",
            Atm => "atm",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown generator {0:?}")]
pub struct ParseGeneratorError(String);

impl FromStr for Generator {
    type Err = ParseGeneratorError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Generator::ALL
            .into_iter()
            .find(|g| g.name() == s.trim())
            .ok_or_else(|| ParseGeneratorError(s.to_string()))
    }
}

/// Finite rational combination of generators; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Generator, Rational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(g, Rational::one())
    }

    pub fn term(g: Generator, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(g, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Generator, Rational)>) -> Self {
        let mut e = Self::zero();
        for (g, c) in terms {
            e.add_term(g, c);
        }
        e
    }

    pub fn add_term(&mut self, g: Generator, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(g).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Generator, &Rational)> {
        self.terms.iter().map(|(g, c)| (*g, c))
    }

    pub fn coefficient(&self, g: Generator) -> Rational {
        self.terms.get(&g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms().map(|(g, x)| (g, x * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in other.terms() {
            out.add_term(g, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// The common degree of all present generators, if there is one.
    /// The zero element has no degree.
    pub fn homogeneous_degree(&self) -> Option<GradedDegree> {
        let mut degs = self.terms.keys().map(|g| g.degree());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{g}")?;
            } else {
                write!(f, "({}){g}", crate::rational::Pretty(c))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseElementError {
    #[error(transparent)]
    Generator(#[from] ParseGeneratorError),
    #[error("malformed coefficient in {0:?}")]
    Coefficient(String),
    #[error("malformed bracket assignment {0:?} (expected e.g. \"[R,Lp]=2Lp\")")]
    Assignment(String),
}

impl FromStr for AlgebraElement {
    type Err = ParseElementError;

    /// Parses sums such as `2Lp`, `-R`, `Lp + 1/2 Rt`, `0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        let mut chunks = Vec::new();
        let mut cur = String::new();
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('/') {
                chunks.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        if !cur.is_empty() {
            chunks.push(cur);
        }
        for chunk in chunks {
            let split = chunk
                .find(|c: char| c.is_ascii_alphabetic())
                .ok_or_else(|| ParseElementError::Coefficient(chunk.clone()))?;
            let (coeff, gen) = chunk.split_at(split);
            let c = match coeff {
                "" | "+" => Rational::one(),
                "-" => -Rational::one(),
                _ => parse_rational(coeff.trim_end_matches('*'))
                    .map_err(|_| ParseElementError::Coefficient(chunk.clone()))?,
            };
            out.add_term(gen.parse()?, c);
        }
        Ok(out)
    }
}

/// Structure constants `⟦X, Y⟧` for all 100 ordered generator pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTable {
    entries: BTreeMap<(Generator, Generator), AlgebraElement>,
}

impl StructureTable {
    /// The defining relations, with both orderings of every non-vanishing pair
    /// written out. Anticommutators are used when `deg X · deg Y = 1`.
    pub fn standard() -> Self {
        use Generator::*;
        let e = |terms: &[(Generator, i64)]| {
            AlgebraElement::from_terms(terms.iter().map(|&(g, c)| (g, int(c))))
        };
        let relations: Vec<(Generator, Generator, AlgebraElement)> = vec![
            // [R, ·]
            (R, Lp, e(&[(Lp, 2)])),
            (Lp, R, e(&[(Lp, -2)])),
            (R, Lm, e(&[(Lm, -2)])),
            (Lm, R, e(&[(Lm, 2)])),
            (R, Ltp, e(&[(Ltp, 2)])),
            (Ltp, R, e(&[(Ltp, -2)])),
            (R, Ltm, e(&[(Ltm, -2)])),
            (Ltm, R, e(&[(Ltm, 2)])),
            (R, Ap, e(&[(Ap, 1)])),
            (Ap, R, e(&[(Ap, -1)])),
            (R, Am, e(&[(Am, -1)])),
            (Am, R, e(&[(Am, 1)])),
            (R, Atp, e(&[(Atp, 1)])),
            (Atp, R, e(&[(Atp, -1)])),
            (R, Atm, e(&[(Atm, -1)])),
            (Atm, R, e(&[(Atm, 1)])),
            // [Rt, ·] and {Rt, ·}
            (Rt, Lp, e(&[(Ltp, 2)])),
            (Lp, Rt, e(&[(Ltp, -2)])),
            (Rt, Lm, e(&[(Ltm, -2)])),
            (Lm, Rt, e(&[(Ltm, 2)])),
            (Rt, Ltp, e(&[(Lp, 2)])),
            (Ltp, Rt, e(&[(Lp, -2)])),
            (Rt, Ltm, e(&[(Lm, -2)])),
            (Ltm, Rt, e(&[(Lm, 2)])),
            (Rt, Ap, e(&[(Atp, 1)])),
            (Ap, Rt, e(&[(Atp, 1)])),
            (Rt, Am, e(&[(Atm, 1)])),
            (Am, Rt, e(&[(Atm, 1)])),
            (Rt, Atp, e(&[(Ap, 1)])),
            (Atp, Rt, e(&[(Ap, 1)])),
            (Rt, Atm, e(&[(Am, 1)])),
            (Atm, Rt, e(&[(Am, 1)])),
            // L, Lt among themselves
            (Lp, Lm, e(&[(R, -1)])),
            (Lm, Lp, e(&[(R, 1)])),
            (Lp, Ltm, e(&[(Rt, -1)])),
            (Ltm, Lp, e(&[(Rt, 1)])),
            (Lm, Ltp, e(&[(Rt, 1)])),
            (Ltp, Lm, e(&[(Rt, -1)])),
            (Ltp, Ltm, e(&[(R, -1)])),
            (Ltm, Ltp, e(&[(R, 1)])),
            // L, Lt with the odd generators
            (Lp, Atm, e(&[(Atp, 1)])),
            (Atm, Lp, e(&[(Atp, -1)])),
            (Lm, Atp, e(&[(Atm, -1)])),
            (Atp, Lm, e(&[(Atm, 1)])),
            (Lp, Am, e(&[(Ap, -1)])),
            (Am, Lp, e(&[(Ap, 1)])),
            (Lm, Ap, e(&[(Am, 1)])),
            (Ap, Lm, e(&[(Am, -1)])),
            (Ltp, Am, e(&[(Atp, -1)])),
            (Am, Ltp, e(&[(Atp, -1)])),
            (Ltm, Ap, e(&[(Atm, -1)])),
            (Ap, Ltm, e(&[(Atm, -1)])),
            (Ltp, Atm, e(&[(Ap, 1)])),
            (Atm, Ltp, e(&[(Ap, 1)])),
            (Ltm, Atp, e(&[(Am, 1)])),
            (Atp, Ltm, e(&[(Am, 1)])),
            // odd with odd
            (Ap, Am, e(&[(R, 2)])),
            (Am, Ap, e(&[(R, 2)])),
            (Ap, Atm, e(&[(Rt, 2)])),
            (Atm, Ap, e(&[(Rt, -2)])),
            (Am, Atp, e(&[(Rt, -2)])),
            (Atp, Am, e(&[(Rt, 2)])),
            (Atm, Atp, e(&[(R, 2)])),
            (Atp, Atm, e(&[(R, 2)])),
            (Ap, Atp, e(&[(Ltp, -4)])),
            (Atp, Ap, e(&[(Ltp, 4)])),
            (Am, Atm, e(&[(Ltm, 4)])),
            (Atm, Am, e(&[(Ltm, -4)])),
            (Ap, Ap, e(&[(Lp, 4)])),
            (Am, Am, e(&[(Lm, 4)])),
            (Atp, Atp, e(&[(Lp, -4)])),
            (Atm, Atm, e(&[(Lm, -4)])),
        ];
        let mut entries = BTreeMap::new();
        for x in Generator::ALL {
            for y in Generator::ALL {
                entries.insert((x, y), AlgebraElement::zero());
            }
        }
        for (x, y, v) in relations {
            let prev = entries.insert((x, y), v);
            debug_assert!(prev.is_some_and(|p| p.is_zero()), "duplicate relation");
        }
        StructureTable { entries }
    }

    pub fn get(&self, x: Generator, y: Generator) -> &AlgebraElement {
        &self.entries[&(x, y)]
    }

    /// Overwrites one ordered entry, leaving the reverse ordering as it was.
    pub fn set(&mut self, x: Generator, y: Generator, value: AlgebraElement) {
        self.entries.insert((x, y), value);
    }

    /// Applies a mutation written as `[X,Y]=expr` or `{X,Y}=expr`.
    pub fn apply_mutation(&mut self, spec: &str) -> Result<(), ParseElementError> {
        let bad = || ParseElementError::Assignment(spec.to_string());
        let (lhs, rhs) = spec.split_once('=').ok_or_else(bad)?;
        let inner = lhs
            .trim()
            .strip_prefix(['[', '{'])
            .and_then(|s| s.strip_suffix([']', '}']))
            .ok_or_else(bad)?;
        let (x, y) = inner.split_once(',').ok_or_else(bad)?;
        let value: AlgebraElement = rhs.parse()?;
        self.set(x.parse()?, y.parse()?, value);
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = ((Generator, Generator), &AlgebraElement)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// General Lie bracket, extended bilinearly.
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (gx, cx) in x.terms() {
            for (gy, cy) in y.terms() {
                let c = cx * cy;
                for (g, v) in self.get(gx, gy).terms() {
                    out.add_term(g, &c * v);
                }
            }
        }
        out
    }

    pub fn bracket_gen(&self, x: Generator, y: Generator) -> AlgebraElement {
        self.get(x, y).clone()
    }

    /// Exhaustive check of graded antisymmetry, degree additivity and the graded
    /// Jacobi identity over all generator pairs and triples.
    pub fn verify_axioms(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        for x in Generator::ALL {
            for y in Generator::ALL {
                report.pairs_checked += 1;
                let (dx, dy) = (x.degree(), y.degree());
                let residual = self
                    .get(x, y)
                    .add(&self.get(y, x).scale(&sign(dx.dot(dy) as i64)));
                if !residual.is_zero() {
                    report.antisymmetry_failures += 1;
                    report.first_antisymmetry_failure.get_or_insert((x, y));
                }
                let target = dx + dy;
                if self.get(x, y).terms().any(|(g, _)| g.degree() != target) {
                    report.degree_failures += 1;
                    report.first_degree_failure.get_or_insert((x, y));
                }
            }
        }
        for x in Generator::ALL {
            for y in Generator::ALL {
                for z in Generator::ALL {
                    report.triples_checked += 1;
                    let residual = self.jacobi_residual(x, y, z);
                    if !residual.is_zero() {
                        report.jacobi_failures += 1;
                        report
                            .first_jacobi_failure
                            .get_or_insert(JacobiFailure {
                                triple: (x, y, z),
                                residual,
                            });
                    }
                }
            }
        }
        report
    }

    /// `(−1)^{a·c}⟦X,⟦Y,Z⟧⟧ + (−1)^{a·b}⟦Y,⟦Z,X⟧⟧ + (−1)^{b·c}⟦Z,⟦X,Y⟧⟧`.
    pub fn jacobi_residual(&self, x: Generator, y: Generator, z: Generator) -> AlgebraElement {
        let (a, b, c) = (x.degree(), y.degree(), z.degree());
        let ex = AlgebraElement::generator(x);
        let ey = AlgebraElement::generator(y);
        let ez = AlgebraElement::generator(z);
        let t1 = self
            .bracket(&ex, self.get(y, z))
            .scale(&sign(a.dot(c) as i64));
        let t2 = self
            .bracket(&ey, self.get(z, x))
            .scale(&sign(a.dot(b) as i64));
        let t3 = self
            .bracket(&ez, self.get(x, y))
            .scale(&sign(b.dot(c) as i64));
        t1.add(&t2).add(&t3)
    }

    /// JSON-ready listing in generator order.
    pub fn to_records(&self) -> Vec<BracketRecord> {
        self.entries()
            .map(|((x, y), v)| BracketRecord {
                x: x.name().to_string(),
                y: y.name().to_string(),
                result: v
                    .terms()
                    .map(|(g, c)| TermRecord {
                        gen: g.name().to_string(),
                        coeff: format_rational(c),
                    })
                    .collect(),
            })
            .collect()
    }
}

impl Default for StructureTable {
    fn default() -> Self {
        Self::standard()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketRecord {
    pub x: String,
    pub y: String,
    pub result: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub gen: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiFailure {
    pub triple: (Generator, Generator, Generator),
    pub residual: AlgebraElement,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub antisymmetry_failures: usize,
    pub degree_failures: usize,
    pub jacobi_failures: usize,
    pub first_antisymmetry_failure: Option<(Generator, Generator)>,
    pub first_degree_failure: Option<(Generator, Generator)>,
    pub first_jacobi_failure: Option<JacobiFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry_failures == 0 && self.degree_failures == 0 && self.jacobi_failures == 0
    }
}
