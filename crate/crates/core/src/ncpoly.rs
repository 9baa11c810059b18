//! Formal *-polynomials in the generators `u`, `v` and the chain `u_n`.
//!
//! The A-side generator `u` is identified with `u_0` at construction time, so
//! polynomials over both presentations share one type. Normal ordering
//! rewrites a polynomial into the crossed form `Σ_k b_k·v^k` using
//!
//! ```text
//! v·u_n = u_{n+1}·v     v*·u_n = u_{n−1}·v*     v·v* = v*·v = 1
//! ```
//!
//! and the conditional expectation keeps the `k = 0` component.

mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

use crate::matcore::{ComplexMatrix, MatError, UnitaryMatrix, C64};

/// Largest admissible `|n|` for a chain letter `u_n`.
pub const INDEX_CAP: i64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("index {index} exceeds the cap {INDEX_CAP}")]
    IndexOverflow { index: i64 },
    #[error("symbol {0} has no assigned matrix")]
    UnassignedSymbol(Symbol),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Chain generator `u_n`; `u` itself is `U(0)`.
    U(i64),
    V,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::U(n) => write!(f, "u_{n}"),
            Symbol::V => f.write_str("v"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub symbol: Symbol,
    pub starred: bool,
}

impl Letter {
    pub fn u(n: i64) -> Self {
        Self {
            symbol: Symbol::U(n),
            starred: false,
        }
    }

    pub fn v() -> Self {
        Self {
            symbol: Symbol::V,
            starred: false,
        }
    }

    pub fn star(self) -> Self {
        Self {
            starred: !self.starred,
            ..self
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.symbol == other.symbol && self.starred != other.starred
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if self.starred {
            f.write_str("'")?;
        }
        Ok(())
    }
}

pub type Word = Vec<Letter>;

fn check_index(n: i64) -> Result<i64, PolyError> {
    if n.abs() > INDEX_CAP {
        Err(PolyError::IndexOverflow { index: n })
    } else {
        Ok(n)
    }
}

/// Finite complex combination of words. Zero coefficients are never stored;
/// the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, C64>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn monomial(word: Word, c: C64) -> Self {
        let mut p = Self::zero();
        p.add_term(word, c);
        p
    }

    pub fn letter(l: Letter) -> Self {
        Self::monomial(vec![l], C64::new(1.0, 0.0))
    }

    pub fn u(n: i64) -> Self {
        Self::letter(Letter::u(n))
    }

    pub fn v() -> Self {
        Self::letter(Letter::v())
    }

    pub fn parse(text: &str) -> Result<Self, PolyError> {
        parse::parse(text)
    }

    pub fn add_term(&mut self, word: Word, c: C64) {
        use std::collections::btree_map::Entry;
        if c == C64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = *e.get() + c;
                if sum == C64::new(0.0, 0.0) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = Self::zero();
        for (w, &k) in &self.terms {
            out.add_term(w.clone(), k * c);
        }
        out
    }

    /// Involution: reverse words, toggle stars, conjugate coefficients.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (w, k) in &self.terms {
            let word = w.iter().rev().map(|l| l.star()).collect();
            out.add_term(word, k.conj());
        }
        out
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut s: Vec<Symbol> = self
            .terms
            .keys()
            .flat_map(|w| w.iter().map(|l| l.symbol))
            .collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn uses_v(&self) -> bool {
        self.symbols().contains(&Symbol::V)
    }

    /// Minimal interval containing every chain index, if any appears.
    pub fn u_window(&self) -> Option<(i64, i64)> {
        let idx = self.symbols().into_iter().filter_map(|s| match s {
            Symbol::U(n) => Some(n),
            Symbol::V => None,
        });
        idx.fold(None, |acc, n| match acc {
            None => Some((n, n)),
            Some((lo, hi)) => Some((lo.min(n), hi.max(n))),
        })
    }

    /// Evaluates at a matrix assignment; starred letters use the adjoint.
    pub fn eval(&self, assign: &Assignment) -> Result<ComplexMatrix, PolyError> {
        let dim = assign.dim;
        let mut acc = ComplexMatrix::zeros(dim);
        for (word, &c) in &self.terms {
            let mut prod: Option<ComplexMatrix> = None;
            for l in word {
                let m = assign.get(l)?;
                prod = Some(match prod {
                    None => m.clone(),
                    Some(p) => p.try_mul(m)?,
                });
            }
            let term = prod.unwrap_or_else(|| ComplexMatrix::identity(dim));
            acc = acc.try_add(&term.scale(c))?;
        }
        Ok(acc)
    }

    /// Rewrites into `Σ_k b_k·v^k` with every `b_k` in chain letters only.
    pub fn normal_order(&self) -> Result<CrossedForm, PolyError> {
        let mut components: BTreeMap<i64, NCPoly> = BTreeMap::new();
        for (word, &c) in &self.terms {
            let mut shift: i64 = 0;
            let mut b: Word = Vec::with_capacity(word.len());
            for l in word {
                match l.symbol {
                    Symbol::V => shift += if l.starred { -1 } else { 1 },
                    Symbol::U(n) => {
                        let moved = Letter {
                            symbol: Symbol::U(check_index(n + shift)?),
                            starred: l.starred,
                        };
                        if b.last().is_some_and(|prev| prev.cancels(&moved)) {
                            b.pop();
                        } else {
                            b.push(moved);
                        }
                    }
                }
            }
            components.entry(shift).or_default().add_term(b, c);
        }
        components.retain(|_, p| !p.is_zero());
        Ok(CrossedForm { components })
    }

    /// Conditional expectation onto the chain algebra: the `v`-degree zero part.
    pub fn cond_exp(&self) -> Result<NCPoly, PolyError> {
        Ok(self.normal_order()?.component(0))
    }

    /// Largest `|k|` among nonzero crossed components.
    pub fn v_degree(&self) -> Result<u32, PolyError> {
        Ok(self.normal_order()?.v_degree())
    }

    fn mul_ref(&self, other: &NCPoly) -> NCPoly {
        let mut out = Self::zero();
        for (wa, &ca) in &self.terms {
            for (wb, &cb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_term(w, ca * cb);
            }
        }
        out
    }

    fn add_ref(&self, other: &NCPoly, sign: f64) -> NCPoly {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c * sign);
        }
        out
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        self.add_ref(rhs, 1.0)
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        self.add_ref(rhs, -1.0)
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        self.mul_ref(rhs)
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl FromStr for NCPoly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        parse::parse(s)
    }
}

fn fmt_real(x: f64) -> String {
    format!("{x}")
}

fn fmt_word(w: &Word) -> String {
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("*")
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (word, c)) in self.terms.iter().enumerate() {
            let (negative, coeff) = if c.im == 0.0 {
                let mag = c.re.abs();
                let text = if mag == 1.0 && !word.is_empty() {
                    None
                } else {
                    Some(fmt_real(mag))
                };
                (c.re < 0.0, text)
            } else {
                let sign = if c.im < 0.0 { '-' } else { '+' };
                let text = format!("({}{}{}i)", fmt_real(c.re), sign, fmt_real(c.im.abs()));
                (false, Some(text))
            };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (coeff, word.is_empty()) {
                (Some(k), true) => f.write_str(&k)?,
                (Some(k), false) => write!(f, "{k}*{}", fmt_word(word))?,
                (None, _) => f.write_str(&fmt_word(word))?,
            }
        }
        Ok(())
    }
}

/// Normal-ordered presentation `Σ_k b_k·v^k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CrossedForm {
    components: BTreeMap<i64, NCPoly>,
}

impl CrossedForm {
    /// The coefficient `b_k` (zero if absent).
    pub fn component(&self, k: i64) -> NCPoly {
        self.components.get(&k).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (i64, &NCPoly)> {
        self.components.iter().map(|(&k, p)| (k, p))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn v_degree(&self) -> u32 {
        self.components
            .keys()
            .map(|k| k.unsigned_abs() as u32)
            .max()
            .unwrap_or(0)
    }

    /// Minimal interval of chain indices over all components.
    pub fn window(&self) -> Option<(i64, i64)> {
        self.components
            .values()
            .filter_map(NCPoly::u_window)
            .reduce(|(a, b), (c, d)| (a.min(c), b.max(d)))
    }

    /// `Σ_k b_k·v^k` as a plain polynomial.
    pub fn reassemble(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for (&k, b) in &self.components {
            let letter = if k >= 0 { Letter::v() } else { Letter::v().star() };
            let power = NCPoly::monomial(vec![letter; k.unsigned_abs() as usize], C64::new(1.0, 0.0));
            out = &out + &(b * &power);
        }
        out
    }
}

impl fmt::Display for CrossedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        for (i, (&k, b)) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({b})")?;
            let letter = if k >= 0 { "v" } else { "v'" };
            for _ in 0..k.unsigned_abs() {
                write!(f, "*{letter}")?;
            }
        }
        Ok(())
    }
}

/// Matrices assigned to symbols, all of one dimension. Adjoints are cached.
#[derive(Debug, Clone)]
pub struct Assignment {
    dim: usize,
    values: HashMap<Symbol, (ComplexMatrix, ComplexMatrix)>,
}

impl Assignment {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            values: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, symbol: Symbol, m: &UnitaryMatrix) -> Result<(), PolyError> {
        self.insert_matrix(symbol, m.matrix().clone())
    }

    /// Assigns an arbitrary square matrix; used when evaluating at
    /// non-unitary arguments such as compressions.
    pub fn insert_matrix(&mut self, symbol: Symbol, m: ComplexMatrix) -> Result<(), PolyError> {
        if m.dim() != self.dim {
            return Err(MatError::DimensionMismatch {
                left: self.dim,
                right: m.dim(),
            }
            .into());
        }
        let adj = m.adjoint();
        self.values.insert(symbol, (m, adj));
        Ok(())
    }

    pub fn with(mut self, symbol: Symbol, m: &UnitaryMatrix) -> Result<Self, PolyError> {
        self.insert(symbol, m)?;
        Ok(self)
    }

    /// A-side assignment for `p`: `u ↦ U`, `v ↦ V` and `u_n ↦ Vⁿ·U·V⁻ⁿ`
    /// for every chain index appearing in `p`.
    pub fn crossed(p: &NCPoly, u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<Self, PolyError> {
        let mut a = Self::new(u.dim()).with(Symbol::U(0), u)?.with(Symbol::V, v)?;
        if let Some((lo, hi)) = p.u_window() {
            let vm = v.matrix();
            let vs = vm.adjoint();
            let mut cur = u.matrix().clone();
            for n in 1..=hi.max(0) {
                cur = &(vm * &cur) * &vs;
                if n >= lo {
                    a.insert_matrix(Symbol::U(n), cur.clone())?;
                }
            }
            let mut cur = u.matrix().clone();
            for n in (lo.min(0)..0).rev() {
                cur = &(&vs * &cur) * vm;
                if n <= hi {
                    a.insert_matrix(Symbol::U(n), cur.clone())?;
                }
            }
        }
        Ok(a)
    }

    fn get(&self, l: &Letter) -> Result<&ComplexMatrix, PolyError> {
        let (m, adj) = self
            .values
            .get(&l.symbol)
            .ok_or(PolyError::UnassignedSymbol(l.symbol))?;
        Ok(if l.starred { adj } else { m })
    }
}
