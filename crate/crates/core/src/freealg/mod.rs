//! Free-algebra words, noncommutative polynomials with symbolic parameter
//! coefficients, and evaluation at tuples of matrices.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use crate::matkit::CMat;
use crate::{Error, Result, C64};

pub use parse::parse_ncpoly;

/// A monomial in the free algebra, as a sequence of generator indices.
///
/// Words are ordered graded-lexicographically: shorter words first, then by
/// generator index letter by letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: usize) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + other.0.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Evaluates the word at `mats`; the empty word maps to the identity.
    pub fn eval(&self, mats: &[CMat], n: usize) -> CMat {
        let mut acc = CMat::identity(n);
        for &g in &self.0 {
            acc = &acc * &mats[g];
        }
        acc
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Parameter bindings, name → complex value.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamEnv {
    pub bindings: BTreeMap<String, C64>,
}

impl ParamEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: C64) -> Self {
        self.bindings.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: C64) {
        self.bindings.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Result<C64> {
        self.bindings
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnboundParameter(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.bindings.contains_key(name)
    }
}

impl<'a> FromIterator<(&'a str, C64)> for ParamEnv {
    fn from_iter<I: IntoIterator<Item = (&'a str, C64)>>(iter: I) -> Self {
        ParamEnv {
            bindings: iter.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

/// A commutative monomial in named parameters: sorted `(name, exponent)` pairs.
pub type ParamMono = Vec<(String, u32)>;

fn mono_mul(a: &ParamMono, b: &ParamMono) -> ParamMono {
    let mut out: BTreeMap<String, u32> = a.iter().cloned().collect();
    for (k, e) in b {
        *out.entry(k.clone()).or_insert(0) += e;
    }
    out.into_iter().collect()
}

/// A commutative polynomial in the parameters with complex coefficients.
///
/// This is the symbolic coefficient of an [`NcPoly`] term; it only ever holds
/// nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamPoly {
    pub terms: BTreeMap<ParamMono, C64>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(v: C64) -> Self {
        let mut p = Self::zero();
        if v != C64::new(0.0, 0.0) {
            p.terms.insert(Vec::new(), v);
        }
        p
    }

    pub fn param(name: &str) -> Self {
        let mut p = Self::zero();
        p.terms.insert(vec![(name.to_string(), 1)], C64::new(1.0, 0.0));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mono: ParamMono, v: C64) {
        let slot = self.terms.entry(mono).or_insert(C64::new(0.0, 0.0));
        *slot += v;
        if *slot == C64::new(0.0, 0.0) {
            self.terms.retain(|_, c| *c != C64::new(0.0, 0.0));
        }
    }

    pub fn eval(&self, env: &ParamEnv) -> Result<C64> {
        let mut total = C64::new(0.0, 0.0);
        for (mono, coef) in &self.terms {
            let mut t = *coef;
            for (name, e) in mono {
                t *= env.get(name)?.powu(*e);
            }
            total += t;
        }
        Ok(total)
    }

    /// Names of all parameters that occur.
    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().flat_map(|m| m.iter().map(|(n, _)| n.as_str()))
    }

    fn write_text(&self, out: &mut String) {
        if self.terms.is_empty() {
            out.push('0');
            return;
        }
        for (k, (mono, coef)) in self.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let unit = *coef == C64::new(1.0, 0.0);
            if !(unit && !mono.is_empty()) {
                write_const(*coef, out);
                if !mono.is_empty() {
                    out.push('*');
                }
            }
            for (j, (name, e)) in mono.iter().enumerate() {
                if j > 0 {
                    out.push('*');
                }
                out.push_str(name);
                if *e != 1 {
                    let _ = write!(out, "^{e}");
                }
            }
        }
    }
}

fn write_const(v: C64, out: &mut String) {
    if v.im == 0.0 {
        let _ = write!(out, "{}", v.re);
    } else {
        let _ = write!(out, "({}+{}i)", v.re, v.im);
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, v) in &rhs.terms {
            out.add_term(m.clone(), *v);
        }
        out
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ma, va) in &self.terms {
            for (mb, vb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), va * vb);
            }
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), -v)).collect(),
        }
    }
}

/// A noncommutative polynomial: words with symbolic parameter coefficients.
///
/// Canonical by construction: each word appears at most once and no stored
/// coefficient is zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NcPoly {
    pub terms: BTreeMap<Word, ParamPoly>,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Word::empty(), ParamPoly::constant(C64::new(1.0, 0.0)))
    }

    pub fn generator(g: usize) -> Self {
        Self::monomial(Word::letter(g), ParamPoly::constant(C64::new(1.0, 0.0)))
    }

    pub fn monomial(w: Word, coef: ParamPoly) -> Self {
        let mut p = Self::zero();
        if !coef.is_zero() {
            p.terms.insert(w, coef);
        }
        p
    }

    /// Builds a polynomial from `(coefficient, word)` pairs with numeric
    /// coefficients.
    pub fn from_terms<I: IntoIterator<Item = (C64, Vec<usize>)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (c, w) in terms {
            p.add_term(Word(w), ParamPoly::constant(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Option<&ParamPoly> {
        self.terms.get(w)
    }

    fn add_term(&mut self, w: Word, coef: ParamPoly) {
        let merged = match self.terms.remove(&w) {
            Some(old) => &old + &coef,
            None => coef,
        };
        if !merged.is_zero() {
            self.terms.insert(w, merged);
        }
    }

    pub fn scale(&self, coef: &ParamPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * coef);
        }
        out
    }

    pub fn pow(&self, e: u32) -> NcPoly {
        let mut acc = NcPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Largest generator index used plus one.
    pub fn arity(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|w| w.0.iter().copied())
            .max()
            .map_or(0, |g| g + 1)
    }

    /// Names of all parameters occurring in coefficients.
    pub fn params(&self) -> std::collections::BTreeSet<String> {
        self.terms
            .values()
            .flat_map(|c| c.params().map(str::to_string).collect::<Vec<_>>())
            .collect()
    }

    /// Prints in the grammar accepted by [`parse_ncpoly`], terms in
    /// graded-lexicographic word order.
    pub fn to_text(&self, generators: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            out.push('(');
            c.write_text(&mut out);
            out.push(')');
            for &g in &w.0 {
                out.push('*');
                out.push_str(&generators[g]);
            }
        }
        out
    }

    /// Substitutes parameter values, leaving a polynomial with constant
    /// coefficients.
    pub fn bind(&self, env: &ParamEnv) -> Result<NcPoly> {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), ParamPoly::constant(c.eval(env)?));
        }
        Ok(out)
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        self + &(-rhs)
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                out.add_term(wa.concat(wb), ca * cb);
            }
        }
        out
    }
}

fn check_dims(p: &NcPoly, mats: &[CMat]) -> Result<usize> {
    let n = mats.first().map(|m| m.rows()).unwrap_or(0);
    if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::DimensionMismatch(
            "generator images must all be square of the same size".into(),
        ));
    }
    if p.arity() > mats.len() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial uses {} generators but {} matrices were given",
            p.arity(),
            mats.len()
        )));
    }
    if n == 0 {
        return Err(Error::DimensionMismatch("no generator images".into()));
    }
    Ok(n)
}

/// Evaluates `p` with generator `i` replaced by `mats[i]` and parameters
/// replaced by their values in `env`.
pub fn eval_ncpoly(p: &NcPoly, mats: &[CMat], env: &ParamEnv) -> Result<CMat> {
    let n = check_dims(p, mats)?;
    let mut acc = CMat::zeros(n, n);
    for (w, c) in &p.terms {
        let coef = c.eval(env)?;
        acc.axpy(coef, &w.eval(mats, n));
    }
    Ok(acc)
}

/// Directional derivative of the evaluation map: the derivative of
/// `eval(p)` when `mats[gen]` moves along `dir`.
pub fn eval_ncpoly_derivative(
    p: &NcPoly,
    mats: &[CMat],
    env: &ParamEnv,
    gen: usize,
    dir: &CMat,
) -> Result<CMat> {
    let n = check_dims(p, mats)?;
    let mut acc = CMat::zeros(n, n);
    for (w, c) in &p.terms {
        if !w.0.contains(&gen) {
            continue;
        }
        let coef = c.eval(env)?;
        for (pos, &g) in w.0.iter().enumerate() {
            if g != gen {
                continue;
            }
            let prefix = Word(w.0[..pos].to_vec()).eval(mats, n);
            let suffix = Word(w.0[pos + 1..].to_vec()).eval(mats, n);
            acc.axpy(coef, &(&(&prefix * dir) * &suffix));
        }
    }
    Ok(acc)
}
