//! Free associative algebras over the rationals: words, noncommutative
//! polynomials, the degree-lexicographic order and overlap detection.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::{self, Evaluate, Location};
use crate::Q;

/// Ordered generator names together with the precedence used to break ties
/// in the monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    generators: Vec<String>,
    /// Generator indices from largest to smallest.
    precedence: Vec<usize>,
}

impl Alphabet {
    /// Alphabet whose precedence follows the listed order (first is largest).
    pub fn new<S: AsRef<str>>(generators: &[S]) -> Result<Self> {
        let n = generators.len();
        Self::with_precedence(generators, (0..n).collect())
    }

    pub fn with_precedence<S: AsRef<str>>(generators: &[S], precedence: Vec<usize>) -> Result<Self> {
        let generators: Vec<String> = generators.iter().map(|s| s.as_ref().to_string()).collect();
        if generators.len() > u8::MAX as usize {
            return Err(Error::Alphabet("too many generators".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() || !g.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::Alphabet(format!("bad generator name '{g}'")));
            }
            if !g.chars().next().unwrap().is_alphabetic() {
                return Err(Error::Alphabet(format!("generator '{g}' must start with a letter")));
            }
            if generators[..i].contains(g) {
                return Err(Error::Alphabet(format!("duplicate generator '{g}'")));
            }
        }
        let mut seen = vec![false; generators.len()];
        if precedence.len() != generators.len() {
            return Err(Error::Alphabet("precedence must list every generator once".into()));
        }
        for &p in &precedence {
            if p >= generators.len() || seen[p] {
                return Err(Error::Alphabet("precedence must be a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(Self {
            generators,
            precedence,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn order(&self) -> MonomialOrder {
        let n = self.generators.len();
        let mut rank = vec![0u8; n];
        for (pos, &g) in self.precedence.iter().enumerate() {
            rank[g] = (n - 1 - pos) as u8;
        }
        MonomialOrder { rank }
    }

    /// Parses a polynomial in this alphabet.
    pub fn parse(&self, text: &str) -> Result<NCPoly> {
        self.parse_at(text, Location { line: 1, column: 1 })
    }

    pub fn parse_at(&self, text: &str, origin: Location) -> Result<NCPoly> {
        let expr = parse::parse_expr_at(text, &self.generators, origin)?;
        Ok(expr.eval::<NCPoly>(&()))
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            let name = &self.generators[letters[i] as usize];
            if j - i == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        parts.join("*")
    }

    pub fn format_poly(&self, p: &NCPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let ord = self.order();
        let mut out = String::new();
        for (k, (w, c)) in p.sorted_terms(&ord).into_iter().enumerate() {
            let m = if w.is_empty() {
                String::new()
            } else {
                self.format_word(w)
            };
            parse::write_term(&mut out, c, &m, k == 0);
        }
        out
    }
}

/// A word in the free monoid, stored as generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letter(g: usize) -> Self {
        Word(vec![g as u8])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Position of the first occurrence of `factor` inside `self`.
    pub fn find_factor(&self, factor: &Word) -> Option<usize> {
        let (n, m) = (self.0.len(), factor.0.len());
        if m > n {
            return None;
        }
        if m == 0 {
            return Some(0);
        }
        (0..=n - m).find(|&i| self.0[i..i + m] == factor.0[..])
    }

    pub fn contains_factor(&self, factor: &Word) -> bool {
        self.find_factor(factor).is_some()
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.0.ends_with(&suffix.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Degree-lexicographic order: shorter words are smaller, words of equal
/// length are compared left to right by generator rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    rank: Vec<u8>,
}

impl MonomialOrder {
    pub fn num_generators(&self) -> usize {
        self.rank.len()
    }

    fn check(&self, w: &Word) -> Result<()> {
        match w.0.iter().find(|&&l| l as usize >= self.rank.len()) {
            Some(&l) => Err(Error::AlphabetMismatch {
                letter: l as usize,
                size: self.rank.len(),
            }),
            None => Ok(()),
        }
    }

    /// Compares two words, failing if either uses a letter outside the alphabet.
    pub fn word_compare(&self, a: &Word, b: &Word) -> Result<Ordering> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.cmp(a, b))
    }

    /// Unchecked comparison; letters must be in range.
    pub fn cmp(&self, a: &Word, b: &Word) -> Ordering {
        a.0.len().cmp(&b.0.len()).then_with(|| {
            for (x, y) in a.0.iter().zip(&b.0) {
                if x != y {
                    return self.rank[*x as usize].cmp(&self.rank[*y as usize]);
                }
            }
            Ordering::Equal
        })
    }
}

/// Finitely supported rational combination of words. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Q>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, Word::empty())
    }

    pub fn monomial(c: Q, w: Word) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Self { terms }
    }

    pub fn from_word(w: Word) -> Self {
        Self::monomial(Q::one(), w)
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Q)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in iter {
            p.add_term(w, c);
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

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Terms sorted descending in `ord` (the canonical presentation).
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(&Word, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    pub fn leading_term(&self, ord: &MonomialOrder) -> Option<(&Word, &Q)> {
        self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
    }

    pub fn leading_word(&self, ord: &MonomialOrder) -> Option<&Word> {
        self.leading_term(ord).map(|(w, _)| w)
    }

    /// Largest word degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::degree).max()
    }

    /// Smallest word degree, `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::degree).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, ord: &MonomialOrder) -> Self {
        match self.leading_term(ord) {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    /// Concatenation product, bilinear over the rationals.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// `c * left * self * right`.
    pub fn sandwich(&self, c: &Q, left: &Word, right: &Word) -> Self {
        let mut out = Self::zero();
        for (w, a) in &self.terms {
            out.add_term(left.concat(w).concat(right), a * c);
        }
        out
    }
}

impl Evaluate for NCPoly {
    type Ctx = ();
    fn constant(_: &(), c: &Q) -> Self {
        NCPoly::constant(c.clone())
    }
    fn variable(_: &(), index: usize) -> Self {
        NCPoly::from_word(Word::letter(index))
    }
    fn add(&self, other: &Self) -> Self {
        NCPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        NCPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        NCPoly::neg(self)
    }
}

/// Whether an ambiguity comes from a suffix/prefix overlap or from one
/// leading word occurring inside another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AmbiguityKind {
    Overlap,
    Inclusion,
}

/// One ambiguity between two words. For an overlap, `offset` is where the
/// second word starts inside the first; for an inclusion, where the second
/// word occurs inside the first. `word` is the ambiguous word itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ambiguity {
    pub kind: AmbiguityKind,
    pub offset: usize,
    pub word: Word,
}

/// All proper overlaps (a nonempty proper suffix of `w1` equal to a nonempty
/// proper prefix of `w2`) and all inclusions of `w2` as a proper factor of `w1`.
pub fn overlaps(w1: &Word, w2: &Word) -> Vec<Ambiguity> {
    let (n1, n2) = (w1.degree(), w2.degree());
    let mut out = Vec::new();
    if n1 == 0 || n2 == 0 {
        return out;
    }
    // overlap length k from large to small
    for k in (1..n1.min(n2)).rev() {
        if w1.0[n1 - k..] == w2.0[..k] {
            out.push(Ambiguity {
                kind: AmbiguityKind::Overlap,
                offset: n1 - k,
                word: w1.concat(&w2.subword(k, n2)),
            });
        }
    }
    if n2 < n1 {
        for i in 0..=n1 - n2 {
            if w1.0[i..i + n2] == w2.0[..] {
                out.push(Ambiguity {
                    kind: AmbiguityKind::Inclusion,
                    offset: i,
                    word: w1.clone(),
                });
            }
        }
    }
    out
}
