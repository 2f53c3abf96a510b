//! Commutative polynomials over the rationals with the two orders needed
//! here: degree reverse lexicographic (global, `dp`) and negative degree
//! reverse lexicographic (local, `ds`).

mod groebner;
mod singularity;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::{self, Evaluate, Location};
use crate::Q;

pub use groebner::{buchberger, buchberger_bounded, member, mora_std, normal_form, vdim, CommGB, VDim};
pub use singularity::{jacobian_ideal, milnor, smoothness, tjurina, Smoothness};

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CommOrder {
    /// Degree reverse lexicographic; 1 is the smallest monomial.
    #[serde(rename = "dp")]
    Dp,
    /// Negative degree reverse lexicographic; 1 is the largest monomial.
    #[serde(rename = "ds")]
    Ds,
}

impl CommOrder {
    pub fn is_global(self) -> bool {
        self == CommOrder::Dp
    }

    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        let da: u64 = a.iter().map(|&e| e as u64).sum();
        let db: u64 = b.iter().map(|&e| e as u64).sum();
        let by_degree = match self {
            CommOrder::Dp => da.cmp(&db),
            CommOrder::Ds => db.cmp(&da),
        };
        by_degree.then_with(|| {
            for (x, y) in a.iter().zip(b).rev() {
                if x != y {
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        })
    }
}

impl std::str::FromStr for CommOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dp" => Ok(CommOrder::Dp),
            "ds" => Ok(CommOrder::Ds),
            other => Err(Error::Invalid(format!("unknown order '{other}' (expected dp or ds)"))),
        }
    }
}

/// Polynomial in a fixed number of commuting variables. Zero coefficients
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Q>,
}

impl CommPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: Q) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Q::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, Q)>>(nvars: usize, iter: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    /// Parses text over the given variable names.
    pub fn parse<S: AsRef<str>>(text: &str, names: &[S]) -> Result<Self> {
        Self::parse_at(text, names, Location { line: 1, column: 1 })
    }

    pub fn parse_at<S: AsRef<str>>(text: &str, names: &[S], origin: Location) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let expr = parse::parse_expr_at(text, &names, origin)?;
        Ok(expr.eval::<CommPoly>(&names.len()))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Constant term.
    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add_term(&mut self, e: Exponents, c: Q) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut f = e.clone();
                f[var] -= 1;
                out.add_term(f, c * Q::from_integer(e[var].into()));
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Composes with `images[i]` in place of variable `i`; the result lives in
    /// the ring of the images.
    pub fn substitute(&self, images: &[CommPoly]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::Invalid(format!(
                "substitution needs {} images, got {}",
                self.nvars,
                images.len()
            )));
        }
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        if images.iter().any(|p| p.nvars != target) {
            return Err(Error::Invalid("substitution images live in different rings".into()));
        }
        // cache powers of each image
        let mut powers: Vec<Vec<CommPoly>> = images.iter().map(|p| vec![CommPoly::one(target), p.clone()]).collect();
        let mut out = CommPoly::zero(target);
        for (e, c) in &self.terms {
            let mut t = CommPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][k as usize]);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Replaces the listed variables by constants, staying in the same ring.
    pub fn specialize(&self, values: &BTreeMap<usize, Q>) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut f = e.clone();
            for (&i, v) in values {
                if f[i] > 0 {
                    for _ in 0..f[i] {
                        coeff *= v;
                    }
                    f[i] = 0;
                }
            }
            out.add_term(f, coeff);
        }
        out
    }

    /// Same polynomial viewed in a ring with `nvars >= self.nvars()` variables,
    /// the new variables appended at the end.
    pub fn extend(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        Self {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = e.clone();
                    f.resize(nvars, 0);
                    (f, c.clone())
                })
                .collect(),
        }
    }

    /// Indices of the variables that occur.
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for e in self.terms.keys() {
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    out.insert(i);
                }
            }
        }
        out
    }

    pub fn leading_term(&self, order: CommOrder) -> Option<(&Exponents, &Q)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Divides by the leading coefficient in `order`.
    pub fn monic(&self, order: CommOrder) -> Self {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Terms sorted descending in `order`.
    pub fn sorted_terms(&self, order: CommOrder) -> Vec<(&Exponents, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn format<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.sorted_terms(CommOrder::Dp).into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    let n = names.get(i).map(|s| s.as_ref().to_string()).unwrap_or_else(|| format!("x{i}"));
                    if x == 1 {
                        n
                    } else {
                        format!("{n}^{x}")
                    }
                })
                .collect();
            parse::write_term(&mut out, c, &mono.join("*"), k == 0);
        }
        out
    }

    fn check_ring(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials from different rings");
    }
}

impl Evaluate for CommPoly {
    type Ctx = usize;
    fn constant(nvars: &usize, c: &Q) -> Self {
        CommPoly::constant(*nvars, c.clone())
    }
    fn variable(nvars: &usize, index: usize) -> Self {
        CommPoly::var(*nvars, index)
    }
    fn add(&self, other: &Self) -> Self {
        CommPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        CommPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        CommPoly::neg(self)
    }
    fn pow(&self, _: &usize, exp: u32) -> Self {
        CommPoly::pow(self, exp)
    }
}
