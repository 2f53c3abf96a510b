//! Finite-dimensional quotient algebras as structure-constant tables, with
//! elements whose coordinates are polynomials in formal parameters.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::commalg::CommPoly;
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, NCPoly, Word};
use crate::linalg::{to_sparse, Echelon};
use crate::ncgb::{normal_words, NCGroebnerBasis, Presentation};
use crate::Q;

/// Normal-word enumeration cap used when building an algebra from a basis.
const BUILD_CAP: usize = 64;

/// Ordered basis of normal words (the empty word first) with the coordinate
/// vectors of all pairwise products.
#[derive(Debug, Clone)]
pub struct FiniteDimAlgebra {
    gb: NCGroebnerBasis,
    basis: Vec<Word>,
    index: HashMap<Word, usize>,
    /// `table[i][j]` holds the coordinates of `basis[i] * basis[j]`.
    table: Vec<Vec<Vec<Q>>>,
    local: bool,
}

/// Builds the structure constants of the quotient by a complete basis.
pub fn build_algebra(gb: &NCGroebnerBasis) -> Result<FiniteDimAlgebra> {
    if let crate::ncgb::GbStatus::TruncatedAtDegree(d) = gb.status() {
        return Err(Error::NotComplete(d));
    }
    let cert = normal_words(gb, BUILD_CAP);
    if cert.dimension.is_none() {
        return Err(Error::UnknownDimension(format!(
            "no finite normal-word basis below degree {BUILD_CAP}"
        )));
    }
    let basis = cert.normal_words;
    if basis.is_empty() {
        return Err(Error::Invalid("the zero algebra has no identity basis word".into()));
    }
    let index: HashMap<Word, usize> = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let n = basis.len();
    let coords = |p: &NCPoly| -> Vec<Q> {
        let mut v = vec![Q::zero(); n];
        for (w, c) in p.terms() {
            v[index[w]] = c.clone();
        }
        v
    };
    let table = basis
        .iter()
        .map(|u| {
            basis
                .iter()
                .map(|v| coords(&gb.normal_form(&NCPoly::from_word(u.concat(v)))))
                .collect()
        })
        .collect();
    let local = gb
        .elements()
        .iter()
        .all(|g| g.min_degree().is_some_and(|d| d >= 2));
    Ok(FiniteDimAlgebra {
        gb: gb.clone(),
        basis,
        index,
        table,
        local,
    })
}

impl FiniteDimAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.gb.alphabet()
    }

    pub fn groebner_basis(&self) -> &NCGroebnerBasis {
        &self.gb
    }

    pub fn is_local(&self) -> bool {
        self.local
    }

    /// Coordinates of `basis[i] * basis[j]`.
    pub fn product(&self, i: usize, j: usize) -> &[Q] {
        &self.table[i][j]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Coordinates of an arbitrary polynomial in the generators.
    pub fn coordinates(&self, p: &NCPoly) -> Vec<Q> {
        let nf = self.gb.normal_form(p);
        let mut v = vec![Q::zero(); self.dim()];
        for (w, c) in nf.terms() {
            v[self.index[w]] = c.clone();
        }
        v
    }

    /// Basis positions of the words of degree one.
    pub fn linear_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree() == 1).collect()
    }

    pub fn unit(&self) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[0] = Q::one();
        v
    }

    /// Product of two rational elements.
    pub fn mul(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in v.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &ab * c;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, u: &[Q], k: usize) -> Vec<Q> {
        let mut acc = self.unit();
        for _ in 0..k {
            acc = self.mul(&acc, u);
        }
        acc
    }

    /// Smallest `k >= 1` with `u^k = 0`, if one exists up to the dimension.
    pub fn nilpotency_index(&self, u: &[Q]) -> Option<usize> {
        let mut acc = u.to_vec();
        for k in 1..=self.dim() + 1 {
            if acc.iter().all(Zero::is_zero) {
                return Some(k);
            }
            acc = self.mul(&acc, u);
        }
        None
    }

    /// Exhaustive associativity check on basis triples.
    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        let e = |i: usize| {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::one();
            v
        };
        for i in 0..n {
            for j in 0..n {
                let ij = self.table[i][j].clone();
                for k in 0..n {
                    let left = self.mul(&ij, &e(k));
                    let right = self.mul(&e(i), &self.table[j][k]);
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Value of a noncommutative polynomial with generators replaced by
    /// the given parametric elements.
    pub fn evaluate(&self, p: &NCPoly, images: &[ParamElement]) -> ParamElement {
        let nparams = images.first().map(|e| e.nparams).unwrap_or(0);
        let mut out = ParamElement::zero(self.dim(), nparams);
        let mut cache: HashMap<Word, ParamElement> = HashMap::new();
        for (w, c) in p.terms() {
            let value = word_value(self, w, images, &mut cache);
            out = out.add(&value.scale(c));
        }
        out
    }

    /// Value of a noncommutative polynomial with generators replaced by
    /// rational elements.
    pub fn evaluate_scalar(&self, p: &NCPoly, images: &[Vec<Q>]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (w, c) in p.terms() {
            let mut acc = self.unit();
            for &l in w.letters() {
                acc = self.mul(&acc, &images[l as usize]);
            }
            for (o, a) in out.iter_mut().zip(acc) {
                *o += c * a;
            }
        }
        out
    }

    /// Dimensions of the powers of the augmentation ideal `J`, ending with 0.
    pub fn radical_filtration(&self) -> Result<Vec<usize>> {
        if !self.local {
            return Err(Error::NotLocal("relations are not all in the square of the augmentation ideal".into()));
        }
        let n = self.dim();
        let j1: Vec<Vec<Q>> = (1..n)
            .map(|i| {
                let mut v = vec![Q::zero(); n];
                v[i] = Q::one();
                v
            })
            .collect();
        let mut dims = vec![j1.len()];
        let mut current = j1.clone();
        while !current.is_empty() {
            let mut ech = Echelon::new();
            let mut next = Vec::new();
            for a in &j1 {
                for b in &current {
                    let prod = self.mul(a, b);
                    if ech.insert(to_sparse(&prod), Q::zero()) == Ok(true) {
                        next.push(prod);
                    }
                }
            }
            if next.len() >= current.len() {
                return Err(Error::NotLocal(format!(
                    "augmentation ideal is not nilpotent (power of dimension {} repeats)",
                    next.len()
                )));
            }
            dims.push(next.len());
            current = next;
        }
        Ok(dims)
    }

    /// Basis words and structure constants as strings.
    pub fn dump(&self) -> AlgebraDump {
        let a = self.alphabet();
        AlgebraDump {
            generators: a.generators().to_vec(),
            basis: self.basis.iter().map(|w| a.format_word(w)).collect(),
            structure_constants: self
                .table
                .iter()
                .map(|row| row.iter().map(|v| v.iter().map(|q| q.to_string()).collect()).collect())
                .collect(),
        }
    }
}

fn word_value(
    alg: &FiniteDimAlgebra,
    w: &Word,
    images: &[ParamElement],
    cache: &mut HashMap<Word, ParamElement>,
) -> ParamElement {
    if let Some(v) = cache.get(w) {
        return v.clone();
    }
    let value = match w.degree() {
        0 => ParamElement::unit(alg.dim(), images.first().map(|e| e.nparams).unwrap_or(0)),
        1 => images[w.letters()[0] as usize].clone(),
        d => {
            let prefix = w.subword(0, d - 1);
            let p = word_value(alg, &prefix, images, cache);
            multiply(alg, &p, &images[w.letters()[d - 1] as usize])
        }
    };
    cache.insert(w.clone(), value.clone());
    value
}

/// JSON form of a structure-constant table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDump {
    pub generators: Vec<String>,
    pub basis: Vec<String>,
    /// `[i][j][k]`: coefficient of `basis[k]` in `basis[i] * basis[j]`.
    pub structure_constants: Vec<Vec<Vec<String>>>,
}

/// Element whose coordinates are polynomials in `nparams` formal parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamElement {
    nparams: usize,
    coords: Vec<CommPoly>,
}

impl ParamElement {
    pub fn zero(dim: usize, nparams: usize) -> Self {
        Self {
            nparams,
            coords: vec![CommPoly::zero(nparams); dim],
        }
    }

    pub fn unit(dim: usize, nparams: usize) -> Self {
        let mut e = Self::zero(dim, nparams);
        e.coords[0] = CommPoly::one(nparams);
        e
    }

    pub fn new(coords: Vec<CommPoly>) -> Result<Self> {
        let nparams = coords.first().map(CommPoly::nvars).unwrap_or(0);
        if coords.iter().any(|c| c.nvars() != nparams) {
            return Err(Error::Invalid("coordinates use different parameter rings".into()));
        }
        Ok(Self { nparams, coords })
    }

    /// Constant element.
    pub fn from_scalars(v: &[Q], nparams: usize) -> Self {
        Self {
            nparams,
            coords: v.iter().map(|q| CommPoly::constant(nparams, q.clone())).collect(),
        }
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn coords(&self) -> &[CommPoly] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(CommPoly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            nparams: self.nparams,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self {
            nparams: self.nparams,
            coords: self.coords.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Evaluates every coordinate at the given parameter values.
    pub fn specialize(&self, values: &[Q]) -> Vec<Q> {
        self.coords.iter().map(|c| c.evaluate(values)).collect()
    }

    /// Applies the same parameter substitution to every coordinate.
    pub fn map_coords(&self, f: impl Fn(&CommPoly) -> CommPoly) -> Self {
        let coords: Vec<CommPoly> = self.coords.iter().map(f).collect();
        let nparams = coords.first().map(CommPoly::nvars).unwrap_or(self.nparams);
        Self { nparams, coords }
    }
}

/// Product in the algebra, bilinear over the parameter polynomial ring.
pub fn multiply(alg: &FiniteDimAlgebra, u: &ParamElement, v: &ParamElement) -> ParamElement {
    let n = alg.dim();
    let mut out = ParamElement::zero(n, u.nparams);
    for (i, a) in u.coords.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
        for (j, b) in v.coords.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
            let row = &alg.table[i][j];
            if row.iter().all(Zero::is_zero) {
                continue;
            }
            let ab = a.mul(b);
            for (k, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out.coords[k] = out.coords[k].add(&ab.scale(c));
                }
            }
        }
    }
    out
}

/// `elem^k` in coordinates (`k = 0` gives the identity).
pub fn power(alg: &FiniteDimAlgebra, elem: &ParamElement, k: usize) -> ParamElement {
    let mut acc = ParamElement::unit(alg.dim(), elem.nparams);
    for _ in 0..k {
        acc = multiply(alg, &acc, elem);
    }
    acc
}

/// Adds every commutator of generators to the relations.
pub fn abelianize(pres: &Presentation) -> Presentation {
    let n = pres.alphabet().len();
    let mut rels = pres.relations().to_vec();
    for i in 0..n {
        for j in i + 1..n {
            let ij = NCPoly::from_word(Word::new(vec![i as u8, j as u8]));
            let ji = NCPoly::from_word(Word::new(vec![j as u8, i as u8]));
            rels.push(ij.sub(&ji));
        }
    }
    Presentation::new(pres.alphabet().clone(), rels).expect("commutators are nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncgb::{complete, dimension, CapPolicy};

    fn lambda() -> FiniteDimAlgebra {
        let a = Alphabet::new(&["x", "y"]).unwrap();
        let pres = Presentation::parse(a, &["xy+yx", "x^3-y^2"]).unwrap();
        build_algebra(&complete(&pres, 12)).unwrap()
    }

    #[test]
    fn square_zero_algebra() {
        let a = Alphabet::new(&["x"]).unwrap();
        let pres = Presentation::parse(a, &["x^2"]).unwrap();
        let alg = build_algebra(&complete(&pres, 6)).unwrap();
        assert_eq!(alg.dim(), 2);
        assert!(alg.product(1, 1).iter().all(Zero::is_zero));
        assert_eq!(alg.radical_filtration().unwrap(), vec![1, 0]);
    }

    #[test]
    fn lambda_table_against_normal_forms() {
        let alg = lambda();
        let a = alg.alphabet().clone();
        let x = alg.index_of(&Word::letter(0)).unwrap();
        let y = alg.index_of(&Word::letter(1)).unwrap();
        assert_eq!(alg.product(x, y).to_vec(), alg.coordinates(&a.parse("-yx").unwrap()));
        assert!(alg.is_associative());
        for i in 0..alg.dim() {
            let mut e = vec![Q::zero(); alg.dim()];
            e[i] = Q::one();
            assert_eq!(alg.product(0, i), &e[..]);
            assert_eq!(alg.product(i, 0), &e[..]);
        }
    }

    #[test]
    fn lambda_filtration() {
        // J = span of 8 words; J^2 drops the two letters, and so on
        assert_eq!(lambda().radical_filtration().unwrap(), vec![8, 6, 4, 2, 1, 0]);
    }

    #[test]
    fn non_nilpotent_radical_is_rejected() {
        // x^2 = x^3 makes x^2 idempotent
        let a = Alphabet::new(&["x"]).unwrap();
        let pres = Presentation::parse(a, &["x^3 - x^2"]).unwrap();
        let alg = build_algebra(&complete(&pres, 8)).unwrap();
        assert!(alg.is_local());
        assert!(alg.radical_filtration().is_err());
    }

    #[test]
    fn abelianization_of_commutative_input() {
        let a = Alphabet::new(&["x", "y"]).unwrap();
        let pres = Presentation::parse(a, &["xy - yx", "x^2", "y^3"]).unwrap();
        let d = dimension(&pres, &CapPolicy::default()).1.dimension;
        let d_ab = dimension(&abelianize(&pres), &CapPolicy::default()).1.dimension;
        assert_eq!(d, Some(6));
        assert_eq!(d, d_ab);
    }

    #[test]
    fn identity_times_element() {
        let alg = lambda();
        let v = ParamElement::new((0..9).map(|i| CommPoly::var(9, i)).collect()).unwrap();
        let one = ParamElement::unit(9, 9);
        assert_eq!(multiply(&alg, &one, &v), v);
        assert_eq!(multiply(&alg, &v, &one), v);
    }
}
