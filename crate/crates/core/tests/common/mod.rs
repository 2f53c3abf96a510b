#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use flopcheck::commalg::CommPoly;
use flopcheck::freealg::{NCPoly, Word};
use flopcheck::matfac::PolyMatrix;
use flopcheck::Q;
use num_traits::{One, Zero};

/// Row-reduced rows keyed by pivot column.
#[derive(Clone, Default)]
pub struct Rows {
    pivots: BTreeMap<usize, BTreeMap<usize, Q>>,
}

impl Rows {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, mut row: BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        loop {
            let hit = row.keys().copied().find(|c| self.pivots.contains_key(c));
            let Some(col) = hit else { return row };
            let factor = row[&col].clone();
            for (k, v) in &self.pivots[&col] {
                let e = row.entry(*k).or_insert_with(Q::zero);
                *e -= &factor * v;
                if e.is_zero() {
                    row.remove(k);
                }
            }
        }
    }

    /// Adds a row; true when the rank grew.
    pub fn push(&mut self, row: BTreeMap<usize, Q>) -> bool {
        let row = self.reduce(row);
        let Some((&col, lead)) = row.iter().next() else { return false };
        let inv = Q::one() / lead.clone();
        let row: BTreeMap<usize, Q> = row.into_iter().map(|(k, v)| (k, v * &inv)).collect();
        self.pivots.insert(col, row);
        true
    }

    pub fn spans(&self, row: BTreeMap<usize, Q>) -> bool {
        self.reduce(row).is_empty()
    }
}

/// All words of degree at most `d` over `k` letters.
pub fn words_up_to(k: usize, d: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..k as u8 {
                let mut v: Vec<u8> = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Quotient of the free algebra by a two-sided ideal and all words of degree above `d`,
/// computed by plain linear algebra over the spanning set `u r v`.
pub struct TruncatedNc {
    pub index: HashMap<Vec<u8>, usize>,
    pub rows: Rows,
    pub d: usize,
}

impl TruncatedNc {
    pub fn new(k: usize, relations: &[NCPoly], d: usize) -> Self {
        let words = words_up_to(k, d);
        let index: HashMap<Vec<u8>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut rows = Rows::default();
        for r in relations {
            let low = r.min_degree().unwrap_or(0);
            for u in &words {
                for v in &words {
                    if u.len() + v.len() + low > d {
                        continue;
                    }
                    let mut row = BTreeMap::new();
                    for (w, c) in r.terms() {
                        let mut full = u.clone();
                        full.extend_from_slice(w.letters());
                        full.extend_from_slice(v);
                        if full.len() <= d {
                            *row.entry(index[&full]).or_insert_with(Q::zero) += c;
                        }
                    }
                    row.retain(|_, c: &mut Q| !c.is_zero());
                    rows.push(row);
                }
            }
        }
        TruncatedNc { index, rows, d }
    }

    pub fn dim(&self) -> usize {
        self.index.len() - self.rows.rank()
    }

    /// True when the word is zero in the truncated quotient.
    pub fn kills(&self, word: &[u8]) -> bool {
        if word.len() > self.d {
            return true;
        }
        self.rows.spans(BTreeMap::from([(self.index[word], Q::one())]))
    }
}

/// Exponent vectors of total degree at most `d`.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for e in 0..=d {
        for mut rest in monomials_up_to(n - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Dimension of `k[x]/(I + m^(d+1))` by linear algebra.
pub fn truncated_comm_dim(gens: &[CommPoly], d: u32) -> usize {
    let n = gens[0].nvars();
    let monos = monomials_up_to(n, d);
    let index: HashMap<Vec<u32>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Rows::default();
    for g in gens {
        let low = g.terms().map(|(e, _)| e.iter().sum::<u32>()).min().unwrap_or(0);
        for m in &monos {
            if m.iter().sum::<u32>() + low > d {
                continue;
            }
            let mut row = BTreeMap::new();
            for (e, c) in g.terms() {
                let prod: Vec<u32> = e.iter().zip(m).map(|(a, b)| a + b).collect();
                if prod.iter().sum::<u32>() <= d {
                    *row.entry(index[&prod]).or_insert_with(Q::zero) += c;
                }
            }
            row.retain(|_, c: &mut Q| !c.is_zero());
            rows.push(row);
        }
    }
    monos.len() - rows.rank()
}

/// Local quotient dimension at the origin: the truncated dimension once it
/// stops changing between `d` and `d + 1`.
pub fn local_dim(gens: &[CommPoly], start: u32, limit: u32) -> Option<usize> {
    let mut prev = truncated_comm_dim(gens, start);
    for d in start + 1..=limit {
        let cur = truncated_comm_dim(gens, d);
        if cur == prev {
            return Some(cur);
        }
        prev = cur;
    }
    None
}

/// Entry-by-entry matrix product.
pub fn matmul(a: &PolyMatrix, b: &PolyMatrix) -> Vec<Vec<CommPoly>> {
    assert_eq!(a.cols(), b.rows());
    (0..a.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| {
                    (0..a.cols()).fold(CommPoly::zero(a.nvars()), |acc, k| acc.add(&a.entry(i, k).mul(b.entry(k, j))))
                })
                .collect()
        })
        .collect()
}

pub fn partials(f: &CommPoly) -> Vec<CommPoly> {
    (0..f.nvars()).map(|i| f.derivative(i)).collect()
}

pub fn word(letters: &[u8]) -> Word {
    Word::new(letters.to_vec())
}
