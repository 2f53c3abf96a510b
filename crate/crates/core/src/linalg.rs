//! Exact Gaussian elimination over the rationals.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::Q;

/// Sparse row: column index to nonzero coefficient.
pub type SparseRow = BTreeMap<usize, Q>;

/// A row reduced to `0 = c` with `c` nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inconsistent;

/// Incremental echelon form. Each stored row is reduced against the
/// earlier pivots, has leading coefficient one and is keyed by its pivot.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, (SparseRow, Q)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut row: SparseRow, mut rhs: Q) -> (SparseRow, Q) {
        loop {
            let hit = row
                .iter()
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, factor)) = hit else {
                return (row, rhs);
            };
            let (prow, prhs) = &self.rows[&col];
            for (c, v) in prow {
                let e = row.entry(*c).or_insert_with(Q::zero);
                *e -= &factor * v;
                if e.is_zero() {
                    row.remove(c);
                }
            }
            rhs -= &factor * prhs;
        }
    }

    /// Adds a row with right-hand side. Returns `false` when the row is
    /// dependent and an error when it makes the system inconsistent.
    pub fn insert(&mut self, row: SparseRow, rhs: Q) -> Result<bool, Inconsistent> {
        let (mut row, mut rhs) = self.reduce(row, rhs);
        let Some((&pivot, lead)) = row.iter().next() else {
            return if rhs.is_zero() { Ok(false) } else { Err(Inconsistent) };
        };
        let inv = lead.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        rhs *= &inv;
        self.rows.insert(pivot, (row, rhs));
        Ok(true)
    }

    /// True iff `row` lies in the span of the inserted rows.
    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row.clone(), Q::zero()).0.is_empty()
    }

    /// One solution with free variables set to zero.
    pub fn solution(&self, nunknowns: usize) -> Vec<Q> {
        let mut x = vec![Q::zero(); nunknowns];
        for (&pivot, (row, rhs)) in self.rows.iter().rev() {
            let mut v = rhs.clone();
            for (c, a) in row.range(pivot + 1..) {
                v -= a * &x[*c];
            }
            x[pivot] = v;
        }
        x
    }
}

/// Solves `A x = b` for sparse `A` given row by row; `None` if inconsistent.
pub fn solve(rows: Vec<SparseRow>, rhs: Vec<Q>, nunknowns: usize) -> Option<Vec<Q>> {
    let mut e = Echelon::new();
    for (r, b) in rows.into_iter().zip(rhs) {
        e.insert(r, b).ok()?;
    }
    Some(e.solution(nunknowns))
}

pub fn to_sparse(v: &[Q]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Rank of a set of dense vectors.
pub fn rank(vectors: &[Vec<Q>]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        let _ = e.insert(to_sparse(v), Q::zero());
    }
    e.rank()
}
