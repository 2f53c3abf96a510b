//! Gopakumar-Vafa tuples from algebra dimensions via Toda's formula
//! `dim A = dim A^ab + sum_{j=2}^{l} j^2 n_j` with `n_1 = dim A^ab`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::findim::abelianize;
use crate::ncgb::{certified_dimension, CapPolicy, Presentation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GVTuple {
    /// `(n_1, ..., n_l)`.
    pub n: Vec<usize>,
}

impl GVTuple {
    pub fn length(&self) -> usize {
        self.n.len()
    }

    /// `n_1 + sum j^2 n_j`.
    pub fn weighted_sum(&self) -> usize {
        self.n
            .iter()
            .enumerate()
            .map(|(i, &nj)| if i == 0 { nj } else { (i + 1) * (i + 1) * nj })
            .sum()
    }
}

/// All tuples of the given length with `n_1 = dim_ab`, `n_j >= 1` for
/// `j >= 2`, and weighted sum `dim_acon`.
pub fn toda_tuples(dim_acon: usize, dim_ab: usize, length: usize) -> Vec<GVTuple> {
    if length == 0 || dim_ab > dim_acon {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = vec![dim_ab];
    fill(dim_acon - dim_ab, 2, length, &mut current, &mut out);
    out
}

fn fill(remaining: usize, j: usize, length: usize, current: &mut Vec<usize>, out: &mut Vec<GVTuple>) {
    if j > length {
        if remaining == 0 {
            out.push(GVTuple { n: current.clone() });
        }
        return;
    }
    let reserve: usize = (j + 1..=length).map(|k| k * k).sum();
    let w = j * j;
    let mut nj = 1;
    while nj * w + reserve <= remaining {
        current.push(nj);
        fill(remaining - nj * w, j + 1, length, current, out);
        current.pop();
        nj += 1;
    }
}

/// Dimensions and the tuples they allow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GVReport {
    pub dim: usize,
    pub dim_ab: usize,
    pub length: usize,
    pub tuples: Vec<GVTuple>,
    /// More than one tuple fits.
    pub ambiguous: bool,
}

/// Certifies both dimensions with the noncommutative engine and applies
/// [`toda_tuples`].
pub fn gv_from_presentation(pres: &Presentation, length: usize, policy: &CapPolicy) -> Result<GVReport> {
    if !pres.is_local() {
        return Err(Error::NotLocal(
            "relations must lie in the square of the augmentation ideal".into(),
        ));
    }
    let (_, cert) = certified_dimension(pres, policy)?;
    let (_, cert_ab) = certified_dimension(&abelianize(pres), policy)?;
    let dim = cert.dimension.expect("certified");
    let dim_ab = cert_ab.dimension.expect("certified");
    let tuples = toda_tuples(dim, dim_ab, length);
    debug_assert!(tuples.iter().all(|t| t.weighted_sum() == dim));
    Ok(GVReport {
        dim,
        dim_ab,
        length,
        ambiguous: tuples.len() > 1,
        tuples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Alphabet;

    #[test]
    fn small_cases() {
        assert_eq!(toda_tuples(9, 5, 2), vec![GVTuple { n: vec![5, 1] }]);
        assert_eq!(toda_tuples(7, 7, 1), vec![GVTuple { n: vec![7] }]);
        assert!(toda_tuples(9, 4, 2).is_empty());
        assert!(toda_tuples(8, 7, 1).is_empty());
        assert!(toda_tuples(3, 5, 2).is_empty());
    }

    #[test]
    fn several_solutions_at_length_three() {
        // 4 n_2 + 9 n_3 = 80 has (11, 4) and (2, 8)
        let ts = toda_tuples(85, 5, 3);
        assert_eq!(ts, vec![GVTuple { n: vec![5, 2, 8] }, GVTuple { n: vec![5, 11, 4] }]);
        let brute = (1..=20)
            .flat_map(|a| (1..=9).map(move |b| (a, b)))
            .filter(|(a, b)| 4 * a + 9 * b == 80)
            .count();
        assert_eq!(ts.len(), brute);
    }

    #[test]
    fn commutative_presentation() {
        let a = Alphabet::new(&["x", "y"]).unwrap();
        let p = Presentation::parse(a, &["x^2", "y^2", "xy - yx"]).unwrap();
        let r = gv_from_presentation(&p, 1, &CapPolicy::default()).unwrap();
        assert_eq!(r.tuples, vec![GVTuple { n: vec![4] }]);
        assert_eq!(r.dim, r.dim_ab);
    }
}
