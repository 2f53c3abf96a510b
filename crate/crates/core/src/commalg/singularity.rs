//! Milnor and Tjurina numbers and smoothness certificates for hypersurfaces.

use serde::{Deserialize, Serialize};

use super::groebner::{buchberger, buchberger_bounded, vdim, VDim};
use super::{CommOrder, CommPoly};
use crate::error::{Error, Result};

/// All first partial derivatives.
pub fn jacobian_ideal(f: &CommPoly) -> Vec<CommPoly> {
    (0..f.nvars()).map(|i| f.derivative(i)).collect()
}

fn require_nonconstant(f: &CommPoly) -> Result<()> {
    if f.is_constant() {
        return Err(Error::Invalid("polynomial must be non-constant".into()));
    }
    Ok(())
}

/// Quotient dimension of the Jacobian ideal, globally (`dp`) or at the origin (`ds`).
pub fn milnor(f: &CommPoly, order: CommOrder) -> Result<VDim> {
    require_nonconstant(f)?;
    Ok(vdim(&buchberger(&jacobian_ideal(f), order)))
}

/// Quotient dimension of `f` plus its Jacobian ideal.
pub fn tjurina(f: &CommPoly, order: CommOrder) -> Result<VDim> {
    require_nonconstant(f)?;
    let mut gens = vec![f.clone()];
    gens.extend(jacobian_ideal(f));
    Ok(vdim(&buchberger(&gens, order)))
}

/// Verdict on whether `{f = 0}` is smooth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Smoothness {
    /// 1 lies in `(f, df/dx_1, ..., df/dx_n)`.
    Smooth,
    /// The singular-locus ideal is proper; `vdim` is its quotient dimension.
    Singular { vdim: VDim },
    /// The Groebner computation exceeded its budget.
    Inconclusive { reason: String },
}

/// Decides smoothness by a global Groebner basis of `f` and its partials.
/// `max_pairs` bounds the number of S-polynomial reductions.
pub fn smoothness(f: &CommPoly, max_pairs: Option<usize>) -> Smoothness {
    let mut gens = vec![f.clone()];
    gens.extend(jacobian_ideal(f));
    match buchberger_bounded(&gens, CommOrder::Dp, max_pairs) {
        None => Smoothness::Inconclusive {
            reason: format!("no certificate within {} S-pair reductions", max_pairs.unwrap_or(0)),
        },
        Some(gb) if gb.contains_one() => Smoothness::Smooth,
        Some(gb) => Smoothness::Singular { vdim: vdim(&gb) },
    }
}
