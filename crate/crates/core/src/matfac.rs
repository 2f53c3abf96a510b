//! Polynomial matrices, matrix factorizations, and membership in the column
//! space of a matrix modulo a hypersurface.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::commalg::{CommPoly, Exponents};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::parse::{self, Evaluate};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Vec<CommPoly>>,
}

impl PolyMatrix {
    pub fn new(entries: Vec<Vec<CommPoly>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map(Vec::len).unwrap_or(0);
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("matrix must have at least one entry".into()));
        }
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("rows have different lengths".into()));
        }
        let nvars = entries[0][0].nvars();
        if entries.iter().flatten().any(|p| p.nvars() != nvars) {
            return Err(Error::Shape("entries live in different rings".into()));
        }
        Ok(Self {
            rows,
            cols,
            nvars,
            entries,
        })
    }

    /// Parses entries written over the given variable names.
    pub fn parse<S: AsRef<str>, T: AsRef<str>>(rows: &[Vec<S>], names: &[T]) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|s| CommPoly::parse(s.as_ref(), names)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn zero(rows: usize, cols: usize, nvars: usize) -> Self {
        Self {
            rows,
            cols,
            nvars,
            entries: vec![vec![CommPoly::zero(nvars); cols]; rows],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        Self::scalar(n, &CommPoly::one(nvars))
    }

    /// `p` times the identity.
    pub fn scalar(n: usize, p: &CommPoly) -> Self {
        let mut m = Self::zero(n, n, p.nvars());
        for i in 0..n {
            m.entries[i][i] = p.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn entry(&self, r: usize, c: usize) -> &CommPoly {
        &self.entries[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: CommPoly) {
        self.entries[r][c] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(CommPoly::is_zero)
    }

    pub fn max_degree(&self) -> u32 {
        self.entries.iter().flatten().filter_map(CommPoly::total_degree).max().unwrap_or(0)
    }

    pub fn column(&self, c: usize) -> Vec<CommPoly> {
        self.entries.iter().map(|r| r[c].clone()).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip(other, CommPoly::add))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip(other, CommPoly::sub))
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, f: &CommPoly) -> Self {
        self.map(|p| p.mul(f))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = CommPoly::zero(self.nvars);
                for k in 0..self.cols {
                    if !self.entries[i][k].is_zero() && !other.entries[k][j].is_zero() {
                        acc = acc.add(&self.entries[i][k].mul(&other.entries[k][j]));
                    }
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Shape("only square matrices have powers".into()));
        }
        let mut acc = Self::identity(self.rows, self.nvars);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn format<S: AsRef<str>>(&self, names: &[S]) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|p| p.format(names)).collect())
            .collect()
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "shapes {}x{} and {}x{} differ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn map(&self, f: impl Fn(&CommPoly) -> CommPoly) -> Self {
        Self {
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
            ..*self
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&CommPoly, &CommPoly) -> CommPoly) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| f(p, q)).collect())
            .collect();
        Self { entries, ..*self }
    }
}

/// Pair `(phi, psi)` with `phi * psi = psi * phi = f * I`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFactorization {
    pub phi: PolyMatrix,
    pub psi: PolyMatrix,
    pub f: CommPoly,
}

/// Both products minus `f * I`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationCheck {
    pub holds: bool,
    pub residual_phi_psi: PolyMatrix,
    pub residual_psi_phi: PolyMatrix,
}

pub fn check_matrix_factorization(mf: &MatrixFactorization) -> Result<FactorizationCheck> {
    let n = mf.phi.rows();
    if mf.phi.cols() != n || (mf.psi.rows(), mf.psi.cols()) != (n, n) {
        return Err(Error::Shape("factorization needs square matrices of equal size".into()));
    }
    let fi = PolyMatrix::scalar(n, &mf.f);
    let residual_phi_psi = mf.phi.mul(&mf.psi)?.sub(&fi)?;
    let residual_psi_phi = mf.psi.mul(&mf.phi)?.sub(&fi)?;
    Ok(FactorizationCheck {
        holds: residual_phi_psi.is_zero() && residual_psi_phi.is_zero(),
        residual_phi_psi,
        residual_psi_phi,
    })
}

/// Matrices with `m = psi * g + f * h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSpaceWitness {
    pub g: PolyMatrix,
    pub h: PolyMatrix,
}

impl ColumnSpaceWitness {
    pub fn verify(&self, m: &PolyMatrix, psi: &PolyMatrix, f: &CommPoly) -> bool {
        psi.mul(&self.g)
            .and_then(|pg| pg.add(&self.h.scale_poly(f)))
            .map(|lhs| &lhs == m)
            .unwrap_or(false)
    }
}

/// Exponent vectors of total degree at most `d`, ascending.
fn monomials_up_to(nvars: usize, d: u32) -> Vec<Exponents> {
    fn rec(prefix: &mut Exponents, left: usize, budget: u32, out: &mut Vec<Exponents>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(prefix, left - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), nvars, d, &mut out);
    out
}

fn shift(e: &[u32], m: &[u32]) -> Exponents {
    e.iter().zip(m).map(|(a, b)| a + b).collect()
}

/// Searches for `g`, `h` with entries of degree at most `degree_bound` such
/// that `m = psi * g + f * h`, column by column.
pub fn column_space_membership(
    m: &PolyMatrix,
    psi: &PolyMatrix,
    f: &CommPoly,
    degree_bound: u32,
) -> Result<Option<ColumnSpaceWitness>> {
    if psi.rows() != m.rows() {
        return Err(Error::Shape(format!(
            "matrix has {} rows but the column space lives in {} rows",
            m.rows(),
            psi.rows()
        )));
    }
    let nvars = m.nvars();
    let mut g = PolyMatrix::zero(psi.cols(), m.cols(), nvars);
    let mut h = PolyMatrix::zero(m.rows(), m.cols(), nvars);
    if m.is_zero() {
        return Ok(Some(ColumnSpaceWitness { g, h }));
    }
    let monos = monomials_up_to(nvars, degree_bound);
    let ng = psi.cols() * monos.len();
    let nunknowns = ng + m.rows() * monos.len();
    for col in 0..m.cols() {
        let target = m.column(col);
        if target.iter().all(CommPoly::is_zero) {
            continue;
        }
        // equation (row, monomial) -> coefficients of the unknowns
        let mut eqs: BTreeMap<(usize, Exponents), BTreeMap<usize, Q>> = BTreeMap::new();
        let mut add = |r: usize, e: Exponents, unknown: usize, c: &Q| {
            let row = eqs.entry((r, e)).or_default();
            *row.entry(unknown).or_insert_with(|| Q::from_integer(0.into())) += c;
        };
        for i in 0..psi.cols() {
            for (k, mono) in monos.iter().enumerate() {
                let unknown = i * monos.len() + k;
                for r in 0..psi.rows() {
                    for (e, c) in psi.entry(r, i).terms() {
                        add(r, shift(e, mono), unknown, c);
                    }
                }
            }
        }
        for r in 0..m.rows() {
            for (k, mono) in monos.iter().enumerate() {
                let unknown = ng + r * monos.len() + k;
                for (e, c) in f.terms() {
                    add(r, shift(e, mono), unknown, c);
                }
            }
        }
        let mut keys: BTreeSet<(usize, Exponents)> = eqs.keys().cloned().collect();
        for (r, p) in target.iter().enumerate() {
            keys.extend(p.terms().map(|(e, _)| (r, e.clone())));
        }
        let mut ech = Echelon::new();
        for key in keys {
            let mut row = eqs.remove(&key).unwrap_or_default();
            row.retain(|_, v| *v != Q::from_integer(0.into()));
            let rhs = target[key.0].coeff(&key.1);
            if ech.insert(row, rhs).is_err() {
                return Ok(None);
            }
        }
        let x = ech.solution(nunknowns);
        for i in 0..psi.cols() {
            let p = CommPoly::from_terms(nvars, monos.iter().cloned().zip(x[i * monos.len()..(i + 1) * monos.len()].iter().cloned()));
            g.set(i, col, p);
        }
        for r in 0..m.rows() {
            let base = ng + r * monos.len();
            let p = CommPoly::from_terms(nvars, monos.iter().cloned().zip(x[base..base + monos.len()].iter().cloned()));
            h.set(r, col, p);
        }
    }
    let w = ColumnSpaceWitness { g, h };
    if !w.verify(m, psi, f) {
        return Err(Error::Invalid("column-space solution failed exact re-verification".into()));
    }
    Ok(Some(w))
}

/// Outcome of a membership search with the default bound policy.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipOutcome {
    pub witness: Option<ColumnSpaceWitness>,
    /// Degree bounds tried, in order; a missing witness is relative to these.
    pub bounds_tried: Vec<u32>,
}

/// Tries `1 + max entry degree of m` (or `bound`) and then twice that.
pub fn membership_with_default_bound(
    m: &PolyMatrix,
    psi: &PolyMatrix,
    f: &CommPoly,
    bound: Option<u32>,
) -> Result<MembershipOutcome> {
    let first = bound.unwrap_or(1 + m.max_degree());
    let mut tried = Vec::new();
    for b in [first, 2 * first.max(1)] {
        tried.push(b);
        if let Some(w) = column_space_membership(m, psi, f, b)? {
            return Ok(MembershipOutcome {
                witness: Some(w),
                bounds_tried: tried,
            });
        }
    }
    Ok(MembershipOutcome {
        witness: None,
        bounds_tried: tried,
    })
}

/// Value of an arrow expression; scalars stand for multiples of the identity.
#[derive(Debug, Clone)]
enum ArrowValue {
    Scalar(Q),
    Matrix(PolyMatrix),
    Invalid(String),
}

impl ArrowValue {
    fn lift(&self, n: usize, nvars: usize) -> Option<PolyMatrix> {
        match self {
            ArrowValue::Scalar(c) => Some(PolyMatrix::scalar(n, &CommPoly::constant(nvars, c.clone()))),
            ArrowValue::Matrix(m) => Some(m.clone()),
            ArrowValue::Invalid(_) => None,
        }
    }

    fn from_result(r: Result<PolyMatrix>) -> Self {
        match r {
            Ok(m) => ArrowValue::Matrix(m),
            Err(e) => ArrowValue::Invalid(e.to_string()),
        }
    }
}

impl Evaluate for ArrowValue {
    type Ctx = Vec<PolyMatrix>;

    fn constant(_: &Self::Ctx, c: &Q) -> Self {
        ArrowValue::Scalar(c.clone())
    }

    fn variable(ctx: &Self::Ctx, index: usize) -> Self {
        ArrowValue::Matrix(ctx[index].clone())
    }

    fn add(&self, other: &Self) -> Self {
        use ArrowValue::*;
        match (self, other) {
            (Invalid(e), _) | (_, Invalid(e)) => Invalid(e.clone()),
            (Scalar(a), Scalar(b)) => Scalar(a + b),
            (Matrix(m), s @ Scalar(_)) | (s @ Scalar(_), Matrix(m)) => {
                if m.rows() != m.cols() {
                    return Invalid(format!("cannot add a scalar to a {}x{} matrix", m.rows(), m.cols()));
                }
                let lifted = s.lift(m.rows(), m.nvars()).expect("scalar");
                Self::from_result(m.add(&lifted))
            }
            (Matrix(a), Matrix(b)) => Self::from_result(a.add(b)),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        use ArrowValue::*;
        match (self, other) {
            (Invalid(e), _) | (_, Invalid(e)) => Invalid(e.clone()),
            (Scalar(a), Scalar(b)) => Scalar(a * b),
            (Matrix(m), Scalar(c)) | (Scalar(c), Matrix(m)) => Matrix(m.scale(c)),
            (Matrix(a), Matrix(b)) => Self::from_result(a.mul(b)),
        }
    }

    fn neg(&self) -> Self {
        self.mul(&ArrowValue::Scalar(Q::from_integer((-1).into())))
    }

    fn pow(&self, _: &Self::Ctx, exp: u32) -> Self {
        match self {
            ArrowValue::Scalar(c) => ArrowValue::Scalar(num_traits::pow::pow(c.clone(), exp as usize)),
            ArrowValue::Matrix(m) => Self::from_result(m.pow(exp)),
            ArrowValue::Invalid(e) => ArrowValue::Invalid(e.clone()),
        }
    }
}

/// Evaluates an expression in the arrows (juxtaposition, `*` and `∘` all
/// mean matrix product in written order).
pub fn evaluate_arrows(expr: &str, names: &[String], arrows: &[PolyMatrix]) -> Result<PolyMatrix> {
    let parsed = parse::parse_expr(expr, names)?;
    let nvars = arrows.first().map(PolyMatrix::nvars).unwrap_or(0);
    let value = parsed.eval::<ArrowValue>(&arrows.to_vec());
    match value {
        ArrowValue::Matrix(m) => Ok(m),
        ArrowValue::Scalar(c) if c == Q::from_integer(0.into()) => {
            let n = arrows.first().map(PolyMatrix::rows).unwrap_or(1);
            Ok(PolyMatrix::zero(n, n, nvars))
        }
        ArrowValue::Scalar(_) => Err(Error::Shape("expression is a nonzero scalar with no matrix shape".into())),
        ArrowValue::Invalid(e) => Err(Error::Shape(e)),
    }
}

/// Result of checking one quiver relation.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck {
    pub value: PolyMatrix,
    pub exactly_zero: bool,
    pub membership: Option<MembershipOutcome>,
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        self.exactly_zero || self.membership.as_ref().is_some_and(|m| m.witness.is_some())
    }
}

pub fn check_quiver_relation(
    expr: &str,
    names: &[String],
    arrows: &[PolyMatrix],
    psi: &PolyMatrix,
    f: &CommPoly,
) -> Result<RelationCheck> {
    let value = evaluate_arrows(expr, names, arrows)?;
    if value.is_zero() {
        return Ok(RelationCheck {
            value,
            exactly_zero: true,
            membership: None,
        });
    }
    let membership = membership_with_default_bound(&value, psi, f, None)?;
    Ok(RelationCheck {
        value,
        exactly_zero: false,
        membership: Some(membership),
    })
}

/// JSON matrix file. All polynomials are strings over `vars`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub vars: Vec<String>,
    pub f: String,
    pub phi: Vec<Vec<String>>,
    pub psi: Vec<Vec<String>>,
    #[serde(default)]
    pub arrows: BTreeMap<String, Vec<Vec<String>>>,
    /// Expected values of arrow expressions.
    #[serde(default)]
    pub displayed: Vec<DisplayedRelation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplayedRelation {
    pub expr: String,
    pub matrix: Vec<Vec<String>>,
}

/// Parsed contents of a [`MatrixFile`].
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixData {
    pub vars: Vec<String>,
    pub factorization: MatrixFactorization,
    pub arrow_names: Vec<String>,
    pub arrows: Vec<PolyMatrix>,
    pub displayed: Vec<(String, PolyMatrix)>,
}

impl MatrixFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("matrix file: {e}")))
    }

    pub fn load(&self) -> Result<MatrixData> {
        let f = CommPoly::parse(&self.f, &self.vars)?;
        let phi = PolyMatrix::parse(&self.phi, &self.vars)?;
        let psi = PolyMatrix::parse(&self.psi, &self.vars)?;
        let mut arrow_names = Vec::new();
        let mut arrows = Vec::new();
        for (name, rows) in &self.arrows {
            arrow_names.push(name.clone());
            arrows.push(PolyMatrix::parse(rows, &self.vars)?);
        }
        let displayed = self
            .displayed
            .iter()
            .map(|d| Ok((d.expr.clone(), PolyMatrix::parse(&d.matrix, &self.vars)?)))
            .collect::<Result<_>>()?;
        Ok(MatrixData {
            vars: self.vars.clone(),
            factorization: MatrixFactorization { phi, psi, f },
            arrow_names,
            arrows,
            displayed,
        })
    }
}
