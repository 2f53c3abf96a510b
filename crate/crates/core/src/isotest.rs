//! Isomorphism test for finite-dimensional local algebras via a generic
//! generator map with parameter coefficients.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::commalg::{buchberger, member, CommOrder, CommPoly};
use crate::error::{Error, Result};
use crate::findim::{abelianize, build_algebra, FiniteDimAlgebra, ParamElement};
use crate::freealg::{NCPoly, Word};
use crate::ncgb::{certified_dimension, CapPolicy, Presentation};
use crate::Q;

/// Generator images with one fresh parameter per (generator, radical basis word).
#[derive(Debug, Clone)]
pub struct GenericMap {
    source: Presentation,
    target: FiniteDimAlgebra,
    images: Vec<ParamElement>,
    names: Vec<String>,
}

fn parameter_names(ngens: usize, nradical: usize) -> Vec<String> {
    const PREFIX: [&str; 2] = ["l", "m"];
    let mut out = Vec::with_capacity(ngens * nradical);
    for g in 0..ngens {
        for j in 1..=nradical {
            match PREFIX.get(g).filter(|_| ngens <= PREFIX.len()) {
                Some(prefix) => out.push(format!("{prefix}{j}")),
                None => out.push(format!("p{}_{j}", g + 1)),
            }
        }
    }
    out
}

/// Builds the generic map from `src` into the radical of `tgt`.
pub fn generic_map(src: &Presentation, tgt: &FiniteDimAlgebra) -> Result<GenericMap> {
    if !tgt.is_local() {
        return Err(Error::NotLocal("target algebra".into()));
    }
    if !src.is_local() {
        return Err(Error::NotLocal("source relations must lie in the square of the augmentation ideal".into()));
    }
    let ngens = src.alphabet().len();
    let nrad = tgt.dim() - 1;
    let nparams = ngens * nrad;
    let images = (0..ngens)
        .map(|g| {
            let mut coords = vec![CommPoly::zero(nparams); tgt.dim()];
            for (j, c) in coords.iter_mut().enumerate().skip(1) {
                *c = CommPoly::var(nparams, g * nrad + j - 1);
            }
            ParamElement::new(coords).expect("uniform parameter ring")
        })
        .collect();
    Ok(GenericMap {
        source: src.clone(),
        target: tgt.clone(),
        images,
        names: parameter_names(ngens, nrad),
    })
}

impl GenericMap {
    pub fn nparams(&self) -> usize {
        self.names.len()
    }

    pub fn parameter_names(&self) -> &[String] {
        &self.names
    }

    pub fn images(&self) -> &[ParamElement] {
        &self.images
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &FiniteDimAlgebra {
        &self.target
    }

    /// Index of the parameter attached to generator `g` and basis word `j >= 1`.
    pub fn parameter(&self, g: usize, j: usize) -> usize {
        g * (self.target.dim() - 1) + j - 1
    }

    /// Nonzero coordinates of the image of `p`.
    pub fn constraints_for(&self, p: &NCPoly) -> Vec<CommPoly> {
        self.target
            .evaluate(p, &self.images)
            .coords()
            .iter()
            .filter(|c| !c.is_zero())
            .cloned()
            .collect()
    }

    /// Constraints from every source relation, in relation order.
    pub fn constraint_ideal(&self) -> Vec<CommPoly> {
        self.source
            .relations()
            .iter()
            .flat_map(|r| self.constraints_for(r))
            .collect()
    }

    /// Linear-part coordinates: rows are generators, columns the degree-one
    /// basis words of the target.
    pub fn linear_matrix(&self) -> Vec<Vec<CommPoly>> {
        let lin = self.target.linear_indices();
        self.images
            .iter()
            .map(|e| lin.iter().map(|&j| e.coords()[j].clone()).collect())
            .collect()
    }

    /// Determinant of the linear part; `None` when it is not square.
    pub fn determinant(&self) -> Option<CommPoly> {
        let m = self.linear_matrix();
        if m.iter().any(|row| row.len() != m.len()) {
            return None;
        }
        Some(determinant(&m, self.nparams()))
    }
}

fn determinant(m: &[Vec<CommPoly>], nvars: usize) -> CommPoly {
    match m.len() {
        0 => CommPoly::one(nvars),
        1 => m[0][0].clone(),
        n => {
            let mut acc = CommPoly::zero(nvars);
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<CommPoly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = m[0][col].mul(&determinant(&minor, nvars));
                acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Identities holding in the source: `g^k = 0` for each generator with
/// nilpotency index `k`.
pub fn derived_identities(src: &FiniteDimAlgebra) -> Vec<NCPoly> {
    (0..src.alphabet().len())
        .filter_map(|g| {
            let coords = src.coordinates(&NCPoly::from_word(Word::letter(g)));
            src.nilpotency_index(&coords)
                .map(|k| NCPoly::from_word(Word::new(vec![g as u8; k])))
        })
        .collect()
}

/// One step of the staged deduction.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub identity: NCPoly,
    /// Parameters already known to vanish when the stage starts.
    pub zeros_before: BTreeSet<usize>,
    /// Nonzero coordinates of the identity's image with those parameters set to zero.
    pub constraints: Vec<CommPoly>,
    pub new_zeros: Vec<usize>,
    pub new_nonzeros: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StagedOutcome {
    /// A constraint is a monomial in parameters known to be nonzero.
    Contradiction { stage: usize, constraint: CommPoly },
    Open,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StagedRun {
    pub stages: Vec<Stage>,
    pub outcome: StagedOutcome,
    pub zeros: BTreeSet<usize>,
    pub nonzeros: BTreeSet<usize>,
}

fn single_term_vars(p: &CommPoly) -> Option<BTreeSet<usize>> {
    if p.len() == 1 {
        Some(p.variables())
    } else {
        None
    }
}

fn zero_out(p: &CommPoly, zeros: &BTreeSet<usize>) -> CommPoly {
    let vals: BTreeMap<usize, Q> = zeros.iter().map(|&v| (v, Q::zero())).collect();
    p.specialize(&vals)
}

/// Imposes the derived identities and then each relation in turn, deducing
/// vanishing parameters from monomial constraints and nonvanishing ones from
/// a monomial determinant.
pub fn staged_pipeline(gm: &GenericMap, derived: &[NCPoly]) -> StagedRun {
    let det = gm.determinant();
    let mut zeros = BTreeSet::new();
    let mut nonzeros = BTreeSet::new();
    let mut stages = Vec::new();
    let identities = derived.iter().chain(gm.source.relations());
    for identity in identities {
        let raw = gm.constraints_for(identity);
        let constraints: Vec<CommPoly> = raw
            .iter()
            .map(|c| zero_out(c, &zeros))
            .filter(|c| !c.is_zero())
            .collect();
        if constraints.is_empty() {
            continue;
        }
        let zeros_before = zeros.clone();
        let mut new_zeros = Vec::new();
        let mut new_nonzeros = Vec::new();
        loop {
            let mut changed = false;
            if let Some(d) = &det {
                if let Some(vars) = single_term_vars(&zero_out(d, &zeros)) {
                    for v in vars {
                        if nonzeros.insert(v) {
                            new_nonzeros.push(v);
                            changed = true;
                        }
                    }
                }
            }
            for c in &constraints {
                let c = zero_out(c, &zeros);
                if c.is_zero() {
                    continue;
                }
                let Some(vars) = single_term_vars(&c) else { continue };
                let unknown: Vec<usize> = vars.iter().copied().filter(|v| !nonzeros.contains(v)).collect();
                match unknown.as_slice() {
                    [] => {
                        let stage = stages.len();
                        stages.push(Stage {
                            identity: identity.clone(),
                            zeros_before,
                            constraints,
                            new_zeros,
                            new_nonzeros,
                        });
                        return StagedRun {
                            stages,
                            outcome: StagedOutcome::Contradiction { stage, constraint: c },
                            zeros,
                            nonzeros,
                        };
                    }
                    [v] => {
                        zeros.insert(*v);
                        new_zeros.push(*v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        stages.push(Stage {
            identity: identity.clone(),
            zeros_before,
            constraints,
            new_zeros,
            new_nonzeros,
        });
    }
    StagedRun {
        stages,
        outcome: StagedOutcome::Open,
        zeros,
        nonzeros,
    }
}

/// Constraint polynomials scaled to leading coefficient one, as a set.
pub fn normalized_set(polys: &[CommPoly]) -> BTreeSet<Vec<(Vec<u32>, Q)>> {
    polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            p.monic(CommOrder::Dp)
                .terms()
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect()
        })
        .collect()
}

/// Reason two algebras cannot be isomorphic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonIsoCertificate {
    Invariant(InvariantMismatch),
    UnitIdeal(UnitIdealCertificate),
}

/// Unit-ideal proof that no surjective generator map exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitIdealCertificate {
    /// Parameter names; the last one is the reciprocal of the determinant.
    pub parameters: Vec<String>,
    /// Ideal generators: relation and identity constraints, then `t*det - 1`.
    pub generators: Vec<String>,
    pub groebner_basis: Vec<String>,
    /// Parameters the staged deduction forced to zero, in order.
    pub staged_zeros: Vec<String>,
    /// Constraint on which the staged deduction stopped, if any.
    pub staged_contradiction: Option<String>,
}

/// Rational generator images in the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub images: BTreeMap<String, String>,
    #[serde(skip)]
    pub coordinates: Vec<Vec<Q>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoVerdict {
    NotIsomorphic { certificate: NonIsoCertificate },
    Isomorphic { witness: Witness },
    Inconclusive { reason: String },
}

/// Invariant mismatch that rules out isomorphism without any solving.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantMismatch {
    pub invariant: String,
    pub left: String,
    pub right: String,
}

/// Full verdict with the invariants that were compared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoReport {
    pub dimensions: [usize; 2],
    pub abelianization_dimensions: [usize; 2],
    pub radical_filtrations: [Vec<usize>; 2],
    pub mismatch: Option<InvariantMismatch>,
    #[serde(flatten)]
    pub verdict: IsoVerdict,
}

struct Side {
    alg: FiniteDimAlgebra,
    dim_ab: usize,
    filtration: Vec<usize>,
}

fn prepare(pres: &Presentation, policy: &CapPolicy) -> Result<Side> {
    let (gb, _) = certified_dimension(pres, policy)?;
    let alg = build_algebra(&gb)?;
    let filtration = alg.radical_filtration()?;
    let (_, cert_ab) = certified_dimension(&abelianize(pres), policy)?;
    Ok(Side {
        alg,
        dim_ab: cert_ab.dimension.expect("certified"),
        filtration,
    })
}

fn mismatch(left: &Side, right: &Side) -> Option<InvariantMismatch> {
    let checks = [
        ("dimension", left.alg.dim().to_string(), right.alg.dim().to_string()),
        ("abelianization dimension", left.dim_ab.to_string(), right.dim_ab.to_string()),
        ("radical filtration", format!("{:?}", left.filtration), format!("{:?}", right.filtration)),
    ];
    checks.into_iter().find(|(_, l, r)| l != r).map(|(name, l, r)| InvariantMismatch {
        invariant: name.into(),
        left: l,
        right: r,
    })
}

/// Everything fed to the final Groebner computation for the map `a -> b`.
fn certificate_ideal(gm: &GenericMap, derived: &[NCPoly]) -> Option<Vec<CommPoly>> {
    let n = gm.nparams();
    let det = gm.determinant()?;
    let mut gens: Vec<CommPoly> = gm.constraint_ideal();
    for d in derived {
        gens.extend(gm.constraints_for(d));
    }
    let mut gens: Vec<CommPoly> = gens.into_iter().map(|p| p.extend(n + 1)).collect();
    let t = CommPoly::var(n + 1, n);
    gens.push(t.mul(&det.extend(n + 1)).sub(&CommPoly::one(n + 1)));
    Some(gens)
}

/// Decides whether the algebras presented by `a` and `b` are isomorphic.
pub fn decide_iso(a: &Presentation, b: &Presentation, policy: &CapPolicy) -> Result<IsoReport> {
    let left = prepare(a, policy)?;
    let right = prepare(b, policy)?;
    let mut report = IsoReport {
        dimensions: [left.alg.dim(), right.alg.dim()],
        abelianization_dimensions: [left.dim_ab, right.dim_ab],
        radical_filtrations: [left.filtration.clone(), right.filtration.clone()],
        mismatch: None,
        verdict: IsoVerdict::Inconclusive { reason: String::new() },
    };
    if let Some(m) = mismatch(&left, &right) {
        report.mismatch = Some(m.clone());
        report.verdict = IsoVerdict::NotIsomorphic {
            certificate: NonIsoCertificate::Invariant(m),
        };
        return Ok(report);
    }
    report.verdict = decide_with_map(a, &left.alg, &right.alg)?;
    Ok(report)
}

fn decide_with_map(a: &Presentation, src: &FiniteDimAlgebra, tgt: &FiniteDimAlgebra) -> Result<IsoVerdict> {
    let gm = generic_map(a, tgt)?;
    let derived = derived_identities(src);
    let staged = staged_pipeline(&gm, &derived);
    let Some(gens) = certificate_ideal(&gm, &derived) else {
        return Ok(IsoVerdict::Inconclusive {
            reason: "generator count differs from the number of degree-one basis words".into(),
        });
    };
    let gb = buchberger(&gens, CommOrder::Dp);
    if gb.contains_one() {
        let mut names = gm.parameter_names().to_vec();
        names.push("t".into());
        let certificate = NonIsoCertificate::UnitIdeal(UnitIdealCertificate {
            generators: gens.iter().map(|p| p.format(&names)).collect(),
            groebner_basis: gb.elements().iter().map(|p| p.format(&names)).collect(),
            staged_zeros: staged.zeros.iter().map(|&v| names[v].clone()).collect(),
            staged_contradiction: match &staged.outcome {
                StagedOutcome::Contradiction { constraint, .. } => Some(constraint.format(&names)),
                StagedOutcome::Open => None,
            },
            parameters: names,
        });
        return Ok(IsoVerdict::NotIsomorphic { certificate });
    }
    if let StagedOutcome::Contradiction { constraint, .. } = &staged.outcome {
        return Err(Error::Invalid(format!(
            "staged deduction found {} but the full ideal is proper",
            constraint.format(gm.parameter_names())
        )));
    }
    if let Some(witness) = search_witness(&gm) {
        return Ok(IsoVerdict::Isomorphic { witness });
    }
    Ok(IsoVerdict::Inconclusive {
        reason: "constraint ideal is proper and no small rational witness was found".into(),
    })
}

/// Rechecks a certificate against the two presentations.
pub fn verify_certificate(a: &Presentation, b: &Presentation, cert: &NonIsoCertificate, policy: &CapPolicy) -> Result<bool> {
    match cert {
        NonIsoCertificate::Invariant(m) => {
            let report = decide_invariants(a, b, policy)?;
            Ok(report.as_ref() == Some(m))
        }
        NonIsoCertificate::UnitIdeal(c) => verify_unit_ideal(a, b, c, policy),
    }
}

fn decide_invariants(a: &Presentation, b: &Presentation, policy: &CapPolicy) -> Result<Option<InvariantMismatch>> {
    let left = prepare(a, policy)?;
    let right = prepare(b, policy)?;
    Ok(mismatch(&left, &right))
}

/// The generators must be the ones the map `a -> b` produces, and their
/// Groebner basis must contain 1.
fn verify_unit_ideal(a: &Presentation, b: &Presentation, cert: &UnitIdealCertificate, policy: &CapPolicy) -> Result<bool> {
    let (gb_a, _) = certified_dimension(a, policy)?;
    let (gb_b, _) = certified_dimension(b, policy)?;
    let src = build_algebra(&gb_a)?;
    let tgt = build_algebra(&gb_b)?;
    let gm = generic_map(a, &tgt)?;
    let Some(gens) = certificate_ideal(&gm, &derived_identities(&src)) else {
        return Ok(false);
    };
    let parsed: Vec<CommPoly> = cert
        .generators
        .iter()
        .map(|s| CommPoly::parse(s, &cert.parameters))
        .collect::<Result<_>>()?;
    if normalized_set(&parsed) != normalized_set(&gens) {
        return Ok(false);
    }
    let gb = buchberger(&parsed, CommOrder::Dp);
    Ok(member(&CommPoly::one(cert.parameters.len()), &gb).0)
}

/// True iff the images kill every relation, have no constant term and have
/// invertible linear part.
pub fn verify_witness(src: &Presentation, tgt: &FiniteDimAlgebra, images: &[Vec<Q>]) -> bool {
    if images.len() != src.alphabet().len() || images.iter().any(|v| v.len() != tgt.dim() || !v[0].is_zero()) {
        return false;
    }
    let lin = tgt.linear_indices();
    if lin.len() != images.len() {
        return false;
    }
    let m: Vec<Vec<CommPoly>> = images
        .iter()
        .map(|v| lin.iter().map(|&j| CommPoly::constant(0, v[j].clone())).collect())
        .collect();
    if determinant(&m, 0).is_zero() {
        return false;
    }
    src.relations()
        .iter()
        .all(|r| tgt.evaluate_scalar(r, images).iter().all(Zero::is_zero))
}

/// Coordinates of rational generator images written as polynomials in the
/// target generators.
pub fn witness_from_polys(tgt: &FiniteDimAlgebra, images: &[NCPoly]) -> Vec<Vec<Q>> {
    images.iter().map(|p| tgt.coordinates(p)).collect()
}

fn small_values() -> Vec<Q> {
    let half = Q::new(1.into(), 2.into());
    vec![
        Q::zero(),
        Q::one(),
        -Q::one(),
        Q::from_integer(2.into()),
        Q::from_integer((-2).into()),
        half.clone(),
        -half,
    ]
}

/// Tuples over `values` of length `len`, in lexicographic order.
fn tuples(values: &[Q], len: usize) -> impl Iterator<Item = Vec<Q>> + '_ {
    let total = values.len().checked_pow(len as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut k| {
        let mut t = vec![Q::zero(); len];
        for slot in t.iter_mut().rev() {
            *slot = values[k % values.len()].clone();
            k /= values.len();
        }
        t
    })
}

/// Linear parts over small rationals, then higher coordinates that are zero
/// or have a single small nonzero entry.
fn search_witness(gm: &GenericMap) -> Option<Witness> {
    let tgt = &gm.target;
    let src = &gm.source;
    let ngens = src.alphabet().len();
    let lin = tgt.linear_indices();
    let higher: Vec<usize> = (1..tgt.dim()).filter(|j| !lin.contains(j)).collect();
    let values = small_values();
    const MAX_LINEAR: usize = 200_000;
    for flat in tuples(&values, ngens * lin.len()).take(MAX_LINEAR) {
        let mut images = vec![vec![Q::zero(); tgt.dim()]; ngens];
        for g in 0..ngens {
            for (k, &j) in lin.iter().enumerate() {
                images[g][j] = flat[g * lin.len() + k].clone();
            }
        }
        let m: Vec<Vec<CommPoly>> = images
            .iter()
            .map(|v| lin.iter().map(|&j| CommPoly::constant(0, v[j].clone())).collect())
            .collect();
        if determinant(&m, 0).is_zero() {
            continue;
        }
        if verify_witness(src, tgt, &images) {
            return Some(make_witness(gm, images));
        }
        for g in 0..ngens {
            for &j in &higher {
                for v in values.iter().skip(1) {
                    let mut trial = images.clone();
                    trial[g][j] = v.clone();
                    if verify_witness(src, tgt, &trial) {
                        return Some(make_witness(gm, trial));
                    }
                }
            }
        }
    }
    None
}

fn make_witness(gm: &GenericMap, images: Vec<Vec<Q>>) -> Witness {
    let tgt = &gm.target;
    let src_alpha = gm.source.alphabet();
    let map = images
        .iter()
        .enumerate()
        .map(|(g, v)| {
            let p = NCPoly::from_terms(tgt.basis().iter().cloned().zip(v.iter().cloned()));
            (src_alpha.generators()[g].clone(), tgt.alphabet().format_poly(&p))
        })
        .collect();
    Witness {
        images: map,
        coordinates: images,
    }
}
