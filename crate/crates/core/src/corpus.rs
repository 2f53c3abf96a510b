//! Bundled example inputs and the regression checks run over them.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::commalg::{buchberger, member, milnor, smoothness, tjurina, CommOrder, CommPoly, Smoothness, VDim};
use crate::error::{Error, Result};
use crate::files::{parse_algebra_file, parse_poly_file, ChartFile};
use crate::findim::{abelianize, build_algebra, multiply, FiniteDimAlgebra};
use crate::freealg::{Alphabet, Word};
use crate::gvinv::{gv_from_presentation, toda_tuples, GVTuple};
use crate::isotest::{
    decide_iso, derived_identities, generic_map, normalized_set, staged_pipeline, verify_certificate,
    verify_witness, witness_from_polys, IsoVerdict, NonIsoCertificate, StagedOutcome,
};
use crate::matfac::{check_matrix_factorization, check_quiver_relation, MatrixFile};
use crate::ncgb::{certified_dimension, CapPolicy, GbStatus, Presentation};
use crate::Q;

pub const LAMBDA_CON: &str = include_str!("../../../corpus/lambda_con.alg");
pub const GAMMA_CON: &str = include_str!("../../../corpus/gamma_con.alg");
pub const LAMBDA_CON_AB: &str = include_str!("../../../corpus/lambda_con_ab.alg");
pub const GAMMA_CON_AB: &str = include_str!("../../../corpus/gamma_con_ab.alg");
pub const F_R: &str = include_str!("../../../corpus/f_R.poly");
pub const F_L: &str = include_str!("../../../corpus/f_L.poly");
pub const CHART_U1: &str = include_str!("../../../corpus/chart_u1.json");
pub const CHART_U2: &str = include_str!("../../../corpus/chart_u2.json");
pub const R_FACTORIZATION: &str = include_str!("../../../corpus/r_factorization.json");

/// Bundled files by name.
pub const FILES: [(&str, &str); 9] = [
    ("lambda_con.alg", LAMBDA_CON),
    ("gamma_con.alg", GAMMA_CON),
    ("lambda_con_ab.alg", LAMBDA_CON_AB),
    ("gamma_con_ab.alg", GAMMA_CON_AB),
    ("f_R.poly", F_R),
    ("f_L.poly", F_L),
    ("chart_u1.json", CHART_U1),
    ("chart_u2.json", CHART_U2),
    ("r_factorization.json", R_FACTORIZATION),
];

pub fn lambda_con() -> Presentation {
    parse_algebra_file(LAMBDA_CON).expect("bundled file").presentation
}

pub fn gamma_con() -> Presentation {
    parse_algebra_file(GAMMA_CON).expect("bundled file").presentation
}

pub fn lambda_con_ab() -> Presentation {
    parse_algebra_file(LAMBDA_CON_AB).expect("bundled file").presentation
}

pub fn gamma_con_ab() -> Presentation {
    parse_algebra_file(GAMMA_CON_AB).expect("bundled file").presentation
}

pub fn f_r() -> CommPoly {
    parse_poly_file(F_R).expect("bundled file").poly
}

pub fn f_l() -> CommPoly {
    parse_poly_file(F_L).expect("bundled file").poly
}

/// Outcome of one regression check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invalid(msg()))
    }
}

fn algebra(pres: &Presentation, policy: &CapPolicy) -> Result<FiniteDimAlgebra> {
    let (gb, _) = certified_dimension(pres, policy)?;
    build_algebra(&gb)
}

fn words(alpha: &Alphabet, list: &[&str]) -> Result<Vec<Word>> {
    list.iter()
        .map(|s| {
            let p = alpha.parse(s)?;
            let (w, _) = p.terms().next().ok_or_else(|| Error::Invalid(format!("'{s}' is zero")))?;
            Ok(w.clone())
        })
        .collect()
}

/// The nine normal words of the Laufer contraction algebra with `x > y`.
pub const LAMBDA_BASIS: [&str; 9] = ["1", "y", "x", "y^2", "yx", "x^2", "y^2x", "yx^2", "y^2x^2"];

fn check_lambda_basis(policy: &CapPolicy) -> Result<String> {
    let pres = lambda_con();
    let (gb, cert) = certified_dimension(&pres, policy)?;
    ensure(gb.status() == GbStatus::Complete, || format!("status {:?}", gb.status()))?;
    ensure(cert.dimension == Some(9), || format!("dimension {:?}", cert.dimension))?;
    let mut expected = words(pres.alphabet(), &LAMBDA_BASIS)?;
    let mut got = cert.normal_words.clone();
    expected.sort();
    got.sort();
    ensure(got == expected, || "normal words differ from the expected basis".into())?;
    Ok(format!("dim 9, basis {}", cert.report(pres.alphabet()).normal_words.join(", ")))
}

fn check_gamma_dim(policy: &CapPolicy) -> Result<String> {
    let (gb, cert) = certified_dimension(&gamma_con(), policy)?;
    ensure(cert.dimension == Some(9) && gb.is_complete(), || format!("dimension {:?}", cert.dimension))?;
    Ok("dim 9".into())
}

fn check_gamma_nilpotent(policy: &CapPolicy) -> Result<String> {
    let pres = gamma_con();
    let alg = algebra(&pres, policy)?;
    let a = alg.coordinates(&pres.alphabet().parse("a")?);
    let b = alg.coordinates(&pres.alphabet().parse("b")?);
    let a3 = alg.pow(&a, 3);
    let b6 = alg.pow(&b, 6);
    ensure(a3.iter().all(Zero::is_zero), || "a^3 is nonzero".into())?;
    ensure(b6.iter().all(Zero::is_zero), || "b^6 is nonzero".into())?;
    let a2 = alg.pow(&a, 2);
    let b5 = alg.pow(&b, 5);
    Ok(format!(
        "a^3 = 0, b^6 = 0 (a^2 nonzero: {}, b^5 nonzero: {})",
        a2.iter().any(|c| !c.is_zero()),
        b5.iter().any(|c| !c.is_zero())
    ))
}

fn comm_vdim(gens: &[&str], names: &[&str]) -> Result<VDim> {
    let polys = gens
        .iter()
        .map(|s| CommPoly::parse(s, names))
        .collect::<Result<Vec<_>>>()?;
    Ok(crate::commalg::vdim(&buchberger(&polys, CommOrder::Dp)))
}

fn check_abelianizations(policy: &CapPolicy) -> Result<String> {
    let mut dims = Vec::new();
    for pres in [abelianize(&lambda_con()), abelianize(&gamma_con()), lambda_con_ab(), gamma_con_ab()] {
        let (_, cert) = certified_dimension(&pres, policy)?;
        dims.push(cert.dimension);
    }
    ensure(dims.iter().all(|d| *d == Some(5)), || format!("dimensions {dims:?}"))?;
    let l = comm_vdim(&["xy", "x^3 - y^2"], &["x", "y"])?;
    let g = comm_vdim(&["ab", "-a^2 + b^3"], &["a", "b"])?;
    ensure(l == VDim::Finite(5) && g == VDim::Finite(5), || format!("commutative vdims {l:?} {g:?}"))?;
    Ok("noncommutative engine 5, 5; commutative kernel 5, 5".into())
}

fn check_gv(policy: &CapPolicy) -> Result<String> {
    let expected = vec![GVTuple { n: vec![5, 1] }];
    for pres in [lambda_con(), gamma_con()] {
        let r = gv_from_presentation(&pres, 2, policy)?;
        ensure(r.tuples == expected, || format!("tuples {:?}", r.tuples))?;
    }
    ensure(toda_tuples(9, 5, 2).len() == 1, || "toda_tuples(9, 5, 2) is not unique".into())?;
    Ok("(n1, n2) = (5, 1) for both".into())
}

/// Constraint sets the staged deduction must produce for the map from the
/// algebra on `a, b` to the one on `x, y`, over parameters `l1..l8, m1..m8`.
pub const STAGED_SETS: [&[&str]; 3] = [
    &["l2^3", "l1^2 l2 + 3 l2^2 l5", "l1 l2^2", "l1^2 l5 + l2^2 l3 + l2 l5^2"],
    &["l1 m1", "l3 m2", "l1 m5", "l1 m7 + l3 m5 - l4 m4 + l6 m2 + l7 m1"],
    &["-l1^2 + m2^3", "-l1^2 m2", "-2 l1 l7 + l4^2 + 3 m2^2 m3"],
];

fn check_noniso(policy: &CapPolicy) -> Result<String> {
    let lam = lambda_con();
    let gam = gamma_con();
    for (a, b, label) in [(&lam, &gam, "(L, G)"), (&gam, &lam, "(G, L)")] {
        let report = decide_iso(a, b, policy)?;
        let IsoVerdict::NotIsomorphic { certificate } = &report.verdict else {
            return Err(Error::Invalid(format!("{label}: verdict {:?}", report.verdict)));
        };
        ensure(matches!(certificate, NonIsoCertificate::UnitIdeal(_)), || {
            format!("{label}: expected a unit-ideal certificate")
        })?;
        ensure(verify_certificate(a, b, certificate, policy)?, || {
            format!("{label}: certificate does not re-verify")
        })?;
    }
    let src = algebra(&gam, policy)?;
    let tgt = algebra(&lam, policy)?;
    let gm = generic_map(&gam, &tgt)?;
    let run = staged_pipeline(&gm, &derived_identities(&src));
    ensure(run.stages.len() == 3, || format!("{} stages", run.stages.len()))?;
    for (k, (stage, expected)) in run.stages.iter().zip(STAGED_SETS).enumerate() {
        let want = expected
            .iter()
            .map(|s| CommPoly::parse(s, gm.parameter_names()))
            .collect::<Result<Vec<_>>>()?;
        ensure(normalized_set(&stage.constraints) == normalized_set(&want), || {
            format!(
                "stage {}: got {:?}",
                k + 1,
                stage.constraints.iter().map(|c| c.format(gm.parameter_names())).collect::<Vec<_>>()
            )
        })?;
    }
    ensure(matches!(run.outcome, StagedOutcome::Contradiction { stage: 2, .. }), || {
        format!("staged outcome {:?}", run.outcome)
    })?;
    Ok("unit ideal both directions; staged constraint sets match".into())
}

fn check_ab_iso(policy: &CapPolicy) -> Result<String> {
    let l = lambda_con_ab();
    let g = gamma_con_ab();
    let report = decide_iso(&l, &g, policy)?;
    let IsoVerdict::Isomorphic { witness } = &report.verdict else {
        return Err(Error::Invalid(format!("verdict {:?}", report.verdict)));
    };
    let tgt = algebra(&g, policy)?;
    ensure(verify_witness(&l, &tgt, &witness.coordinates), || "witness fails".into())?;
    let candidate = [g.alphabet().parse("a")?, g.alphabet().parse("-b")?];
    ensure(verify_witness(&l, &tgt, &witness_from_polys(&tgt, &candidate)), || {
        "x -> a, y -> -b does not verify".into()
    })?;
    Ok(format!(
        "witness {}",
        witness.images.iter().map(|(k, v)| format!("{k} -> {v}")).collect::<Vec<_>>().join(", ")
    ))
}

fn check_milnor_tjurina() -> Result<String> {
    let expect = [
        ("f_R", f_r(), CommOrder::Dp, 12, 10),
        ("f_R", f_r(), CommOrder::Ds, 11, 10),
        ("f_L", f_l(), CommOrder::Dp, 11, 11),
        ("f_L", f_l(), CommOrder::Ds, 11, 11),
    ];
    let mut parts = Vec::new();
    for (name, f, order, mu, tau) in expect {
        let m = milnor(&f, order)?;
        let t = tjurina(&f, order)?;
        ensure(m == VDim::Finite(mu) && t == VDim::Finite(tau), || {
            format!("{name} {order:?}: mu {m:?}, tau {t:?}")
        })?;
        parts.push(format!("{name}/{order:?}: {mu}/{tau}"));
    }
    Ok(parts.join("; "))
}

fn check_factorization() -> Result<String> {
    let data = MatrixFile::from_json(R_FACTORIZATION)?.load()?;
    ensure(data.factorization.f == f_r(), || "matrix file polynomial differs from f_R".into())?;
    let mf = check_matrix_factorization(&data.factorization)?;
    ensure(mf.holds, || "phi psi != f I".into())?;
    let psi = &data.factorization.psi;
    let f = &data.factorization.f;
    let anti = check_quiver_relation("a*b + b*a", &data.arrow_names, &data.arrows, psi, f)?;
    ensure(anti.exactly_zero, || "ab + ba is not exactly zero".into())?;
    let expr = "-a^2 + b^3 + a*b*a - b*d*c - d*c*b";
    let rel = check_quiver_relation(expr, &data.arrow_names, &data.arrows, psi, f)?;
    let shown = data
        .displayed
        .iter()
        .find(|(e, _)| e == expr)
        .map(|(_, m)| m)
        .ok_or_else(|| Error::Invalid("displayed matrix missing".into()))?;
    ensure(&rel.value == shown, || "relation value differs from the displayed matrix".into())?;
    let witness = rel
        .membership
        .as_ref()
        .and_then(|m| m.witness.as_ref())
        .ok_or_else(|| Error::Invalid("no column-space witness".into()))?;
    ensure(witness.verify(&rel.value, psi, f), || "witness fails re-verification".into())?;
    Ok("factorization exact; ab + ba = 0; cubic relation in the column space".into())
}

fn check_charts() -> Result<String> {
    let mut parts = Vec::new();
    for text in [CHART_U1, CHART_U2] {
        let chart = ChartFile::from_json(text)?.load()?;
        let verdict = smoothness(&chart.relation, None);
        ensure(verdict == Smoothness::Smooth, || format!("{}: {verdict:?}", chart.name))?;
        let pulled = chart.base.substitute(&chart.map)?;
        let gb = buchberger(std::slice::from_ref(&chart.relation), CommOrder::Dp);
        let (inside, rem) = member(&pulled, &gb);
        ensure(inside, || format!("{}: pulled-back base leaves {}", chart.name, rem.format(&chart.vars)))?;
        if let Some((zero, expected)) = &chart.fibre {
            let vals = zero.iter().map(|&i| (i, Q::zero())).collect();
            let fibre = chart.relation.specialize(&vals);
            ensure(&fibre == expected, || format!("{}: fibre relation {}", chart.name, fibre.format(&chart.vars)))?;
        }
        parts.push(format!("{} smooth, map lands in the base", chart.name));
    }
    parts.push("no chart data for L".into());
    Ok(parts.join("; "))
}

/// Number of random parameter assignments in the specialization check.
pub const SPECIALIZATION_SAMPLES: usize = 100;

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())
}

fn check_properties(policy: &CapPolicy) -> Result<String> {
    let presentations = [
        lambda_con(),
        gamma_con(),
        lambda_con_ab(),
        gamma_con_ab(),
        abelianize(&lambda_con()),
        abelianize(&gamma_con()),
    ];
    for pres in &presentations {
        let (gb, _) = certified_dimension(pres, policy)?;
        ensure(gb.is_confluent(), || "a complete basis is not confluent".into())?;
        let alg = build_algebra(&gb)?;
        ensure(alg.dim() > 16 || alg.is_associative(), || "structure constants not associative".into())?;
    }
    // specialization commutes with multiplication
    let lam = algebra(&lambda_con(), policy)?;
    let gm = generic_map(&gamma_con(), &lam)?;
    let (u, v) = (&gm.images()[0], &gm.images()[1]);
    let product = multiply(&lam, u, v);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..SPECIALIZATION_SAMPLES {
        let point: Vec<Q> = (0..gm.nparams()).map(|_| random_q(&mut rng)).collect();
        let lhs = product.specialize(&point);
        let rhs = lam.mul(&u.specialize(&point), &v.specialize(&point));
        ensure(lhs == rhs, || "specialization does not commute with multiplication".into())?;
    }
    // precedence independence
    let swapped = lambda_con().with_alphabet(Alphabet::with_precedence(&["x", "y"], vec![1, 0])?)?;
    let (_, c1) = certified_dimension(&lambda_con(), policy)?;
    let (_, c2) = certified_dimension(&swapped, policy)?;
    ensure(c1.dimension == c2.dimension, || format!("{:?} vs {:?}", c1.dimension, c2.dimension))?;
    for f in [f_r(), f_l()] {
        let dp = milnor(&f, CommOrder::Dp)?.finite();
        let ds = milnor(&f, CommOrder::Ds)?.finite();
        ensure(dp >= ds, || format!("mu(dp) {dp:?} < mu(ds) {ds:?}"))?;
    }
    Ok(format!(
        "confluence and associativity on {} algebras; {SPECIALIZATION_SAMPLES} specializations; precedence-independent dim; mu(dp) >= mu(ds)",
        presentations.len()
    ))
}

/// Names of the eleven checks, by criterion number.
pub const CHECK_NAMES: [&str; 11] = [
    "Laufer algebra basis",
    "dimension of the algebra of R",
    "nilpotent generators",
    "abelianization dimensions",
    "GV tuples",
    "non-isomorphism",
    "isomorphic abelianizations",
    "Milnor and Tjurina numbers",
    "matrix factorization and quiver relations",
    "blowup charts",
    "property suites",
];

/// Runs one check by criterion number (1 to 11).
pub fn run_check(criterion: u8, policy: &CapPolicy) -> CheckResult {
    let outcome = match criterion {
        1 => check_lambda_basis(policy),
        2 => check_gamma_dim(policy),
        3 => check_gamma_nilpotent(policy),
        4 => check_abelianizations(policy),
        5 => check_gv(policy),
        6 => check_noniso(policy),
        7 => check_ab_iso(policy),
        8 => check_milnor_tjurina(),
        9 => check_factorization(),
        10 => check_charts(),
        11 => check_properties(policy),
        n => Err(Error::Invalid(format!("no check numbered {n}"))),
    };
    let name = CHECK_NAMES
        .get(usize::from(criterion).wrapping_sub(1))
        .copied()
        .unwrap_or("unknown")
        .to_string();
    match outcome {
        Ok(detail) => CheckResult {
            criterion,
            name,
            passed: true,
            detail,
        },
        Err(e) => CheckResult {
            criterion,
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// Runs every check in order.
pub fn verify_all(policy: &CapPolicy) -> Vec<CheckResult> {
    (1..=11).map(|c| run_check(c, policy)).collect()
}
