mod common;

use flopcheck::corpus;
use flopcheck::findim::build_algebra;
use flopcheck::freealg::{Alphabet, NCPoly, Word};
use flopcheck::ncgb::{certified_dimension, complete, dimension, CapPolicy, GbStatus, Presentation};
use flopcheck::Q;
use proptest::prelude::*;

use common::TruncatedNc;

fn pres(gens: &[&str], rels: &[&str]) -> Presentation {
    Presentation::parse(Alphabet::new(gens).unwrap(), rels).unwrap()
}

fn xy_poly() -> impl Strategy<Value = NCPoly> {
    let word = prop::collection::vec(0u8..2, 0..7).prop_map(Word::new);
    prop::collection::vec((word, -3i64..=3), 0..6)
        .prop_map(|t| NCPoly::from_terms(t.into_iter().map(|(w, c)| (w, Q::from_integer(c.into())))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent_and_multiplicative(p in xy_poly(), q in xy_poly()) {
        let (gb, _) = certified_dimension(&corpus::lambda_con(), &CapPolicy::default()).unwrap();
        let np = gb.normal_form(&p);
        prop_assert_eq!(gb.normal_form(&np), np.clone());
        for (w, _) in np.terms() {
            prop_assert!(gb.is_normal_word(w));
        }
        let nq = gb.normal_form(&q);
        prop_assert_eq!(gb.normal_form(&p.mul(&q)), gb.normal_form(&np.mul(&nq)));
    }
}

#[test]
fn skew_truncated_planes() {
    for (p, q, c) in [(2, 3, "1"), (3, 2, "-1"), (3, 3, "2"), (2, 4, "-1/2")] {
        let rels = [format!("x^{p}"), format!("y^{q}"), format!("xy - ({c}) yx")];
        let pr = pres(&["x", "y"], &rels.iter().map(String::as_str).collect::<Vec<_>>());
        let (gb, cert) = certified_dimension(&pr, &CapPolicy::default()).unwrap();
        assert!(gb.is_confluent());
        assert_eq!(cert.dimension, Some(p * q), "{rels:?}");
        let oracle = TruncatedNc::new(2, pr.relations(), p + q + 1).dim();
        assert_eq!(oracle, p * q, "{rels:?}");
    }
}

#[test]
fn dimensions_agree_with_linear_algebra() {
    let cases: [&[&str]; 4] = [
        &["x^2 - yxy", "y^2 - xyx"],
        &["xy - yx", "x^3", "y^2 - x^2"],
        &["x^2", "y^2", "xyx - yxy"],
        &["xy + yx", "x^2 + y^3"],
    ];
    for rels in cases {
        let pr = pres(&["x", "y"], rels);
        let (_, cert) = dimension(&pr, &CapPolicy::default());
        let Some(d) = cert.dimension else {
            panic!("{rels:?} has no certified dimension");
        };
        let top = cert.normal_words.iter().map(Word::degree).max().unwrap_or(0);
        let a = TruncatedNc::new(2, pr.relations(), top + 2).dim();
        let b = TruncatedNc::new(2, pr.relations(), top + 3).dim();
        let alg = build_algebra(&complete(&pr, 2 * top + 4)).unwrap();
        if alg.radical_filtration().is_ok() {
            assert_eq!((a, b), (d, d), "{rels:?}");
        } else {
            assert!(a == b && a < d, "{rels:?}: local part {a}, {b} against {d}");
        }
    }
}

#[test]
fn normal_words_are_closed_under_factors() {
    let (gb, cert) = certified_dimension(&corpus::gamma_con(), &CapPolicy::default()).unwrap();
    for w in &cert.normal_words {
        for i in 0..=w.degree() {
            for j in i..=w.degree() {
                assert!(gb.is_normal_word(&w.subword(i, j)));
            }
        }
    }
}

#[test]
fn polynomial_ring_is_not_finite() {
    let pr = pres(&["x", "y"], &["xy - yx"]);
    let (gb, cert) = dimension(&pr, &CapPolicy::with_initial(5));
    assert_eq!(cert.dimension, None);
    assert!(gb.is_confluent());
    assert!(certified_dimension(&pr, &CapPolicy::with_initial(5)).is_err());
}

#[test]
fn free_algebra_completion_stops_at_the_cap() {
    let pr = pres(&["x", "y"], &["xyx - yxy"]);
    let gb = complete(&pr, 6);
    assert_ne!(gb.status(), GbStatus::Complete);
}

#[test]
fn unit_ideal_collapses() {
    let pr = pres(&["x", "y"], &["xy - 1", "x^2"]);
    let (gb, cert) = certified_dimension(&pr, &CapPolicy::default()).unwrap();
    assert_eq!(cert.dimension, Some(0));
    assert!(gb.normal_form(&NCPoly::one()).is_zero());
}
