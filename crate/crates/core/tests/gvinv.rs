use flopcheck::corpus;
use flopcheck::gvinv::{gv_from_presentation, toda_tuples};
use flopcheck::ncgb::CapPolicy;

fn brute(dim: usize, ab: usize, length: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if length == 0 || ab > dim {
        return out;
    }
    let mut stack = vec![vec![ab]];
    while let Some(t) = stack.pop() {
        let sum: usize = t.iter().enumerate().map(|(i, n)| if i == 0 { *n } else { (i + 1) * (i + 1) * n }).sum();
        if sum > dim {
            continue;
        }
        if t.len() == length {
            if sum == dim {
                out.push(t);
            }
            continue;
        }
        for n in 1..=dim / 4 {
            let mut next = t.clone();
            next.push(n);
            stack.push(next);
        }
    }
    out.sort();
    out
}

#[test]
fn toda_tuples_match_brute_force() {
    for dim in 0..=40 {
        for ab in 0..=dim.min(12) {
            for length in 1..=4 {
                let mut got: Vec<Vec<usize>> = toda_tuples(dim, ab, length).into_iter().map(|t| t.n).collect();
                got.sort();
                assert_eq!(got, brute(dim, ab, length), "({dim}, {ab}, {length})");
            }
        }
    }
}

#[test]
fn weighted_sums() {
    for t in toda_tuples(85, 5, 3) {
        assert_eq!(t.weighted_sum(), 85);
        assert_eq!(t.length(), 3);
    }
    assert!(toda_tuples(4, 5, 2).is_empty());
}

#[test]
fn longer_lengths_for_the_corpus() {
    let policy = CapPolicy::default();
    let r = gv_from_presentation(&corpus::lambda_con(), 3, &policy).unwrap();
    assert!(r.tuples.is_empty());
    let r = gv_from_presentation(&corpus::gamma_con(), 1, &policy).unwrap();
    assert!(r.tuples.is_empty());
    assert_eq!((r.dim, r.dim_ab), (9, 5));
}
