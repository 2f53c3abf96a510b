//! Buchberger's algorithm for the global order and Mora's tangent cone
//! algorithm for the local order.

use std::collections::HashSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{CommOrder, CommPoly, Exponents};
use crate::Q;

/// Terms sorted descending in the working order.
type Sorted = Vec<(Exponents, Q)>;

fn to_sorted(p: &CommPoly, order: CommOrder) -> Sorted {
    p.sorted_terms(order)
        .into_iter()
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect()
}

fn from_sorted(nvars: usize, s: &Sorted) -> CommPoly {
    CommPoly::from_terms(nvars, s.iter().cloned())
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn quotient(b: &[u32], a: &[u32]) -> Exponents {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

fn make_monic(s: &mut Sorted) {
    if let Some(inv) = s.first().map(|(_, c)| c.recip()) {
        if !inv.is_one() {
            for t in s.iter_mut() {
                t.1 *= &inv;
            }
        }
    }
}

/// `a - c * m * g`, merged in order.
fn sub_scaled(a: &Sorted, c: &Q, m: &[u32], g: &Sorted, order: CommOrder) -> Sorted {
    let mut out = Vec::with_capacity(a.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    let shifted = |t: &(Exponents, Q)| -> (Exponents, Q) {
        (t.0.iter().zip(m).map(|(x, y)| x + y).collect(), -(c * &t.1))
    };
    while i < a.len() || j < g.len() {
        if j == g.len() {
            out.push(a[i].clone());
            i += 1;
            continue;
        }
        let gt = shifted(&g[j]);
        if i == a.len() {
            out.push(gt);
            j += 1;
            continue;
        }
        match order.cmp(&a[i].0, &gt.0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push(gt);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let s = &a[i].1 + gt.1;
                if !s.is_zero() {
                    out.push((gt.0, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn s_poly(f: &Sorted, g: &Sorted, order: CommOrder) -> Sorted {
    let l = lcm(&f[0].0, &g[0].0);
    let mf = quotient(&l, &f[0].0);
    let mg = quotient(&l, &g[0].0);
    // f and g are monic
    let left = sub_scaled(&Vec::new(), &-Q::one(), &mf, f, order);
    sub_scaled(&left, &Q::one(), &mg, g, order)
}

/// Full reduction for a global order; `basis` must be monic.
fn reduce_full(p: &Sorted, basis: &[Sorted], order: CommOrder) -> Sorted {
    let mut rest = p.clone();
    let mut out: Sorted = Vec::new();
    while !rest.is_empty() {
        let (e, c) = rest[0].clone();
        match basis.iter().find(|g| divides(&g[0].0, &e)) {
            Some(g) => {
                let m = quotient(&e, &g[0].0);
                rest = sub_scaled(&rest, &c, &m, g, order);
            }
            None => {
                out.push((e, c));
                rest.remove(0);
            }
        }
    }
    out
}

fn total_degree(s: &Sorted) -> u32 {
    s.iter().map(|(e, _)| degree(e)).max().unwrap_or(0)
}

fn ecart(s: &Sorted) -> u32 {
    total_degree(s) - degree(&s[0].0)
}

/// Mora's weak normal form with the ecart-driven choice of reducer.
fn nf_mora(f: &Sorted, basis: &[Sorted], order: CommOrder) -> Sorted {
    let mut h = f.clone();
    let mut t: Vec<(Sorted, u32)> = basis.iter().map(|g| (g.clone(), ecart(g))).collect();
    while !h.is_empty() {
        let lead = h[0].0.clone();
        let best = t
            .iter()
            .enumerate()
            .filter(|(_, (g, _))| divides(&g[0].0, &lead))
            .min_by(|a, b| a.1 .1.cmp(&b.1 .1).then(a.0.cmp(&b.0)))
            .map(|(k, _)| k);
        let Some(k) = best else {
            return h;
        };
        let eh = ecart(&h);
        let (g, eg) = (t[k].0.clone(), t[k].1);
        if eg > eh {
            let mut hm = h.clone();
            make_monic(&mut hm);
            t.push((hm, eh));
        }
        let c = &h[0].1 / &g[0].1;
        let m = quotient(&lead, &g[0].0);
        h = sub_scaled(&h, &c, &m, &g, order);
    }
    h
}

/// Quotient dimension of an ideal given by a Groebner or standard basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VDim {
    Finite(usize),
    Infinite,
}

impl VDim {
    pub fn finite(self) -> Option<usize> {
        match self {
            VDim::Finite(n) => Some(n),
            VDim::Infinite => None,
        }
    }
}

/// Groebner basis (global order, reduced) or standard basis (local order).
#[derive(Debug, Clone, PartialEq)]
pub struct CommGB {
    nvars: usize,
    order: CommOrder,
    elements: Vec<CommPoly>,
    reduced: bool,
}

impl CommGB {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> CommOrder {
        self.order
    }

    pub fn elements(&self) -> &[CommPoly] {
        &self.elements
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn contains_one(&self) -> bool {
        self.elements.iter().any(|g| !g.is_zero() && g.leading_term(self.order).unwrap().0.iter().all(|&e| e == 0))
    }

    pub fn leading_monomials(&self) -> Vec<Exponents> {
        self.elements
            .iter()
            .map(|g| g.leading_term(self.order).unwrap().0.clone())
            .collect()
    }

    fn sorted(&self) -> Vec<Sorted> {
        self.elements.iter().map(|g| to_sorted(g, self.order)).collect()
    }
}

fn nvars_of(ideal: &[CommPoly]) -> usize {
    ideal.first().map(CommPoly::nvars).unwrap_or(0)
}

fn unit_basis(nvars: usize, order: CommOrder) -> CommGB {
    CommGB {
        nvars,
        order,
        elements: vec![CommPoly::one(nvars)],
        reduced: true,
    }
}

/// Reduced Groebner basis. A local order is dispatched to [`mora_std`].
pub fn buchberger(ideal: &[CommPoly], order: CommOrder) -> CommGB {
    if !order.is_global() {
        return mora_std(ideal);
    }
    buchberger_bounded(ideal, order, None).expect("unbounded run always finishes")
}

/// As [`buchberger`], giving up (returning `None`) after `max_pairs`
/// S-polynomial reductions.
pub fn buchberger_bounded(ideal: &[CommPoly], order: CommOrder, max_pairs: Option<usize>) -> Option<CommGB> {
    if !order.is_global() {
        return Some(mora_std(ideal));
    }
    let nvars = nvars_of(ideal);
    let mut basis: Vec<Sorted> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut queue: Vec<(Exponents, usize, usize)> = Vec::new();

    let add = |basis: &mut Vec<Sorted>,
               pending: &mut HashSet<(usize, usize)>,
               queue: &mut Vec<(Exponents, usize, usize)>,
               h: Sorted| {
        let k = basis.len();
        for (i, g) in basis.iter().enumerate() {
            queue.push((lcm(&g[0].0, &h[0].0), i, k));
            pending.insert((i, k));
        }
        basis.push(h);
    };

    for p in ideal {
        let mut s = reduce_full(&to_sorted(p, order), &basis, order);
        if s.is_empty() {
            continue;
        }
        make_monic(&mut s);
        if degree(&s[0].0) == 0 {
            return Some(unit_basis(nvars, order));
        }
        add(&mut basis, &mut pending, &mut queue, s);
    }

    let mut processed = 0usize;
    while !queue.is_empty() {
        let pos = (0..queue.len())
            .min_by(|&a, &b| {
                order
                    .cmp(&queue[a].0, &queue[b].0)
                    .then((queue[a].1, queue[a].2).cmp(&(queue[b].1, queue[b].2)))
            })
            .unwrap();
        let (l, i, j) = queue.swap_remove(pos);
        pending.remove(&(i, j));
        // product criterion
        let coprime = basis[i][0].0.iter().zip(&basis[j][0].0).all(|(a, b)| *a == 0 || *b == 0);
        if coprime {
            continue;
        }
        // chain criterion
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(&basis[k][0].0, &l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        processed += 1;
        if max_pairs.is_some_and(|m| processed > m) {
            return None;
        }
        let s = s_poly(&basis[i], &basis[j], order);
        let mut h = reduce_full(&s, &basis, order);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        if degree(&h[0].0) == 0 {
            return Some(unit_basis(nvars, order));
        }
        add(&mut basis, &mut pending, &mut queue, h);
    }
    Some(finish(nvars, order, basis, true))
}

/// Drops redundant elements, inter-reduces (global order only), sorts.
fn finish(nvars: usize, order: CommOrder, basis: Vec<Sorted>, reduce_tails: bool) -> CommGB {
    let mut minimal: Vec<Sorted> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(k, o)| {
            k != i && divides(&o[0].0, &g[0].0) && (o[0].0 != g[0].0 || k < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    if reduce_tails {
        let snapshot = minimal.clone();
        for (i, g) in minimal.iter_mut().enumerate() {
            let others: Vec<Sorted> = snapshot
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, s)| s.clone())
                .collect();
            let head = vec![g[0].clone()];
            let tail: Sorted = g[1..].to_vec();
            let mut r = head;
            r.extend(reduce_full(&tail, &others, order));
            *g = r;
        }
    }
    minimal.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    CommGB {
        nvars,
        order,
        elements: minimal.iter().map(|s| from_sorted(nvars, s)).collect(),
        reduced: reduce_tails,
    }
}

/// Standard basis for the local order via Mora's normal form.
pub fn mora_std(ideal: &[CommPoly]) -> CommGB {
    let order = CommOrder::Ds;
    let nvars = nvars_of(ideal);
    let mut basis: Vec<Sorted> = Vec::new();
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for p in ideal {
        if p.is_zero() {
            continue;
        }
        let mut s = to_sorted(p, order);
        make_monic(&mut s);
        if degree(&s[0].0) == 0 {
            return unit_basis(nvars, order);
        }
        let k = basis.len();
        queue.extend((0..k).map(|i| (i, k)));
        basis.push(s);
    }
    while !queue.is_empty() {
        let pos = (0..queue.len())
            .min_by_key(|&q| {
                let (i, j) = queue[q];
                (degree(&lcm(&basis[i][0].0, &basis[j][0].0)), i, j)
            })
            .unwrap();
        let (i, j) = queue.swap_remove(pos);
        let s = s_poly(&basis[i], &basis[j], order);
        let mut h = nf_mora(&s, &basis, order);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        if degree(&h[0].0) == 0 {
            return unit_basis(nvars, order);
        }
        let k = basis.len();
        queue.extend((0..k).map(|i| (i, k)));
        basis.push(h);
    }
    finish(nvars, order, basis, false)
}

/// Remainder of `p` modulo the basis: a full normal form for the global
/// order, Mora's weak normal form for the local order.
pub fn normal_form(p: &CommPoly, gb: &CommGB) -> CommPoly {
    let basis = gb.sorted();
    let s = to_sorted(p, gb.order);
    let r = if gb.order.is_global() {
        reduce_full(&s, &basis, gb.order)
    } else {
        nf_mora(&s, &basis, gb.order)
    };
    from_sorted(p.nvars(), &r)
}

/// Ideal membership (in the localization for the local order), with the remainder.
pub fn member(p: &CommPoly, gb: &CommGB) -> (bool, CommPoly) {
    let r = normal_form(p, gb);
    (r.is_zero(), r)
}

/// Counts standard monomials under the leading ideal.
pub fn vdim(gb: &CommGB) -> VDim {
    if gb.contains_one() {
        return VDim::Finite(0);
    }
    let leads = gb.leading_monomials();
    let n = gb.nvars;
    let mut bounds = Vec::with_capacity(n);
    for v in 0..n {
        let pure = leads
            .iter()
            .filter(|e| e.iter().enumerate().all(|(i, &k)| i == v || k == 0))
            .map(|e| e[v])
            .min();
        match pure {
            Some(b) => bounds.push(b),
            None => return VDim::Infinite,
        }
    }
    let mut count = 0usize;
    let mut e = vec![0u32; n];
    loop {
        if !leads.iter().any(|l| divides(l, &e)) {
            count += 1;
        }
        // odometer over the box
        let mut k = 0;
        loop {
            if k == n {
                return VDim::Finite(count);
            }
            e[k] += 1;
            if e[k] < bounds[k] {
                break;
            }
            e[k] = 0;
            k += 1;
        }
    }
}
