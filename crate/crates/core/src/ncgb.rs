//! Two-sided Groebner bases in free associative algebras (Bergman-style
//! completion with the Diamond Lemma as termination test), normal forms and
//! certified dimensions of finitely presented algebras.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::{overlaps, Alphabet, AmbiguityKind, MonomialOrder, NCPoly, Word};
use crate::Q;

/// Generators, relations and (through the alphabet) the monomial order.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    alphabet: Alphabet,
    relations: Vec<NCPoly>,
}

impl Presentation {
    /// Relations are stored monic; a zero relation is rejected.
    pub fn new(alphabet: Alphabet, relations: Vec<NCPoly>) -> Result<Self> {
        let ord = alphabet.order();
        let n = alphabet.len();
        let mut rels = Vec::with_capacity(relations.len());
        for (i, r) in relations.into_iter().enumerate() {
            if r.is_zero() {
                return Err(Error::Invalid(format!("relation {} is zero", i + 1)));
            }
            if let Some(l) = r
                .terms()
                .flat_map(|(w, _)| w.letters().iter().copied())
                .find(|&l| l as usize >= n)
            {
                return Err(Error::AlphabetMismatch {
                    letter: l as usize,
                    size: n,
                });
            }
            rels.push(r.monic(&ord));
        }
        Ok(Self {
            alphabet,
            relations: rels,
        })
    }

    /// Parses relations written in the text syntax.
    pub fn parse<S: AsRef<str>>(alphabet: Alphabet, relations: &[S]) -> Result<Self> {
        let rels = relations
            .iter()
            .map(|r| alphabet.parse(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, rels)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relations(&self) -> &[NCPoly] {
        &self.relations
    }

    pub fn order(&self) -> MonomialOrder {
        self.alphabet.order()
    }

    /// True iff every relation lies in the square of the augmentation ideal.
    pub fn is_local(&self) -> bool {
        self.relations
            .iter()
            .all(|r| r.min_degree().is_some_and(|d| d >= 2))
    }

    pub fn max_relation_degree(&self) -> usize {
        self.relations
            .iter()
            .filter_map(NCPoly::degree)
            .max()
            .unwrap_or(0)
    }

    /// Same relations over a different precedence of the same generators.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Self> {
        if alphabet.generators() != self.alphabet.generators() {
            return Err(Error::Alphabet("generator lists differ".into()));
        }
        Self::new(alphabet, self.relations.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "degree")]
pub enum GbStatus {
    Complete,
    TruncatedAtDegree(usize),
}

/// Inter-reduced, monic basis sorted by ascending leading word.
#[derive(Debug, Clone, PartialEq)]
pub struct NCGroebnerBasis {
    alphabet: Alphabet,
    elements: Vec<NCPoly>,
    leading: Vec<Word>,
    status: GbStatus,
}

impl NCGroebnerBasis {
    /// Wraps an explicit set of polynomials as a basis without completing it.
    /// The caller vouches for the status; [`Self::is_confluent`] checks it.
    pub fn from_elements(alphabet: Alphabet, elements: Vec<NCPoly>, status: GbStatus) -> Self {
        let ord = alphabet.order();
        let mut items: Vec<(Word, NCPoly)> = elements
            .into_iter()
            .filter(|p| !p.is_zero())
            .map(|p| {
                let p = p.monic(&ord);
                (p.leading_word(&ord).unwrap().clone(), p)
            })
            .collect();
        items.sort_by(|a, b| ord.cmp(&a.0, &b.0));
        let (leading, elements) = items.into_iter().unzip();
        Self {
            alphabet,
            elements,
            leading,
            status,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn elements(&self) -> &[NCPoly] {
        &self.elements
    }

    pub fn leading_words(&self) -> &[Word] {
        &self.leading
    }

    pub fn status(&self) -> GbStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == GbStatus::Complete
    }

    pub fn order(&self) -> MonomialOrder {
        self.alphabet.order()
    }

    pub fn normal_form(&self, p: &NCPoly) -> NCPoly {
        reduce(p, &self.elements, &self.leading, &self.order())
    }

    pub fn is_normal_word(&self, w: &Word) -> bool {
        !self.leading.iter().any(|l| w.contains_factor(l))
    }

    /// Diamond Lemma test: every ambiguity between leading words resolves.
    pub fn is_confluent(&self) -> bool {
        let ord = self.order();
        for i in 0..self.elements.len() {
            for j in 0..self.elements.len() {
                for amb in overlaps(&self.leading[i], &self.leading[j]) {
                    let s = s_polynomial(
                        &self.elements[i],
                        &self.leading[i],
                        &self.elements[j],
                        &self.leading[j],
                        amb.kind,
                        amb.offset,
                    );
                    if !reduce(&s, &self.elements, &self.leading, &ord).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Full normal form of `p`: no word of the result contains a leading word.
fn reduce(p: &NCPoly, elements: &[NCPoly], leading: &[Word], ord: &MonomialOrder) -> NCPoly {
    let mut rest = p.clone();
    let mut out = NCPoly::zero();
    loop {
        let (w, c) = match rest.leading_term(ord) {
            Some((w, c)) => (w.clone(), c.clone()),
            None => return out,
        };
        let hit = leading
            .iter()
            .enumerate()
            .find_map(|(k, l)| w.find_factor(l).map(|pos| (k, pos)));
        match hit {
            Some((k, pos)) => {
                let left = w.subword(0, pos);
                let right = w.subword(pos + leading[k].degree(), w.degree());
                let sub = elements[k].sandwich(&c, &left, &right);
                rest = rest.sub(&sub);
            }
            None => {
                rest.add_term(w.clone(), -c.clone());
                out.add_term(w, c);
            }
        }
    }
}

fn s_polynomial(
    gi: &NCPoly,
    li: &Word,
    gj: &NCPoly,
    lj: &Word,
    kind: AmbiguityKind,
    offset: usize,
) -> NCPoly {
    let one = Q::from_integer(1.into());
    match kind {
        AmbiguityKind::Overlap => {
            let k = li.degree() - offset;
            let right = lj.subword(k, lj.degree());
            let left = li.subword(0, offset);
            gi.sandwich(&one, &Word::empty(), &right)
                .sub(&gj.sandwich(&one, &left, &Word::empty()))
        }
        AmbiguityKind::Inclusion => {
            let left = li.subword(0, offset);
            let right = li.subword(offset + lj.degree(), li.degree());
            gi.sub(&gj.sandwich(&one, &left, &right))
        }
    }
}

struct Element {
    id: u64,
    poly: NCPoly,
    lead: Word,
}

struct Completion {
    ord: MonomialOrder,
    elements: Vec<Element>,
    next_id: u64,
}

impl Completion {
    fn leads(&self) -> Vec<Word> {
        self.elements.iter().map(|e| e.lead.clone()).collect()
    }

    fn polys(&self) -> Vec<NCPoly> {
        self.elements.iter().map(|e| e.poly.clone()).collect()
    }

    fn fresh(&mut self, poly: NCPoly) -> Element {
        let lead = poly.leading_word(&self.ord).unwrap().clone();
        self.next_id += 1;
        Element {
            id: self.next_id,
            poly,
            lead,
        }
    }

    /// Adds `h` to the basis and restores inter-reducedness.
    fn insert(&mut self, h: NCPoly) {
        let mut queue = vec![h];
        while let Some(p) = queue.pop() {
            let r = reduce(&p, &self.polys(), &self.leads(), &self.ord);
            if r.is_zero() {
                continue;
            }
            let r = r.monic(&self.ord);
            let lead = r.leading_word(&self.ord).unwrap().clone();
            let (keep, evict): (Vec<_>, Vec<_>) = std::mem::take(&mut self.elements)
                .into_iter()
                .partition(|e| !e.lead.contains_factor(&lead));
            self.elements = keep;
            let el = self.fresh(r);
            self.elements.push(el);
            queue.extend(evict.into_iter().map(|e| e.poly));
        }
        // tails
        for i in 0..self.elements.len() {
            let others: Vec<usize> = (0..self.elements.len()).filter(|&j| j != i).collect();
            let polys: Vec<NCPoly> = others.iter().map(|&j| self.elements[j].poly.clone()).collect();
            let leads: Vec<Word> = others.iter().map(|&j| self.elements[j].lead.clone()).collect();
            let r = reduce(&self.elements[i].poly, &polys, &leads, &self.ord);
            if r != self.elements[i].poly {
                let el = self.fresh(r);
                self.elements[i] = el;
            }
        }
        let ord = self.ord.clone();
        self.elements.sort_by(|a, b| ord.cmp(&a.lead, &b.lead));
    }
}

type AmbiguityKey = (u64, u64, AmbiguityKind, usize);

/// Completes the relations of `pres` to a Groebner basis, resolving every
/// ambiguity whose word has degree at most `degree_cap`. Ambiguities are
/// processed by degree, then by the monomial order on the ambiguity word,
/// so the output is deterministic.
pub fn complete(pres: &Presentation, degree_cap: usize) -> NCGroebnerBasis {
    let ord = pres.order();
    let mut state = Completion {
        ord: ord.clone(),
        elements: Vec::new(),
        next_id: 0,
    };
    for r in pres.relations() {
        state.insert(r.clone());
    }
    let mut resolved: HashSet<AmbiguityKey> = HashSet::new();
    let status = loop {
        // smallest pending ambiguity
        let mut best: Option<(Word, AmbiguityKey, usize, usize)> = None;
        for (i, ei) in state.elements.iter().enumerate() {
            for (j, ej) in state.elements.iter().enumerate() {
                for amb in overlaps(&ei.lead, &ej.lead) {
                    let key = (ei.id, ej.id, amb.kind, amb.offset);
                    if resolved.contains(&key) {
                        continue;
                    }
                    let better = match &best {
                        None => true,
                        Some((w, k, _, _)) => match ord.cmp(&amb.word, w) {
                            std::cmp::Ordering::Less => true,
                            std::cmp::Ordering::Equal => key < *k,
                            std::cmp::Ordering::Greater => false,
                        },
                    };
                    if better {
                        best = Some((amb.word.clone(), key, i, j));
                    }
                }
            }
        }
        let Some((word, key, i, j)) = best else {
            break GbStatus::Complete;
        };
        if word.degree() > degree_cap {
            break GbStatus::TruncatedAtDegree(degree_cap);
        }
        resolved.insert(key);
        let (ei, ej) = (&state.elements[i], &state.elements[j]);
        let s = s_polynomial(&ei.poly, &ei.lead, &ej.poly, &ej.lead, key.2, key.3);
        let h = reduce(&s, &state.polys(), &state.leads(), &ord);
        if !h.is_zero() {
            state.insert(h);
        }
    };
    let elements: Vec<NCPoly> = state.elements.into_iter().map(|e| e.poly).collect();
    NCGroebnerBasis::from_elements(pres.alphabet().clone(), elements, status)
}

/// Result of enumerating normal words.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionCertificate {
    /// `None` when the dimension is infinite or could not be certified.
    pub dimension: Option<usize>,
    /// Normal words by ascending degree, ascending in the order within a degree.
    pub normal_words: Vec<Word>,
    /// First degree with no normal words.
    pub witness_degree: Option<usize>,
    pub status: GbStatus,
    /// Degree caps used, in order.
    pub caps_tried: Vec<usize>,
}

impl DimensionCertificate {
    pub fn report(&self, alphabet: &Alphabet) -> DimensionReport {
        DimensionReport {
            dimension: self.dimension,
            normal_words: self
                .normal_words
                .iter()
                .map(|w| alphabet.format_word(w))
                .collect(),
            witness_degree: self.witness_degree,
            status: self.status,
        }
    }
}

/// JSON form of a [`DimensionCertificate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub dimension: Option<usize>,
    pub normal_words: Vec<String>,
    pub witness_degree: Option<usize>,
    pub status: GbStatus,
}

/// Enumeration stops past this many words and reports the dimension unknown.
const MAX_NORMAL_WORDS: usize = 50_000;

/// Enumerates normal words of degree at most `cap`.
pub fn normal_words(gb: &NCGroebnerBasis, cap: usize) -> DimensionCertificate {
    let ord = gb.order();
    let n = gb.alphabet().len();
    let mut all = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    if gb.leading_words().iter().any(Word::is_empty) {
        // the ideal contains a unit
        all.clear();
        frontier.clear();
    }
    let mut witness = if all.is_empty() { Some(0) } else { None };
    let mut degree = 0;
    while witness.is_none() && degree < cap && all.len() <= MAX_NORMAL_WORDS {
        degree += 1;
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..n {
                let cand = w.concat(&Word::letter(g));
                if !gb.leading_words().iter().any(|l| cand.ends_with(l)) {
                    next.push(cand);
                }
            }
        }
        next.sort_by(|a, b| ord.cmp(a, b));
        if next.is_empty() {
            witness = Some(degree);
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    let dimension = match (witness, gb.status()) {
        (Some(_), GbStatus::Complete) => Some(all.len()),
        _ => None,
    };
    DimensionCertificate {
        dimension,
        normal_words: all,
        witness_degree: witness,
        status: gb.status(),
        caps_tried: vec![cap],
    }
}

/// How [`dimension`] chooses degree caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapPolicy {
    /// Starting cap; `None` means twice the largest relation degree plus four.
    pub initial: Option<usize>,
    /// Number of caps tried, doubling each time.
    pub attempts: usize,
}

impl Default for CapPolicy {
    fn default() -> Self {
        Self {
            initial: None,
            attempts: 4,
        }
    }
}

impl CapPolicy {
    pub fn with_initial(cap: usize) -> Self {
        Self {
            initial: Some(cap),
            ..Self::default()
        }
    }

    pub fn caps(&self, pres: &Presentation) -> Vec<usize> {
        let start = self
            .initial
            .unwrap_or(2 * pres.max_relation_degree() + 4)
            .max(pres.max_relation_degree())
            .max(1);
        (0..self.attempts.max(1)).map(|k| start << k).collect()
    }
}

/// Completes and counts normal words, doubling the cap until a finite
/// certified dimension appears or the policy runs out.
pub fn dimension(pres: &Presentation, policy: &CapPolicy) -> (NCGroebnerBasis, DimensionCertificate) {
    let mut tried = Vec::new();
    let mut last = None;
    for cap in policy.caps(pres) {
        tried.push(cap);
        let gb = complete(pres, cap);
        let mut cert = normal_words(&gb, cap);
        cert.caps_tried = tried.clone();
        if cert.dimension.is_some() {
            return (gb, cert);
        }
        last = Some((gb, cert));
    }
    last.expect("at least one cap")
}

/// Certified dimension or an error explaining why there is none.
pub fn certified_dimension(pres: &Presentation, policy: &CapPolicy) -> Result<(NCGroebnerBasis, DimensionCertificate)> {
    let (gb, cert) = dimension(pres, policy);
    if cert.dimension.is_none() {
        return Err(Error::UnknownDimension(format!(
            "status {:?}, {} normal words found, caps tried {:?}",
            cert.status,
            cert.normal_words.len(),
            cert.caps_tried
        )));
    }
    Ok((gb, cert))
}
