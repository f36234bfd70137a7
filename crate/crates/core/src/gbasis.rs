//! Degree-truncated two-sided noncommutative Gröbner bases and normal forms.
//!
//! Monomial order: deglex on weighted degree with the declared generator
//! order, ties broken left-lexicographically. For a homogeneous ideal a
//! basis truncated at degree `D` certifies normal forms of all elements of
//! degree ≤ D, which is the contract every downstream result carries.
//!
//! Obstructions are processed by degree, then first-in-first-out, so the
//! reduced basis is deterministic.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::freealg::{FreeAlgError, Generator, NcPoly, Word};
use crate::scalar::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GbError {
    #[error("relation {0} is not homogeneous")]
    InhomogeneousRelation(usize),
    #[error("relation {0} has degree < 2")]
    RelationDegreeTooLow(usize),
    #[error("truncation degree {given} is below the maximal relation degree {needed}")]
    TruncationTooSmall { given: u32, needed: u32 },
    #[error("degree {0} exceeds the certified truncation bound {1}")]
    DegreeExceedsTruncation(u32, u32),
    #[error("quotient by the zero element")]
    ZeroElement,
    #[error(transparent)]
    Free(#[from] FreeAlgError),
}

/// A presented connected graded algebra `k⟨x₁,…⟩ / (relations)`.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    pub field: FieldSpec,
    pub generators: Vec<Generator>,
    pub relations: Vec<NcPoly>,
}

impl AlgebraPresentation {
    pub fn new(
        field: FieldSpec,
        generators: Vec<Generator>,
        relations: Vec<NcPoly>,
    ) -> Result<Self, GbError> {
        // degree ≥ 1 keeps the quotient connected; presentations coming from
        // user input are additionally held to degree ≥ 2 by the parser
        for (i, r) in relations.iter().enumerate() {
            let Some(d) = r.homogeneous_degree() else {
                return Err(if r.is_zero() {
                    GbError::RelationDegreeTooLow(i)
                } else {
                    GbError::InhomogeneousRelation(i)
                });
            };
            if d < 1 {
                return Err(GbError::RelationDegreeTooLow(i));
            }
        }
        Ok(AlgebraPresentation { field, generators, relations })
    }

    pub fn free(field: FieldSpec, generators: Vec<Generator>) -> Self {
        AlgebraPresentation { field, generators, relations: Vec::new() }
    }
}

#[derive(Clone, Debug)]
struct GbElem {
    lead: Word,
    poly: NcPoly, // monic, tail-reduced
}

/// A reduced degree-truncated Gröbner basis.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub presentation: AlgebraPresentation,
    pub truncation_degree: u32,
    elems: Vec<GbElem>,
}

impl GroebnerBasis {
    pub fn elements(&self) -> impl Iterator<Item = &NcPoly> {
        self.elems.iter().map(|e| &e.poly)
    }

    pub fn leading_words(&self) -> impl Iterator<Item = &Word> {
        self.elems.iter().map(|e| &e.lead)
    }
}

/// Computes the reduced Gröbner basis of the two-sided homogeneous ideal,
/// truncated at degree `trunc`.
pub fn groebner(pres: &AlgebraPresentation, trunc: u32) -> Result<GroebnerBasis, GbError> {
    let max_rel = pres.relations.iter().map(|r| r.max_degree()).max().unwrap_or(0);
    if trunc < max_rel {
        return Err(GbError::TruncationTooSmall { given: trunc, needed: max_rel });
    }
    let mut elems: Vec<GbElem> = Vec::new();

    let insert = |elems: &mut Vec<GbElem>, p: NcPoly| -> Result<(), GbError> {
        let p = reduce_full(&p, elems, &pres.generators)?;
        if p.is_zero() {
            return Ok(());
        }
        let p = p.monic()?;
        let lead = p.leading().unwrap().0.clone();
        elems.push(GbElem { lead, poly: p });
        Ok(())
    };

    // seed with the defining relations, lowest degree first for stable output
    let mut seeds = pres.relations.clone();
    seeds.sort_by_key(|r| (r.homogeneous_degree().unwrap_or(0), r.leading().map(|(w, _)| w.clone())));
    for r in seeds {
        insert(&mut elems, r)?;
    }

    // obstruction queue keyed by degree, FIFO within a degree
    let mut queue: BTreeMap<u32, VecDeque<(usize, usize)>> = BTreeMap::new();
    let enqueue_against = |queue: &mut BTreeMap<u32, VecDeque<(usize, usize)>>,
                               elems: &[GbElem],
                               idx: usize| {
        for j in 0..elems.len() {
            for (a, b) in [(idx, j), (j, idx)] {
                if a == b && idx != j {
                    continue;
                }
                if let Some(d) = min_overlap_degree(&elems[a], &elems[b], &pres.generators) {
                    if d <= trunc {
                        queue.entry(d).or_default().push_back((a, b));
                    }
                }
            }
        }
    };
    for i in 0..elems.len() {
        enqueue_against(&mut queue, &elems, i);
    }

    while let Some((&deg, _)) = queue.iter().next() {
        let pair = queue.get_mut(&deg).unwrap().pop_front();
        if queue.get(&deg).is_some_and(|q| q.is_empty()) {
            queue.remove(&deg);
        }
        let Some((i, j)) = pair else { continue };
        if i >= elems.len() || j >= elems.len() {
            continue;
        }
        for s in overlap_polys(&elems[i], &elems[j], &pres.generators, trunc)? {
            let before = elems.len();
            insert(&mut elems, s)?;
            if elems.len() > before {
                let idx = elems.len() - 1;
                enqueue_against(&mut queue, &elems, idx);
            }
        }
    }

    // interreduce: tail-reduce every element against the full basis and drop
    // the ones whose leading word became reducible by another element
    let mut changed = true;
    while changed {
        changed = false;
        let snapshot = elems.clone();
        let mut kept: Vec<GbElem> = Vec::new();
        for (i, e) in snapshot.iter().enumerate() {
            let reducible = snapshot
                .iter()
                .enumerate()
                .any(|(j, o)| j != i && o.lead.len() <= e.lead.len() && e.lead.find_factor(&o.lead).is_some() && !(j > i && o.lead == e.lead));
            if reducible {
                changed = true;
                continue;
            }
            let others: Vec<GbElem> =
                snapshot.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, o)| o.clone()).collect();
            let p = reduce_full(&e.poly, &others, &pres.generators)?;
            if p.is_zero() {
                changed = true;
                continue;
            }
            let p = p.monic()?;
            if p != e.poly {
                changed = true;
            }
            let lead = p.leading().unwrap().0.clone();
            kept.push(GbElem { lead, poly: p });
        }
        elems = kept;
    }
    elems.sort_by(|a, b| a.lead.cmp(&b.lead));

    Ok(GroebnerBasis { presentation: pres.clone(), truncation_degree: trunc, elems })
}

fn min_overlap_degree(a: &GbElem, b: &GbElem, gens: &[Generator]) -> Option<u32> {
    overlap_words(a, b, gens).into_iter().map(|w| w.degree()).min()
}

/// Words witnessing obstructions between the leading words of `a` and `b`:
/// proper suffix/prefix overlaps `lead(a)·γ = α·lead(b)` and containments.
fn overlap_words(a: &GbElem, b: &GbElem, gens: &[Generator]) -> Vec<Word> {
    let (u, v) = (&a.lead, &b.lead);
    let mut out = Vec::new();
    // suffix of u equals prefix of v (proper, nontrivial)
    let max_k = u.len().min(v.len()).saturating_sub(if u == v { 1 } else { 0 });
    for k in 1..=max_k {
        if k == u.len() && k == v.len() {
            continue; // identical words, not an overlap
        }
        if u.letters()[u.len() - k..] == v.letters()[..k] {
            let alpha = u.slice(0..u.len() - k, gens);
            out.push(alpha.concat(v));
        }
    }
    // v contained in u
    if v.len() < u.len() && u.find_factor(v).is_some() {
        out.push(u.clone());
    }
    out
}

fn overlap_polys(
    a: &GbElem,
    b: &GbElem,
    gens: &[Generator],
    trunc: u32,
) -> Result<Vec<NcPoly>, GbError> {
    let (u, v) = (&a.lead, &b.lead);
    let mut out = Vec::new();
    let max_k = u.len().min(v.len()).saturating_sub(if u == v { 1 } else { 0 });
    for k in 1..=max_k {
        if k == u.len() && k == v.len() {
            continue;
        }
        if u.letters()[u.len() - k..] == v.letters()[..k] {
            let alpha = u.slice(0..u.len() - k, gens);
            let gamma = v.slice(k..v.len(), gens);
            let w = alpha.concat(v);
            if w.degree() > trunc {
                continue;
            }
            // a·γ − α·b
            let one = a.poly.field().one();
            let s = a
                .poly
                .sandwich(&one, &Word::empty(), &gamma)?
                .sub(&b.poly.sandwich(&one, &alpha, &Word::empty())?)?;
            out.push(s);
        }
    }
    if v.len() < u.len() {
        if let Some(pos) = u.find_factor(v) {
            if u.degree() <= trunc {
                let alpha = u.slice(0..pos, gens);
                let beta = u.slice(pos + v.len()..u.len(), gens);
                let one = a.poly.field().one();
                let s = a.poly.clone().sub(&b.poly.sandwich(&one, &alpha, &beta)?)?;
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Fully reduces `p`: every term is rewritten until irreducible. The
/// strategy (largest term first, first basis element, leftmost occurrence)
/// is fixed, and for a complete truncated basis the result is the unique
/// normal form in degrees ≤ D.
fn reduce_full(p: &NcPoly, basis: &[GbElem], gens: &[Generator]) -> Result<NcPoly, GbError> {
    let field = p.field();
    let mut work = p.clone();
    let mut done = NcPoly::zero(field);
    'outer: while let Some((w, c)) = work.leading().map(|(w, c)| (w.clone(), c.clone())) {
        for e in basis {
            if let Some(pos) = w.find_factor(&e.lead) {
                let alpha = w.slice(0..pos, gens);
                let beta = w.slice(pos + e.lead.len()..w.len(), gens);
                // work -= c · α·e·β  (e monic, so the w-term cancels)
                let repl = e.poly.sandwich(&c, &alpha, &beta)?;
                work = work.sub(&repl)?;
                continue 'outer;
            }
        }
        // irreducible: move to output
        done = done.add(&NcPoly::monomial(c.clone(), w.clone()))?;
        work = work.sub(&NcPoly::monomial(c, w))?;
    }
    Ok(done)
}

/// Interface used by everything downstream of the Gröbner layer: a graded
/// algebra with computable normal forms, products and monomial bases.
///
/// [`QuotientAlgebra`] is the standard implementation; the Zhang twist view
/// in [`crate::zhang`] reroutes multiplication through the base algebra.
pub trait AlgebraView: Send + Sync {
    fn field(&self) -> FieldSpec;
    fn generators(&self) -> &[Generator];
    fn truncation(&self) -> u32;
    fn normal_form(&self, p: &NcPoly) -> Result<NcPoly, GbError>;
    /// Normal form of the product (twisted implementations reroute this).
    fn mul(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly, GbError>;
    fn basis_of_degree(&self, n: u32) -> Result<&[Word], GbError>;
    fn word_index(&self, n: u32) -> Result<&BTreeMap<Word, usize>, GbError>;
    /// The underlying presented algebra (self for plain quotients).
    fn base(&self) -> &QuotientAlgebra;

    fn dim_of_degree(&self, n: u32) -> Result<usize, GbError> {
        Ok(self.basis_of_degree(n)?.len())
    }

    /// `dim_k A_n` for `0 ≤ n ≤ up_to`.
    fn hilbert_function(&self, up_to: u32) -> Result<Vec<usize>, GbError> {
        (0..=up_to).map(|n| self.dim_of_degree(n)).collect()
    }

    /// Coordinates of `NF(p)`'s degree-`n` part over `basis_of_degree(n)`.
    fn coords(&self, p: &NcPoly, n: u32) -> Result<Vec<crate::scalar::Scalar>, GbError> {
        let nf = self.normal_form(p)?;
        let idx = self.word_index(n)?;
        let mut v = alloc::vec![self.field().zero(); idx.len()];
        for (w, c) in nf.terms() {
            if w.degree() == n {
                let Some(&i) = idx.get(w) else {
                    return Err(GbError::DegreeExceedsTruncation(n, self.truncation()));
                };
                v[i] = c.clone();
            }
        }
        Ok(v)
    }
}

/// A quotient algebra with cached monomial bases per degree.
pub struct QuotientAlgebra {
    gb: GroebnerBasis,
    bases: Vec<Vec<Word>>,
    indexes: Vec<BTreeMap<Word, usize>>,
}

impl QuotientAlgebra {
    pub fn new(pres: AlgebraPresentation, trunc: u32) -> Result<Arc<QuotientAlgebra>, GbError> {
        Ok(Self::from_basis(groebner(&pres, trunc)?))
    }

    pub fn from_basis(gb: GroebnerBasis) -> Arc<QuotientAlgebra> {
        let gens = &gb.presentation.generators;
        let trunc = gb.truncation_degree;
        // enumerate normal words degree by degree: a word is normal iff no
        // leading word occurs in it; extend normal words letter by letter
        let mut by_degree: Vec<Vec<Word>> = alloc::vec![Vec::new(); (trunc + 1) as usize];
        by_degree[0].push(Word::empty());
        // breadth-first by word length; a word built from a normal word by
        // appending one letter is normal iff no leading word is a suffix
        let mut frontier = alloc::vec![Word::empty()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for (gi, g) in gens.iter().enumerate() {
                    let nd = w.degree() + g.degree;
                    if nd > trunc {
                        continue;
                    }
                    let cand = w.concat(&Word::single(gi, gens));
                    if gb.elems.iter().any(|e| is_suffix_occurrence(&cand, &e.lead)) {
                        continue;
                    }
                    by_degree[nd as usize].push(cand.clone());
                    next.push(cand);
                }
            }
            frontier = next;
        }
        for v in by_degree.iter_mut() {
            v.sort();
            v.dedup();
        }
        let indexes = by_degree
            .iter()
            .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
            .collect();
        Arc::new(QuotientAlgebra { gb, bases: by_degree, indexes })
    }

    pub fn groebner_basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.gb.presentation
    }

    /// Extends the ideal by one homogeneous element: `A/(I + (f))`.
    pub fn quotient_by_element(&self, f: &NcPoly) -> Result<Arc<QuotientAlgebra>, GbError> {
        if f.is_zero() {
            return Err(GbError::ZeroElement);
        }
        let mut pres = self.gb.presentation.clone();
        pres.relations.push(self.normal_form(f)?);
        let pres = AlgebraPresentation::new(pres.field, pres.generators, pres.relations)?;
        QuotientAlgebra::new(pres, self.gb.truncation_degree)
    }

    pub fn generator_poly(&self, index: usize) -> NcPoly {
        NcPoly::generator(index, self.generators(), self.field())
    }

    pub fn generator_named(&self, name: &str) -> Option<usize> {
        self.generators().iter().position(|g| g.name == name)
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators().iter().map(|g| g.name.clone()).collect()
    }
}

// the new word was frontier-extended by one letter, so any newly created
// reducible factor must end at the last position
fn is_suffix_occurrence(w: &Word, lead: &Word) -> bool {
    let (wl, ll) = (w.letters(), lead.letters());
    ll.len() <= wl.len() && wl[wl.len() - ll.len()..] == *ll
}

impl AlgebraView for QuotientAlgebra {
    fn field(&self) -> FieldSpec {
        self.gb.presentation.field
    }

    fn generators(&self) -> &[Generator] {
        &self.gb.presentation.generators
    }

    fn truncation(&self) -> u32 {
        self.gb.truncation_degree
    }

    fn normal_form(&self, p: &NcPoly) -> Result<NcPoly, GbError> {
        if p.max_degree() > self.gb.truncation_degree {
            return Err(GbError::DegreeExceedsTruncation(
                p.max_degree(),
                self.gb.truncation_degree,
            ));
        }
        reduce_full(p, &self.gb.elems, self.generators())
    }

    fn mul(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly, GbError> {
        self.normal_form(&a.mul(b)?)
    }

    fn basis_of_degree(&self, n: u32) -> Result<&[Word], GbError> {
        if n > self.gb.truncation_degree {
            return Err(GbError::DegreeExceedsTruncation(n, self.gb.truncation_degree));
        }
        Ok(&self.bases[n as usize])
    }

    fn word_index(&self, n: u32) -> Result<&BTreeMap<Word, usize>, GbError> {
        if n > self.gb.truncation_degree {
            return Err(GbError::DegreeExceedsTruncation(n, self.gb.truncation_degree));
        }
        Ok(&self.indexes[n as usize])
    }

    fn base(&self) -> &QuotientAlgebra {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::EndoImages;

    pub(crate) fn poly(
        q: &AlgebraPresentation,
        terms: &[(i64, &[&str])],
    ) -> NcPoly {
        let gens = &q.generators;
        let mut p = NcPoly::zero(q.field);
        for (c, names) in terms {
            let letters = names
                .iter()
                .map(|n| gens.iter().position(|g| &g.name == n).unwrap() as u8)
                .collect();
            let w = Word::from_letters(letters, gens);
            p = p.add(&NcPoly::monomial(q.field.from_int(*c), w)).unwrap();
        }
        p
    }

    fn commutative_xy(trunc: u32) -> Arc<QuotientAlgebra> {
        let f = FieldSpec::Rationals;
        let gens = alloc::vec![Generator::new("x", 1), Generator::new("y", 1)];
        let pres = AlgebraPresentation::free(f, gens);
        let rel = poly(&pres, &[(1, &["y", "x"]), (-1, &["x", "y"])]);
        let pres =
            AlgebraPresentation::new(f, pres.generators.clone(), alloc::vec![rel]).unwrap();
        QuotientAlgebra::new(pres, trunc).unwrap()
    }

    #[test]
    fn single_commutator_basis() {
        let q = commutative_xy(6);
        assert_eq!(q.groebner_basis().elems.len(), 1);
        // normal words in degree n: x^a y^b, so n+1 of them
        for n in 0..=6u32 {
            assert_eq!(q.dim_of_degree(n).unwrap(), (n + 1) as usize);
        }
    }

    #[test]
    fn free_algebra_dimensions() {
        let f = FieldSpec::Rationals;
        let gens = alloc::vec![Generator::new("x", 1), Generator::new("y", 1)];
        let q = QuotientAlgebra::new(AlgebraPresentation::free(f, gens), 6).unwrap();
        let h = q.hilbert_function(6).unwrap();
        assert_eq!(h, alloc::vec![1, 2, 4, 8, 16, 32, 64]);
    }

    #[test]
    fn skew_rewrite_normal_forms() {
        // k⟨x,y⟩/(yx − qxy) with q = 3 over F7: NF(yx) = 3xy, NF(y²x) = 9·... = q²xy²
        let f = FieldSpec::prime(7).unwrap();
        let gens = alloc::vec![Generator::new("x", 1), Generator::new("y", 1)];
        let pres = AlgebraPresentation::free(f, gens);
        let rel = poly(&pres, &[(1, &["y", "x"]), (-3, &["x", "y"])]);
        let pres = AlgebraPresentation::new(f, pres.generators.clone(), alloc::vec![rel]).unwrap();
        let q = QuotientAlgebra::new(pres, 6).unwrap();
        let p = poly(q.presentation(), &[(1, &["y", "x"])]);
        assert_eq!(q.normal_form(&p).unwrap(), poly(q.presentation(), &[(3, &["x", "y"])]));
        let p2 = poly(q.presentation(), &[(1, &["y", "y", "x"])]);
        assert_eq!(
            q.normal_form(&p2).unwrap(),
            poly(q.presentation(), &[(9 % 7, &["x", "y", "y"])])
        );
    }

    pub(crate) fn sklyanin(trunc: u32) -> Arc<QuotientAlgebra> {
        let f = FieldSpec::Rationals;
        let gens =
            alloc::vec![Generator::new("x", 1), Generator::new("y", 1), Generator::new("z", 1)];
        let pres = AlgebraPresentation::free(f, gens);
        let r1 = poly(&pres, &[(1, &["y", "z"]), (1, &["z", "y"]), (-1, &["x", "x"])]);
        let r2 = poly(&pres, &[(1, &["x", "z"]), (1, &["z", "x"]), (-1, &["y", "y"])]);
        let r3 = poly(&pres, &[(1, &["x", "y"]), (1, &["y", "x"]), (-1, &["z", "z"])]);
        let pres = AlgebraPresentation::new(
            f,
            pres.generators.clone(),
            alloc::vec![r1, r2, r3],
        )
        .unwrap();
        QuotientAlgebra::new(pres, trunc).unwrap()
    }

    #[test]
    fn sklyanin_dimensions_match_nullspace_oracle() {
        let q = sklyanin(6);
        // relation reduces to zero
        let r1 = poly(q.presentation(), &[(1, &["y", "z"]), (1, &["z", "y"]), (-1, &["x", "x"])]);
        assert!(q.normal_form(&r1).unwrap().is_zero());
        for n in 0..=6u32 {
            let expected = ((n + 1) * (n + 2) / 2) as usize;
            assert_eq!(q.dim_of_degree(n).unwrap(), expected, "degree {n}");
        }
        // independent oracle: dim A_n = dim Free_n − dim (ideal slice n)
        for n in 2..=5u32 {
            assert_eq!(
                q.dim_of_degree(n).unwrap(),
                free_quotient_dim_oracle(q.presentation(), n),
                "oracle mismatch at degree {n}"
            );
        }
    }

    /// Dense linear algebra on the free-algebra slice: the dimension of the
    /// degree-n part of the quotient, computed without Gröbner bases.
    pub(crate) fn free_quotient_dim_oracle(pres: &AlgebraPresentation, n: u32) -> usize {
        use crate::linalg::RowSpan;
        let gens = &pres.generators;
        let field = pres.field;
        // all words of degree exactly n
        fn words_of_degree(gens: &[Generator], n: u32) -> Vec<Word> {
            let mut out = Vec::new();
            let mut stack = alloc::vec![Word::empty()];
            while let Some(w) = stack.pop() {
                if w.degree() == n {
                    out.push(w);
                    continue;
                }
                for gi in 0..gens.len() {
                    if w.degree() + gens[gi].degree <= n {
                        stack.push(w.concat(&Word::single(gi, gens)));
                    }
                }
            }
            out.sort();
            out.dedup();
            out
        }
        let words = words_of_degree(gens, n);
        let index: BTreeMap<Word, usize> =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut span = RowSpan::new(words.len(), field);
        for r in &pres.relations {
            let rd = r.homogeneous_degree().unwrap();
            if rd > n {
                continue;
            }
            for du in 0..=(n - rd) {
                for u in words_of_degree(gens, du) {
                    for v in words_of_degree(gens, n - rd - du) {
                        let prod = r.sandwich(&field.one(), &u, &v).unwrap();
                        let mut vec = alloc::vec![field.zero(); words.len()];
                        for (w, c) in prod.terms() {
                            vec[index[w]] = c.clone();
                        }
                        span.insert(&vec);
                    }
                }
            }
        }
        words.len() - span.dim()
    }

    #[test]
    fn quotient_by_element_dimensions() {
        // k[x,y] / (x²): degree-2 basis {xy, y²}
        let q = commutative_xy(6);
        let f2 = poly(q.presentation(), &[(1, &["x", "x"])]);
        let b = q.quotient_by_element(&f2).unwrap();
        let basis: Vec<_> = b.basis_of_degree(2).unwrap().to_vec();
        assert_eq!(basis.len(), 2);
        // Sklyanin mod the degree-3 central element: 1, 3, 6, 9, 12, …
        let a = sklyanin(6);
        let g = central_sklyanin_element(&a);
        let b = a.quotient_by_element(&g).unwrap();
        assert_eq!(b.hilbert_function(6).unwrap(), alloc::vec![1, 3, 6, 9, 12, 15, 18]);
    }

    pub(crate) fn central_sklyanin_element(a: &QuotientAlgebra) -> NcPoly {
        // 2(y³ + xyz − yxz − x³)
        let p = poly(
            a.presentation(),
            &[
                (2, &["y", "y", "y"]),
                (2, &["x", "y", "z"]),
                (-2, &["y", "x", "z"]),
                (-2, &["x", "x", "x"]),
            ],
        );
        a.normal_form(&p).unwrap()
    }

    #[test]
    fn error_paths_are_reported() {
        let f = FieldSpec::Rationals;
        let gens = alloc::vec![Generator::new("x", 1), Generator::new("y", 1)];
        // inhomogeneous relation
        let bad = poly(&AlgebraPresentation::free(f, gens.clone()), &[(1, &["x", "y"]), (1, &["x"])]);
        assert!(matches!(
            AlgebraPresentation::new(f, gens.clone(), alloc::vec![bad]),
            Err(GbError::InhomogeneousRelation(0))
        ));
        // truncation below the maximal relation degree
        let rel = poly(&AlgebraPresentation::free(f, gens.clone()), &[(1, &["y", "x"]), (-1, &["x", "y"])]);
        let pres = AlgebraPresentation::new(f, gens, alloc::vec![rel]).unwrap();
        assert!(matches!(
            groebner(&pres, 1),
            Err(GbError::TruncationTooSmall { given: 1, needed: 2 })
        ));
        // normal form beyond the certified bound
        let q = QuotientAlgebra::from_basis(groebner(&pres, 3).unwrap());
        let x = q.generator_poly(0);
        let deep = q.mul(&x, &x).and_then(|p| q.mul(&p, &p));
        assert!(matches!(deep, Err(GbError::DegreeExceedsTruncation(4, 3))));
        assert!(q.basis_of_degree(4).is_err());
    }

    #[test]
    fn skew_extension_quotient_slices() {
        // B = k[x,y][w;zeta]/(w^2) has basis {x^a y^b, x^a y^b w}: 2n+1 in degree n
        let f = FieldSpec::prime(7).unwrap();
        let a = crate::testutil::ore(f, 2, 1, 1, 6);
        let w = a.generator_poly(2);
        let w2 = a.mul(&w, &w).unwrap();
        let b = a.quotient_by_element(&w2).unwrap();
        assert_eq!(b.hilbert_function(5).unwrap(), alloc::vec![1, 3, 5, 7, 9, 11]);
    }

    #[test]
    fn nf_is_idempotent_and_multiplicative() {
        let q = sklyanin(6);
        let p = poly(
            q.presentation(),
            &[(1, &["z", "y", "x"]), (2, &["x", "x", "y"]), (5, &["y", "z", "z"])],
        );
        let r = poly(q.presentation(), &[(1, &["z", "x"]), (-1, &["y", "y"])]);
        let nf = q.normal_form(&p).unwrap();
        assert_eq!(q.normal_form(&nf).unwrap(), nf);
        let lhs = q.mul(&p, &r).unwrap();
        let rhs = q.mul(&q.normal_form(&p).unwrap(), &q.normal_form(&r).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn weighted_generator_basis() {
        // deg X = Z = 2, deg Y = 2 with skew relations (n = 2 invariant algebra shape)
        let f = FieldSpec::prime(7).unwrap();
        let gens = alloc::vec![
            Generator::new("X", 2),
            Generator::new("Y", 2),
            Generator::new("Z", 2)
        ];
        let pres = AlgebraPresentation::free(f, gens);
        let q = QuotientAlgebra::new(pres, 4).unwrap();
        assert_eq!(q.dim_of_degree(2).unwrap(), 3, "X, Y, Z in degree 2");
        assert_eq!(q.dim_of_degree(1).unwrap(), 0);
        assert_eq!(q.dim_of_degree(3).unwrap(), 0);
        assert_eq!(q.dim_of_degree(4).unwrap(), 9);
    }

    #[test]
    fn endo_through_nf() {
        // applying an endomorphism then reducing agrees with spec example:
        // ζ(x)=x+y, ζ(y)=qy; σ = ζ⁻² applied to −ζ(x) gives −ζ³(x)
        let f = FieldSpec::prime(7).unwrap();
        let gens = alloc::vec![Generator::new("x", 1), Generator::new("y", 1)];
        let x = NcPoly::generator(0, &gens, f);
        let y = NcPoly::generator(1, &gens, f);
        let zeta = EndoImages::new(
            alloc::vec![x.add(&y).unwrap(), y.scale(&f.from_int(2)).unwrap()],
            &gens,
        )
        .unwrap();
        let z2 = |p: &NcPoly| zeta.apply(&zeta.apply(p).unwrap()).unwrap();
        let lhs = z2(&zeta.apply(&x).unwrap().neg());
        let z3x = zeta.apply(&z2(&x)).unwrap();
        assert_eq!(lhs, z3x.neg());
    }
}
