//! Noncommutative polynomials in the free algebra on weighted generators.
//!
//! Words are stored with their weighted degree so the degree-lexicographic
//! order (deglex, ties broken left-to-right by declared generator order) is
//! the natural `Ord` on `Word`. Polynomials are coefficient maps keyed by
//! words in that canonical order; zero coefficients are never stored.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::{FieldError, FieldSpec, Scalar};

/// A named generator with a positive weight (the algebra is connected graded).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        assert!(degree >= 1, "generator degrees must be positive");
        Generator { name: name.into(), degree }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeAlgError {
    #[error("field error: {0}")]
    Field(#[from] FieldError),
    #[error("generator sets differ between operands")]
    GeneratorMismatch,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("endomorphism image for generator {0} has degree {1}, expected {2}")]
    ImageDegree(String, u32, u32),
    #[error("endomorphism is missing an image for generator index {0}")]
    MissingImage(usize),
}

/// A monomial: a sequence of generator indices together with its weighted
/// degree. The empty word represents 1 and has degree 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    degree: u32,
    letters: Vec<u8>,
}

impl Word {
    pub fn empty() -> Word {
        Word { degree: 0, letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<u8>, gens: &[Generator]) -> Word {
        let degree = letters.iter().map(|&i| gens[i as usize].degree).sum();
        Word { degree, letters }
    }

    pub fn single(index: usize, gens: &[Generator]) -> Word {
        Word { degree: gens[index].degree, letters: alloc::vec![index as u8] }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() + other.letters.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { degree: self.degree + other.degree, letters }
    }

    /// First position at which `pattern` occurs as a factor, if any.
    pub fn find_factor(&self, pattern: &Word) -> Option<usize> {
        if pattern.letters.is_empty() || pattern.letters.len() > self.letters.len() {
            return None;
        }
        self.letters
            .windows(pattern.letters.len())
            .position(|win| win == pattern.letters.as_slice())
    }

    pub fn slice(&self, range: core::ops::Range<usize>, gens: &[Generator]) -> Word {
        Word::from_letters(self.letters[range].to_vec(), gens)
    }
}

/// An exact-coefficient noncommutative polynomial.
///
/// The generator table is shared context: operations require both operands
/// to have been built over the same declared generators.
#[derive(Clone, PartialEq, Eq)]
pub struct NcPoly {
    field: FieldSpec,
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero(field: FieldSpec) -> NcPoly {
        NcPoly { field, terms: BTreeMap::new() }
    }

    pub fn one(field: FieldSpec) -> NcPoly {
        NcPoly::scalar(field.one())
    }

    pub fn scalar(s: Scalar) -> NcPoly {
        let field = s.field();
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(Word::empty(), s);
        }
        NcPoly { field, terms }
    }

    pub fn generator(index: usize, gens: &[Generator], field: FieldSpec) -> NcPoly {
        NcPoly::monomial(field.one(), Word::single(index, gens))
    }

    pub fn monomial(coeff: Scalar, word: Word) -> NcPoly {
        let field = coeff.field();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        NcPoly { field, terms }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Option<&Scalar> {
        self.terms.get(w)
    }

    /// The leading (deglex-largest) term.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Degree of a homogeneous polynomial; `None` for 0 or mixed input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let first = it.next()?.degree();
        for w in it {
            if w.degree() != first {
                return None;
            }
        }
        Some(first)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.is_zero() || self.homogeneous_degree() == Some(d)
    }

    /// Splits into homogeneous components, lowest degree first.
    pub fn homogeneous_components(&self) -> Vec<(u32, NcPoly)> {
        let mut out: Vec<(u32, NcPoly)> = Vec::new();
        for (w, c) in &self.terms {
            match out.iter_mut().find(|(d, _)| *d == w.degree()) {
                Some((_, p)) => {
                    p.terms.insert(w.clone(), c.clone());
                }
                None => {
                    let mut p = NcPoly::zero(self.field);
                    p.terms.insert(w.clone(), c.clone());
                    out.push((w.degree(), p));
                }
            }
        }
        out.sort_by_key(|(d, _)| *d);
        out
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|w| w.degree()).max().unwrap_or(0)
    }

    fn add_term(&mut self, w: Word, c: &Scalar) -> Result<(), FieldError> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&w) {
            None => {
                self.terms.insert(w, c.clone());
            }
            Some(old) => {
                let s = old.add(c)?;
                if !s.is_zero() {
                    self.terms.insert(w, s);
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &NcPoly) -> Result<NcPoly, FreeAlgError> {
        if self.field != other.field {
            return Err(FieldError::Mismatch(self.field, other.field).into());
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NcPoly) -> Result<NcPoly, FreeAlgError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NcPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Result<NcPoly, FreeAlgError> {
        if s.is_zero() {
            return Ok(NcPoly::zero(self.field));
        }
        let mut out = NcPoly::zero(self.field);
        for (w, c) in &self.terms {
            out.terms.insert(w.clone(), c.mul(s)?);
        }
        Ok(out)
    }

    /// Free-algebra product: bilinear extension of word concatenation.
    /// No relations are applied here.
    pub fn mul(&self, other: &NcPoly) -> Result<NcPoly, FreeAlgError> {
        if self.field != other.field {
            return Err(FieldError::Mismatch(self.field, other.field).into());
        }
        let mut out = NcPoly::zero(self.field);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), &c1.mul(c2)?)?;
            }
        }
        Ok(out)
    }

    /// `u · self · v` for words `u`, `v` and a scalar multiple.
    pub fn sandwich(&self, coeff: &Scalar, u: &Word, v: &Word) -> Result<NcPoly, FreeAlgError> {
        let mut out = NcPoly::zero(self.field);
        for (w, c) in &self.terms {
            out.add_term(u.concat(w).concat(v), &c.mul(coeff)?)?;
        }
        Ok(out)
    }

    /// Rescales so the leading coefficient is 1.
    pub fn monic(&self) -> Result<NcPoly, FreeAlgError> {
        match self.leading() {
            None => Ok(self.clone()),
            Some((_, c)) => {
                let inv = c.inv().map_err(FieldError::from)?;
                self.scale(&inv)
            }
        }
    }

    pub fn render(&self, gens: &[Generator]) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        // display highest term first
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let cs = crate::scalar::scalar_to_session_string(c);
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", String::from(rest)),
                None => ("+", cs),
            };
            if i == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                write!(s, " {sign} ").unwrap();
            }
            let word_str = render_word(w, gens);
            if w.is_empty() {
                write!(s, "{mag}").unwrap();
            } else if mag == "1" {
                write!(s, "{word_str}").unwrap();
            } else {
                write!(s, "{mag}*{word_str}").unwrap();
            }
        }
        s
    }
}

pub fn render_word(w: &Word, gens: &[Generator]) -> String {
    use core::fmt::Write;
    if w.is_empty() {
        return String::from("1");
    }
    let mut s = String::new();
    let mut i = 0;
    let letters = w.letters();
    while i < letters.len() {
        let g = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == g {
            run += 1;
        }
        if !s.is_empty() {
            s.push('*');
        }
        if run == 1 {
            write!(s, "{}", gens[g as usize].name).unwrap();
        } else {
            write!(s, "{}^{}", gens[g as usize].name, run).unwrap();
        }
        i += run;
    }
    s
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly[")?;
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{:?}", w.letters())?;
        }
        write!(f, "]")
    }
}

/// Generator images defining a degree-0 substitution on the free algebra.
///
/// Well-definedness on a quotient is checked at the [`crate::autos`] level;
/// this type only knows how to substitute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoImages {
    images: Vec<NcPoly>,
}

impl EndoImages {
    pub fn new(images: Vec<NcPoly>, gens: &[Generator]) -> Result<EndoImages, FreeAlgError> {
        if images.len() != gens.len() {
            return Err(FreeAlgError::MissingImage(images.len()));
        }
        for (i, img) in images.iter().enumerate() {
            if !img.is_homogeneous_of(gens[i].degree) || img.is_zero() {
                return Err(FreeAlgError::ImageDegree(
                    gens[i].name.clone(),
                    img.homogeneous_degree().unwrap_or(0),
                    gens[i].degree,
                ));
            }
        }
        Ok(EndoImages { images })
    }

    pub fn identity(gens: &[Generator], field: FieldSpec) -> EndoImages {
        let images = (0..gens.len()).map(|i| NcPoly::generator(i, gens, field)).collect();
        EndoImages { images }
    }

    pub fn image(&self, index: usize) -> &NcPoly {
        &self.images[index]
    }

    pub fn images(&self) -> &[NcPoly] {
        &self.images
    }

    /// Substitutes generator images and expands. Homogeneous input yields
    /// homogeneous output of the same degree.
    pub fn apply(&self, p: &NcPoly) -> Result<NcPoly, FreeAlgError> {
        let field = p.field();
        let mut out = NcPoly::zero(field);
        for (w, c) in p.terms() {
            let mut acc = NcPoly::scalar(c.clone());
            for &g in w.letters() {
                acc = acc.mul(&self.images[g as usize])?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gens_xy() -> Vec<Generator> {
        alloc::vec![Generator::new("x", 1), Generator::new("y", 1)]
    }

    fn var(i: usize, gens: &[Generator], f: FieldSpec) -> NcPoly {
        NcPoly::generator(i, gens, f)
    }

    #[test]
    fn additive_inverse_cancels() {
        let f = FieldSpec::Rationals;
        let g = gens_xy();
        let x = var(0, &g, f);
        assert!(x.add(&x.neg()).unwrap().is_zero());
    }

    #[test]
    fn modular_coefficient_sum() {
        // over F5: 3x + 4x = 2x
        let f = FieldSpec::prime(5).unwrap();
        let g = gens_xy();
        let x = var(0, &g, f);
        let s = x.scale(&f.from_int(3)).unwrap().add(&x.scale(&f.from_int(4)).unwrap()).unwrap();
        assert_eq!(s, x.scale(&f.from_int(2)).unwrap());
    }

    #[test]
    fn free_product_is_noncommutative() {
        let f = FieldSpec::Rationals;
        let g = gens_xy();
        let (x, y) = (var(0, &g, f), var(1, &g, f));
        let xy = x.mul(&y).unwrap();
        let yx = y.mul(&x).unwrap();
        assert_ne!(xy, yx);
        assert!(!xy.sub(&yx).unwrap().is_zero());
    }

    #[test]
    fn hand_expanded_product() {
        // (x + y)(x - y) = x² - xy + yx - y²
        let f = FieldSpec::Rationals;
        let g = gens_xy();
        let (x, y) = (var(0, &g, f), var(1, &g, f));
        let lhs = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        let expected = x
            .mul(&x)
            .unwrap()
            .sub(&x.mul(&y).unwrap())
            .unwrap()
            .add(&y.mul(&x).unwrap())
            .unwrap()
            .sub(&y.mul(&y).unwrap())
            .unwrap();
        assert_eq!(lhs, expected);
        assert_eq!(lhs.num_terms(), 4);
    }

    #[test]
    fn one_is_identity() {
        let f = FieldSpec::Rationals;
        let g = gens_xy();
        let p = var(0, &g, f).mul(&var(1, &g, f)).unwrap().add(&var(0, &g, f)).unwrap();
        assert_eq!(NcPoly::one(f).mul(&p).unwrap(), p);
        assert_eq!(p.mul(&NcPoly::one(f)).unwrap(), p);
    }

    #[test]
    fn deglex_ordering() {
        let g = gens_xy();
        let xy = Word::from_letters(alloc::vec![0, 1], &g);
        let yx = Word::from_letters(alloc::vec![1, 0], &g);
        let x = Word::from_letters(alloc::vec![0], &g);
        assert!(yx > xy, "later generator wins the left-lex tie");
        assert!(xy > x, "degree dominates");
    }

    #[test]
    fn weighted_degrees() {
        let g = alloc::vec![Generator::new("x", 1), Generator::new("w", 2)];
        let xw = Word::from_letters(alloc::vec![0, 1], &g);
        assert_eq!(xw.degree(), 3);
    }

    #[test]
    fn identity_substitution_fixes_everything() {
        let f = FieldSpec::Rationals;
        let g = gens_xy();
        let p = var(0, &g, f).mul(&var(1, &g, f)).unwrap().add(&var(1, &g, f)).unwrap();
        let e = EndoImages::identity(&g, f);
        assert_eq!(e.apply(&p).unwrap(), p);
    }

    #[test]
    fn twice_applied_linear_substitution() {
        // ζ(x) = x + y, ζ(y) = q·y over F7 with q = 2: ζ²(x) = x + (1+q)y
        let f = FieldSpec::prime(7).unwrap();
        let g = gens_xy();
        let (x, y) = (var(0, &g, f), var(1, &g, f));
        let zeta = EndoImages::new(
            alloc::vec![x.add(&y).unwrap(), y.scale(&f.from_int(2)).unwrap()],
            &g,
        )
        .unwrap();
        let zx2 = zeta.apply(&zeta.apply(&x).unwrap()).unwrap();
        let expected = x.add(&y.scale(&f.from_int(3)).unwrap()).unwrap();
        assert_eq!(zx2, expected);
    }

    #[test]
    fn image_degree_mismatch_rejected() {
        let f = FieldSpec::Rationals;
        let g = alloc::vec![Generator::new("x", 1), Generator::new("w", 2)];
        let x = var(0, &g, f);
        // w ↦ x is a degree violation
        let r = EndoImages::new(alloc::vec![x.clone(), x.clone()], &g);
        assert!(matches!(r, Err(FreeAlgError::ImageDegree(..))));
    }

    fn arb_poly(max_terms: usize, max_len: usize) -> impl Strategy<Value = NcPoly> {
        let f = FieldSpec::prime(101).unwrap();
        proptest::collection::vec(
            (proptest::collection::vec(0u8..2, 0..=max_len), 0i64..101),
            0..=max_terms,
        )
        .prop_map(move |terms| {
            let g = gens_xy();
            let mut p = NcPoly::zero(f);
            for (letters, c) in terms {
                let w = Word::from_letters(letters, &g);
                p = p.add(&NcPoly::monomial(f.from_int(c), w)).unwrap();
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(4, 3), b in arb_poly(4, 3), c in arb_poly(4, 3)) {
            // associativity of multiplication
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(&ab_c, &a_bc);
            // distributivity
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(&lhs, &rhs);
        }

        #[test]
        fn product_degree_is_additive(i in 0usize..2, j in 0usize..2, k in 0usize..2, l in 0usize..2) {
            let f = FieldSpec::prime(101).unwrap();
            let g = gens_xy();
            let p = NcPoly::monomial(f.one(), Word::from_letters(alloc::vec![i as u8, j as u8], &g));
            let q = NcPoly::monomial(f.one(), Word::from_letters(alloc::vec![k as u8, l as u8, i as u8], &g));
            let d = p.mul(&q).unwrap().homogeneous_degree().unwrap();
            prop_assert_eq!(d, p.homogeneous_degree().unwrap() + q.homogeneous_degree().unwrap());
        }
    }
}
