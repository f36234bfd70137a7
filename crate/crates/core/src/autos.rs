//! Graded algebra endomorphisms and automorphisms; normality and regularity
//! certification for a homogeneous element; solving `a·f = f·σ(a)` for the
//! normalizing automorphism σ.
//!
//! Invertibility is decided on generator-degree slices: a degree-preserving
//! endomorphism of a locally finite connected graded algebra is invertible
//! iff the induced linear map on each generator-degree slice is.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::freealg::{EndoImages, FreeAlgError, NcPoly};
use crate::gbasis::{AlgebraView, GbError, QuotientAlgebra};
use crate::linalg::MatK;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AutosError {
    #[error("images do not preserve relation {0}")]
    RelationNotPreserved(usize),
    #[error("induced map on the degree-{0} slice is not invertible")]
    NotInvertible(u32),
    #[error("element is not normal: no solution for generator {0}")]
    NotNormal(String),
    #[error("normalizing solve is ambiguous for generator {0} (element not regular)")]
    AmbiguousSolution(String),
    #[error("element is not regular: {side} multiplication has a kernel in degree {degree}")]
    NotRegular { side: &'static str, degree: u32 },
    #[error("bound {0} plus element degree exceeds truncation {1}")]
    BoundExceedsTruncation(u32, u32),
    #[error("element must be homogeneous and nonzero")]
    BadElement,
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Free(#[from] FreeAlgError),
}

/// A verified degree-0 automorphism of a quotient algebra, stored by its
/// generator images in normal form.
#[derive(Clone)]
pub struct GradedEndo {
    algebra: Arc<QuotientAlgebra>,
    images: EndoImages,
}

impl core::fmt::Debug for GradedEndo {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "GradedEndo{:?}", self.images.images())
    }
}

impl PartialEq for GradedEndo {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl GradedEndo {
    pub fn algebra(&self) -> &Arc<QuotientAlgebra> {
        &self.algebra
    }

    pub fn images(&self) -> &EndoImages {
        &self.images
    }

    pub fn identity(algebra: Arc<QuotientAlgebra>) -> GradedEndo {
        let images = EndoImages::identity(algebra.generators(), algebra.field());
        GradedEndo { algebra, images }
    }

    pub fn is_identity(&self) -> bool {
        self == &GradedEndo::identity(self.algebra.clone())
    }

    /// Substitutes generator images and reduces to normal form.
    pub fn apply(&self, p: &NcPoly) -> Result<NcPoly, AutosError> {
        Ok(self.algebra.normal_form(&self.images.apply(p)?)?)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GradedEndo) -> Result<GradedEndo, AutosError> {
        let images: Result<Vec<NcPoly>, AutosError> =
            other.images.images().iter().map(|img| self.apply(img)).collect();
        let images = EndoImages::new(images?, self.algebra.generators())?;
        Ok(GradedEndo { algebra: self.algebra.clone(), images })
    }

    /// Inverse, found by solving the generator-degree linear systems and
    /// verified by checking both composites are the identity.
    pub fn inverse(&self) -> Result<GradedEndo, AutosError> {
        let a = &self.algebra;
        let gens = a.generators();
        let mut images = Vec::with_capacity(gens.len());
        for (gi, g) in gens.iter().enumerate() {
            let e = g.degree;
            let basis = a.basis_of_degree(e)?.to_vec();
            let mut rows = Vec::with_capacity(basis.len());
            for w in &basis {
                let img = self.apply(&NcPoly::monomial(a.field().one(), w.clone()))?;
                rows.push(a.coords(&img, e)?);
            }
            let m = MatK::from_rows(rows, a.field());
            let target = a.coords(&a.generator_poly(gi), e)?;
            let sol = m.solve_left(&target).ok_or(AutosError::NotInvertible(e))?;
            let mut img = NcPoly::zero(a.field());
            for (c, w) in sol.into_iter().zip(&basis) {
                img = img.add(&NcPoly::monomial(c, w.clone()))?;
            }
            images.push(img);
        }
        let inv = GradedEndo { algebra: a.clone(), images: EndoImages::new(images, gens)? };
        if !self.compose(&inv)?.is_identity() || !inv.compose(self)?.is_identity() {
            return Err(AutosError::NotInvertible(0));
        }
        Ok(inv)
    }

    /// `self^k` for any integer power.
    pub fn pow(&self, k: i64) -> Result<GradedEndo, AutosError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = GradedEndo::identity(self.algebra.clone());
        for _ in 0..k.unsigned_abs() {
            acc = base.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Smallest `n ≤ max` with `self^n = id`, or `None`.
    pub fn order(&self, max: u32) -> Result<Option<u32>, AutosError> {
        let mut acc = self.clone();
        for n in 1..=max {
            if acc.is_identity() {
                return Ok(Some(n));
            }
            acc = self.compose(&acc)?;
        }
        Ok(None)
    }
}

/// Checks that generator images define a graded algebra automorphism:
/// every defining relation maps to 0 and the induced linear map on each
/// generator-degree slice is invertible.
pub fn check_endo(
    algebra: Arc<QuotientAlgebra>,
    images: Vec<NcPoly>,
) -> Result<GradedEndo, AutosError> {
    let gens = algebra.generators().to_vec();
    let nf_images: Result<Vec<NcPoly>, GbError> =
        images.iter().map(|p| algebra.normal_form(p)).collect();
    let images = EndoImages::new(nf_images?, &gens)?;
    let endo = GradedEndo { algebra: algebra.clone(), images };
    for (ri, rel) in algebra.presentation().relations.iter().enumerate() {
        if !endo.apply(rel)?.is_zero() {
            return Err(AutosError::RelationNotPreserved(ri));
        }
    }
    let mut degrees: Vec<u32> = gens.iter().map(|g| g.degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    for e in degrees {
        let basis = algebra.basis_of_degree(e)?.to_vec();
        let mut rows = Vec::with_capacity(basis.len());
        for w in &basis {
            let img = endo.apply(&NcPoly::monomial(algebra.field().one(), w.clone()))?;
            rows.push(algebra.coords(&img, e)?);
        }
        if !MatK::from_rows(rows, algebra.field()).is_invertible() {
            return Err(AutosError::NotInvertible(e));
        }
    }
    Ok(endo)
}

/// An endomorphism with a per-degree scaling: `a ↦ factor^{−deg a}·base(a)`.
///
/// The normalizing automorphism of a Zhang twist has this shape; a plain
/// automorphism is the `factor = 1` case. Everything downstream that twists
/// matrix entries goes through this type.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledEndo {
    base: GradedEndo,
    factor: Scalar,
}

impl ScaledEndo {
    pub fn plain(base: GradedEndo) -> ScaledEndo {
        let one = base.algebra.field().one();
        ScaledEndo { base, factor: one }
    }

    pub fn new(base: GradedEndo, factor: Scalar) -> ScaledEndo {
        ScaledEndo { base, factor }
    }

    pub fn base(&self) -> &GradedEndo {
        &self.base
    }

    pub fn factor(&self) -> &Scalar {
        &self.factor
    }

    pub fn algebra(&self) -> &Arc<QuotientAlgebra> {
        self.base.algebra()
    }

    pub fn identity(algebra: Arc<QuotientAlgebra>) -> ScaledEndo {
        ScaledEndo::plain(GradedEndo::identity(algebra))
    }

    pub fn is_identity(&self) -> Result<bool, AutosError> {
        for gi in 0..self.algebra().generators().len() {
            let x = self.algebra().generator_poly(gi);
            if self.apply(&x)? != self.algebra().normal_form(&x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn apply(&self, p: &NcPoly) -> Result<NcPoly, AutosError> {
        if self.factor.is_one() {
            return self.base.apply(p);
        }
        let mut out = NcPoly::zero(p.field());
        for (d, comp) in p.homogeneous_components() {
            let scale = self.factor.pow(-(d as i64)).map_err(FreeAlgError::Field)?;
            out = out.add(&self.base.apply(&comp)?.scale(&scale)?)?;
        }
        Ok(out)
    }

    pub fn compose(&self, other: &ScaledEndo) -> Result<ScaledEndo, AutosError> {
        Ok(ScaledEndo {
            base: self.base.compose(&other.base)?,
            factor: self.factor.mul(&other.factor).map_err(FreeAlgError::Field)?,
        })
    }

    pub fn inverse(&self) -> Result<ScaledEndo, AutosError> {
        Ok(ScaledEndo {
            base: self.base.inverse()?,
            factor: self.factor.inv().map_err(FreeAlgError::Field)?,
        })
    }

    pub fn pow(&self, k: i64) -> Result<ScaledEndo, AutosError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = ScaledEndo::identity(self.algebra().clone());
        for _ in 0..k.unsigned_abs() {
            acc = base.compose(&acc)?;
        }
        Ok(acc)
    }
}

/// What has been verified about a normal element: the normalizing identity
/// on every generator (exact up to the algebra's truncation) and injectivity
/// of both multiplications up to `regularity_bound`.
#[derive(Clone, Debug)]
pub struct NormalityCertificate {
    pub degree_bound: u32,
    pub regularity_bound: u32,
}

/// Report from [`is_regular`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub regular: bool,
    pub certified_bound: u32,
    pub failure: Option<(&'static str, u32)>,
}

/// Whether left and right multiplication by `f` are injective on every
/// slice `A_m` with `m ≤ m_max`.
pub fn is_regular(
    a: &Arc<QuotientAlgebra>,
    f: &NcPoly,
    m_max: u32,
) -> Result<RegularityReport, AutosError> {
    let d = f.homogeneous_degree().ok_or(AutosError::BadElement)?;
    if d + m_max > a.truncation() {
        return Err(AutosError::BoundExceedsTruncation(d + m_max, a.truncation()));
    }
    for m in 0..=m_max {
        let basis = a.basis_of_degree(m)?.to_vec();
        for (side, left) in [("left", true), ("right", false)] {
            let mut rows = Vec::with_capacity(basis.len());
            for w in &basis {
                let wp = NcPoly::monomial(a.field().one(), w.clone());
                let prod = if left { a.mul(f, &wp)? } else { a.mul(&wp, f)? };
                rows.push(a.coords(&prod, m + d)?);
            }
            let mat = MatK::from_rows(rows, a.field());
            if mat.rank() < basis.len() {
                return Ok(RegularityReport {
                    regular: false,
                    certified_bound: m_max,
                    failure: Some((side, m)),
                });
            }
        }
    }
    Ok(RegularityReport { regular: true, certified_bound: m_max, failure: None })
}

/// Solves `x·f = f·u` for each generator `x` over an arbitrary algebra
/// view, returning the generator images of the normalizing map. The
/// multiplication is the view's own, so this works over twisted views too.
pub fn solve_normalizing_images(
    a: &dyn AlgebraView,
    f: &NcPoly,
) -> Result<Vec<NcPoly>, AutosError> {
    let d = f.homogeneous_degree().ok_or(AutosError::BadElement)?;
    let f = a.normal_form(f)?;
    let gens = a.generators().to_vec();
    let mut images = Vec::with_capacity(gens.len());
    for (gi, g) in gens.iter().enumerate() {
        let e = g.degree;
        if e + d > a.truncation() {
            return Err(AutosError::BoundExceedsTruncation(e + d, a.truncation()));
        }
        let basis = a.basis_of_degree(e)?.to_vec();
        // rows of M: coordinates of f·w over the degree-(e+d) basis
        let mut rows = Vec::with_capacity(basis.len());
        for w in &basis {
            let prod = a.mul(&f, &NcPoly::monomial(a.field().one(), w.clone()))?;
            rows.push(a.coords(&prod, e + d)?);
        }
        let m = MatK::from_rows(rows, a.field());
        let x = NcPoly::generator(gi, &gens, a.field());
        let target = a.coords(&a.mul(&x, &f)?, e + d)?;
        let sol = m.solve_left(&target).ok_or_else(|| AutosError::NotNormal(g.name.clone()))?;
        if m.rank() < basis.len() {
            return Err(AutosError::AmbiguousSolution(g.name.clone()));
        }
        let mut img = NcPoly::zero(a.field());
        for (c, w) in sol.into_iter().zip(&basis) {
            img = img.add(&NcPoly::monomial(c, w.clone()))?;
        }
        images.push(img);
    }
    Ok(images)
}

/// Solves `x·f = f·σ(x)` for every generator `x` and assembles the
/// normalizing automorphism, verified by [`check_endo`].
pub fn normalizing_automorphism(
    a: &Arc<QuotientAlgebra>,
    f: &NcPoly,
) -> Result<GradedEndo, AutosError> {
    let images = solve_normalizing_images(a.as_ref(), f)?;
    check_endo(a.clone(), images)
}

/// Runs the generator-normality identities and a regularity sweep, returning
/// the certificate carried by every downstream factorization result.
pub fn certify_normal(
    a: &Arc<QuotientAlgebra>,
    f: &NcPoly,
    sigma: &GradedEndo,
    regularity_bound: u32,
) -> Result<NormalityCertificate, AutosError> {
    let f = a.normal_form(f)?;
    for (gi, g) in a.generators().iter().enumerate() {
        let x = a.generator_poly(gi);
        let lhs = a.mul(&x, &f)?;
        let rhs = a.mul(&f, &sigma.apply(&x)?)?;
        if lhs != rhs {
            return Err(AutosError::NotNormal(g.name.clone()));
        }
    }
    let report = is_regular(a, &f, regularity_bound)?;
    if !report.regular {
        let (side, degree) = report.failure.unwrap();
        return Err(AutosError::NotRegular { side, degree });
    }
    Ok(NormalityCertificate { degree_bound: a.truncation(), regularity_bound })
}
