//! Algebraic twisting systems `ζₙ = ζⁿ`, the twisted algebra `A^ζ` with
//! `x∗y = ζ^{deg y}(x)·y`, its normalizing automorphism
//! `σ̂(a) = c^{−deg a}·σ(ζ^d(a))`, and transport of factorizations across
//! the twist.
//!
//! The twisted algebra shares its graded vector space with the base, so it
//! is represented operationally: normal forms stay the base's, only the
//! multiplication is rerouted. Presenting `A^ζ` by generators and
//! relations is done on demand by [`zhang_relations`].

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::autos::{
    check_endo, AutosError, GradedEndo, NormalityCertificate, ScaledEndo,
};
use crate::freealg::{FreeAlgError, Generator, NcPoly, Word};
use crate::gbasis::{AlgebraPresentation, AlgebraView, GbError, QuotientAlgebra};
use crate::gradedmod::GradedMatrix;
use crate::linalg::RowSpan;
use crate::scalar::{FieldSpec, Scalar};
use crate::tmf::{Hypersurface, Tmf, TmfError};

#[derive(Debug, thiserror::Error)]
pub enum ZhangError {
    #[error("ζ(f) is not a scalar multiple of f")]
    NotEigenvector,
    #[error("ζ does not commute with the normalizing automorphism")]
    DoesNotCommuteWithSigma,
    #[error("σ̂ fails the normalizing identity on generator {0}; this is a bug or a hypothesis violation")]
    VerificationFailed(usize),
    #[error("transported factorization failed verification")]
    TransportVerificationFailed(#[source] alloc::boxed::Box<TmfError>),
    #[error(transparent)]
    Autos(#[from] AutosError),
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Free(#[from] FreeAlgError),
    #[error(transparent)]
    Mod(#[from] crate::gradedmod::ModError),
    #[error("{0}")]
    Tmf(alloc::boxed::Box<TmfError>),
}

impl From<TmfError> for ZhangError {
    fn from(e: TmfError) -> Self {
        ZhangError::Tmf(alloc::boxed::Box::new(e))
    }
}

/// An algebraic twisting system compatible with a normal element: a
/// verified automorphism ζ with `ζ(f) = c·f` and `σζ = ζσ`.
#[derive(Clone)]
pub struct TwistingSystem {
    base: Arc<QuotientAlgebra>,
    zeta: GradedEndo,
    sigma: GradedEndo,
    f: NcPoly,
    c: Scalar,
    d: i64,
}

impl TwistingSystem {
    pub fn base(&self) -> &Arc<QuotientAlgebra> {
        &self.base
    }

    pub fn zeta(&self) -> &GradedEndo {
        &self.zeta
    }

    pub fn sigma(&self) -> &GradedEndo {
        &self.sigma
    }

    pub fn element(&self) -> &NcPoly {
        &self.f
    }

    pub fn eigenvalue(&self) -> &Scalar {
        &self.c
    }

    pub fn degree(&self) -> i64 {
        self.d
    }
}

/// Builds the system: solves `ζ(f) = c·f`, computes the normalizing
/// automorphism of `f`, and checks the commutation `σζ = ζσ` on
/// generators.
pub fn make_twist_system(
    a: &Arc<QuotientAlgebra>,
    zeta: GradedEndo,
    f: &NcPoly,
) -> Result<TwistingSystem, ZhangError> {
    let f = a.normal_form(f)?;
    let d = f.homogeneous_degree().ok_or(ZhangError::NotEigenvector)? as i64;
    let zf = zeta.apply(&f)?;
    // c from the leading coefficients, then exact comparison
    let (lw, lc) = f.leading().ok_or(ZhangError::NotEigenvector)?;
    let zc = zf.coeff(lw).ok_or(ZhangError::NotEigenvector)?;
    let c = zc.div(lc).map_err(crate::scalar::FieldError::from).map_err(FreeAlgError::Field)?;
    if zf != f.scale(&c)? {
        return Err(ZhangError::NotEigenvector);
    }
    let sigma = crate::autos::normalizing_automorphism(a, &f)?;
    let sz = sigma.compose(&zeta)?;
    let zs = zeta.compose(&sigma)?;
    if sz != zs {
        return Err(ZhangError::DoesNotCommuteWithSigma);
    }
    Ok(TwistingSystem { base: a.clone(), zeta, sigma, f, c, d })
}

/// The twisted algebra `A^ζ` as an [`AlgebraView`]: same graded vector
/// space and normal forms, multiplication `x∗y = Σ_m ζ^m(x)·y_m` over the
/// homogeneous components of `y`.
pub struct ZhangAlgebra {
    base: Arc<QuotientAlgebra>,
    zeta_pows: Vec<GradedEndo>, // ζ⁰ … ζ^trunc
}

impl ZhangAlgebra {
    pub fn new(base: Arc<QuotientAlgebra>, zeta: &GradedEndo) -> Result<Arc<ZhangAlgebra>, ZhangError> {
        let trunc = base.truncation();
        let mut zeta_pows = Vec::with_capacity(trunc as usize + 1);
        zeta_pows.push(GradedEndo::identity(base.clone()));
        for m in 1..=trunc {
            let prev = &zeta_pows[(m - 1) as usize];
            zeta_pows.push(zeta.compose(prev)?);
        }
        Ok(Arc::new(ZhangAlgebra { base, zeta_pows }))
    }

    pub fn zeta(&self) -> &GradedEndo {
        &self.zeta_pows[1.min(self.zeta_pows.len() - 1)]
    }

    /// `x ∗ y` in the twisted multiplication.
    pub fn star(&self, x: &NcPoly, y: &NcPoly) -> Result<NcPoly, GbError> {
        self.mul(x, y)
    }
}

impl AlgebraView for ZhangAlgebra {
    fn field(&self) -> FieldSpec {
        self.base.field()
    }

    fn generators(&self) -> &[Generator] {
        self.base.generators()
    }

    fn truncation(&self) -> u32 {
        self.base.truncation()
    }

    fn normal_form(&self, p: &NcPoly) -> Result<NcPoly, GbError> {
        self.base.normal_form(p)
    }

    fn mul(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly, GbError> {
        let mut out = NcPoly::zero(self.field());
        for (m, comp) in self.base.normal_form(b)?.homogeneous_components() {
            if m > self.truncation() {
                return Err(GbError::DegreeExceedsTruncation(m, self.truncation()));
            }
            let twisted =
                self.zeta_pows[m as usize].apply(a).map_err(|_| GbError::ZeroElement);
            let twisted = match twisted {
                Ok(t) => t,
                Err(e) => return Err(e),
            };
            out = out.add(&self.base.mul(&twisted, &comp)?)?;
        }
        self.base.normal_form(&out)
    }

    fn basis_of_degree(&self, n: u32) -> Result<&[Word], GbError> {
        self.base.basis_of_degree(n)
    }

    fn word_index(&self, n: u32) -> Result<&BTreeMap<Word, usize>, GbError> {
        self.base.word_index(n)
    }

    fn base(&self) -> &QuotientAlgebra {
        &self.base
    }
}

/// `σ̂(a) = c^{−deg a}·σ(ζ^d(a))`, verified to normalize `c^d·f` in the
/// twisted multiplication on every generator.
pub fn sigma_hat(system: &TwistingSystem) -> Result<ScaledEndo, ZhangError> {
    let zeta_d = system.zeta.pow(system.d)?;
    let base = system.sigma.compose(&zeta_d)?;
    let hat = ScaledEndo::new(base, system.c.clone());
    // a ∗ f' = f' ∗ σ̂(a) for every generator, with f' = c^d·f
    let view = ZhangAlgebra::new(system.base.clone(), &system.zeta)?;
    let fd = twisted_element(system)?;
    for gi in 0..system.base.generators().len() {
        let x = system.base.generator_poly(gi);
        let lhs = view.mul(&x, &fd)?;
        let rhs = view.mul(&fd, &hat.apply(&x)?)?;
        if lhs != rhs {
            return Err(ZhangError::VerificationFailed(gi));
        }
    }
    Ok(hat)
}

/// The element the transported factorizations factor: `c^d·f`.
pub fn twisted_element(system: &TwistingSystem) -> Result<NcPoly, ZhangError> {
    let cd = system
        .c
        .pow(system.d)
        .map_err(crate::scalar::FieldError::from)
        .map_err(FreeAlgError::Field)?;
    Ok(system.f.scale(&cd)?)
}

/// Whether `f` is central in the twisted algebra, i.e. `σ̂ = id`.
pub fn is_central_in_twist(system: &TwistingSystem) -> Result<bool, ZhangError> {
    Ok(sigma_hat(system)?.is_identity()?)
}

/// The hypersurface context over the twisted algebra: `(A^ζ, c^d·f, σ̂)`
/// with quotient view `(A/(f))^ζ̄`.
pub fn zhang_hypersurface(system: &TwistingSystem) -> Result<Arc<Hypersurface>, ZhangError> {
    let a_view = ZhangAlgebra::new(system.base.clone(), &system.zeta)?;
    let fd = twisted_element(system)?;
    let b = system.base.quotient_by_element(&system.f)?;
    // ζ descends to the quotient since ζ(f) = c·f
    let zeta_bar_images: Result<Vec<NcPoly>, GbError> = system
        .zeta
        .images()
        .images()
        .iter()
        .map(|p| b.normal_form(p))
        .collect();
    let zeta_bar = check_endo(b.clone(), zeta_bar_images?)?;
    let b_view = ZhangAlgebra::new(b, &zeta_bar)?;
    let hat = sigma_hat(system)?;
    let certificate = NormalityCertificate {
        degree_bound: system.base.truncation(),
        regularity_bound: system.base.truncation().saturating_sub(system.d as u32),
    };
    Ok(Hypersurface::from_views(
        a_view as Arc<dyn AlgebraView>,
        b_view as Arc<dyn AlgebraView>,
        fd,
        hat,
        certificate,
    )?)
}

/// Transports a factorization of `f` over the base to a factorization of
/// `c^d·f` over the twisted algebra: column `j` of a matrix passes through
/// `ζ^{−(target degree)_j}` and the τ-component row `i` is scaled by
/// `c^{source degree_i}`. The result must verify; the entry formula is
/// validated by the verifier rather than trusted.
pub fn transport_tmf(system: &TwistingSystem, t: &Tmf) -> Result<Tmf, ZhangError> {
    let hs2 = zhang_hypersurface(system)?;
    transport_with(system, t, &hs2)
}

/// Same as [`transport_tmf`] with a pre-built twisted context.
pub fn transport_with(
    system: &TwistingSystem,
    t: &Tmf,
    hs2: &Arc<Hypersurface>,
) -> Result<Tmf, ZhangError> {
    let view2 = hs2.algebra().as_ref();
    let phi2 = convert_matrix(system, view2, t.phi(), None)?;
    let tau2 = convert_matrix(system, view2, t.tau(), Some(&system.c))?;
    Tmf::verify(hs2, phi2, tau2)
        .map_err(|e| ZhangError::TransportVerificationFailed(alloc::boxed::Box::new(e)))
}

/// Inverse transport: a factorization of `c^d·f` over the twist comes back
/// over the base by the inverse twisting data `(ζ⁻¹, c⁻¹)`.
pub fn transport_back(
    system: &TwistingSystem,
    t: &Tmf,
    base_hs: &Arc<Hypersurface>,
) -> Result<Tmf, ZhangError> {
    let inv_system = TwistingSystem {
        base: system.base.clone(),
        zeta: system.zeta.inverse()?,
        sigma: system.sigma.clone(),
        f: system.f.clone(),
        c: system
            .c
            .inv()
            .map_err(crate::scalar::FieldError::from)
            .map_err(FreeAlgError::Field)?,
        d: system.d,
    };
    let view = base_hs.algebra().as_ref();
    let phi_back = convert_matrix(&inv_system, view, t.phi(), None)?;
    let tau_raw = convert_matrix(&inv_system, view, t.tau(), Some(&inv_system.c))?;
    // the round trip lands on (c⁻¹c)^d·f = f over the base
    Tmf::verify(base_hs, phi_back, tau_raw)
        .map_err(|e| ZhangError::TransportVerificationFailed(alloc::boxed::Box::new(e)))
}

fn convert_matrix(
    system: &TwistingSystem,
    view: &dyn AlgebraView,
    m: &GradedMatrix,
    tau_scaling: Option<&Scalar>,
) -> Result<GradedMatrix, ZhangError> {
    let mut pow_cache: BTreeMap<i64, GradedEndo> = BTreeMap::new();
    let mut entries = Vec::with_capacity(m.source().rank() * m.target().rank());
    for i in 0..m.source().rank() {
        let row_scale = match tau_scaling {
            None => None,
            Some(c) => Some(
                c.pow(m.source().degrees()[i])
                    .map_err(crate::scalar::FieldError::from)
                    .map_err(FreeAlgError::Field)?,
            ),
        };
        for j in 0..m.target().rank() {
            let e = m.at(i, j);
            if e.is_zero() {
                entries.push(e.clone());
                continue;
            }
            let bj = m.target().degrees()[j];
            let z = match pow_cache.get(&(-bj)) {
                Some(z) => z.clone(),
                None => {
                    let z = system.zeta.pow(-bj)?;
                    pow_cache.insert(-bj, z.clone());
                    z
                }
            };
            let mut out = z.apply(e)?;
            if let Some(s) = &row_scale {
                out = out.scale(s)?;
            }
            entries.push(view.normal_form(&out)?);
        }
    }
    Ok(GradedMatrix::new(view, m.source().clone(), m.target().clone(), entries)?)
}

/// Presents the twisted algebra by generators and minimal homogeneous
/// relations up to `up_to`: per degree, the kernel of the free algebra
/// mapping onto `A^ζ` by ∗-evaluation, modulo the ideal generated in lower
/// degrees.
pub fn zhang_relations(
    system: &TwistingSystem,
    up_to: u32,
) -> Result<AlgebraPresentation, ZhangError> {
    let view = ZhangAlgebra::new(system.base.clone(), &system.zeta)?;
    let gens = system.base.generators().to_vec();
    let field = system.base.field();
    let mut relations: Vec<NcPoly> = Vec::new();
    for n in 2..=up_to {
        let words = free_words_of_degree(&gens, n);
        let index: BTreeMap<Word, usize> =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        // span of u·r·v over already-found relations, inside the free slice
        let mut lower = RowSpan::new(words.len(), field);
        for r in &relations {
            let rd = r.homogeneous_degree().unwrap();
            for du in 0..=(n - rd) {
                for u in free_words_of_degree(&gens, du) {
                    for v in free_words_of_degree(&gens, n - rd - du) {
                        let prod = r.sandwich(&field.one(), &u, &v)?;
                        let mut vec = alloc::vec![field.zero(); words.len()];
                        for (w, c) in prod.terms() {
                            vec[index[w]] = c.clone();
                        }
                        lower.insert(&vec);
                    }
                }
            }
        }
        // evaluation matrix: free slice → A_n via ∗
        let dim_target = view.dim_of_degree(n)?;
        let mut eval_rows: Vec<Vec<Scalar>> = Vec::with_capacity(words.len());
        for w in &words {
            let mut acc = NcPoly::one(field);
            for &l in w.letters() {
                let g = NcPoly::generator(l as usize, &gens, field);
                acc = view.mul(&acc, &g)?;
            }
            eval_rows.push(view.coords(&acc, n)?);
        }
        let eval = crate::linalg::MatK::from_rows(eval_rows, field);
        let _ = dim_target;
        let mut t = crate::linalg::MatK::zero(eval.cols, eval.rows, field);
        for i in 0..eval.rows {
            for j in 0..eval.cols {
                t.set(j, i, eval.at(i, j).clone());
            }
        }
        for kernel_vec in t.nullspace() {
            let rem = lower.reduce(&kernel_vec);
            let Some(pivot) = rem.iter().position(|c| !c.is_zero()) else {
                continue;
            };
            let inv = rem[pivot].inv().unwrap();
            let mut rel = NcPoly::zero(field);
            for (k, c) in rem.iter().enumerate() {
                if !c.is_zero() {
                    rel = rel.add(&NcPoly::monomial(c.mul(&inv).unwrap(), words[k].clone()))?;
                }
            }
            lower.insert(&rem.iter().map(|c| c.mul(&inv).unwrap()).collect::<Vec<_>>());
            relations.push(rel);
        }
    }
    Ok(AlgebraPresentation::new(field, gens, relations)?)
}

fn free_words_of_degree(gens: &[Generator], n: u32) -> Vec<Word> {
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
