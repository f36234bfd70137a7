//! Minimal graded free resolutions by degreewise linear algebra, Betti
//! tables, syzygy extraction, lifting a cokernel to a factorization, and
//! the hypersurface syzygy pipeline.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::autos::AutosError;
use crate::freealg::{FreeAlgError, NcPoly};
use crate::gbasis::{AlgebraView, GbError};
use crate::gradedmod::{
    apply_row, is_injective_up_to, kernel_degreewise, minimal_generators, FreeModule,
    GradedMatrix, ModError, SliceBasis,
};
use crate::linalg::MatK;
use crate::tmf::{Hypersurface, Tmf, TmfError};

#[derive(Debug, thiserror::Error)]
pub enum ResolveError {
    #[error("projective dimension exceeds 1 up to internal degree {0}")]
    PdTooLarge(i64),
    #[error("module has a free summand of rank {0}; strip it first")]
    FreeSummandPresent(usize),
    #[error("no syzygy with projective dimension ≤ 1 found within {0} steps")]
    NoEligibleSyzygy(usize),
    #[error("lift solve failed for generator {0}; certificate insufficient")]
    LiftFailed(usize),
    #[error(transparent)]
    Mod(#[from] ModError),
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Autos(#[from] AutosError),
    #[error(transparent)]
    Free(#[from] FreeAlgError),
    #[error("{0}")]
    Tmf(alloc::boxed::Box<TmfError>),
}

impl From<TmfError> for ResolveError {
    fn from(e: TmfError) -> Self {
        ResolveError::Tmf(alloc::boxed::Box::new(e))
    }
}

/// A graded module given by generators and a homogeneous relation matrix
/// (rows are relations, written over the generator module).
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    pub generators: FreeModule,
    pub relations: GradedMatrix,
}

impl ModulePresentation {
    pub fn new(generators: FreeModule, relations: GradedMatrix) -> ModulePresentation {
        assert_eq!(relations.target().degrees(), generators.degrees());
        ModulePresentation { generators, relations }
    }

    /// The zero module.
    pub fn zero(field: crate::scalar::FieldSpec) -> ModulePresentation {
        let empty = FreeModule::new(Vec::new());
        ModulePresentation {
            generators: empty.clone(),
            relations: GradedMatrix::zero(empty.clone(), empty, field),
        }
    }

    /// The trivial module `k` over any connected view: one generator in
    /// degree 0, one relation per algebra generator.
    pub fn trivial_module(view: &dyn AlgebraView) -> ModulePresentation {
        let field = view.field();
        let gens = FreeModule::new(alloc::vec![0]);
        let rel_degrees: Vec<i64> = view.generators().iter().map(|g| g.degree as i64).collect();
        let entries: Vec<NcPoly> =
            (0..view.generators().len()).map(|i| NcPoly::generator(i, view.generators(), field)).collect();
        let relations =
            GradedMatrix::new(view, FreeModule::new(rel_degrees), gens.clone(), entries).unwrap();
        ModulePresentation { generators: gens, relations }
    }

    pub fn is_zero_module(&self) -> bool {
        self.generators.rank() == 0
    }

    /// Eliminates unit entries: a relation with a unit coefficient kills a
    /// generator. Returns the minimalized presentation (no scalar entries
    /// in the relation matrix, no zero relations).
    pub fn minimalize(&self, view: &dyn AlgebraView) -> Result<ModulePresentation, ResolveError> {
        let mut gen_degrees: Vec<i64> = self.generators.degrees().to_vec();
        let mut rel_degrees: Vec<i64> = self.relations.source().degrees().to_vec();
        let mut rows: Vec<Vec<NcPoly>> =
            self.relations.rows().map(|r| r.to_vec()).collect();
        'outer: loop {
            for i in 0..rows.len() {
                for j in 0..gen_degrees.len() {
                    let e = &rows[i][j];
                    if e.is_zero() || e.homogeneous_degree() != Some(0) {
                        continue;
                    }
                    let unit = e.coeff(&crate::freealg::Word::empty()).unwrap().clone();
                    let unit_inv = unit.inv().map_err(crate::scalar::FieldError::from)
                        .map_err(FreeAlgError::Field)?;
                    let pivot_row = rows[i].clone();
                    for i2 in 0..rows.len() {
                        if i2 == i || rows[i2][j].is_zero() {
                            continue;
                        }
                        let coeff = rows[i2][j].scale(&unit_inv)?;
                        for j2 in 0..gen_degrees.len() {
                            if pivot_row[j2].is_zero() {
                                continue;
                            }
                            let sub = view.mul(&coeff, &pivot_row[j2])?;
                            rows[i2][j2] = view.normal_form(&rows[i2][j2].sub(&sub)?)?;
                        }
                    }
                    // remove relation i and generator j
                    rows.remove(i);
                    rel_degrees.remove(i);
                    for r in rows.iter_mut() {
                        r.remove(j);
                    }
                    gen_degrees.remove(j);
                    continue 'outer;
                }
            }
            break;
        }
        // drop zero relations
        let mut kept_rows = Vec::new();
        let mut kept_degrees = Vec::new();
        for (i, r) in rows.into_iter().enumerate() {
            if r.iter().any(|p| !p.is_zero()) {
                kept_rows.push(r);
                kept_degrees.push(rel_degrees[i]);
            }
        }
        let generators = FreeModule::new(gen_degrees);
        let relations = GradedMatrix::new(
            view,
            FreeModule::new(kept_degrees),
            generators.clone(),
            kept_rows.into_iter().flatten().collect(),
        )?;
        Ok(ModulePresentation { generators, relations })
    }
}

/// Removes generators not involved in any relation of the minimalized
/// presentation (each spans a free summand).
pub fn strip_free_summands(
    view: &dyn AlgebraView,
    pres: &ModulePresentation,
) -> Result<(ModulePresentation, usize), ResolveError> {
    let min = pres.minimalize(view)?;
    let involved: Vec<bool> = (0..min.generators.rank())
        .map(|j| min.relations.rows().any(|r| !r[j].is_zero()))
        .collect();
    let stripped = involved.iter().filter(|b| !**b).count();
    if stripped == 0 {
        return Ok((min, 0));
    }
    let gen_degrees: Vec<i64> = min
        .generators
        .degrees()
        .iter()
        .zip(&involved)
        .filter(|(_, keep)| **keep)
        .map(|(d, _)| *d)
        .collect();
    let mut entries = Vec::new();
    for r in min.relations.rows() {
        for (j, p) in r.iter().enumerate() {
            if involved[j] {
                entries.push(p.clone());
            }
        }
    }
    let generators = FreeModule::new(gen_degrees);
    let relations = GradedMatrix::new(
        view,
        min.relations.source().clone(),
        generators.clone(),
        entries,
    )?;
    Ok((ModulePresentation { generators, relations }, stripped))
}

/// A computed stretch of a graded free resolution: `modules[k+1] → modules[k]`
/// via `differentials[k]`, exact and minimal as far as certified.
#[derive(Clone, Debug)]
pub struct ResolutionSegment {
    pub modules: Vec<FreeModule>,
    pub differentials: Vec<GradedMatrix>,
    pub certified_internal_bound: i64,
    pub period: Option<(u32, i64)>,
}

impl ResolutionSegment {
    pub fn steps(&self) -> usize {
        self.differentials.len()
    }

    pub fn betti(&self) -> BettiTable {
        BettiTable {
            steps: self.modules.iter().map(|m| m.sorted_degrees()).collect(),
        }
    }

    /// Certifies exactness at every interior position, slice by slice up to
    /// `t_max`: the kernel dimension of one differential must equal the
    /// image dimension of the next.
    pub fn check_exactness(&self, view: &dyn AlgebraView, t_max: i64) -> Result<bool, ResolveError> {
        for k in 0..self.differentials.len().saturating_sub(1) {
            let dk = &self.differentials[k];
            let dk1 = &self.differentials[k + 1];
            let t_lo = dk.source().degrees().iter().min().copied().unwrap_or(0);
            for t in t_lo..=t_max {
                let mid = SliceBasis::build(view, dk.source().degrees(), t)?;
                if mid.total == 0 {
                    continue;
                }
                let ker_dim = mid.total - slice_rank(view, dk, t)?;
                let im_dim = slice_rank(view, dk1, t)?;
                if ker_dim != im_dim {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn slice_rank(view: &dyn AlgebraView, m: &GradedMatrix, t: i64) -> Result<usize, ResolveError> {
    let src = SliceBasis::build(view, m.source().degrees(), t)?;
    if src.total == 0 {
        return Ok(0);
    }
    let tgt = SliceBasis::build(view, m.target().degrees(), t)?;
    let field = view.field();
    let mut rows = Vec::with_capacity(src.total);
    for (i, w) in src.enumerate() {
        let mut elem = alloc::vec![NcPoly::zero(field); m.source().rank()];
        elem[i] = NcPoly::monomial(field.one(), w.clone());
        let img = apply_row(view, &elem, m)?;
        rows.push(tgt.coords(view, m.target().degrees(), t, &img)?);
    }
    Ok(MatK::from_rows(rows, field).rank())
}

/// Generator-degree multisets per homological step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub steps: Vec<Vec<i64>>,
}

impl BettiTable {
    pub fn ranks(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.len()).collect()
    }
}

impl core::fmt::Display for BettiTable {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            write!(f, "step {i}: rank {} degrees {:?}", s.len(), s)?;
            if i + 1 < self.steps.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Iterated syzygy computation: minimalizes, takes minimal generators of
/// the relation module, then repeatedly computes kernels degree by degree.
/// Stops early when a kernel is empty below the degree bound (the
/// resolution is finite as far as certified).
pub fn minimal_resolution(
    view: &dyn AlgebraView,
    pres: &ModulePresentation,
    h_max: usize,
    t_max: i64,
) -> Result<(ResolutionSegment, BettiTable), ResolveError> {
    let min = pres.minimalize(view)?;
    let mut modules = alloc::vec![min.generators.clone()];
    let mut differentials: Vec<GradedMatrix> = Vec::new();
    if min.generators.rank() > 0 && h_max > 0 {
        let elements: Vec<(i64, Vec<NcPoly>)> = min
            .relations
            .rows()
            .enumerate()
            .map(|(i, r)| (min.relations.source().degrees()[i], r.to_vec()))
            .collect();
        let d1 = minimal_generators(view, &min.generators, elements, t_max)?
            .into_matrix(&min.generators);
        if d1.source().rank() > 0 {
            modules.push(d1.source().clone());
            differentials.push(d1);
            while differentials.len() < h_max {
                let prev = differentials.last().unwrap();
                let ker = kernel_degreewise(view, prev, t_max)?;
                if ker.degrees.is_empty() {
                    break;
                }
                let dk = ker.into_matrix(prev.source());
                modules.push(dk.source().clone());
                differentials.push(dk);
            }
        }
    }
    let segment = ResolutionSegment {
        modules,
        differentials,
        certified_internal_bound: t_max,
        period: None,
    };
    let betti = segment.betti();
    Ok((segment, betti))
}

#[derive(Clone, Debug)]
pub struct PdReport {
    pub holds: bool,
    pub certified_bound: i64,
}

/// Lifts a presentation over the hypersurface quotient to the ambient
/// algebra: same generators, relations are the lifted rows plus `f·eⱼ`.
pub fn lift_to_ambient(
    hs: &Arc<Hypersurface>,
    pres: &ModulePresentation,
) -> Result<ModulePresentation, ResolveError> {
    let aview = hs.algebra().as_ref();
    let field = aview.field();
    let mut rel_degrees: Vec<i64> = pres.relations.source().degrees().to_vec();
    let mut rows: Vec<Vec<NcPoly>> = pres.relations.rows().map(|r| r.to_vec()).collect();
    for (j, &bj) in pres.generators.degrees().iter().enumerate() {
        let mut row = alloc::vec![NcPoly::zero(field); pres.generators.rank()];
        row[j] = hs.element().clone();
        rows.push(row);
        rel_degrees.push(bj + hs.degree());
    }
    let relations = GradedMatrix::new(
        aview,
        FreeModule::new(rel_degrees),
        pres.generators.clone(),
        rows.into_iter().flatten().collect(),
    )?;
    Ok(ModulePresentation { generators: pres.generators.clone(), relations })
}

/// First differential of the minimal ambient resolution of the lifted
/// module: minimal generators of the relation submodule over the ambient
/// algebra.
fn ambient_first_syzygy(
    hs: &Arc<Hypersurface>,
    pres: &ModulePresentation,
    t_max: i64,
) -> Result<GradedMatrix, ResolveError> {
    let aview = hs.algebra().as_ref();
    let lifted = lift_to_ambient(hs, pres)?;
    let elements: Vec<(i64, Vec<NcPoly>)> = lifted
        .relations
        .rows()
        .enumerate()
        .map(|(i, r)| (lifted.relations.source().degrees()[i], r.to_vec()))
        .collect();
    Ok(minimal_generators(aview, &lifted.generators, elements, t_max)?
        .into_matrix(&lifted.generators))
}

/// Whether the module (presented over the quotient) has projective
/// dimension ≤ 1 over the ambient algebra, certified up to `t_max`.
pub fn pd_at_most_one(
    hs: &Arc<Hypersurface>,
    pres: &ModulePresentation,
    t_max: i64,
) -> Result<PdReport, ResolveError> {
    let aview = hs.algebra().as_ref();
    if pres.is_zero_module() {
        return Ok(PdReport { holds: true, certified_bound: t_max });
    }
    let phi = ambient_first_syzygy(hs, pres, t_max)?;
    let holds = is_injective_up_to(aview, &phi, t_max)?;
    Ok(PdReport { holds, certified_bound: t_max })
}

/// Lifts a quotient-module presentation with ambient projective dimension
/// ≤ 1 and no free summand to a reduced twisted matrix factorization with
/// the module as cokernel.
pub fn extract_tmf(
    hs: &Arc<Hypersurface>,
    pres: &ModulePresentation,
    t_max: i64,
) -> Result<Tmf, ResolveError> {
    let bview = hs.quotient().as_ref();
    let aview = hs.algebra().as_ref();
    let field = aview.field();
    if pres.is_zero_module() {
        return Ok(Tmf::irrelevant(hs));
    }
    let (min, stripped) = strip_free_summands(bview, pres)?;
    if stripped > 0 {
        return Err(ResolveError::FreeSummandPresent(stripped));
    }
    if min.is_zero_module() {
        return Ok(Tmf::irrelevant(hs));
    }
    let g_mod = min.generators.clone();
    let d = hs.degree();
    let needed = g_mod.degrees().iter().max().copied().unwrap_or(0) + d;
    let t_bound = t_max.max(needed);
    let phi = ambient_first_syzygy(hs, &min, t_bound)?;
    if !is_injective_up_to(aview, &phi, t_bound)? {
        return Err(ResolveError::PdTooLarge(t_bound));
    }
    // solve τ row by row: τ[i,·]·φ = f·e_i in the ambient algebra
    let f_mod = phi.source().clone();
    let mut tau_entries: Vec<NcPoly> = Vec::with_capacity(g_mod.rank() * f_mod.rank());
    for (i, &bi) in g_mod.degrees().iter().enumerate() {
        let t = bi + d;
        let unknowns = SliceBasis::build(aview, f_mod.degrees(), t)?;
        let tgt_slice = SliceBasis::build(aview, g_mod.degrees(), t)?;
        let mut rows = Vec::with_capacity(unknowns.total);
        for (l, w) in unknowns.enumerate() {
            let mut elem = alloc::vec![NcPoly::zero(field); f_mod.rank()];
            elem[l] = NcPoly::monomial(field.one(), w.clone());
            let img = apply_row(aview, &elem, &phi)?;
            rows.push(tgt_slice.coords(aview, g_mod.degrees(), t, &img)?);
        }
        let mut target_elem = alloc::vec![NcPoly::zero(field); g_mod.rank()];
        target_elem[i] = hs.element().clone();
        let b = tgt_slice.coords(aview, g_mod.degrees(), t, &target_elem)?;
        let mat = MatK::from_rows(rows, field);
        let sol = mat.solve_left(&b).ok_or(ResolveError::LiftFailed(i))?;
        tau_entries.extend(unknowns.element(field, &sol));
    }
    let tau = GradedMatrix::new(aview, g_mod.twist(d), f_mod, tau_entries)?;
    Ok(Tmf::verify(hs, phi, tau)?)
}

/// Outcome of the hypersurface syzygy pipeline.
pub enum PipelineOutcome {
    /// A syzygy of ambient projective dimension ≤ 1 was found at `index`;
    /// its factorization continues the prefix.
    Factorization { prefix: ResolutionSegment, tmf: Tmf, index: usize },
    /// The resolution terminated before any nontrivial factorization
    /// appeared (only trivial factorization data exists).
    FiniteResolution { resolution: ResolutionSegment },
}

/// Resolves the module over the quotient, testing each stripped syzygy for
/// ambient projective dimension ≤ 1; the first success is lifted to a
/// reduced factorization. `dim` is the caller-asserted global dimension of
/// the ambient algebra.
pub fn theorem45_pipeline(
    hs: &Arc<Hypersurface>,
    pres: &ModulePresentation,
    dim: usize,
    t_max: i64,
) -> Result<PipelineOutcome, ResolveError> {
    let bview = hs.quotient().as_ref();
    let mut modules: Vec<FreeModule> = Vec::new();
    let mut differentials: Vec<GradedMatrix> = Vec::new();
    let mut current = pres.minimalize(bview)?;
    modules.push(current.generators.clone());
    for index in 0..=(dim + 1) {
        let (stripped, _count) = strip_free_summands(bview, &current)?;
        if stripped.is_zero_module() {
            // the previous differential closed the resolution
            return Ok(PipelineOutcome::FiniteResolution {
                resolution: ResolutionSegment {
                    modules,
                    differentials,
                    certified_internal_bound: t_max,
                    period: None,
                },
            });
        }
        if pd_at_most_one(hs, &stripped, t_max)?.holds {
            let tmf = extract_tmf(hs, &stripped, t_max)?;
            let prefix = ResolutionSegment {
                modules: modules.clone(),
                differentials: differentials.clone(),
                certified_internal_bound: t_max,
                period: None,
            };
            return Ok(PipelineOutcome::Factorization { prefix, tmf, index });
        }
        // advance one homological step over the quotient
        let elements: Vec<(i64, Vec<NcPoly>)> = current
            .relations
            .rows()
            .enumerate()
            .map(|(i, r)| (current.relations.source().degrees()[i], r.to_vec()))
            .collect();
        let dk = minimal_generators(bview, &current.generators, elements, t_max)?
            .into_matrix(&current.generators);
        if dk.source().rank() == 0 {
            return Ok(PipelineOutcome::FiniteResolution {
                resolution: ResolutionSegment {
                    modules,
                    differentials,
                    certified_internal_bound: t_max,
                    period: None,
                },
            });
        }
        let ker = kernel_degreewise(bview, &dk, t_max)?;
        modules.push(dk.source().clone());
        let next_gens = dk.source().clone();
        differentials.push(dk);
        current = ModulePresentation {
            generators: next_gens.clone(),
            relations: ker.into_matrix(&next_gens),
        };
    }
    Err(ResolveError::NoEligibleSyzygy(dim + 1))
}

/// Splices a resolution prefix with the unrolled factorization resolution.
/// The factorization's cokernel must present the syzygy the prefix stopped
/// at: its target module equals the last prefix module.
pub fn splice(
    prefix: &ResolutionSegment,
    tmf: &Tmf,
    total_steps: usize,
) -> Result<ResolutionSegment, ResolveError> {
    let remaining = total_steps.saturating_sub(prefix.differentials.len());
    let tail = tmf.unroll(remaining)?;
    let mut modules = prefix.modules.clone();
    let mut differentials = prefix.differentials.clone();
    if let Some(last) = modules.last() {
        assert_eq!(last.degrees(), tail.modules[0].degrees(), "splice point mismatch");
    } else {
        modules.push(tail.modules[0].clone());
    }
    for (i, d) in tail.differentials.iter().enumerate() {
        modules.push(tail.modules[i + 1].clone());
        differentials.push(d.clone());
    }
    Ok(ResolutionSegment {
        modules,
        differentials,
        certified_internal_bound: prefix.certified_internal_bound,
        period: tail.period,
    })
}
