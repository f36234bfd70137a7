//! Session model: building core objects from parsed statements and
//! serializing them back in normalized form.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};

use tmf_core::autos::{check_endo, normalizing_automorphism, GradedEndo};
use tmf_core::freealg::{Generator, NcPoly, Word};
use tmf_core::gbasis::{AlgebraPresentation, AlgebraView, QuotientAlgebra};
use tmf_core::gradedmod::{FreeModule, GradedMatrix};
use tmf_core::resolve::ModulePresentation;
use tmf_core::scalar::{scalar_to_session_string, FieldSpec, Scalar};
use tmf_core::tmf::{Hypersurface, Tmf, TmfMorphism};

use crate::parser::{Expr, FieldDecl, ModuleSpec, Parser, Stmt, VerifyDirective};

pub struct Session {
    pub field: FieldSpec,
    pub bound: u32,
    pub algebra: Arc<QuotientAlgebra>,
    pub params: BTreeMap<String, Scalar>,
    pub rel_exprs: Vec<NcPoly>,
    pub elems: BTreeMap<String, NcPoly>,
    pub autos: BTreeMap<String, GradedEndo>,
    pub matrices: BTreeMap<String, GradedMatrix>,
    pub tmf_decls: BTreeMap<String, (String, String, String)>,
    pub modules: BTreeMap<String, ModuleSpec>,
    pub morphisms: BTreeMap<String, (String, String, String, String)>,
    pub verifies: Vec<VerifyDirective>,
    hypersurfaces: std::sync::Mutex<BTreeMap<String, Arc<Hypersurface>>>,
}

impl Session {
    pub fn parse(text: &str) -> Result<Session> {
        let stmts = Parser::new(text)?.parse_session().map_err(|e| anyhow!("{e}"))?;
        Session::build(stmts)
    }

    pub fn build(stmts: Vec<Stmt>) -> Result<Session> {
        let mut field: Option<FieldSpec> = None;
        let mut bound: u32 = 8;
        let mut gens: Vec<Generator> = Vec::new();
        let mut params: BTreeMap<String, Scalar> = BTreeMap::new();
        for s in &stmts {
            match s {
                Stmt::Field(FieldDecl::Rationals) => field = Some(FieldSpec::Rationals),
                Stmt::Field(FieldDecl::Prime(p)) => {
                    field = Some(FieldSpec::prime(*p).map_err(|e| anyhow!("{e}"))?)
                }
                Stmt::Bound(n) => bound = *n,
                Stmt::Gens(g) => {
                    for (name, d) in g {
                        if gens.iter().any(|x| &x.name == name) {
                            bail!("duplicate generator `{name}`");
                        }
                        gens.push(Generator::new(name.clone(), *d));
                    }
                }
                _ => {}
            }
        }
        let field = field.ok_or_else(|| anyhow!("session must declare a field"))?;
        for s in &stmts {
            if let Stmt::Param { name, num, den } = s {
                let v = field.from_ratio(*num, *den).map_err(|e| anyhow!("{e}"))?;
                params.insert(name.clone(), v);
            }
        }
        // relations evaluate in the free algebra
        let ctx = EvalCtx { field, gens: &gens, params: &params };
        let mut rel_exprs = Vec::new();
        for s in &stmts {
            if let Stmt::Rel(e) = s {
                let p = ctx.eval(e)?;
                let d = p
                    .homogeneous_degree()
                    .ok_or_else(|| anyhow!("relation is not homogeneous"))?;
                if d < 2 {
                    bail!("relations must have degree at least 2");
                }
                rel_exprs.push(p);
            }
        }
        let pres = AlgebraPresentation::new(field, gens.clone(), rel_exprs.clone())
            .map_err(|e| anyhow!("{e}"))?;
        let algebra = QuotientAlgebra::new(pres, bound).map_err(|e| anyhow!("{e}"))?;

        let mut session = Session {
            field,
            bound,
            algebra,
            params,
            rel_exprs,
            elems: BTreeMap::new(),
            autos: BTreeMap::new(),
            matrices: BTreeMap::new(),
            tmf_decls: BTreeMap::new(),
            modules: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            verifies: Vec::new(),
            hypersurfaces: std::sync::Mutex::new(BTreeMap::new()),
        };
        let gens = session.algebra.generators().to_vec();
        let ctx = EvalCtx { field, gens: &gens, params: &session.params };
        for s in &stmts {
            match s {
                Stmt::Elem { name, expr } => {
                    let p = ctx.eval(expr)?;
                    session.elems.insert(name.clone(), p);
                }
                Stmt::Auto { name, images } => {
                    let mut imgs = vec![NcPoly::zero(field); gens.len()];
                    let mut seen = vec![false; gens.len()];
                    for (g, e) in images {
                        let gi = gens
                            .iter()
                            .position(|x| &x.name == g)
                            .ok_or_else(|| anyhow!("unknown generator `{g}` in auto `{name}`"))?;
                        imgs[gi] = ctx.eval(e)?;
                        seen[gi] = true;
                    }
                    if let Some(missing) = seen.iter().position(|x| !x) {
                        bail!("auto `{name}` is missing an image for `{}`", gens[missing].name);
                    }
                    let endo = check_endo(session.algebra.clone(), imgs)
                        .with_context(|| format!("auto `{name}` is not an automorphism"))?;
                    session.autos.insert(name.clone(), endo);
                }
                Stmt::Matrix { name, rows, cols, rowdeg, coldeg, entries } => {
                    let entry_polys: Result<Vec<NcPoly>> =
                        entries.iter().map(|e| ctx.eval(e)).collect();
                    let m = GradedMatrix::new(
                        session.algebra.as_ref(),
                        FreeModule::new(rowdeg.clone()),
                        FreeModule::new(coldeg.clone()),
                        entry_polys?,
                    )
                    .with_context(|| format!("matrix `{name}` ({rows}×{cols})"))?;
                    session.matrices.insert(name.clone(), m);
                }
                Stmt::TmfDecl { name, phi, tau, f } => {
                    session
                        .tmf_decls
                        .insert(name.clone(), (phi.clone(), tau.clone(), f.clone()));
                }
                Stmt::ModuleDecl { name, spec } => {
                    session.modules.insert(name.clone(), spec.clone());
                }
                Stmt::Morphism { name, source, target, psi_f, psi_g } => {
                    session.morphisms.insert(
                        name.clone(),
                        (source.clone(), target.clone(), psi_f.clone(), psi_g.clone()),
                    );
                }
                Stmt::Verify(v) => session.verifies.push(v.clone()),
                _ => {}
            }
        }
        Ok(session)
    }

    pub fn elem(&self, name: &str) -> Result<&NcPoly> {
        self.elems.get(name).ok_or_else(|| anyhow!("unknown element `{name}`"))
    }

    pub fn auto(&self, name: &str) -> Result<&GradedEndo> {
        self.autos.get(name).ok_or_else(|| anyhow!("unknown automorphism `{name}`"))
    }

    pub fn matrix(&self, name: &str) -> Result<&GradedMatrix> {
        self.matrices.get(name).ok_or_else(|| anyhow!("unknown matrix `{name}`"))
    }

    /// Hypersurface context for a named element, built once: computes the
    /// normalizing automorphism, certifies regularity up to the truncation
    /// allowance, and constructs the quotient.
    pub fn hypersurface(&self, f_name: &str) -> Result<Arc<Hypersurface>> {
        if let Some(hs) = self.hypersurfaces.lock().unwrap().get(f_name) {
            return Ok(hs.clone());
        }
        let f = self.elem(f_name)?.clone();
        let nf = self.algebra.normal_form(&f).map_err(|e| anyhow!("{e}"))?;
        let d = nf
            .homogeneous_degree()
            .ok_or_else(|| anyhow!("element `{f_name}` is not homogeneous"))?;
        let sigma = normalizing_automorphism(&self.algebra, &nf)
            .with_context(|| format!("element `{f_name}` is not normal"))?;
        let reg_bound = (self.bound.saturating_sub(d)).min(4).max(1);
        let hs = Hypersurface::new(self.algebra.clone(), &nf, sigma, reg_bound)
            .map_err(|e| anyhow!("{e}"))?;
        self.hypersurfaces.lock().unwrap().insert(f_name.to_string(), hs.clone());
        Ok(hs)
    }

    /// Builds and verifies a declared factorization.
    pub fn tmf(&self, name: &str) -> Result<Tmf> {
        let (phi, tau, f) = self
            .tmf_decls
            .get(name)
            .ok_or_else(|| anyhow!("unknown factorization `{name}`"))?;
        let hs = self.hypersurface(f)?;
        let phi = self.matrix(phi)?.clone();
        let tau = self.matrix(tau)?.clone();
        Tmf::verify(&hs, phi, tau).map_err(|e| anyhow!("factorization `{name}`: {e}"))
    }

    /// Resolves a module specification over the quotient of the given
    /// hypersurface.
    pub fn module(&self, spec_name: &str, hs: &Arc<Hypersurface>) -> Result<ModulePresentation> {
        let spec = self
            .modules
            .get(spec_name)
            .cloned()
            .or_else(|| (spec_name == "k").then_some(ModuleSpec::Trivial))
            .ok_or_else(|| anyhow!("unknown module `{spec_name}`"))?;
        let bview = hs.quotient().as_ref();
        match spec {
            ModuleSpec::Trivial => Ok(ModulePresentation::trivial_module(bview)),
            ModuleSpec::CokerMatrix(m) => {
                let mat = self.matrix(&m)?;
                let reduced = GradedMatrix::new(
                    bview,
                    mat.source().clone(),
                    mat.target().clone(),
                    mat.entries_vec().to_vec(),
                )
                .map_err(|e| anyhow!("{e}"))?;
                Ok(ModulePresentation::new(mat.target().clone(), reduced))
            }
        }
    }

    pub fn morphism(&self, name: &str) -> Result<TmfMorphism> {
        let (src, tgt, pf, pg) = self
            .morphisms
            .get(name)
            .ok_or_else(|| anyhow!("unknown morphism `{name}`"))?;
        let source = self.tmf(src)?;
        let target = self.tmf(tgt)?;
        let psi_f = self.matrix(pf)?.clone();
        let psi_g = self.matrix(pg)?.clone();
        tmf_core::tmf::verify_morphism(&source, &target, psi_f, psi_g)
            .map_err(|e| anyhow!("morphism `{name}`: {e}"))
    }

    /// Canonical serialized form. Parsing the output reproduces it
    /// byte-identically.
    pub fn serialize(&self) -> String {
        let gens = self.algebra.generators();
        let mut out = String::new();
        match self.field {
            FieldSpec::Rationals => out.push_str("field Q;\n"),
            FieldSpec::Prime(p) => {
                let _ = writeln!(out, "field F{p};");
            }
        }
        let _ = writeln!(out, "bound degree {};", self.bound);
        for (name, v) in &self.params {
            let _ = writeln!(out, "param {name} = {};", scalar_to_session_string(v));
        }
        out.push_str("gens");
        for g in gens {
            let _ = write!(out, " {}:{}", g.name, g.degree);
        }
        out.push_str(";\n");
        for r in &self.rel_exprs {
            let _ = writeln!(out, "rel {};", r.render(gens));
        }
        for (name, p) in &self.elems {
            let _ = writeln!(out, "elem {name} = {};", p.render(gens));
        }
        for (name, e) in &self.autos {
            let _ = writeln!(out, "auto {name} {{");
            for (gi, g) in gens.iter().enumerate() {
                let _ = writeln!(out, "  {} -> {};", g.name, e.images().image(gi).render(gens));
            }
            out.push_str("}\n");
        }
        for (name, m) in &self.matrices {
            let fmt_list = |v: &[i64]| {
                let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("[{}]", items.join(", "))
            };
            let _ = writeln!(
                out,
                "matrix {name} rows {} cols {} rowdeg {} coldeg {} {{",
                m.source().rank(),
                m.target().rank(),
                fmt_list(m.source().degrees()),
                fmt_list(m.target().degrees()),
            );
            for i in 0..m.source().rank() {
                let row: Vec<String> =
                    (0..m.target().rank()).map(|j| m.at(i, j).render(gens)).collect();
                let _ = writeln!(out, "  {};", row.join(", "));
            }
            out.push_str("}\n");
        }
        for (name, (phi, tau, f)) in &self.tmf_decls {
            let _ = writeln!(out, "tmf {name} = ({phi}, {tau}) of {f};");
        }
        for (name, spec) in &self.modules {
            match spec {
                ModuleSpec::Trivial => {
                    let _ = writeln!(out, "module {name} = trivial;");
                }
                ModuleSpec::CokerMatrix(m) => {
                    let _ = writeln!(out, "module {name} = coker {m};");
                }
            }
        }
        for (name, (s, t, pf, pg)) in &self.morphisms {
            let _ = writeln!(out, "morphism {name} : {s} -> {t} {{ F = {pf}; G = {pg}; }}");
        }
        for v in &self.verifies {
            match v {
                VerifyDirective::Tmf(n) => {
                    let _ = writeln!(out, "verify tmf {n};");
                }
                VerifyDirective::Normal { f, expect: None } => {
                    let _ = writeln!(out, "verify normal {f};");
                }
                VerifyDirective::Normal { f, expect: Some(e) } => {
                    let _ = writeln!(out, "verify normal {f} expect {e};");
                }
                VerifyDirective::Regular { f, upto } => {
                    let _ = writeln!(out, "verify regular {f} upto {upto};");
                }
                VerifyDirective::Central { auto, f } => {
                    let _ = writeln!(out, "verify central {auto} {f};");
                }
            }
        }
        out
    }

}

struct EvalCtx<'a> {
    field: FieldSpec,
    gens: &'a [Generator],
    params: &'a BTreeMap<String, Scalar>,
}

impl EvalCtx<'_> {
    fn eval(&self, e: &Expr) -> Result<NcPoly> {
        Ok(match e {
            Expr::Num(n, d) => {
                NcPoly::scalar(self.field.from_ratio(*n, *d).map_err(|e| anyhow!("{e}"))?)
            }
            Expr::Ident(name) => {
                if let Some(gi) = self.gens.iter().position(|g| &g.name == name) {
                    NcPoly::generator(gi, self.gens, self.field)
                } else if let Some(v) = self.params.get(name) {
                    if self.field == FieldSpec::Rationals && matches!(v, Scalar::Fp { .. }) {
                        bail!("parameter `{name}` has no rational value");
                    }
                    NcPoly::scalar(v.clone())
                } else {
                    bail!("unknown name `{name}`");
                }
            }
            Expr::Neg(inner) => self.eval(inner)?.neg(),
            Expr::Add(a, b) => self.eval(a)?.add(&self.eval(b)?).map_err(|e| anyhow!("{e}"))?,
            Expr::Sub(a, b) => self.eval(a)?.sub(&self.eval(b)?).map_err(|e| anyhow!("{e}"))?,
            Expr::Mul(a, b) => self.eval(a)?.mul(&self.eval(b)?).map_err(|e| anyhow!("{e}"))?,
            Expr::Pow(base, exp) => {
                let b = self.eval(base)?;
                if let Some((w, c)) = only_term(&b) {
                    if w.is_empty() {
                        // scalar power, negative exponents allowed
                        return Ok(NcPoly::scalar(
                            c.pow(*exp).map_err(|e| anyhow!("{e}"))?,
                        ));
                    }
                }
                if *exp < 0 {
                    bail!("negative powers are only defined for scalars");
                }
                let mut acc = NcPoly::one(self.field);
                for _ in 0..*exp {
                    acc = acc.mul(&b).map_err(|e| anyhow!("{e}"))?;
                }
                acc
            }
        })
    }
}

fn only_term(p: &NcPoly) -> Option<(&Word, &Scalar)> {
    if p.num_terms() == 1 {
        p.terms().next()
    } else {
        None
    }
}

/// 64-bit FNV-1a of the normalized session text, for report digests.
pub fn digest(text: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in text.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}
