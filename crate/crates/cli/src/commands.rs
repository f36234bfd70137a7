//! The command surface: each command runs against a built session and
//! writes verdict records into a report.

use anyhow::{anyhow, Result};

use tmf_core::autos::{is_regular, solve_normalizing_images, AutosError};
use tmf_core::gbasis::AlgebraView;
use tmf_core::resolve::{
    extract_tmf, minimal_resolution, theorem45_pipeline, PipelineOutcome, ResolveError,
};
use tmf_core::tmf::{is_null_homotopic, mapping_cone, TmfError};
use tmf_core::zhang::{
    is_central_in_twist, make_twist_system, sigma_hat, transport_with, zhang_hypersurface,
};

use crate::parser::VerifyDirective;
use crate::report::Report;
use crate::session::Session;

#[derive(Debug, Clone)]
pub enum Command {
    CheckNormal { f: String },
    NormalizingAuto { f: String },
    VerifyTmf { name: String },
    Unroll { name: String, steps: usize },
    Resolve { module: String, f: String, hmax: usize, tmax: i64 },
    Betti { module: String, f: String, hmax: usize, tmax: i64 },
    DetectPeriod { name: String, pmax: u32 },
    ExtractTmf { module: String, f: String, tmax: i64 },
    Pipeline { module: String, f: String, dim: usize, tmax: i64 },
    Zhang { auto: String, f: String, transport: Option<String>, pmax: u32 },
    Cone { psi: String },
    Homotopy { psi: String },
    Roundtrip,
    RunVerifies,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckNormal { .. } => "check-normal",
            Command::NormalizingAuto { .. } => "normalizing-auto",
            Command::VerifyTmf { .. } => "verify-tmf",
            Command::Unroll { .. } => "unroll",
            Command::Resolve { .. } => "resolve",
            Command::Betti { .. } => "betti",
            Command::DetectPeriod { .. } => "detect-period",
            Command::ExtractTmf { .. } => "extract-tmf",
            Command::Pipeline { .. } => "pipeline",
            Command::Zhang { .. } => "zhang",
            Command::Cone { .. } => "cone",
            Command::Homotopy { .. } => "homotopy",
            Command::Roundtrip => "roundtrip",
            Command::RunVerifies => "example-run",
        }
    }
}

/// Runs one command. `Err` means an input error (exit code 3); verdicts,
/// including negative ones, land in the report.
pub fn run_command(session: &Session, cmd: &Command, report: &mut Report) -> Result<()> {
    let bound = session.bound;
    match cmd {
        Command::CheckNormal { f } => {
            let nf = session
                .algebra
                .normal_form(session.elem(f)?)
                .map_err(|e| anyhow!("{e}"))?;
            let d = nf.homogeneous_degree().ok_or_else(|| anyhow!("`{f}` is not homogeneous"))?;
            match solve_normalizing_images(session.algebra.as_ref(), &nf) {
                Ok(images) => {
                    report.verdict("normal", f, true, bound as i64, "x·f = f·σ(x) on generators");
                    let gens = session.algebra.generators();
                    for (gi, img) in images.iter().enumerate() {
                        report.value(
                            &format!("sigma({})", gens[gi].name),
                            img.render(gens),
                        );
                    }
                }
                Err(AutosError::NotNormal(g)) => {
                    report.verdict("normal", f, false, bound as i64, &format!("no solution for {g}"));
                    return Ok(());
                }
                Err(AutosError::AmbiguousSolution(g)) => {
                    report.verdict(
                        "normal",
                        f,
                        false,
                        bound as i64,
                        &format!("solution for {g} is not unique; element not regular"),
                    );
                    return Ok(());
                }
                Err(e) => return Err(anyhow!("{e}")),
            }
            let m_max = bound.saturating_sub(d).min(4);
            let reg = is_regular(&session.algebra, &nf, m_max).map_err(|e| anyhow!("{e}"))?;
            report.verdict(
                "regular",
                f,
                reg.regular,
                m_max as i64,
                &reg.failure
                    .map(|(side, deg)| format!("{side} kernel in degree {deg}"))
                    .unwrap_or_else(|| "injective on certified slices".into()),
            );
            Ok(())
        }
        Command::NormalizingAuto { f } => {
            let hs = session.hypersurface(f)?;
            report.verdict("normalizing-auto", f, true, bound as i64, "automorphism verified");
            let gens = session.algebra.generators();
            let sigma = hs.sigma().base();
            for (gi, g) in gens.iter().enumerate() {
                report.value(&format!("sigma({})", g.name), sigma.images().image(gi).render(gens));
            }
            let order = sigma.order(64).map_err(|e| anyhow!("{e}"))?;
            report.value("order", order);
            Ok(())
        }
        Command::VerifyTmf { name } => {
            match session.tmf(name) {
                Ok(t) => {
                    report.verdict(
                        "tmf.verify",
                        name,
                        true,
                        bound as i64,
                        "tau·phi = f·I and phi^tw·tau = f·I",
                    );
                    report.value("reduced", t.is_reduced());
                    report.value("rank", t.rank());
                }
                Err(e) => {
                    // distinguish genuine verification failure from bad input
                    let msg = format!("{e}");
                    if msg.contains("axiom") || msg.contains("rank") || msg.contains("shape") {
                        report.verdict("tmf.verify", name, false, bound as i64, &msg);
                    } else {
                        return Err(e);
                    }
                }
            }
            Ok(())
        }
        Command::Unroll { name, steps } => {
            let t = session.tmf(name)?;
            let seg = t.unroll(*steps).map_err(|e| anyhow!("{e}"))?;
            report.verdict(
                "unroll.composites-vanish",
                name,
                true,
                seg.certified_internal_bound,
                "consecutive composites reduce to zero",
            );
            report.betti(name, &seg.betti().steps);
            Ok(())
        }
        Command::Resolve { module, f, hmax, tmax } | Command::Betti { module, f, hmax, tmax } => {
            let hs = session.hypersurface(f)?;
            let pres = session.module(module, &hs)?;
            match minimal_resolution(hs.quotient().as_ref(), &pres, *hmax, *tmax) {
                Ok((seg, betti)) => {
                    report.betti(module, &betti.steps);
                    report.verdict(
                        "resolve.minimal",
                        module,
                        true,
                        *tmax,
                        &format!("{} differentials computed", seg.differentials.len()),
                    );
                }
                Err(ResolveError::Mod(tmf_core::gradedmod::ModError::Truncation(t, b))) => {
                    report.truncation_limited(&format!(
                        "internal degree {t} exceeds certified bound {b}"
                    ));
                }
                Err(e) => return Err(anyhow!("{e}")),
            }
            Ok(())
        }
        Command::DetectPeriod { name, pmax } => {
            let t = session.tmf(name)?;
            let found = t.detect_period(*pmax).map_err(|e| anyhow!("{e}"))?;
            report.period(name, found, *pmax);
            match found {
                Some((p, s)) => report.human(format!("period {p}, internal shift {s}")),
                None => report.human(format!("no period found up to {pmax}")),
            }
            Ok(())
        }
        Command::ExtractTmf { module, f, tmax } => {
            let hs = session.hypersurface(f)?;
            let pres = session.module(module, &hs)?;
            match extract_tmf(&hs, &pres, *tmax) {
                Ok(t) => {
                    report.verdict("extract-tmf", module, true, *tmax, "lift verified");
                    report.value("rank", t.rank());
                    report.value("reduced", t.is_reduced());
                    report.value("source_degrees", t.source_module().degrees());
                    report.value("target_degrees", t.target_module().degrees());
                }
                Err(ResolveError::PdTooLarge(b)) => {
                    report.verdict(
                        "extract-tmf",
                        module,
                        false,
                        b,
                        "projective dimension exceeds 1 over the ambient algebra",
                    );
                }
                Err(ResolveError::FreeSummandPresent(r)) => {
                    report.verdict(
                        "extract-tmf",
                        module,
                        false,
                        *tmax,
                        &format!("free summand of rank {r} present"),
                    );
                }
                Err(e) => return Err(anyhow!("{e}")),
            }
            Ok(())
        }
        Command::Pipeline { module, f, dim, tmax } => {
            let hs = session.hypersurface(f)?;
            let pres = session.module(module, &hs)?;
            match theorem45_pipeline(&hs, &pres, *dim, *tmax) {
                Ok(PipelineOutcome::Factorization { prefix, tmf, index }) => {
                    report.verdict(
                        "pipeline.factorization",
                        module,
                        true,
                        *tmax,
                        &format!("syzygy {index} lifts to a reduced factorization"),
                    );
                    report.value("syzygy_index", index);
                    report.value("reduced", tmf.is_reduced());
                    report.betti(module, &prefix.betti().steps);
                }
                Ok(PipelineOutcome::FiniteResolution { resolution }) => {
                    report.verdict(
                        "pipeline.finite-resolution",
                        module,
                        true,
                        *tmax,
                        "resolution terminates; only trivial factorization data exists",
                    );
                    report.betti(module, &resolution.betti().steps);
                }
                Err(ResolveError::NoEligibleSyzygy(n)) => {
                    report.verdict(
                        "pipeline.factorization",
                        module,
                        false,
                        *tmax,
                        &format!("no eligible syzygy within {n} steps"),
                    );
                }
                Err(e) => return Err(anyhow!("{e}")),
            }
            Ok(())
        }
        Command::Zhang { auto, f, transport, pmax } => {
            let zeta = session.auto(auto)?.clone();
            let nf = session
                .algebra
                .normal_form(session.elem(f)?)
                .map_err(|e| anyhow!("{e}"))?;
            let system =
                make_twist_system(&session.algebra, zeta, &nf).map_err(|e| anyhow!("{e}"))?;
            report.value(
                "eigenvalue",
                tmf_core::scalar::scalar_to_session_string(system.eigenvalue()),
            );
            let hat = sigma_hat(&system).map_err(|e| anyhow!("{e}"))?;
            let gens = session.algebra.generators();
            for (gi, g) in gens.iter().enumerate() {
                let img = hat
                    .apply(&session.algebra.generator_poly(gi))
                    .map_err(|e| anyhow!("{e}"))?;
                report.value(&format!("sigma_hat({})", g.name), img.render(gens));
            }
            let central = is_central_in_twist(&system).map_err(|e| anyhow!("{e}"))?;
            report.verdict(
                "zhang.central",
                f,
                central,
                bound as i64,
                "σ̂ is the identity on generators",
            );
            if let Some(tname) = transport {
                let t = session.tmf(tname)?;
                let hs2 = zhang_hypersurface(&system).map_err(|e| anyhow!("{e}"))?;
                match transport_with(&system, &t, &hs2) {
                    Ok(t2) => {
                        report.verdict(
                            "zhang.transport",
                            tname,
                            true,
                            bound as i64,
                            "transported factorization verified over the twist",
                        );
                        let found = t2.detect_period(*pmax).map_err(|e| anyhow!("{e}"))?;
                        report.period(&format!("{tname}^zhang"), found, *pmax);
                    }
                    Err(e) => {
                        report.verdict("zhang.transport", tname, false, bound as i64, &format!("{e}"));
                    }
                }
            }
            Ok(())
        }
        Command::Cone { psi } => {
            let m = session.morphism(psi)?;
            match mapping_cone(&m) {
                Ok((cone, _incl, _proj)) => {
                    report.verdict("cone.verify", psi, true, bound as i64, "cone factorization verified");
                    report.value("rank", cone.rank());
                    report.value("source_degrees", cone.source_module().degrees());
                }
                Err(TmfError::ConeVerification(e)) => {
                    report.verdict("cone.verify", psi, false, bound as i64, &format!("{e}"));
                }
                Err(e) => return Err(anyhow!("{e}")),
            }
            Ok(())
        }
        Command::Homotopy { psi } => {
            let m = session.morphism(psi)?;
            let h = is_null_homotopic(&m).map_err(|e| anyhow!("{e}"))?;
            report.verdict(
                "homotopy.exists",
                psi,
                h.is_some(),
                bound as i64,
                if h.is_some() {
                    "null homotopy found"
                } else {
                    "the homotopy equations are infeasible"
                },
            );
            Ok(())
        }
        Command::Roundtrip => {
            let text = session.serialize();
            let reparsed = Session::parse(&text)?;
            let again = reparsed.serialize();
            report.verdict(
                "session.roundtrip",
                "-",
                text == again,
                bound as i64,
                "serializer is idempotent on normalized sessions",
            );
            Ok(())
        }
        Command::RunVerifies => {
            for v in session.verifies.clone() {
                run_verify_directive(session, &v, report)?;
            }
            Ok(())
        }
    }
}

pub fn run_verify_directive(
    session: &Session,
    v: &VerifyDirective,
    report: &mut Report,
) -> Result<()> {
    let bound = session.bound as i64;
    match v {
        VerifyDirective::Tmf(name) => run_command(
            session,
            &Command::VerifyTmf { name: name.clone() },
            report,
        ),
        VerifyDirective::Normal { f, expect } => {
            run_command(session, &Command::CheckNormal { f: f.clone() }, report)?;
            if let Some(auto_name) = expect {
                let hs = session.hypersurface(f)?;
                let expect_endo = session.auto(auto_name)?;
                let ok = hs.sigma().base() == expect_endo;
                report.verdict(
                    "normal.expected-auto",
                    f,
                    ok,
                    bound,
                    &format!("normalizing automorphism equals `{auto_name}`"),
                );
            }
            Ok(())
        }
        VerifyDirective::Regular { f, upto } => {
            let nf = session
                .algebra
                .normal_form(session.elem(f)?)
                .map_err(|e| anyhow!("{e}"))?;
            let reg = is_regular(&session.algebra, &nf, *upto).map_err(|e| anyhow!("{e}"))?;
            report.verdict(
                "regular",
                f,
                reg.regular,
                *upto as i64,
                &reg.failure
                    .map(|(side, deg)| format!("{side} kernel in degree {deg}"))
                    .unwrap_or_else(|| "injective on certified slices".into()),
            );
            Ok(())
        }
        VerifyDirective::Central { auto, f } => {
            let zeta = session.auto(auto)?.clone();
            let nf = session
                .algebra
                .normal_form(session.elem(f)?)
                .map_err(|e| anyhow!("{e}"))?;
            let system =
                make_twist_system(&session.algebra, zeta, &nf).map_err(|e| anyhow!("{e}"))?;
            let central = is_central_in_twist(&system).map_err(|e| anyhow!("{e}"))?;
            report.verdict("zhang.central", f, central, bound, "σ̂ = id on generators");
            Ok(())
        }
    }
}

