//! Shared fixtures for unit and integration tests: the example algebras and
//! a small expression builder.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::freealg::{Generator, NcPoly, Word};
use crate::gbasis::{AlgebraPresentation, AlgebraView, QuotientAlgebra};
use crate::scalar::FieldSpec;

/// Builds a polynomial from `(coeff, [generator names])` terms.
pub fn poly(q: &QuotientAlgebra, terms: &[(i64, &[&str])]) -> NcPoly {
    poly_in(q.presentation().field, q.generators(), terms)
}

pub fn poly_in(field: FieldSpec, gens: &[Generator], terms: &[(i64, &[&str])]) -> NcPoly {
    let mut p = NcPoly::zero(field);
    for (c, names) in terms {
        let letters: Vec<u8> = names
            .iter()
            .map(|n| gens.iter().position(|g| &g.name == n).expect("unknown generator") as u8)
            .collect();
        let w = Word::from_letters(letters, gens);
        p = p.add(&NcPoly::monomial(field.from_int(*c), w)).unwrap();
    }
    p
}

/// The 3-generator Sklyanin algebra of the examples, over ℚ.
pub fn sklyanin(trunc: u32) -> Arc<QuotientAlgebra> {
    let f = FieldSpec::Rationals;
    let gens = alloc::vec![Generator::new("x", 1), Generator::new("y", 1), Generator::new("z", 1)];
    let pres = AlgebraPresentation::free(f, gens.clone());
    let r1 = poly_in(f, &gens, &[(1, &["y", "z"]), (1, &["z", "y"]), (-1, &["x", "x"])]);
    let r2 = poly_in(f, &gens, &[(1, &["x", "z"]), (1, &["z", "x"]), (-1, &["y", "y"])]);
    let r3 = poly_in(f, &gens, &[(1, &["x", "y"]), (1, &["y", "x"]), (-1, &["z", "z"])]);
    let pres =
        AlgebraPresentation::new(f, pres.generators, alloc::vec![r1, r2, r3]).unwrap();
    QuotientAlgebra::new(pres, trunc).unwrap()
}

/// Central degree-3 element of the Sklyanin algebra, normalized.
pub fn sklyanin_g(a: &QuotientAlgebra) -> NcPoly {
    let p = poly(
        a,
        &[
            (2, &["y", "y", "y"]),
            (2, &["x", "y", "z"]),
            (-2, &["y", "x", "z"]),
            (-2, &["x", "x", "x"]),
        ],
    );
    a.normal_form(&p).unwrap()
}

/// Skew extension of `k[x,y]` by `w` with `w·g = ζ(g)·w`, for
/// `ζ(x) = x + y`, `ζ(y) = q·y`. The weight of `w` is a parameter because
/// the examples use both gradings.
pub fn ore(field: FieldSpec, q_num: i64, q_den: i64, w_degree: u32, trunc: u32) -> Arc<QuotientAlgebra> {
    let gens = alloc::vec![
        Generator::new("x", 1),
        Generator::new("y", 1),
        Generator::new("w", w_degree)
    ];
    let q = field.from_ratio(q_num, q_den).unwrap();
    let scl = field.from_ratio(1, q_den).unwrap();
    let x = NcPoly::generator(0, &gens, field);
    let y = NcPoly::generator(1, &gens, field);
    let w = NcPoly::generator(2, &gens, field);
    // yx − xy, wx − ζ(x)w, wy − ζ(y)w  with ζ(x) = (x+y)/q_den, ζ(y) = q·y
    let r1 = poly_in(field, &gens, &[(1, &["y", "x"]), (-1, &["x", "y"])]);
    let zeta_x = x.add(&y).unwrap().scale(&scl).unwrap();
    let r2 = w.mul(&x).unwrap().sub(&zeta_x.mul(&w).unwrap()).unwrap();
    let r3 = w.mul(&y).unwrap().sub(&y.scale(&q).unwrap().mul(&w).unwrap()).unwrap();
    let pres = AlgebraPresentation::new(field, gens, alloc::vec![r1, r2, r3]).unwrap();
    QuotientAlgebra::new(pres, trunc).unwrap()
}

/// ζ extended to the whole skew extension by ζ(w) = w.
pub fn ore_zeta(a: &Arc<QuotientAlgebra>, q_num: i64, q_den: i64) -> crate::autos::GradedEndo {
    let f = a.field();
    let gens = a.generators();
    let x = NcPoly::generator(0, gens, f);
    let y = NcPoly::generator(1, gens, f);
    let w = NcPoly::generator(2, gens, f);
    let scl = f.from_ratio(1, q_den).unwrap();
    let zeta_x = x.add(&y).unwrap().scale(&scl).unwrap();
    let zeta_y = y.scale(&f.from_ratio(q_num, q_den).unwrap()).unwrap();
    crate::autos::check_endo(a.clone(), alloc::vec![zeta_x, zeta_y, w]).unwrap()
}

/// Enveloping algebra of the 5-dimensional Heisenberg Lie algebra, presented
/// on the four degree-1 generators.
pub fn heisenberg(field: FieldSpec, trunc: u32) -> Arc<QuotientAlgebra> {
    let gens = alloc::vec![
        Generator::new("x1", 1),
        Generator::new("x2", 1),
        Generator::new("y1", 1),
        Generator::new("y2", 1)
    ];
    let pres_gens = gens.clone();
    let comm = |a: &'static str, b: &'static str| {
        poly_in(field, &pres_gens, &[(1, &[a, b]), (-1, &[b, a])])
    };
    let r1 = comm("x1", "x2");
    let r2 = comm("y1", "y2");
    let r3 = comm("x1", "y2");
    let r4 = comm("x2", "y1");
    // [x1,y1] − [x2,y2]
    let r5 = poly_in(
        field,
        &pres_gens,
        &[(1, &["x1", "y1"]), (-1, &["y1", "x1"]), (-1, &["x2", "y2"]), (1, &["y2", "x2"])],
    );
    let pres = AlgebraPresentation::new(field, gens, alloc::vec![r1, r2, r3, r4, r5]).unwrap();
    QuotientAlgebra::new(pres, trunc).unwrap()
}

/// The central element `[x1, y1]` of the Heisenberg enveloping algebra.
pub fn heisenberg_f(a: &QuotientAlgebra) -> NcPoly {
    a.normal_form(&poly(a, &[(1, &["x1", "y1"]), (-1, &["y1", "x1"])])).unwrap()
}

/// Weighted skew algebra with `deg X = deg Z = n`, `deg Y = 2` and relations
/// oriented so the normalizing automorphism of `ω = XZ − q^C(n,2)·Yⁿ` scales
/// `X` by `q^{n²}`:  `YX = q⁻ⁿ·XY`, `ZX = q^{-n²}·XZ`, `ZY = q⁻ⁿ·YZ`.
pub fn invariant_algebra(field: FieldSpec, q_val: i64, n: u32, trunc: u32) -> Arc<QuotientAlgebra> {
    let q = field.from_int(q_val);
    let gens = alloc::vec![
        Generator::new("X", n),
        Generator::new("Y", 2),
        Generator::new("Z", n)
    ];
    let (xx, yy, zz) = (
        NcPoly::generator(0, &gens, field),
        NcPoly::generator(1, &gens, field),
        NcPoly::generator(2, &gens, field),
    );
    let pow = |k: i64| q.pow(k).unwrap();
    let rel = |lhs: &NcPoly, rhs: &NcPoly, c: i64| {
        lhs.sub(&rhs.scale(&pow(c)).unwrap()).unwrap()
    };
    let n = n as i64;
    let r1 = rel(&yy.mul(&xx).unwrap(), &xx.mul(&yy).unwrap(), -n);
    let r2 = rel(&zz.mul(&xx).unwrap(), &xx.mul(&zz).unwrap(), -n * n);
    let r3 = rel(&zz.mul(&yy).unwrap(), &yy.mul(&zz).unwrap(), -n);
    let pres = AlgebraPresentation::new(field, gens, alloc::vec![r1, r2, r3]).unwrap();
    QuotientAlgebra::new(pres, trunc).unwrap()
}

/// `ω = XZ − q^binom(n,2)·Yⁿ` in the orientation of [`invariant_algebra`].
pub fn invariant_omega(a: &QuotientAlgebra, q_val: i64, n: u32) -> NcPoly {
    let field = a.field();
    let q = field.from_int(q_val);
    let gens = a.generators();
    let (xx, yy, zz) = (
        NcPoly::generator(0, gens, field),
        NcPoly::generator(1, gens, field),
        NcPoly::generator(2, gens, field),
    );
    let binom2 = (n as i64) * (n as i64 - 1) / 2;
    let mut yn = NcPoly::one(field);
    for _ in 0..n {
        yn = yn.mul(&yy).unwrap();
    }
    let coeff = q.pow(binom2).unwrap();
    let omega = xx.mul(&zz).unwrap().sub(&yn.scale(&coeff).unwrap()).unwrap();
    a.normal_form(&omega).unwrap()
}

use crate::autos::normalizing_automorphism;
use crate::gradedmod::{FreeModule, GradedMatrix};
use crate::tmf::{Hypersurface, Tmf};

/// Hypersurface context for the skew extension with `f = w²`.
pub fn ore_hypersurface(
    field: FieldSpec,
    q_num: i64,
    q_den: i64,
    w_degree: u32,
    trunc: u32,
) -> (Arc<QuotientAlgebra>, Arc<Hypersurface>) {
    let a = ore(field, q_num, q_den, w_degree, trunc);
    let w = NcPoly::generator(2, a.generators(), field);
    let w2 = a.mul(&w, &w).unwrap();
    let sigma = normalizing_automorphism(&a, &w2).unwrap();
    let hs = Hypersurface::new(a.clone(), &w2, sigma, 3).unwrap();
    (a, hs)
}

/// The 2×2 factorization of `w²`: `φ = [[w, −ζ(x)],[0,w]]`,
/// `τ = [[w, ζ²(x)],[0,w]]`.
pub fn ore_tmf(
    a: &Arc<QuotientAlgebra>,
    hs: &Arc<Hypersurface>,
    q_num: i64,
    q_den: i64,
) -> Tmf {
    let field = a.field();
    let zeta = ore_zeta(a, q_num, q_den);
    let x = a.generator_poly(0);
    let w = a.generator_poly(2);
    let zx = zeta.apply(&x).unwrap();
    let z2x = zeta.apply(&zx).unwrap();
    let m = a.generators()[2].degree as i64;
    let f_mod = FreeModule::new(alloc::vec![m, 2 * m - 1]);
    let g_mod = FreeModule::new(alloc::vec![0, m - 1]);
    let phi = GradedMatrix::new(
        a.as_ref(),
        f_mod.clone(),
        g_mod.clone(),
        alloc::vec![w.clone(), zx.neg(), NcPoly::zero(field), w.clone()],
    )
    .unwrap();
    let tau = GradedMatrix::new(
        a.as_ref(),
        g_mod.twist(2 * m),
        f_mod,
        alloc::vec![w.clone(), z2x, NcPoly::zero(field), w],
    )
    .unwrap();
    Tmf::verify(hs, phi, tau).unwrap()
}

pub fn sklyanin_hypersurface(trunc: u32) -> (Arc<QuotientAlgebra>, Arc<Hypersurface>) {
    let a = sklyanin(trunc);
    let g = sklyanin_g(&a);
    let sigma = normalizing_automorphism(&a, &g).unwrap();
    let hs = Hypersurface::new(a.clone(), &g, sigma, 3).unwrap();
    (a, hs)
}

/// The 4×4 factorization of the central cubic.
pub fn sklyanin_tmf(a: &Arc<QuotientAlgebra>, hs: &Arc<Hypersurface>) -> Tmf {
    let p = |terms: &[(i64, &[&str])]| poly(a, terms);
    let zero: &[(i64, &[&str])] = &[];
    let phi_entries: Vec<NcPoly> = alloc::vec![
        p(&[(1, &["x"])]),
        p(&[(1, &["y"])]),
        p(&[(1, &["z"])]),
        p(zero),
        p(&[(-1, &["y", "z"]), (-2, &["x", "x"])]),
        p(&[(-1, &["y", "x"])]),
        p(&[(1, &["z", "x"]), (-1, &["x", "z"])]),
        p(&[(1, &["x"])]),
        p(&[(1, &["x", "y"]), (-2, &["y", "x"])]),
        p(&[(1, &["x", "z"])]),
        p(&[(-1, &["x", "x"])]),
        p(&[(1, &["y"])]),
        p(&[(-1, &["y", "y"]), (-1, &["z", "x"])]),
        p(&[(1, &["x", "x"])]),
        p(&[(-1, &["x", "y"])]),
        p(&[(1, &["z"])]),
    ];
    let tau_entries: Vec<NcPoly> = alloc::vec![
        p(&[(-1, &["z", "y"])]),
        p(&[(-1, &["x"])]),
        p(&[(1, &["z"])]),
        p(&[(1, &["y"])]),
        p(&[(1, &["z", "x"]), (-1, &["x", "z"])]),
        p(&[(1, &["z"])]),
        p(&[(-1, &["y"])]),
        p(&[(1, &["x"])]),
        p(&[(1, &["x", "y"])]),
        p(&[(1, &["y"])]),
        p(&[(1, &["x"])]),
        p(&[(-1, &["z"])]),
        p(&[(2, &["x", "y", "z"]), (-4, &["x", "x", "x"])]),
        p(&[(-2, &["x", "x"])]),
        p(&[(2, &["y", "y"])]),
        p(&[(2, &["x", "y"]), (-2, &["y", "x"])]),
    ];
    let f_mod = FreeModule::new(alloc::vec![3, 4, 4, 4]);
    let g_mod = FreeModule::new(alloc::vec![2, 2, 2, 3]);
    let phi = GradedMatrix::new(a.as_ref(), f_mod.clone(), g_mod.clone(), phi_entries).unwrap();
    let tau = GradedMatrix::new(a.as_ref(), g_mod.twist(3), f_mod, tau_entries).unwrap();
    Tmf::verify(hs, phi, tau).unwrap()
}

fn binom2(k: i64) -> i64 {
    k * (k - 1) / 2
}

pub fn invariant_hypersurface(
    field: FieldSpec,
    q_val: i64,
    n: u32,
    trunc: u32,
) -> (Arc<QuotientAlgebra>, Arc<Hypersurface>) {
    let a = invariant_algebra(field, q_val, n, trunc);
    let omega = invariant_omega(&a, q_val, n);
    let sigma = normalizing_automorphism(&a, &omega).unwrap();
    let hs = Hypersurface::new(a.clone(), &omega, sigma, 2).unwrap();
    (a, hs)
}

/// The 2×2 factorization of `ω` for the weighted skew algebra, with the
/// scalar powers oriented to match [`invariant_algebra`].
pub fn invariant_tmf(
    a: &Arc<QuotientAlgebra>,
    hs: &Arc<Hypersurface>,
    q_val: i64,
    n: u32,
    j: u32,
) -> Tmf {
    let field = a.field();
    let q = field.from_int(q_val);
    let (n_i, j_i) = (n as i64, j as i64);
    let ypow = |k: u32| -> NcPoly {
        let y = NcPoly::generator(1, a.generators(), field);
        let mut acc = NcPoly::one(field);
        for _ in 0..k {
            acc = acc.mul(&y).unwrap();
        }
        a.normal_form(&acc).unwrap()
    };
    let xx = a.generator_poly(0);
    let zz = a.generator_poly(2);
    let qp = |e: i64| q.pow(e).unwrap();
    // φ-role matrix
    let phi_entries = alloc::vec![
        ypow(n - j).scale(&qp(binom2(n_i - j_i))).unwrap(),
        xx.scale(&qp(-(n_i - j_i) * j_i + n_i * n_i)).unwrap().neg(),
        zz.clone(),
        ypow(j).scale(&qp(-n_i * j_i + binom2(j_i) + n_i * n_i)).unwrap().neg(),
    ];
    // τ-role matrix
    let tau_entries = alloc::vec![
        ypow(j).scale(&qp(binom2(j_i) + j_i * (n_i - j_i))).unwrap().neg(),
        xx,
        zz.scale(&qp((n_i - j_i) * j_i)).unwrap().neg(),
        ypow(n - j).scale(&qp(-(n_i - j_i) * (n_i - j_i) + binom2(n_i - j_i))).unwrap(),
    ];
    let f_mod = FreeModule::new(alloc::vec![2 * n_i - j_i, n_i + j_i]);
    let g_mod = FreeModule::new(alloc::vec![j_i, n_i - j_i]);
    let phi = GradedMatrix::new(a.as_ref(), f_mod.clone(), g_mod.clone(), phi_entries).unwrap();
    let tau =
        GradedMatrix::new(a.as_ref(), g_mod.twist(2 * n_i), f_mod, tau_entries).unwrap();
    Tmf::verify(hs, phi, tau).unwrap()
}

