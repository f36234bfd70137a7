//! Exact-arithmetic engine for twisted matrix factorizations of normal
//! regular elements in connected graded algebras.
//!
//! The crate is organized bottom-up:
//!
//! - [`scalar`]: exact field arithmetic (rationals, prime fields)
//! - [`freealg`]: noncommutative polynomials in a weighted free algebra
//! - [`linalg`]: dense kernels/solving over the scalar field
//! - [`gbasis`]: degree-truncated two-sided Gröbner bases and normal forms
//! - [`autos`]: graded endomorphisms, normality and regularity certification
//! - [`gradedmod`]: graded free modules, homogeneous matrices, degreewise
//!   kernel and minimal-generator computations
//! - [`tmf`]: twisted matrix factorizations, resolutions, periodicity,
//!   morphisms, homotopies, mapping cones
//! - [`resolve`]: minimal free resolutions, Betti tables, syzygy-to-factorization
//!   extraction and the hypersurface pipeline
//! - [`zhang`]: algebraic twisting systems and transport of factorizations
//!   across a Zhang twist
//!
//! All arithmetic is exact; no floating point is used anywhere. Every
//! truncation-sensitive result carries the degree bound under which it is
//! certified.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod autos;
pub mod freealg;
pub mod gbasis;
pub mod gradedmod;
pub mod linalg;
pub mod resolve;
pub mod scalar;
#[cfg(test)]
pub(crate) mod testutil;
pub mod tmf;
pub mod zhang;

pub use autos::{GradedEndo, NormalityCertificate, ScaledEndo};
pub use freealg::{Generator, NcPoly, Word};
pub use gbasis::{AlgebraPresentation, AlgebraView, GroebnerBasis, QuotientAlgebra};
pub use gradedmod::{FreeModule, GradedMatrix};
pub use resolve::{BettiTable, ModulePresentation, ResolutionSegment};
pub use scalar::{FieldSpec, Scalar};
pub use tmf::{Hypersurface, Tmf, TmfMorphism};
pub use zhang::{TwistingSystem, ZhangAlgebra};
