//! Exact-arithmetic toolkit for the intersection cubic forms of complex
//! threefolds.
//!
//! The crate computes, over `Q` and the quadratic cyclotomic fields `Q(i)`
//! and `Q(omega)`:
//!
//! * cubic forms as symmetric trilinear tensors, their Hessian matrices of
//!   linear forms, and exact Hessian ranks ([`cubic`]);
//! * the degree-2 exterior algebra of a complex 3-torus and the resulting
//!   15-variable triple-product cubic ([`exterior`]);
//! * cyclic diagonal group actions on the torus, their induced action on
//!   degree-2 classes, invariant subspaces and quotient cubics
//!   ([`quotient`]);
//! * blow-up transforms of cubic forms and resolution models built from a
//!   quotient cubic plus exceptional self-intersections ([`cubic`],
//!   [`obstruct`]);
//! * a certificate-producing prover showing that the Hessian-rank-at-most-1
//!   locus of a form is trivial, the block-rank classification of candidate
//!   exceptional classes, and the resulting blow-down obstruction verdict
//!   ([`obstruct`]).
//!
//! All arithmetic is exact; there is no floating point in the crate.

pub mod cubic;
pub mod error;
pub mod exterior;
pub mod field;
pub mod linalg;
pub mod obstruct;
pub mod quotient;

pub use cubic::{CubicForm, HessianForm, LinearForm, Point};
pub use error::{Error, Result};
pub use exterior::{abelian_cubic, triple_product, H2Basis, WedgeMonomial};
pub use field::{FieldElem, FieldTag, Rational};
pub use linalg::FieldMatrix;
pub use obstruct::{
    decide_blowdown_obstruction, verify_certificate, CandidateClassification, CertifyOutcome,
    RankCertificate, ResolutionModel, Verdict, VerdictStatus,
};
pub use quotient::{DiagonalAction, InvariantInclusion};

pub use num_bigint::BigInt;
