//! High-precision verification laboratory for period trace identities on the
//! modular surface.
//!
//! The library evaluates both sides of an exact identity relating a spectral
//! average Σ_f μ_f(φ)·λ_f(n) over holomorphic Hecke eigenforms, weighted by
//! triple-product periods against a third automorphic function φ, to a
//! geometric expansion over divisor pairs, CM points, and closed geodesics.
//! Each side is computed by independent routes to certified precision so that
//! agreement is evidence and disagreement is diagnosis.
//!
//! Module layout, bottom up:
//! - [`err`]: error type shared across the workspace.
//! - [`prec`]: arbitrary-precision real arithmetic and precision contexts.
//! - [`cplx`]: complex arithmetic with principal branches.
//! - [`arith`]: exact integer number theory (discriminants, characters,
//!   quadratic forms, class data, Pell units).
//! - [`specfun`]: special functions (log Γ, ζ and L-functions, ₂F₁,
//!   Legendre 𝔓, Bessel K) and the orbital integrals O±, I_k.
//! - [`localfactors`]: finite-place factors — local ζ_q/L_q, spectral data
//!   (λ(p), ν_p), the conductor product 𝐁(ν;Δ), the resolvent factor 𝒮_q,
//!   and the residue identity checked closed-form against contour.

// Domain guards are written as negated comparisons on purpose: extended reals
// can be NaN, and "not greater" must reject NaN where "less or equal" would
// not be equivalent.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod cplx;
pub mod err;
#[cfg(test)]
pub(crate) mod fastnum;
pub mod localfactors;
pub mod prec;
pub mod specfun;

pub use cplx::Cplx;
pub use err::{Error, Result};
pub use prec::{PrecisionContext, Real};
