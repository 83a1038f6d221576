//! Constant mean curvature Lorentz rotational surfaces in the neutral
//! pseudo-Euclidean space E⁴₂.
//!
//! The crate builds rotational surfaces of elliptic, hyperbolic and parabolic
//! type from a user-supplied profile function, computes their mean curvature
//! vector both from closed-form frames and from an independent
//! finite-difference oracle, and generates generating curves whose surfaces
//! have `⟨H, H⟩ = ±C²`.
//!
//! Everything here is `no_std` + `alloc`; file formats and the command-line
//! front end live in the `cmc` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod builders;
pub mod curve;
pub mod dsl;
pub mod error;
pub mod generator;
pub mod geometry;
pub mod jet;
pub mod math;
pub mod quadrature;
pub mod reference;
pub mod surface;
pub mod validation;

pub use curve::{GeneratingCurve, RotationType};
pub use dsl::{eval_jet, parse, Constants, Expr, ProfileFunction};
pub use error::{Error, Result};
pub use geometry::{inner, Vec4};
pub use jet::Jet2;
