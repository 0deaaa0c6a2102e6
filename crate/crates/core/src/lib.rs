//! Numerical apparatus for isolated singularities of the fractional
//! Lane-Emden equation at the Serrin critical exponent.
//!
//! The crate evaluates the fractional Laplacian `(-Δ)^s` on radial fields
//! with power-log behaviour near the origin, applies the Green operator of
//! the ball, and constructs singular solutions of
//! `(-Δ)^s u = u^{N/(N-2s)}` on a punctured ball by monotone iteration,
//! together with the blow-up diagnostics (leading constant, second-order
//! coefficient, Harnack ratios, barrier checks) that characterise them.
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals
//! go through `libm`. Everything is pure computation: no IO, no global
//! state, no randomness.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod asymptotics;
pub mod err;
pub mod field;
pub mod fraclap;
pub mod green;
pub mod lane_emden;
mod num;
mod linalg;
pub mod quad;
pub mod special;

pub use err::{Error, Result};
pub use field::{InnerTail, Interp, OuterTail, RadialField};
pub use quad::{Estimate, QuadratureSpec};
pub use special::{ExpansionCoeffs, Params};
