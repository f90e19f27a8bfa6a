//! Constants, asymptotics and geometric verification for lower bounds on the
//! area of closed convex hypersurfaces in terms of how far a continuous
//! self-map displaces points.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`] – signed log-domain reals, `ln Γ` via the Binet series,
//!   Bernoulli numbers, ball volumes and sphere areas.
//! * [`constants`] – every closed-form constant and the crossing point that
//!   defines the area constant `hₙ`.
//! * [`asymptotics`] – series inversion and the large-`n` formulas, compared
//!   against exact values.
//! * [`geometry`] – analytic bodies, polygons and random polytopes with
//!   intrinsic distances and displacement maps.
//! * [`verify`] – the inequality harness producing [`verify::VerificationRecord`]s.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod constants;
pub mod error;
pub mod geometry;
pub mod io;
pub mod numerics;
pub mod rng;
pub mod verify;

pub use constants::{Branch, ConstantsRow, PalKind};
pub use error::{Error, Result};
pub use numerics::{LogReal, Sign};

/// Version tag carried by every machine-readable output.
pub const SCHEMA_VERSION: u32 = 1;
