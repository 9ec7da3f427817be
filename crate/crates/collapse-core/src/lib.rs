//! Collapse-noise detectability for mechanical force sensors.
//!
//! The library answers one question: given a mechanical resonator read out
//! continuously at frequency `omega`, how large a spontaneous-collapse rate
//! would be visible above the thermal and measurement noise floors?
//!
//! The pieces:
//! - [`geometry`]: the geometry factor `alpha` that converts a collapse rate
//!   into a force-noise diffusion constant, with exact closed forms, large-size
//!   asymptotics, and a quadrature fallback for arbitrary cuboids, discs,
//!   spheres, and point masses.
//! - [`bounds`]: noise budgets and the smallest detectable collapse rate for
//!   thermally limited and quantum-measurement-limited operation, plus the
//!   gravitational (mass-density blur) variant.
//! - [`sim`]: a stochastic Langevin integrator producing homodyne-style
//!   position records, and force-spectrum inference from those records.
//! - [`spectral`]: Welch periodogram averaging and estimate-vs-model
//!   comparison.

// quadrature nodes and frozen reference values keep their full published digits
#![allow(clippy::excessive_precision)]

pub mod bounds;
pub mod constants;
pub mod error;
pub mod geometry;
pub mod model;
pub mod quad;
pub mod sim;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
