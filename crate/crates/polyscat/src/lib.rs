//! Scattering patterns of convex polytopes at small wavelength.
//!
//! The crate simulates the modulus of the polytope Fourier transform
//! F_P(s) = integral over P of e^{-i s.x} dx on scan surfaces, rescales it to
//! the field psi whose peaks sit at facet normal directions with heights
//! approaching the facet areas, extracts those peaks, and reconstructs the
//! polytope from the resulting facet-indicator set: exactly for simplices,
//! through a Minkowski sign search plus extended-Gaussian-image algorithms
//! otherwise.
//!
//! Modules follow the pipeline order: [`geometry`] (validated polytopes),
//! [`fourier`] (exact transforms, quadrature oracle, asymptotics), [`scan`]
//! (surfaces, grids, pattern simulation), [`detect`] (peak extraction),
//! [`reconstruct`] (inversion), [`io`] (file formats), [`fixtures`] (named
//! and seeded example bodies).

pub mod detect;
pub mod error;
pub mod fixtures;
pub mod fourier;
pub mod geometry;
pub mod io;
mod linalg;
pub mod reconstruct;
pub mod scan;

pub use error::{Error, Result};
pub use num_complex::Complex64;
