//! Directed solid-on-solid model on an `N x N` grid.
//!
//! Heights are i.i.d. draws from an absolutely continuous law conditioned to
//! increase along rows and columns. Rotated by 45 degrees the grid becomes an
//! interlaced particle system on `2N - 1` lines, which for uniform heights is a
//! determinantal process built from Jacobi polynomials.
//!
//! The crate is organised by subsystem:
//!
//! * [`model`]: grids, line systems, height laws, normalization, the joint
//!   density and the brute-force rejection sampler.
//! * [`sampler`]: the exact sampler based on corank-1 projections (Dirichlet
//!   weights plus secular-equation roots).
//! * [`kernel`]: Jacobi polynomials, the finite-`N` correlation kernel, gap
//!   probabilities and max-height densities.
//! * [`shape`]: the deterministic limit surface.
//! * [`edge`]: Airy function, extended Airy kernel, Fredholm determinants,
//!   Tracy-Widom `F2`, edge scaling frames and the corner laws.
//! * [`experiments`]: reproducible Monte Carlo campaigns and file formats.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod edge;
pub mod error;
pub mod experiments;
pub mod kernel;
pub mod model;
pub mod quadrature;
pub mod rng;
pub mod sampler;
pub mod shape;
pub mod stats;

pub use error::{Error, Result};
pub use model::{GridConfig, HeightDistribution, LineSystem, NormalizationConstant};
pub use quadrature::QuadratureRule;
