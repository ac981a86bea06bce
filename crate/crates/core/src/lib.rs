//! Exact-arithmetic certificates for the minimal-vector spherical codes of
//! extremal even unimodular lattices in dimension 32.
//!
//! The pipeline runs bottom-up:
//!
//! - [`gf2codes`] builds or loads a doubly-even self-dual `[32,16,8]` code;
//! - [`lattice32`] lifts it to a lattice by Construction B with doubling and
//!   enumerates the 146880 norm-4 vectors;
//! - [`sphercode`] computes inner-product histograms, distance
//!   distributions and Gegenbauer moments of the rescaled shell;
//! - [`lpcert`] and [`energycert`] check linear-programming bound
//!   polynomials and the Hermite-interpolation energy bound.
//!
//! Everything is exact over [`exactmath::Rational`]; transcendental
//! potentials are the one place where rounded values appear.

pub mod energycert;
pub mod exactmath;
pub mod gegenbauer;
pub mod gf2codes;
pub mod lattice32;
pub mod lpcert;
pub mod sphercode;

pub use exactmath::{FactoredPolynomial, IntervalRegion, Polynomial, Rational};
