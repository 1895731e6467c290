//! Exact-arithmetic construction of the lattice vertex algebra of an even
//! positive-definite lattice, together with computational verification of the
//! vertex-algebra axioms and a finite-matrix realization of the automorphism
//! group pieces (torus characters, root exponentials, double-cover lifts, and
//! the Tits group) on graded truncations.
//!
//! Everything is computed over arbitrary-precision rationals and specialized
//! into a chosen coefficient ring at the boundary; no floating point is used
//! anywhere.

pub mod aut;
pub mod cover;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod linalg;
pub mod ring;
pub mod vertex;

pub use error::{Error, Result};
