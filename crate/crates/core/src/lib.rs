//! Standing electromagnetic modes wound around a ring.
//!
//! A straight Bessel beam is bent around a circle of radius `ρ₀`, traced on
//! a thin torus and propagated off it with a surface integral. The crate
//! provides the coordinates, special functions, eigenmodes, quadrature,
//! field diagnostics and a JSON job runner needed for this. The book in
//! `book/` walks through each piece.

// negated float comparisons are used on purpose: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coords;
pub mod cyl_modes;
pub mod error;
pub mod field;
pub mod job;
pub mod observables;
pub mod quadrature;
pub mod ring;
pub mod specfun;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/coordinates.md")]
    mod coordinates {}
    #[doc = include_str!("../../../book/src/bessel.md")]
    mod bessel {}
    #[doc = include_str!("../../../book/src/cylindrical-modes.md")]
    mod cylindrical_modes {}
    #[doc = include_str!("../../../book/src/ring-integral.md")]
    mod ring_integral {}
    #[doc = include_str!("../../../book/src/observables.md")]
    mod observables {}
    #[doc = include_str!("../../../book/src/job-files.md")]
    mod job_files {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
