//! Positive, homogeneous functions that are constant along the leaves of a
//! foliation of `C^2 \ {0}` by complex curves.
//!
//! The crate is split along the construction:
//!
//! * [`wirtinger`] exact polynomial algebra in `z, z̄, w, w̄` (complex Hessian,
//!   Levi determinant, harmonic-line tests),
//! * [`fields`] polynomial vector fields and the integrability /
//!   transversality / homogeneity checks a field must pass,
//! * [`flows`] adaptive Dormand–Prince integration of the real flows of `V`
//!   and `iV`,
//! * [`charts`] a leaf-space submersion `u` built by projecting along leaves
//!   onto a transversal plane,
//! * [`gauge`] the implicit equation for `T(q)` and the gauge `g = T^-n`,
//! * [`verify`] residual checks turning the expected properties of `g` into
//!   a [`verify::VerificationReport`],
//! * [`corollary`] the pipeline from a Levi-flat homogeneous polynomial to a
//!   verified gauge.
//!
//! The crate is `no_std` (with `alloc`); IO, fixtures and the CLI live in the
//! `leafgauge-cli` companion crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod charts;
pub mod corollary;
mod error;
pub mod fields;
pub mod flows;
pub mod gauge;
mod linalg;
mod math;
mod point;
pub mod verify;
pub mod wirtinger;

pub use crate::error::{Error, ErrorKind, Result};
pub use crate::point::{PointC2, Real4};
pub use num_complex::Complex64;
