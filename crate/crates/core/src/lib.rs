//! Sampling and approximate reconstruction of signals concentrated on an
//! interval `[-L, L]`, living in a shift-invariant reproducing kernel space
//! spanned by (jittered) integer shifts of a Gaussian or a hat function.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is done in
//! coefficient space: a [`Signal`] is a coefficient vector over the basis
//! index range of a [`KernelSpace`], and the preconstruction operator and the
//! reconstruction iterations act on those vectors.
//!
//! Modules:
//! - [`kernel_space`]: generators, Gram matrix and its inverse, the induced
//!   kernel, signal evaluation, norms and Schur-type kernel estimates.
//! - [`sampling`]: interior sampling sets (deterministic gaps and i.i.d.
//!   uniform), exterior grids, Voronoi weights, Hausdorff distances and the
//!   coverage-probability bound.
//! - [`reconstruct`]: preconstruction, the interior-only iteration, the
//!   full-information iteration and error metrics.
//! - [`bounds`]: closed-form evaluators for the stability, error,
//!   probability and sample-size bounds.
//! - [`family`]: the randomized concentrated-signal family and its nominal
//!   concentration ratios.

#![no_std]
#![deny(missing_docs)]

extern crate alloc;

pub mod bounds;
mod error;
pub mod family;
pub mod kernel_space;
pub mod linalg;
pub mod quadrature;
pub mod reconstruct;
pub mod sampling;

pub use error::{Error, Result};
pub use kernel_space::{
    Generator, GeneratorKind, KernelSpace, ProbeGrid, QuadratureSpec, Region, SchurEstimate,
    Signal,
};
pub use reconstruct::{Mode, ReconstructionRun, SampleRecord};
pub use sampling::{Domain1D, ExteriorGrid, SamplingSet};
