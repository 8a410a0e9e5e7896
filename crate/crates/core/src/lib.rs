//! Numerical ranges and radii of small complex matrices, with the exact
//! machinery for Lie products `[A, B] = AB - BA` of Hermitian matrices and
//! mechanical checks of the maps that preserve them.
//!
//! The crate is `no_std` and only needs `alloc`; the `std` feature forwards
//! `std` to the dependencies. File formats, the CLI and the parallel
//! trial runner live in the `commrange` crate.
//!
//! Module map:
//!
//! * [`matcore`]: dense complex matrices, a complex Jacobi eigensolver,
//!   numeric rank and seeded random sampling.
//! * [`nrange`]: support function, numerical radius, boundary samples and the
//!   spectral fast path for commutator intervals.
//! * [`structure`]: classification of the two-point-spectrum set,
//!   constructive (a)symmetry witnesses, the rank-one projection test and
//!   the 3x3 probe families.
//! * [`maps`]: candidate preserver maps and the randomized preservation check.
//! * [`pauli2`]: the 2x2 Pauli-coordinate picture.

#![no_std]

extern crate alloc;

mod error;
pub mod maps;
pub mod matcore;
pub mod nrange;
pub mod pauli2;
mod prelude;
pub mod structure;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

pub use num_complex::Complex64;
