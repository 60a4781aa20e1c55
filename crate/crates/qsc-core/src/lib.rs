//! Quasi-symmetric 2-designs of Blokhuis-Haemers type and the binary
//! codes they span.
//!
//! The crate builds the designs from Denniston maximal arcs and the line
//! system of AG(3,q), derives doubly even self-orthogonal codes from
//! their incidence and orbit matrices, verifies the orbit-matrix
//! equations as executable oracles, and bridges projective two-weight
//! codes to strongly regular graphs.
//!
//! Modules follow the pipeline:
//! - [`galois`]: GF(2^m) arithmetic, affine geometries, arcs;
//! - [`design`]: incidence structures, design verification, the
//!   Shrikhande-Raghavarao composition and the Blokhuis-Haemers
//!   construction;
//! - [`f2code`]: codes over prime fields, weight enumeration, predicates;
//! - [`orbit`]: automorphism actions, orbit matrices, their equations,
//!   orbit-matrix codes and the involution search;
//! - [`srg`]: two-weight codes to strongly regular graphs to symmetric
//!   designs.
//!
//! Everything is exact integer arithmetic; there is no floating point in
//! the crate. The hot sweeps run on rayon when the default `parallel`
//! feature is enabled and produce identical results in either mode.

pub mod bits;
pub mod design;
pub mod error;
pub mod exec;
pub mod f2code;
pub mod galois;
pub mod orbit;
pub mod srg;

pub use error::Error;
pub use exec::Execution;

pub type Result<T> = std::result::Result<T, Error>;
