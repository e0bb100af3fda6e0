//! Exact computational algebra for the congruence subgroup tower of the
//! unramified rank-3 p-adic unitary group.
//!
//! The crate works entirely over finite quotients: the base ring o/p^m is
//! Z/p^m, and O/p^m is modeled as the Galois ring (Z/p^m)[x]/(x^2 - c) with
//! c the smallest positive quadratic non-residue mod p. On top of that it
//! provides precision-tracked 3x3 matrices with bounded denominators,
//! membership predicates for the subgroups Gamma_n, A_n, B_n and C_n^(k),
//! coset and lattice orbit engines, the Klingen/Iwahori/Bruhat
//! decompositions, and the assembly of exact rational volumes
//! vol(Gamma_n) = p^(3-3n)/(p^3+1), every index certified twice
//! (closed formula against brute-force oracle).
//!
//! All arithmetic is exact; there is no floating point anywhere. The crate
//! is no_std + alloc and every public operation is a pure function of its
//! inputs, so values can be shared freely across threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cohomology;
pub mod decomp;
pub mod error;
pub mod group;
pub mod lattice;
pub mod matrix;
pub mod ring;
pub mod sample;
pub mod volumes;

pub use error::Error;
pub use matrix::{PMatrix, SubgroupId};
pub use ring::{Gr, RingCtx};

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
