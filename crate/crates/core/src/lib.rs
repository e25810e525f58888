#![cfg_attr(not(test), no_std)]
//! Exact arithmetic for elliptic loops over finite local rings.
//!
//! An elliptic loop `L_{A,B}(R)` is the set of points of `P^2(R)` whose
//! reduction lies on the curve `y^2 = x^3 + A x + B` over the residue field,
//! with the complete `(0:1:0)` addition law. It is a power-associative
//! abelian loop that is almost never a group. This crate provides the ring
//! arithmetic, the loop operations, layers, the associativity criteria and
//! structure computations over `Z/p^eZ`, plus the test batteries used to
//! check them.
//!
//! The crate is `no_std` and only needs `alloc`.

extern crate alloc;

pub mod diagnostics;
pub mod error;
pub mod ring;
pub mod projective;
pub mod residue;
pub mod elliptic_loop;
pub mod group;
pub mod layers;
pub mod structure;

pub use elliptic_loop::{EllipticLoop, LoopPoint};
pub use error::{Error, Result};
pub use group::{CayleyTable, GroupCertificate, Magma};
pub use layers::{stratify, Layer};
pub use projective::ProjPoint;
pub use residue::{ResidueCurve, ResiduePoint};
pub use ring::{Ring, RingElem, RingKind, Valuation};
