//! Exact computations in monomorphism categories of quiver representations
//! over the rings Z/(p^n).
//!
//! The crate covers linear algebra over Z/(p^n) ([`zpn`]), quivers and their
//! representations ([`quiver`]), Krull–Schmidt decomposition ([`decomp`]), the
//! Mimo approximation ([`mimo`]), p-valuated groups and valuated trees
//! ([`valuated`]), and the indecomposable catalogs for `sub(Z/(p^n))`,
//! `n <= 5`, and for a D₄ quiver over Z/(p²) ([`catalog`]).

pub mod catalog;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod mimo;
pub mod par;
pub mod quiver;
pub mod valuated;
pub mod zpn;

pub use error::{Error, Result};
pub use par::Exec;
pub use zpn::{Partition, RingParams, ZpnMatrix};
