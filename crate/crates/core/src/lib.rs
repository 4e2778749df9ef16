//! p-modulus of walk families on weighted graphs.
//!
//! A family of walks `Γ` on a graph `G = (V, E, σ)` is measured by the
//! minimum `p`-energy `Σ σ(e) ρ(e)^p` over all edge densities `ρ` that give
//! every walk in the family a `ρ`-length of at least one. The crate computes
//! that quantity with a constraint-generation loop over ρ-shortest walks,
//! certifies it with a Lagrange dual lower bound, and ships the classical
//! graph quantities it generalizes (hop distance, effective conductance,
//! max-flow/min-cut) as independent cross-checks.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the command
//! line front end live in `pmodulus-cli`.
//!
//! ```
//! use pmodulus_core::graph::{Exponent, Graph};
//! use pmodulus_core::family::WalkFamily;
//! use pmodulus_core::solver::{modulus, SolverOptions};
//!
//! // Three parallel two-hop paths between s and t.
//! let g = Graph::from_labeled(
//!     false,
//!     &["s", "a", "b", "c", "t"],
//!     &[("s", "a", 1.0), ("a", "t", 1.0), ("s", "b", 1.0),
//!       ("b", "t", 1.0), ("s", "c", 1.0), ("c", "t", 1.0)],
//! ).unwrap();
//! let fam = WalkFamily::connecting(&g, 0, 4).unwrap();
//! let res = modulus(&g, &fam, Exponent::Finite(2.0), &SolverOptions::default()).unwrap();
//! assert!((res.value - 1.5).abs() < 1e-6);
//! ```
#![no_std]
#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod error;
pub mod family;
pub mod graph;
pub mod oracles;
pub mod solver;

mod math;

pub use error::{Error, Result};
