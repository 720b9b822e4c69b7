#![no_std]
#![cfg_attr(docsrs, feature(doc_auto_cfg))]
//! Certificate engine for birational superrigidity of codimension-4 Fano 3-folds.
//!
//! Everything here is exact and allocation-only (`alloc`, no `std`). File formats,
//! the command-line front end and report rendering live in the companion crate.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod blowup;
pub mod candidate;
pub mod exclusion;
pub mod explicit;
pub mod monomial_model;
pub mod rational;
pub mod wps;

pub use rational::Rational;
pub use wps::{residue, well_formed, CoordSet, Coordinate, Monomial, WeightedSpace};
