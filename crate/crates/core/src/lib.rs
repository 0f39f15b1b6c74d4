//! Construction, transformation, and verification of symmetric
//! configurations v_k and their equivalent (v,k) modular Golomb rulers.
//!
//! The crate is organised around one equivalence: a circulant v x v 0/1
//! matrix of weight k is the incidence matrix of a cyclic symmetric
//! configuration v_k exactly when its first row is a (v,k) modular Golomb
//! ruler. Around it sit
//!
//! - [`gf`]: finite fields GF(p^m) with discrete-log tables;
//! - [`ruler`]: ruler algebra, bounds, and the exhaustive existence oracle;
//! - [`construct`]: Singer / Bose / Ruzsa rulers, plane incidences, removal
//!   families, and point-orbit constructions;
//! - [`matrix`]: incidence matrices, block double-circulant structure, and
//!   permutation decompositions;
//! - [`extend`]: the extension construction (one new point and line per
//!   step) and the parameter families it generates;
//! - [`spectrum`]: the search orchestrator, witness database, reference
//!   tables, and known-facts registry.

pub mod bits;
pub mod construct;
pub mod error;
pub mod extend;
pub mod gf;
pub mod matrix;
pub mod ruler;
pub mod spectrum;

pub use error::{Error, Result};
