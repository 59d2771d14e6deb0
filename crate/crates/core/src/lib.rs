//! Numerical toolkit for Hankel operators with Besov-class symbols: singular
//! spectra, Besov norms, Lorentz-space extrapolation, Dixmier-trace brackets
//! and non-measurability witnesses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod besov;
pub mod dixmier;
pub mod error;
pub mod hankel;
pub mod lorentz;
pub mod numerics;
pub mod special;
pub mod symbols;
pub mod witness;

pub use error::{Error, Result};
