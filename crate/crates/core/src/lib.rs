//! Exact computations on the Sato Grassmannian: truncated Laurent series,
//! Schur machinery, Plücker coordinates, tau and Baker-Akhiezer functions,
//! the KP and moduli equations, and the Krichever map for superelliptic curves.

pub mod cli;
pub mod error;
pub mod gamma;
pub mod grassmannian;
pub mod identities;
pub mod krichever;
pub mod laurent;
pub mod linalg;
pub mod partitions;
pub mod scalar;
pub mod tau_ba;
pub mod tpoly;

pub use error::{Error, Result};
pub use laurent::LaurentSeries;
pub use scalar::{FieldSpec, Q};
