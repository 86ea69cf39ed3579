//! Outer approximations of the positive semidefinite cone.
//!
//! Membership tests for the duals of the diagonally dominant (`DD*`) and
//! scaled diagonally dominant (`SDD*`) cones and for the k-PSD closure,
//! Euclidean projection onto the PSD cone, and tools that compute how far
//! the trace- or norm-normalized slices of `DD*` and `SDD*` can stray from
//! the PSD cone.
//!
//! ```
//! use psdcone::{analysis, constructions, matcore};
//!
//! let worst = constructions::sdd_trace_worst(4).unwrap();
//! let d = matcore::dist_to_psd(&worst).unwrap().distance;
//! assert!((d - 0.5).abs() < 1e-12);
//!
//! let dd = analysis::dd_star_trace_distance_exact(9).unwrap();
//! assert!((dd.value - 1.0).abs() < 1e-9);
//! ```

pub mod analysis;
pub mod cones;
pub mod constructions;
pub mod error;
pub mod matcore;
pub mod textfmt;

pub use error::{Error, Result};
pub use matcore::SymMat;
