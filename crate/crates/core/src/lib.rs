//! Computational companion for framed McKay quivers and their Nakajima quiver
//! varieties at desk scale.
//!
//! The crate builds character tables and McKay quivers for the finite
//! subgroups of SL(2, C), represents framed preprojective modules in quiver
//! form and in ADHM form, decides stability for parameters given by a
//! positivity set, extracts concentrated modules, evaluates the three-term
//! monad attached to ADHM data, and realises the rank-one correspondence
//! between ADHM data and torus-weighted ideals of `C[x, y]` together with the
//! descent of such ideals to the invariant ring for cyclic groups.

pub mod descent;
pub mod error;
pub mod io;
pub mod linalg;
pub mod mckay;
pub mod monad;
pub mod pi_module;
pub mod poly;
pub mod stability;

pub use error::{Error, Result};
pub use linalg::{Complex, Matrix, Rational, Scalar, Solution, DEFAULT_TOL};
