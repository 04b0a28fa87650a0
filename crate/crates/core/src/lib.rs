//! Involution kernels, dual potentials and Ruelle operators for
//! Walters-family potentials on the binary shift `{0,1}^ℕ`.
//!
//! Points are eventually constant ([`symbolic::Point`]); a potential is four
//! defining sequences ([`potential::WaltersPotential`]). From there the crate
//! evaluates involution kernels in closed form and by series, derives dual
//! potentials, decides symmetry, checks twist and normalization conditions and
//! solves a cylinder discretization of the Ruelle operator.

pub mod dual;
pub mod error;
pub mod kernel;
pub mod normalization;
pub mod potential;
pub mod ruelle;
pub mod sequence;
pub mod spec_file;
pub mod symbolic;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::{BaseSpec, KernelValue};

pub use potential::{classify, PointClass, WaltersPotential};
pub use sequence::{SequenceSpec, TailSum};
pub use symbolic::{BilateralPoint, Point, Symbol, Word};

/// Default tolerance for kernel and dual evaluations.
pub const DEFAULT_TOL: f64 = 1e-10;
