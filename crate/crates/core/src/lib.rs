//! Generalized inverses (Moore-Penrose, Drazin, group, dagger-Drazin) of
//! complex matrices and of quantum channels in superoperator form.
//!
//! Every inverse comes back with the residuals of its defining axioms, and the
//! [`theorems`] module turns the preservation results for trace-preserving and
//! unital channels into executable checks.

pub mod channels;
pub mod error;
pub mod ginv;
pub mod json;
pub mod linalg;
pub mod random;
pub mod theorems;

pub use error::{Error, Result};
pub use linalg::{CMatrix, Tolerances, C64};
