//! Exact local equations of the Hilbert scheme of `n + 1` points in affine
//! `n`-space at the point `[<x_1, ..., x_n>^2]`, together with the machinery
//! that checks them along three independent routes.

pub mod based;
pub mod classical;
pub mod dgla;
pub mod error;
pub mod freemod;
pub mod gamma;
pub mod linalg;
pub mod linear;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod span;
pub mod taylor;
pub mod verify;

pub use error::{Error, Result};
