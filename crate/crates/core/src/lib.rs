//! Darboux transformations of discrete polarised curves in the quaternions.
//!
//! Curves live in `H = span{1, i, j, k}` and are carried through `HP¹` by a
//! family of discrete connections. Parallel sections of that family project
//! to Darboux transforms; on closed curves the monodromy decides which ones
//! close. The `smooth` module holds closed forms and an RK4 integrator for
//! the continuous theory, used as an oracle.

// `!(a < b)` is meant to reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod connection;
pub mod curve;
pub mod darboux;
pub mod error;
pub mod homog;
pub mod quat;
pub mod smooth;

pub use connection::{cal_d, gauge, gauged_d, monodromy, transport, Frame, MonodromyMatrix};
pub use curve::{EdgeData, PolarisedCurve};
pub use darboux::{DarbouxResult, MultiplierSpectrum};
pub use error::{Error, Result};
pub use homog::{CMat4, CVec4, HMat2, HVec2, ProjPoint};
pub use num_complex::Complex64;
pub use quat::Quaternion;
