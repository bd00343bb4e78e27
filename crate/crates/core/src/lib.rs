//! Extended Hurwitz-Lerch zeta function with a Mittag-Leffler kernel, the
//! extended beta and Gauss hypergeometric functions it is built from, and a
//! harness that checks the integral representations and transforms linking
//! them.

// Reference constants carry all the digits they were computed with, and
// `!(x > 0.0)` is the idiom that also rejects NaN.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod extended_beta;
pub mod extended_hypergeometric;
pub mod hlz;
pub mod identity_lab;
pub mod json;
pub mod mittag_leffler;
pub mod quadrature;
pub mod series;
pub mod special_core;
pub mod value;

pub use error::{Error, Result};
pub use value::Approx;
