//! Heights, algebraic distances, derivations on projective varieties and
//! algebraic-independence criteria, at desk scale.

pub mod algebraic;
pub mod approx;
pub mod calibrate;
pub mod config;
pub mod criteria;
pub mod derivations;
pub mod error;
pub mod heights;
pub mod jet;
pub mod metric;
pub mod multiplicity;
pub mod num;
pub mod polycore;
pub mod samples;

pub use error::{Error, Result};
