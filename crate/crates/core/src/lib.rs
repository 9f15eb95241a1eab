//! Exact construction and verification of prehomogeneous and étale modules
//! for matrix Lie algebras.

pub mod castling;
pub mod error;
pub mod exactmat;
pub mod families;
pub mod liealg;
pub mod rep;

pub use error::{Error, Result};
