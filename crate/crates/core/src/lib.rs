//! Exact p-independence, lambda functions and Lambda-closures for finitely
//! generated subfields of `GF(q)(t1, ..., tn)`, together with loci and
//! t-adic Newton lifting.

pub mod closure;
pub mod error;
pub mod field;
pub mod ff;
pub mod geometry;
pub mod lambda;
pub mod multiindex;
pub mod par;
pub mod parse;
pub mod poly;
pub mod subfield;

pub use error::{Error, Result};
