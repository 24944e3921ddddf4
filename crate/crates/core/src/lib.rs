//! Exact arithmetic, explicit hard-matrix constructions and verification
//! tools for depth-d linear circuits.

pub mod budget;
pub mod construct;
pub mod error;
pub mod field;
mod gf2;
pub mod hitting;
pub mod matrix;
pub mod poly;
pub mod prime;
pub mod psd;
pub mod search;
pub mod sidon;
pub mod slc;
pub mod ssdim;

pub use budget::Budget;
pub use error::{Error, Result};
pub use field::{field_arith, ArithOp, FieldDescriptor, FieldElement};
pub use matrix::{ExactMatrix, SparsityReport};
