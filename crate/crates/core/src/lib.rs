#![no_std]
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::should_implement_trait,
    clippy::excessive_precision
)]

extern crate alloc;

pub mod bessel;
pub mod bounds;
pub mod config;
pub mod equivalence;
pub mod error;
pub mod grid;
pub mod integrals;
pub mod order;
pub mod product;
pub mod quad;
pub mod scan;
pub mod special;
pub mod turan;
pub mod verdict;
pub mod wide;

pub use error::{Error, Result};
