//! Exact equivariant cohomology and K-theory for finite groups acting on tori
//! cut by periodic hyperplane arrangements.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arrangement;
pub mod blowup;
pub mod bredon;
pub mod crossed;
pub mod cyclo;
pub mod error;
pub mod exactla;
pub mod groups;
pub mod ktheory;
pub mod pipeline;
pub mod presets;
pub mod rational;
pub mod scenario;

pub use error::{Error, Result};
