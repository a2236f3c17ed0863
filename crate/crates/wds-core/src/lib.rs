//! Exact symbolic engine for classical W-algebras of minimal and short
//! nilpotent elements, their λ-brackets, and the generalized
//! Drinfeld–Sokolov hierarchies.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diffpoly;
pub mod hierarchy;
pub mod lie;
pub mod linalg;
pub mod pva;
pub mod scalar;
pub mod walgebra;
