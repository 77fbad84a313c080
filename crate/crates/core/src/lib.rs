//! Deciding whether delaying edges of a temporal graph can make every
//! connection demand reachable in time.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod model;
pub mod pathdb;
pub mod reach;
pub mod reductions;
pub mod solvers;
