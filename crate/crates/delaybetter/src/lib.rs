//! Std companion to `delaybetter-core`: JSON interchange formats, seeded
//! instance generators, a multi-threaded FES driver and run reports. The
//! `delaybetter` binary is a thin clap front end over these modules.

pub mod format;
pub mod generate;
pub mod parallel;
pub mod report;

pub use delaybetter_core as core;
