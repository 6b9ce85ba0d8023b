//! Expression language for real functions and sequences.

pub mod domain;
