//! Symbolic-numeric toolkit for plane webs and foliations.
//!
//! The crate is organized around one pipeline: exact polynomial geometry of
//! foliations on the projective plane (`polycore`, `foliation`), formal web
//! products and their Legendre duals (`webleg`), and certified numerical
//! curvature evaluation on the dual plane (`curvature`). `families` provides
//! the built-in generators the CLI and the verification suite are built on.

pub mod curvature;
pub mod families;
pub mod foliation;
pub mod polycore;
pub mod report;
pub mod rng;
pub mod webleg;
