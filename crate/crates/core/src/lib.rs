//! Mixed multiplier ideals of tuples of ideals on rational surface
//! singularities, computed exactly from the dual graph of a log-resolution.
//!
//! Everything is exact: intersection numbers are integers, coefficients and
//! points are arbitrary precision rationals.

pub mod atlas;
pub mod emit;
pub mod engine;
pub mod error;
pub mod fixture;
pub mod graph;
pub mod jump;
pub mod lattice;
pub mod linalg;
pub mod nest;
pub mod polytope;
pub mod rational;
pub mod selftest;
pub mod series;

pub use engine::{Point, Ray, ReducedDivisor};
pub use error::{Error, ErrorKind, Result};
pub use graph::{DualGraph, IdealTuple, QDivisor, SingularityClass, ZDivisor};
