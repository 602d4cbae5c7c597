//! Two-point distortion toolkit for meromorphic maps of the unit disk.
//!
//! Maps are rational (`RationalMap`); derivatives are carried by third-order
//! jets, so Schwarzian derivatives are exact up to rounding. On top of that
//! sit the hyperbolic geometry of the disk, the circle family through two
//! image points and the quartic family used for the Schwarzian bound, the
//! sampling-based covering checks, the inequality reports with their extremal
//! maps, and a small potential-theory lab (finite-difference condenser
//! capacities, walk-on-spheres Green functions, asymptotic formulas).

pub mod capacity;
pub mod covering;
pub mod curves;
pub mod error;
pub mod geometry;
pub mod inequalities;
pub mod jet;
pub mod mobius;
pub mod poly;
pub mod rational;
pub mod report;
pub mod svg;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use jet::Jet3;
pub use mobius::MobiusTransform;
pub use poly::Poly;
pub use rational::{DiskPoint, RationalMap};

/// Shorthand for building a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
