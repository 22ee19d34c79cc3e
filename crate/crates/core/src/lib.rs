//! Time-like zero mean curvature surfaces in Lorentz–Minkowski 3-space.
//!
//! The crate builds surfaces from para-holomorphic Weierstrass data, computes
//! their fundamental forms and Hopf differentials, classifies chart points
//! (umbilic, quasi-umbilic, positive, negative) and measures the index of
//! curvature line flows at umbilics by winding numbers.
//!
//! Modules, bottom-up:
//!
//! * [`paracomplex`]: split-complex scalars `u + jv` with `j² = 1` and the
//!   idempotent (null-coordinate) decomposition.
//! * [`poly`]: exact rational polynomials in one and two variables.
//! * [`parafunc`]: para-holomorphic functions stored as a pair of real
//!   branches, with jets and split-orders.
//! * [`weierstrass`]: the Weierstrass-type generators and closed-form
//!   fundamental forms.
//! * [`geometry`]: pointwise analysis of an isothermal chart.
//! * [`umbilic`]: split-order based predictions at a base point and the
//!   explicit principal eigenfields.
//! * [`flow`]: winding indices, perpendicular flows and streamlines.
//! * [`spacelike`]: the holomorphic comparison layer for space-like surfaces.
//!
//! Everything here is `no_std` with `alloc`; file formats and the CLI live in
//! the `hopfflow` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod flow;
pub mod geometry;
pub mod paracomplex;
pub mod parafunc;
pub mod poly;
pub mod quadrature;
pub mod spacelike;
pub mod umbilic;
pub mod weierstrass;

pub use error::{Error, Result};
pub use paracomplex::{IdempotentPair, ParaComplex};
pub use parafunc::{ParaFunction, RealBranch, SplitOrder};
pub use poly::{BiPoly, Polynomial, Rational};
