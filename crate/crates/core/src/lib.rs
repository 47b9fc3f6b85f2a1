//! Enlargements of q-positive sets in finite-dimensional SSD spaces.
//!
//! An SSD space is a real vector space with a symmetric bilinear form
//! `\[.,.\]`; q(b) = \[b,b\]/2 is the induced quadratic form, and a set A is
//! q-positive when q(b - c) >= 0 for all b, c in A (monotone sets in X x X*
//! are the motivating case). This crate provides exact representations of
//! such sets, the Fitzpatrick-type functions attached to them, the lattice of
//! enlargements between the biggest one E^A and the closure of the smallest
//! one, the bijection with representative functions, additivity criteria, and
//! a seeded property-check harness that verifies all of the identities on
//! exactly computable instances.

pub mod additive;
pub mod convex;
pub mod enlarge;
pub mod error;
pub mod fitz;
pub mod harness;
pub mod linalg;
pub mod lp;
pub mod poly;
pub mod report;
pub mod rng;
pub mod sets;
pub mod space;

pub use convex::{ConvexFn, MaxAffine, QuadAffine};
pub use enlarge::Enlargement;
pub use error::{Error, Result};
pub use report::{CheckReport, CheckStatus};
pub use sets::PositiveSet;
pub use space::{SpacePreset, SsdSpace};
