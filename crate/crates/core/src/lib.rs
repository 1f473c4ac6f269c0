//! Exact lattice-polytope machinery for quasismooth weighted plane curves.
//!
//! A quadruple `(w0, w1, w2, d)` determines the lattice points of the plane
//! `a*w0 + b*w1 + c*w2 = d` in the positive octant. This crate builds that
//! polytope, checks its determinant and interior-point properties, projects
//! it onto a lattice polygon in the plane, and groups quadruples by the affine
//! unimodular class of that polygon.
//!
//! Module map:
//!
//! - [`quadruples`]: validity, weight reduction, genus, enumeration.
//! - [`wpolytope`]: the polytope, its minors, the distinguished triangle.
//! - [`polygon2d`]: hulls, Pick counts, triangulations, canonical forms.
//! - [`classify`]: class atlases, polygon class enumeration, basis changes.
//!
//! All arithmetic is exact. Integer determinants use checked 128-bit
//! arithmetic and rationals are normalized `Ratio<i128>` values.

pub mod arith;
pub mod classify;
pub mod error;
pub mod polygon2d;
pub mod quadruples;
pub mod wpolytope;

pub use error::{Error, Result};
pub use polygon2d::{LatticePolygon, Point2, UnimodularAffineMap};
pub use quadruples::{Quadruple, ValidityReport};
pub use wpolytope::{Point3, WeightedPolytope};

/// Largest degree accepted by enumeration and polytope construction.
pub const D_MAX_CAP: i64 = 200_000;
