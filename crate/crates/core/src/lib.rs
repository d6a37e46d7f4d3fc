//! Geometry, solvers, and verification for moving-sofa shapes.
//!
//! A sofa is the largest region that can be dragged around a right-angle
//! corner in a hallway of unit width. This crate builds such shapes from
//! their rotation paths and checks every number it produces:
//!
//! * [`geometry`]: vectors, frames, convex clipping, and the hallway.
//! * [`ode`]: the six contact regimes a rotation path can be in, their
//!   optimality equations, and closed-form solution families.
//! * [`path`]: rotation paths assembled from solution segments, the four
//!   contact-point formulas, and well-behavedness checks.
//! * [`gerver`]: the five-phase sofa solved from its junction equations,
//!   plus the classic four-equation formulation as a cross-check.
//! * [`ambi`]: the three-phase ambidextrous sofa, its closed forms, and
//!   its area and length.
//! * [`shape`]: swept-intersection construction of the region a path
//!   carves out, boundary attribution, and exact boundary-integral area.
//! * [`algebraic`]: minimal polynomials of the ambidextrous constants and
//!   the sextic curves its boundary segments lie on.
//! * [`report`]: the aggregated verification suite.
//! * [`render`]: SVG, CSV, and JSON artifacts.

pub mod algebraic;
pub mod ambi;
pub mod error;
pub mod geometry;
pub mod gerver;
pub mod numerics;
pub mod ode;
pub mod path;
pub mod render;
pub mod report;
pub mod shape;

pub use error::{Error, Result};
pub use geometry::{frame_at, Frame, Hallway, Polygon, Rotation, Vec2};
pub use ode::{ContactKind, ContactSet, OdeCase, Sol, SolFamily};
pub use path::{ContactPoints, PathSegment, RotationPath, SegmentKind};
pub use shape::{BoundaryAttribution, BuildOptions, SofaShape};
