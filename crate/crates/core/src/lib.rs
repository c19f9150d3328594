//! Tangency dynamics of nested convex bodies.
//!
//! The library provides the geometric transport maps (radial, reciprocal,
//! return and transition operators) for convex bodies nested inside growing
//! domains, the quadratic tangency coefficients and their certificates, the
//! solvable quadratic branching model, logarithmic IFS sampling with
//! dimension estimators, truncated conformal jets, and the Ford-circle /
//! continued-fraction arithmetic, all exercised through reproducible named
//! scenarios.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod geom;
pub mod jets;
pub mod logifs;
pub mod numtheory;
pub mod quadmodel;
pub mod report;
pub mod runner;
pub mod scenario;
pub mod tangency;
pub mod transport;

pub use error::{Error, Result};
pub use geom::{BoundaryCurve, GeodesicFrame, Point, Vec2};
