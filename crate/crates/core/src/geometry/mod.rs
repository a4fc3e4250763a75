//! Exact linear programming and integer points of convex regions.

pub mod hull;
pub mod lp;
pub mod region;

pub use hull::{affine_hull, orbit_hull_integer_point, AffineHull, OrbitHullPoint};
pub use lp::{feasible_point, lp_optimize, LinearConstraint, LpResult, Relation};
pub use region::{integer_point, ConvexRegion, GeometryBudget, IntegerPoint, PointOracle, Tri};
