//! Castability analysis of convex polyhedra.
//!
//! The kernel ([`ConvexPolyhedron`], [`hull`], [`clip`]) supports three
//! analyses: concentric-sphere [`fatness`], [`casting`] through a single
//! facet, and cutting into two castable halves ([`twocast`]). [`bounds`]
//! computes the fatness ratios below which no cut can work, and [`genlab`]
//! builds test inputs.

pub mod bounds;
pub mod casting;
pub mod clip;
pub mod error;
pub mod fatness;
pub mod genlab;
pub mod hull;
pub mod off;
pub mod polyhedron;
pub mod position;
pub mod roots;
pub mod twocast;
pub mod vec3;

pub use casting::{
    castable_faces, direction_lp, CastVerdict, DirectionRegion, Feasibility, Strictness,
};
pub use clip::{clip, CutResult};
pub use error::{Error, Result};
pub use fatness::{annulus_at, best_center, FatnessReport};
pub use hull::build_hull;
pub use polyhedron::{ConvexPolyhedron, Edge, DEFAULT_TOL};
pub use position::{validate_general_position, GeneralPositionReport};
pub use twocast::{search_two_castable, test_cut, CutVerdict, SearchReport, Strategy};
pub use vec3::{Plane, Point3, Vec3};
