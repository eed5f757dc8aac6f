//! Core geometry for hat-based curvature analysis of convex bodies.
//!
//! Everything in this crate is pure computation over immutable values: convex
//! bodies are represented through their support function and a support-point
//! (touching point) query, hats and spherical caps are closed-form membership
//! predicates, and the global searches (Hausdorff distance, sup-excess,
//! indicator bisection) return certified brackets rather than bare floats.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI live
//! in the companion `hatlab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod body;
pub mod curvature;
pub mod error;
pub mod geom;
pub mod hat;
pub mod indicator;
pub mod metric;
pub mod order;
pub mod sampling;
pub mod spheremax;
pub mod spike;

pub use body::ConvexBody;
pub use error::{Error, Result};
pub use geom::Direction;
pub use hat::CapSpec;
