//! Elliptic-function parametrization of a hyperbolic coaxal pencil of
//! circles, the commutative groups of circle maps it carries, and a
//! Poncelet closure engine built on them.
//!
//! The outer circle is always the unit circle `T`; [`pencil::canonical_frame`]
//! moves an arbitrary disjoint pair there.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod elliptic;
pub mod error;
pub mod pencil;
pub mod poncelet;
pub mod tangent_map;

pub use elliptic::{JacobiTriple, Modulus, QuarterPeriod};
pub use error::{Error, Result};
pub use pencil::{
    canonical_frame, power_of_point, CanonicalFrame, Order, Orientation, OrientedCircle, Pencil,
    PencilParameter, Point, SimilarityTransform,
};
pub use poncelet::{ClosureReport, DiagonalReport, Trajectory};
pub use tangent_map::{CirclePoint, Side, TangencyReport, TangentMap};
