//! Geodesic geometry and monotone vector fields on nonpositively curved
//! model spaces, with resolvents and the flow semigroup they generate.
//!
//! The crate provides four complete (CAT(0)) model geometries behind one
//! [`Space`] handle: Euclidean space, the hyperboloid model of hyperbolic
//! space, weighted metric trees, and binary products of these. On top of
//! the geometry it offers:
//!
//! - tangent-cone data at a point: directions, norms, the cone metric and
//!   its inner product ([`tangent`]);
//! - closed convex sets with metric projections ([`convex`]);
//! - monotone vector fields presented through resolvent oracles, built
//!   from convex functionals (proximal maps) or nonexpansive self-maps
//!   (geodesic contractions), plus a catalog of named instances
//!   ([`fields`]);
//! - the resolvent property suite: the resolvent identity, firm
//!   nonexpansiveness profiles, Yosida approximations, continuity in the
//!   step, and both asymptotic limits ([`resolvent`]);
//! - the exponential formula for the flow semigroup with its quantitative
//!   error bound, double-sequence conformance grids, trajectories, and
//!   finite-sample convergence diagnostics ([`semigroup`]).
//!
//! The library is `no_std`-compatible (with `alloc`); enable the `libm`
//! feature instead of `std` for builds without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod convex;
pub mod error;
pub mod fields;
mod math;
mod opt;
pub mod resolvent;
pub mod semigroup;
pub mod space;
pub mod spaces;
pub mod tangent;

pub use convex::{project_convex, set_contains, ConvexSet};
pub use error::{Error, Result};
pub use fields::{
    catalog, complementary_field, field_min_norm, monotonicity_residual, subdifferential_field,
    ConvexFunctional, DomainWitness, MonotoneField, NonexpansiveMap, ZeroSetWitness,
};
pub use resolvent::{
    firm_nonexpansiveness_profile, resolvent, resolvent_continuity_scan,
    resolvent_identity_residual, resolvent_limit_infinity, resolvent_limit_zero, resolvent_scan,
    yosida, yosida_norm, ContinuityRow, LimitReport, LimitRow, ResolventConfig, YosidaVec,
};
pub use semigroup::{
    asymptotic_center, delta_convergence_check, double_seq_bound, double_seq_verify, error_bound,
    exp_formula, semigroup_law_residual, trajectory, DeltaReport, DoubleSeqReport, DoubleSeqRow,
    Trajectory, TrajectoryRow,
};
pub use semigroup::semigroup;
pub use space::{
    AngleMethod, AngleResult, Coords, GeodesicSegment, Point, Space, SpaceKind,
};
pub use spaces::euclidean::Euclidean;
pub use spaces::hyperbolic::Hyperbolic;
pub use spaces::tree::{Tree, TreePt, TreeSpec};
pub use tangent::TangentVec;
