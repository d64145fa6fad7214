//! Infinitesimal rigidity of polyhedra and polyhedral frameworks in 3-space.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: surfaces, convexity, dihedral angles, links, projective
//!   maps, tetrahedra from edge lengths.
//! - [`rigidity`]: rigidity matrix, flexes, equilibrium stresses, tensegrity
//!   sign conditions.
//! - [`cauchy`]: sign vectors of flexes, sign-change counting, denting.
//! - [`suspension`]: suspensions, their tensegrity stresses and the scalar
//!   invariant `Lambda`.
//! - [`hessian`]: decompositions into tetrahedra, cone angles and the
//!   Jacobian matrix `Lambda`.
//! - [`io`]: file format, reports, CSV and OFF.
//!
//! All operations are pure functions of immutable inputs.

// `!(x > t)` is used on purpose so that NaN fails every test
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::should_implement_trait)]

pub mod cauchy;
pub mod dual;
pub mod error;
pub mod generate;
pub mod geometry;
pub mod hessian;
pub mod io;
pub mod linalg;
pub mod rigidity;
pub mod suspension;
pub mod tol;

pub use error::{Error, Result};
pub use geometry::{
    classify_convexity, ConvexityClass, ConvexityReport, Point3, PolyhedralSurface, ProjectiveMap, SphericalPolygon,
    TetraLengths,
};
pub use hessian::{Decomposition, LambdaMatrix};
pub use rigidity::{EdgeKind, FlexSpace, Framework, Motion, Stress};
pub use suspension::{CylindricalEquator, LambdaBreakdown, Suspension};
pub use tol::Tolerance;
