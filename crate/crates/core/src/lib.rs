//! Numerical toolkit for Carleman weight functions on two-dimensional
//! cones: pseudoconvexity verification for radially homogeneous weights,
//! the equality-case shooting problem, the pointwise positivity checks
//! behind the parabolic estimate, limiting weights for the elliptic
//! problem, the small-angle counterexample, and threshold/parameter search.
//!
//! Angles are radians inside the crate and degrees at every external
//! interface. All operations are pure; types are immutable after
//! construction and safe to share across threads.

pub mod checks;
pub mod elliptic;
pub mod error;
pub mod escauriaza;
pub mod export;
pub mod geometry;
pub mod ode;
pub mod profile;
pub mod pseudo;
pub mod search;
pub mod spectrum;
pub mod tol;
pub mod weight;

pub use error::{Error, Result};
pub use geometry::{CartesianPoint, PolarPoint};
pub use profile::AngularProfile;
pub use pseudo::PseudoconvexityReport;
pub use weight::{PolarWeight, WeightFamily};
