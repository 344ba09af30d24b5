//! Central tolerance and default-parameter constants.
//!
//! Every threshold used by the library and its verification suite is named
//! here rather than scattered as inline magic numbers.

/// Relative agreement demanded between analytic derivatives and central
/// finite differences (step [`FD_STEP_REL`] · r).
pub const FD_AGREEMENT_REL: f64 = 1e-6;

/// Relative step for finite-difference cross-checks of spatial derivatives.
pub const FD_STEP_REL: f64 = 1e-5;

/// Absolute step for finite differences in the time variable.
pub const FD_TIME_STEP: f64 = 1e-6;

/// Exact-arithmetic identities (trace/determinant of the closed-form
/// eigendecomposition, the perfect-square rewrite of the discriminant).
pub const IDENTITY_REL: f64 = 1e-12;

/// Homogeneity and cubic-scaling checks.
pub const SCALING_REL: f64 = 1e-10;

/// Relative admissibility tolerance: a cross-section report is admissible
/// when its minimum is at least `-ADMISSIBILITY_REL * scale`, where scale is
/// max(1, max |value|). Weights that merely touch zero at the boundary must
/// pass.
pub const ADMISSIBILITY_REL: f64 = 1e-9;

/// Default number of angular grid points; odd so psi = 0 is sampled, and
/// fine enough to resolve the narrow interior dip of the two-parameter
/// weight near its critical angle.
pub const DEFAULT_GRID_N: usize = 4001;

/// Root residual for the implicit second derivative: |expression| at the
/// returned root is at most this times the local cubic scale.
pub const ROOT_RESIDUAL_REL: f64 = 1e-10;

/// Residual bound along an accepted equality-case trajectory, relative to
/// 1 + |f|³.
pub const TRAJECTORY_RESIDUAL_REL: f64 = 1e-8;

/// Width of the event bisection locating the profile zero, in radians.
pub const EVENT_PSI_TOL: f64 = 1e-10;

/// Integration step below which the shot is declared stiff.
pub const MIN_STEP: f64 = 1e-12;

/// Agreement between the cross-section ratio of the polar expression and
/// the symbol-level commutator density.
pub const CROSS_ORACLE_REL: f64 = 1e-8;

/// Poisson-bracket identity tolerance for the limiting weights.
pub const BRACKET_REL: f64 = 1e-8;

/// Laplacian closed form vs. Hessian trace for the limiting weights.
pub const TRACE_REL: f64 = 1e-10;

/// Scaled finite-difference harmonicity residual.
pub const HARMONIC_FD_TOL: f64 = 1e-4;

/// Scaled finite-difference backward-heat residual.
pub const HEAT_FD_TOL: f64 = 1e-3;

/// Default bisection tolerance for angle scans, in degrees.
pub const BISECT_TOL_DEG: f64 = 0.05;

/// Default coefficient of the quadratic time term of the full weight.
pub const DEFAULT_EPSILON: f64 = 1e-3;

/// Default Carleman parameter for pointwise checks.
pub const DEFAULT_TAU: f64 = 1.0;
