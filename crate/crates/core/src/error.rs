//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the weight, check, and search operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Angular coordinate outside the profile's domain.
    #[error("psi = {psi} rad outside the profile domain [-{half_angle}, {half_angle}]")]
    Domain { psi: f64, half_angle: f64 },

    /// Temporal coordinate outside the open interval (0, 1).
    #[error("t = {t} outside the open time interval (0, 1)")]
    TimeDomain { t: f64 },

    /// A scalar parameter violates its admissible range.
    #[error("invalid {name} = {value}: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Evaluation at the cone tip r = 0, where homogeneous weights are singular.
    #[error("weight is singular at r = 0")]
    Singularity,

    /// Point outside the cone of the requested opening angle.
    #[error("point ({x}, {y}) lies outside the cone of half-angle {half_angle} rad")]
    OutsideCone { x: f64, y: f64, half_angle: f64 },

    /// No sign change found for the implicit second derivative.
    #[error("no root of the equality-case expression in [{lo}, {hi}] after window expansion")]
    NoRoot { lo: f64, hi: f64 },

    /// Both bisection endpoints gave the same admissibility verdict.
    #[error("bisection bracket invalid: admissible({lo_deg}°) = admissible({hi_deg}°) = {verdict}")]
    Bracket {
        lo_deg: f64,
        hi_deg: f64,
        verdict: bool,
    },

    /// Gradient too small to define the characteristic-set frame.
    #[error("gradient norm {norm} below 1e-12; characteristic frame undefined")]
    DegenerateGradient { norm: f64 },

    /// Point on the branch cut of a non-integer complex power.
    #[error("point on the branch cut (negative real axis) with non-integer exponent {exponent}")]
    BranchCut { exponent: f64 },

    /// Derivative-free search exhausted its iteration budget.
    #[error("optimizer did not converge within {max_iter} iterations (best margin {best_margin})")]
    Convergence { max_iter: usize, best_margin: f64 },

    /// Malformed tabulated profile data.
    #[error("invalid tabulated profile: {reason}")]
    Tabulation { reason: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
