//! Radially homogeneous spatial weights phi(r, psi) = r^alpha f(psi) and
//! their exact Cartesian differential geometry.
//!
//! All derivatives are hand-derived closed forms assembled from the profile's
//! (f, f', f''); nothing here differentiates numerically. In the orthonormal
//! polar frame (e_r, e_psi) the gradient and Hessian of r^alpha f are
//!
//! ```text
//! grad = r^(alpha-1) (alpha f, f')
//! hess = r^(alpha-2) [ alpha(alpha-1) f    (alpha-1) f'      ]
//!                    [ (alpha-1) f'        alpha f + f''     ]
//! ```
//!
//! and the Cartesian forms follow by rotating the frame.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CartesianPoint, PolarPoint, SymMat2};
use crate::profile::{AngularProfile, ProfileValues};

/// Value, gradient, and Hessian of a weight at one point, in Cartesian
/// components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightGeometry {
    pub value: f64,
    pub gradient: [f64; 2],
    pub hessian: SymMat2,
}

/// Spatial weight r^alpha f(psi) with 1 < alpha <= 2.
///
/// The upper bound encodes the Gaussian-decay restriction on admissible
/// radial growth; constructors reject alpha > 2.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarWeight {
    alpha: f64,
    profile: AngularProfile,
}

impl PolarWeight {
    pub fn new(alpha: f64, profile: AngularProfile) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::Parameter {
                name: "alpha",
                value: alpha,
                reason: "homogeneity exponent must lie in (1, 2]",
            });
        }
        Ok(Self { alpha, profile })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn profile(&self) -> &AngularProfile {
        &self.profile
    }

    pub fn half_angle(&self) -> f64 {
        self.profile.half_angle()
    }

    fn checked_polar(&self, p: PolarPoint) -> Result<PolarPoint> {
        if p.r == 0.0 {
            return Err(Error::Singularity);
        }
        if !(p.r > 0.0) {
            return Err(Error::Parameter {
                name: "r",
                value: p.r,
                reason: "radius must be positive",
            });
        }
        Ok(p)
    }

    /// phi(r, psi).
    pub fn value_polar(&self, p: PolarPoint) -> Result<f64> {
        let p = self.checked_polar(p)?;
        let v = self.profile.eval(p.psi)?;
        Ok(p.r.powf(self.alpha) * v.f)
    }

    /// |grad phi|² = r^(2 alpha - 2) (alpha² f² + f'²), in closed form.
    pub fn grad_norm_sq_polar(&self, p: PolarPoint) -> Result<f64> {
        let p = self.checked_polar(p)?;
        let v = self.profile.eval(p.psi)?;
        let a = self.alpha;
        Ok(p.r.powf(2.0 * a - 2.0) * (a * a * v.f * v.f + v.fp * v.fp))
    }

    /// Full geometry at a polar point.
    pub fn geometry_polar(&self, p: PolarPoint) -> Result<WeightGeometry> {
        let p = self.checked_polar(p)?;
        let v = self.profile.eval(p.psi)?;
        Ok(self.geometry_from_values(p, v))
    }

    /// Full geometry at a Cartesian point strictly inside the cone.
    pub fn geometry(&self, p: CartesianPoint) -> Result<WeightGeometry> {
        let polar = p.to_polar();
        if polar.r == 0.0 {
            return Err(Error::Singularity);
        }
        if polar.psi.abs() > self.profile.half_angle() {
            return Err(Error::OutsideCone {
                x: p.x,
                y: p.y,
                half_angle: self.profile.half_angle(),
            });
        }
        self.geometry_polar(polar)
    }

    fn geometry_from_values(&self, p: PolarPoint, v: ProfileValues) -> WeightGeometry {
        let a = self.alpha;
        let ra = p.r.powf(a);
        let ra1 = p.r.powf(a - 1.0);
        let ra2 = p.r.powf(a - 2.0);
        let (s, c) = p.psi.sin_cos();

        // polar-frame components
        let grad_r = a * ra1 * v.f;
        let grad_psi = ra1 * v.fp;
        let hess_polar = SymMat2::new(
            a * (a - 1.0) * v.f,
            (a - 1.0) * v.fp,
            a * v.f + v.fpp,
        )
        .scale(ra2);

        WeightGeometry {
            value: ra * v.f,
            gradient: [grad_r * c - grad_psi * s, grad_r * s + grad_psi * c],
            hessian: hess_polar.rotate(c, s),
        }
    }
}

/// Serializable description of the bundled weight families.
///
/// `sverak` is the one-parameter cosine family with the angular exponent tied
/// to alpha; `cospow` frees the second exponent; `poly` is an even polynomial
/// whose constant entry is re-derived from the boundary condition
/// f(theta/2) = 0, so the supplied `coeffs[0]` is a placeholder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum WeightFamily {
    Sverak {
        alpha: f64,
        theta_deg: f64,
    },
    CosPow {
        alpha: f64,
        beta: f64,
        theta_deg: f64,
    },
    Poly {
        alpha: f64,
        coeffs: Vec<f64>,
        theta_deg: f64,
    },
}

impl WeightFamily {
    pub fn theta_deg(&self) -> f64 {
        match self {
            Self::Sverak { theta_deg, .. }
            | Self::CosPow { theta_deg, .. }
            | Self::Poly { theta_deg, .. } => *theta_deg,
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            Self::Sverak { alpha, .. }
            | Self::CosPow { alpha, .. }
            | Self::Poly { alpha, .. } => *alpha,
        }
    }

    /// Same family at a different opening angle.
    pub fn with_theta_deg(&self, theta_deg: f64) -> Self {
        let mut out = self.clone();
        match &mut out {
            Self::Sverak { theta_deg: t, .. }
            | Self::CosPow { theta_deg: t, .. }
            | Self::Poly { theta_deg: t, .. } => *t = theta_deg,
        }
        out
    }

    /// Builds the weight for this family's opening angle.
    pub fn build(&self) -> Result<PolarWeight> {
        let half = crate::geometry::deg_to_rad(self.theta_deg()) / 2.0;
        match self {
            Self::Sverak { alpha, .. } => {
                PolarWeight::new(*alpha, AngularProfile::cos_power(*alpha, half)?)
            }
            Self::CosPow { alpha, beta, .. } => {
                PolarWeight::new(*alpha, AngularProfile::cos_power(*beta, half)?)
            }
            Self::Poly { alpha, coeffs, .. } => {
                if coeffs.len() < 2 {
                    return Err(Error::Parameter {
                        name: "coeffs",
                        value: coeffs.len() as f64,
                        reason: "polynomial family needs at least one non-constant coefficient",
                    });
                }
                let mut c = coeffs.clone();
                // impose f(theta/2) = 0 by eliminating the constant entry
                let u = half * half;
                let mut boundary = 0.0;
                let mut upow = 1.0;
                for ck in c.iter().skip(1) {
                    upow *= u;
                    boundary += ck * upow;
                }
                c[0] = -boundary;
                PolarWeight::new(*alpha, AngularProfile::polynomial(c, half)?)
            }
        }
    }
}

/// Canonical parameter presets for the bundled families.
pub mod presets {
    /// Default homogeneity exponent, just below the Gaussian-decay bound.
    pub const ALPHA_NEAR_TWO: f64 = 1.999999;

    /// Tuned angular exponent of the two-parameter cosine weight.
    pub const COSPOW_BETA: f64 = 2.474917;

    /// Homogeneity exponent of the bundled degree-10 polynomial weight.
    pub const POLY_ALPHA: f64 = 1.99999;

    /// Even-power coefficients of the bundled degree-10 polynomial weight
    /// (the constant entry is re-derived per opening angle).
    pub const POLY_COEFFS: [f64; 6] = [
        0.987609,
        -1.22053,
        0.562108,
        -0.162117,
        0.0481833,
        -0.000001,
    ];
}
