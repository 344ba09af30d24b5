//! The parabolic pseudoconvexity condition in both of its equivalent forms:
//! the homogeneous cubic differential expression in (f, f', f''), and the
//! symbol-level commutator density built from the weight's gradient and
//! Hessian spectrum.
//!
//! For a weight r^alpha f(psi) the two agree up to the radial factor
//! r^(4 - 3 alpha); the proportionality constant is measured once at startup
//! from the isotropic quadratic case rather than assumed.

use std::sync::LazyLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dot, PolarPoint};
use crate::spectrum::spectrum;
use crate::tol;
use crate::weight::PolarWeight;

/// Point in parabolic phase space. The time frequency `s` enters only the
/// antisymmetric symbol; on the characteristic set it is determined by the
/// spatial data, so the implemented positivity checks never scan it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpacePoint {
    pub xi: [f64; 2],
    pub s: f64,
    pub tau: f64,
}

impl PhaseSpacePoint {
    pub fn new(xi: [f64; 2], s: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::Parameter {
                name: "tau",
                value: tau,
                reason: "Carleman parameter must be positive",
            });
        }
        Ok(Self { xi, s, tau })
    }

    /// Real (symmetric) principal symbol -|xi|² + tau² |grad phi|².
    pub fn symbol_real(&self, grad_phi: [f64; 2]) -> f64 {
        let t = self.tau;
        -dot(self.xi, self.xi) + t * t * dot(grad_phi, grad_phi)
    }

    /// Imaginary (antisymmetric) principal symbol s - 2 tau grad phi · xi.
    pub fn symbol_imag(&self, grad_phi: [f64; 2]) -> f64 {
        self.s - 2.0 * self.tau * dot(grad_phi, self.xi)
    }
}

/// Left-hand side of the cubic pseudoconvexity expression.
///
/// The square-root argument is evaluated in the algebraically equivalent
/// nonnegative form ((alpha-2) alpha f - f'')² + 4 (alpha-1)² f'², so
/// rounding can never push it negative.
pub fn eq6_value(alpha: f64, f: f64, fp: f64, fpp: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&alpha) {
        return Err(Error::Parameter {
            name: "alpha",
            value: alpha,
            reason: "cubic expression defined for alpha in [1, 2]",
        });
    }
    if !(f.is_finite() && fp.is_finite() && fpp.is_finite()) {
        return Err(Error::Parameter {
            name: "profile values",
            value: f64::NAN,
            reason: "f, f', f'' must be finite",
        });
    }
    Ok(eq6_unchecked(alpha, f, fp, fpp))
}

#[inline]
pub(crate) fn eq6_unchecked(alpha: f64, f: f64, fp: f64, fpp: f64) -> f64 {
    let a = alpha;
    let pinch = (a - 2.0) * a * f - fpp;
    let root = (pinch * pinch + 4.0 * (a - 1.0) * (a - 1.0) * fp * fp).sqrt();
    (a - 1.0) * a.powi(3) * f.powi(3)
        + a * (2.0 * a - 1.0) * f * fp * fp
        + fp * fp * fpp
        + 0.5 * (a * a * f * f + fp * fp) * (a * a * f + fpp - root)
}

/// Symbol-level commutator density grad phi · H grad phi + |grad phi|² λ_min(H),
/// i.e. the spatial commutator bound stripped of its 4 tau³ prefactor.
pub fn commutator_density(weight: &PolarWeight, p: PolarPoint) -> Result<f64> {
    let g = weight.geometry_polar(p)?;
    let s = spectrum(&g.hessian);
    let grad_sq = dot(g.gradient, g.gradient);
    Ok(g.hessian.quadratic_form(g.gradient) + grad_sq * s.lambda_min)
}

/// Proportionality constant between the cubic expression and the
/// radially-normalized commutator density, measured once from the isotropic
/// quadratic case (alpha = 2, f ≡ 1) instead of being assumed.
pub fn proportionality_constant() -> f64 {
    static C_STAR: LazyLock<f64> = LazyLock::new(|| {
        let w = PolarWeight::new(
            2.0,
            crate::profile::AngularProfile::polynomial(vec![1.0, 0.0], 1.5)
                .expect("reference profile"),
        )
        .expect("reference weight");
        let r = 1.7;
        let density = commutator_density(&w, PolarPoint::new(r, 0.3)).expect("reference density");
        let cubic = eq6_unchecked(2.0, 1.0, 0.0, 0.0);
        cubic / (r.powf(4.0 - 3.0 * 2.0) * density)
    });
    *C_STAR
}

/// One grid sample of a cross-section report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridValue {
    pub psi: f64,
    pub value: f64,
}

/// Admissibility report for one weight over one angular cross-section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoconvexityReport {
    pub theta_deg: f64,
    pub grid_n: usize,
    pub values: Vec<GridValue>,
    pub min_value: f64,
    pub argmin_psi: f64,
    pub admissible: bool,
    pub tolerance: f64,
}

/// Evaluates the cubic expression on a uniform closed grid over
/// [-theta/2, theta/2] and reduces to (min, argmin) deterministically
/// (ties break toward the smallest psi, independent of evaluation order).
pub fn angular_report(
    weight: &PolarWeight,
    theta_deg: f64,
    grid_n: usize,
    tolerance: f64,
) -> Result<PseudoconvexityReport> {
    if grid_n < 3 || grid_n % 2 == 0 {
        return Err(Error::Parameter {
            name: "grid_n",
            value: grid_n as f64,
            reason: "grid must be odd and at least 3 so psi = 0 is sampled",
        });
    }
    let half = crate::geometry::deg_to_rad(theta_deg) / 2.0;
    if half > weight.half_angle() * (1.0 + 1e-12) {
        return Err(Error::Parameter {
            name: "theta_deg",
            value: theta_deg,
            reason: "cross-section exceeds the profile's half-angle",
        });
    }
    let alpha = weight.alpha();
    let values: Vec<GridValue> = (0..grid_n)
        .into_par_iter()
        .map(|i| {
            let t = i as f64 / (grid_n - 1) as f64;
            // closed grid with exact endpoints
            let psi = half * (2.0 * t - 1.0);
            let v = weight.profile().eval(psi)?;
            Ok(GridValue {
                psi,
                value: eq6_unchecked(alpha, v.f, v.fp, v.fpp),
            })
        })
        .collect::<Result<_>>()?;

    let (min_value, argmin_psi) = values
        .par_iter()
        .map(|g| (g.value, g.psi))
        .reduce(
            || (f64::INFINITY, f64::INFINITY),
            |a, b| {
                // lexicographic: smaller value wins, ties by smaller psi
                if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let scale = values
        .iter()
        .fold(1.0_f64, |acc, g| acc.max(g.value.abs()));
    Ok(PseudoconvexityReport {
        theta_deg,
        grid_n,
        values,
        min_value,
        argmin_psi,
        admissible: min_value >= -tolerance * scale,
        tolerance,
    })
}

/// Report with the default grid and admissibility tolerance.
pub fn angular_report_default(weight: &PolarWeight, theta_deg: f64) -> Result<PseudoconvexityReport> {
    angular_report(weight, theta_deg, tol::DEFAULT_GRID_N, tol::ADMISSIBILITY_REL)
}
