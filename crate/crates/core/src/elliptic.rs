//! Limiting Carleman weights for the Laplacian on cones: the weight
//! Re((x+iy)^alpha) + epsilon x^alpha with alpha = pi/theta, its closed-form
//! geometry, the two-dimensional Poisson-bracket identity on the
//! characteristic set, and the decay-exponent bookkeeping.
//!
//! The harmonic part is differentiated through the complex derivative
//! alpha z^(alpha-1) on the principal branch; the cone x > 0 never meets the
//! branch cut on the negative real axis.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{deg_to_rad, dot, CartesianPoint, SymMat2};
use crate::spectrum::spectrum;

/// Limiting weight Re(z^alpha) + epsilon x^alpha on the cone of opening
/// pi/alpha, with alpha in (1, 2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticWeight {
    pub alpha: f64,
    pub epsilon: f64,
}

impl EllipticWeight {
    pub fn new(alpha: f64, epsilon: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::Parameter {
                name: "alpha",
                value: alpha,
                reason: "limiting weight exponent must lie in (1, 2)",
            });
        }
        if !(epsilon > 0.0) {
            return Err(Error::Parameter {
                name: "epsilon",
                value: epsilon,
                reason: "epsilon must be positive",
            });
        }
        Ok(Self { alpha, epsilon })
    }

    /// Weight for the cone of full opening angle theta, alpha = pi/theta.
    pub fn from_theta_deg(theta_deg: f64, epsilon: f64) -> Result<Self> {
        if !(theta_deg > 90.0 && theta_deg < 180.0) {
            return Err(Error::Parameter {
                name: "theta_deg",
                value: theta_deg,
                reason: "opening angle must lie in (90, 180) degrees",
            });
        }
        Self::new(std::f64::consts::PI / deg_to_rad(theta_deg), epsilon)
    }

    pub fn theta_deg(&self) -> f64 {
        crate::geometry::rad_to_deg(std::f64::consts::PI / self.alpha)
    }

    fn check_point(&self, p: CartesianPoint) -> Result<()> {
        let half = 0.5 * std::f64::consts::PI / self.alpha;
        let polar = p.to_polar();
        if p.x <= 0.0 || polar.r == 0.0 || polar.psi.abs() >= half {
            return Err(Error::OutsideCone {
                x: p.x,
                y: p.y,
                half_angle: half,
            });
        }
        Ok(())
    }
}

/// Geometry of the limiting weight at one point. The Laplacian is the
/// closed form epsilon alpha (alpha-1) x^(alpha-2) — the harmonic part drops
/// out — and must agree with the Hessian trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticGeometry {
    pub value: f64,
    pub gradient: [f64; 2],
    pub hessian: SymMat2,
    pub laplacian: f64,
}

pub fn elliptic_geometry(w: &EllipticWeight, p: CartesianPoint) -> Result<EllipticGeometry> {
    w.check_point(p)?;
    let a = w.alpha;
    let z = Complex64::new(p.x, p.y);
    let za = z.powf(a);
    let dza = a * z.powf(a - 1.0);
    let d2za = a * (a - 1.0) * z.powf(a - 2.0);

    // d/dx Re h = Re h', d/dy Re h = -Im h' for holomorphic h
    let harm_grad = [dza.re, -dza.im];
    let harm_hess = SymMat2::new(d2za.re, -d2za.im, -d2za.re);

    let xa = p.x.powf(a);
    let eps = w.epsilon;
    let value = za.re + eps * xa;
    let gradient = [
        harm_grad[0] + eps * a * p.x.powf(a - 1.0),
        harm_grad[1],
    ];
    let exx = eps * a * (a - 1.0) * p.x.powf(a - 2.0);
    let hessian = SymMat2::new(harm_hess.xx + exx, harm_hess.xy, harm_hess.yy);

    Ok(EllipticGeometry {
        value,
        gradient,
        hessian,
        laplacian: exx,
    })
}

/// Both sides of the Poisson-bracket identity on the characteristic set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketCheck {
    /// 4 (tau³ grad·H grad + tau xi·H xi) with xi = tau |grad| n.
    pub lhs: f64,
    /// 4 tau³ (lap phi) |grad phi|².
    pub rhs: f64,
}

/// Constructs the characteristic-set frequency xi = tau |grad phi| n with n
/// the unit normal to the gradient, and evaluates both sides of the bracket
/// identity. xi enters quadratically, so the two orientations of n agree;
/// both are evaluated and the first returned.
pub fn bracket_charset_check(
    w: &EllipticWeight,
    p: CartesianPoint,
    tau: f64,
) -> Result<BracketCheck> {
    if !(tau > 0.0) {
        return Err(Error::Parameter {
            name: "tau",
            value: tau,
            reason: "Carleman parameter must be positive",
        });
    }
    let geom = elliptic_geometry(w, p)?;
    let grad = geom.gradient;
    let grad_norm = grad[0].hypot(grad[1]);
    if grad_norm < 1e-12 {
        return Err(Error::DegenerateGradient { norm: grad_norm });
    }
    let n = [-grad[1] / grad_norm, grad[0] / grad_norm];

    let t3 = tau * tau * tau;
    let mut lhs_both = [0.0_f64; 2];
    for (k, sign) in [1.0_f64, -1.0].iter().enumerate() {
        let xi = [sign * tau * grad_norm * n[0], sign * tau * grad_norm * n[1]];
        lhs_both[k] = 4.0 * (t3 * geom.hessian.quadratic_form(grad) + tau * geom.hessian.quadratic_form(xi));
    }
    debug_assert!((lhs_both[0] - lhs_both[1]).abs() <= 1e-9 * lhs_both[0].abs().max(1.0));

    let rhs = 4.0 * t3 * geom.laplacian * dot(grad, grad);
    Ok(BracketCheck {
        lhs: lhs_both[0],
        rhs,
    })
}

/// Decay exponents attached to the cone of opening theta.
///
/// The two published values for the gradient-potential decay rate,
/// (2-alpha)/alpha and (alpha-2)/2, do not agree; both are returned verbatim
/// and the discrepancy is flagged rather than resolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayExponents {
    pub alpha: f64,
    /// Lower bound (2-alpha)/alpha required of the potential decay rate.
    pub prop_bound: f64,
    /// The remark's value (alpha-2)/2 for the same rate.
    pub remark_value: f64,
    /// Radial norm exponents ((3 alpha - 4)/2, (alpha - 2)/2).
    pub norm_exponents: (f64, f64),
    /// True whenever prop_bound != remark_value (always, for alpha < 2).
    pub discrepancy_flagged: bool,
}

pub fn decay_exponents(theta_deg: f64) -> Result<DecayExponents> {
    if !(theta_deg > 90.0 && theta_deg < 180.0) {
        return Err(Error::Parameter {
            name: "theta_deg",
            value: theta_deg,
            reason: "opening angle must lie in (90, 180) degrees",
        });
    }
    let alpha = std::f64::consts::PI / deg_to_rad(theta_deg);
    let prop_bound = (2.0 - alpha) / alpha;
    let remark_value = (alpha - 2.0) / 2.0;
    Ok(DecayExponents {
        alpha,
        prop_bound,
        remark_value,
        norm_exponents: ((3.0 * alpha - 4.0) / 2.0, (alpha - 2.0) / 2.0),
        discrepancy_flagged: (prop_bound - remark_value).abs() > 0.0,
    })
}

/// Summary report over random interior samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipticReport {
    pub alpha: f64,
    pub epsilon: f64,
    pub samples: usize,
    /// lap phi > 0 held at every sample.
    pub laplacian_positive: bool,
    /// Worst |trace(H) - closed form| / closed form over the samples.
    pub trace_max_rel_err: f64,
    /// Worst |lhs - rhs| / (1 + |rhs|) of the bracket identity.
    pub bracket_max_rel_err: f64,
    /// Smallest Hessian eigenvalue seen (the weights are never convex).
    pub lambda_min_infimum: f64,
    pub exponents: DecayExponents,
}

/// Samples the cone uniformly in (log r, psi) with a seeded generator and
/// checks the pointwise identities; tau is drawn from [1, 1e3].
pub fn elliptic_report(w: &EllipticWeight, samples: usize, seed: u64) -> Result<EllipticReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = 0.5 * std::f64::consts::PI / w.alpha;
    let mut laplacian_positive = true;
    let mut trace_max_rel_err = 0.0_f64;
    let mut bracket_max_rel_err = 0.0_f64;
    let mut lambda_min_infimum = f64::INFINITY;
    for _ in 0..samples {
        let r = 10.0_f64.powf(rng.gen_range(-2.0..2.0));
        let psi = rng.gen_range(-0.98 * half..0.98 * half);
        let tau = 10.0_f64.powf(rng.gen_range(0.0..3.0));
        let p = CartesianPoint::new(r * psi.cos(), r * psi.sin());

        let geom = elliptic_geometry(w, p)?;
        laplacian_positive &= geom.laplacian > 0.0;
        trace_max_rel_err = trace_max_rel_err
            .max((geom.hessian.trace() - geom.laplacian).abs() / geom.laplacian.abs());
        lambda_min_infimum = lambda_min_infimum.min(spectrum(&geom.hessian).lambda_min);

        let b = bracket_charset_check(w, p, tau)?;
        bracket_max_rel_err =
            bracket_max_rel_err.max((b.lhs - b.rhs).abs() / (1.0 + b.rhs.abs()));
    }
    Ok(EllipticReport {
        alpha: w.alpha,
        epsilon: w.epsilon,
        samples,
        laplacian_positive,
        trace_max_rel_err,
        bracket_max_rel_err,
        lambda_min_infimum,
        exponents: decay_exponents(w.theta_deg())?,
    })
}
