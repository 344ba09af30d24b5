//! Angular profiles f(psi) of radially homogeneous weights, with exact
//! first and second derivatives.
//!
//! Three variants are supported:
//!
//! * `CosPower` — f(psi) = cos^beta(psi) − cos^beta(half_angle), the
//!   one- and two-parameter cosine families. Vanishes at ±half_angle by
//!   construction. Non-integer powers are evaluated as exp(beta · ln cos),
//!   which is real because the domain is restricted to |psi| < π/2.
//! * `Polynomial` — an even polynomial; `coeffs[k]` multiplies psi^(2k),
//!   so odd-degree coefficients are structurally zero.
//! * `Tabulated` — cubic Hermite interpolation of (f, f') samples, with f''
//!   taken as the second derivative of the interpolant. This is how
//!   equality-case trajectories are fed back into the cross-section
//!   checkers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Profile value with its first two derivatives at a single angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValues {
    pub f: f64,
    pub fp: f64,
    pub fpp: f64,
}

/// One knot of a tabulated profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub psi: f64,
    pub f: f64,
    pub fp: f64,
    pub fpp: f64,
}

/// Angular factor of a polar weight.
#[derive(Debug, Clone, PartialEq)]
pub enum AngularProfile {
    CosPower {
        beta: f64,
        half_angle: f64,
    },
    Polynomial {
        /// Even-power coefficients: `coeffs[k]` multiplies psi^(2k).
        coeffs: Vec<f64>,
        half_angle: f64,
    },
    Tabulated(TabulatedProfile),
}

impl AngularProfile {
    /// cos-power profile; requires beta > 0 and 0 < half_angle < π/2 so the
    /// cosine stays positive on the closed domain.
    pub fn cos_power(beta: f64, half_angle: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Parameter {
                name: "beta",
                value: beta,
                reason: "must be a positive finite exponent",
            });
        }
        if !(half_angle > 0.0 && half_angle < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Parameter {
                name: "half_angle",
                value: half_angle,
                reason: "must lie in (0, pi/2)",
            });
        }
        Ok(Self::CosPower { beta, half_angle })
    }

    /// Even polynomial profile on [-half_angle, half_angle].
    pub fn polynomial(coeffs: Vec<f64>, half_angle: f64) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parameter {
                name: "coeffs",
                value: coeffs.len() as f64,
                reason: "must be a non-empty list of finite coefficients",
            });
        }
        if !(half_angle > 0.0 && half_angle < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Parameter {
                name: "half_angle",
                value: half_angle,
                reason: "must lie in (0, pi/2)",
            });
        }
        Ok(Self::Polynomial { coeffs, half_angle })
    }

    pub fn half_angle(&self) -> f64 {
        match self {
            Self::CosPower { half_angle, .. } | Self::Polynomial { half_angle, .. } => *half_angle,
            Self::Tabulated(t) => t.half_angle(),
        }
    }

    /// Evaluates (f, f', f'') at `psi`. Errors outside [-half_angle, half_angle].
    pub fn eval(&self, psi: f64) -> Result<ProfileValues> {
        let half = self.half_angle();
        // tiny slack so the closed endpoints survive degree->radian rounding
        if !(psi.abs() <= half * (1.0 + 1e-14) + 1e-15) {
            return Err(Error::Domain {
                psi,
                half_angle: half,
            });
        }
        match self {
            Self::CosPower { beta, half_angle } => Ok(eval_cos_power(*beta, *half_angle, psi)),
            Self::Polynomial { coeffs, .. } => Ok(eval_polynomial(coeffs, psi)),
            Self::Tabulated(t) => Ok(t.eval(psi)),
        }
    }
}

/// Exact closed-form evaluation of the cos-power family.
fn eval_cos_power(beta: f64, half_angle: f64, psi: f64) -> ProfileValues {
    let (s, c) = psi.sin_cos();
    let shift = cos_pow(half_angle.cos(), beta);
    let cb = cos_pow(c, beta);
    // f   = cos^b - shift
    // f'  = -b cos^(b-1) sin
    // f'' = b (b-1) cos^(b-2) sin^2 - b cos^b
    let cbm1 = cos_pow(c, beta - 1.0);
    let cbm2 = cos_pow(c, beta - 2.0);
    ProfileValues {
        f: cb - shift,
        fp: -beta * cbm1 * s,
        fpp: beta * (beta - 1.0) * cbm2 * s * s - beta * cb,
    }
}

/// cos^p for positive base via exp(p ln cos); exact for p = 0, 1.
fn cos_pow(base: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p == 1.0 {
        base
    } else {
        (p * base.ln()).exp()
    }
}

fn eval_polynomial(coeffs: &[f64], psi: f64) -> ProfileValues {
    // Horner in u = psi^2 for f, plus term sums for the derivatives.
    let u = psi * psi;
    let mut f = 0.0;
    for &c in coeffs.iter().rev() {
        f = f * u + c;
    }
    let mut fp = 0.0;
    let mut fpp = 0.0;
    for (k, &c) in coeffs.iter().enumerate().skip(1) {
        let n = 2 * k;
        fp += (n as f64) * c * psi.powi(n as i32 - 1);
        fpp += (n * (n - 1)) as f64 * c * psi.powi(n as i32 - 2);
    }
    ProfileValues { f, fp, fpp }
}

/// Cubic Hermite interpolant of (psi, f, f') knots.
///
/// Knots must be strictly increasing and symmetric under psi -> -psi; the
/// usual construction mirrors a half-table produced by the equality-case
/// integrator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedProfile {
    samples: Vec<ProfileSample>,
}

impl TabulatedProfile {
    /// Builds a full symmetric table from samples on [0, psi_end].
    ///
    /// The even extension maps (psi, f, f', f'') to (-psi, f, -f', f'').
    /// The first sample must sit at psi = 0 with f'(0) = 0.
    pub fn from_symmetric_half(half: &[ProfileSample]) -> Result<Self> {
        if half.len() < 2 {
            return Err(Error::Tabulation {
                reason: "need at least two samples",
            });
        }
        if half[0].psi != 0.0 {
            return Err(Error::Tabulation {
                reason: "half-table must start at psi = 0",
            });
        }
        if half[0].fp != 0.0 {
            return Err(Error::Tabulation {
                reason: "even profile requires f'(0) = 0",
            });
        }
        if !half.windows(2).all(|w| w[1].psi > w[0].psi) {
            return Err(Error::Tabulation {
                reason: "samples must be strictly increasing in psi",
            });
        }
        let mut samples = Vec::with_capacity(2 * half.len() - 1);
        for s in half.iter().skip(1).rev() {
            samples.push(ProfileSample {
                psi: -s.psi,
                f: s.f,
                fp: -s.fp,
                fpp: s.fpp,
            });
        }
        samples.extend_from_slice(half);
        Ok(Self { samples })
    }

    /// Builds directly from a full table, validating monotonicity and
    /// psi -> -psi symmetry.
    pub fn from_samples(samples: Vec<ProfileSample>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::Tabulation {
                reason: "need at least three samples",
            });
        }
        if !samples.windows(2).all(|w| w[1].psi > w[0].psi) {
            return Err(Error::Tabulation {
                reason: "samples must be strictly increasing in psi",
            });
        }
        let n = samples.len();
        for i in 0..n / 2 {
            let a = &samples[i];
            let b = &samples[n - 1 - i];
            let tol = 1e-9 * (1.0 + a.psi.abs());
            if (a.psi + b.psi).abs() > tol || (a.f - b.f).abs() > 1e-9 * (1.0 + a.f.abs()) {
                return Err(Error::Tabulation {
                    reason: "samples must be symmetric under psi -> -psi",
                });
            }
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[ProfileSample] {
        &self.samples
    }

    pub fn half_angle(&self) -> f64 {
        self.samples.last().unwrap().psi
    }

    fn eval(&self, psi: f64) -> ProfileValues {
        let s = &self.samples;
        // locate segment; callers have already domain-checked psi
        let idx = match s.binary_search_by(|k| k.psi.partial_cmp(&psi).unwrap()) {
            Ok(i) => i.min(s.len() - 2),
            Err(i) => i.saturating_sub(1).min(s.len() - 2),
        };
        let (a, b) = (&s[idx], &s[idx + 1]);
        let h = b.psi - a.psi;
        let t = (psi - a.psi) / h;
        let (t2, t3) = (t * t, t * t * t);
        // Hermite basis and its first two derivatives in t
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let f = h00 * a.f + h10 * h * a.fp + h01 * b.f + h11 * h * b.fp;
        let fp = ((6.0 * t2 - 6.0 * t) * (a.f - b.f) / h)
            + (3.0 * t2 - 4.0 * t + 1.0) * a.fp
            + (3.0 * t2 - 2.0 * t) * b.fp;
        let fpp = ((12.0 * t - 6.0) * (a.f - b.f) / (h * h))
            + ((6.0 * t - 4.0) * a.fp + (6.0 * t - 2.0) * b.fp) / h;
        ProfileValues { f, fp, fpp }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::deg_to_rad;

    fn fd_derivatives(profile: &AngularProfile, psi: f64, h: f64) -> (f64, f64) {
        let fm = profile.eval(psi - h).unwrap().f;
        let f0 = profile.eval(psi).unwrap().f;
        let fp = profile.eval(psi + h).unwrap().f;
        ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
    }

    #[test]
    fn cos_power_vanishes_at_boundary() {
        let p = AngularProfile::cos_power(2.0, deg_to_rad(47.7)).unwrap();
        let v = p.eval(deg_to_rad(47.7)).unwrap();
        assert!(v.f.abs() < 1e-15);
    }

    #[test]
    fn even_profiles_have_zero_slope_on_axis() {
        let p = AngularProfile::cos_power(2.474917, deg_to_rad(47.7)).unwrap();
        assert_eq!(p.eval(0.0).unwrap().fp, 0.0);
        let q = AngularProfile::polynomial(vec![1.0, -0.5, 0.25], 1.0).unwrap();
        assert_eq!(q.eval(0.0).unwrap().fp, 0.0);
    }

    #[test]
    fn tuned_cos_power_matches_frozen_axis_values() {
        // beta = 2.474917 at half-angle 47.7 degrees
        let p = AngularProfile::cos_power(2.474917, deg_to_rad(47.7)).unwrap();
        let v = p.eval(0.0).unwrap();
        assert!((v.f - 0.624706066935092).abs() < 1e-12, "f(0) = {}", v.f);
        assert!((v.fpp - (-2.474917)).abs() < 1e-12, "f''(0) = {}", v.fpp);
    }

    #[test]
    fn cos_power_derivatives_match_finite_differences() {
        let p = AngularProfile::cos_power(2.474917, deg_to_rad(47.7)).unwrap();
        for &psi in &[-0.7, -0.31, 0.1, 0.42, 0.8] {
            let v = p.eval(psi).unwrap();
            let (fd1, fd2) = fd_derivatives(&p, psi, 1e-5);
            assert!(
                (v.fp - fd1).abs() <= 1e-6 * (1.0 + fd1.abs()),
                "fp at {psi}: {} vs {}",
                v.fp,
                fd1
            );
            assert!(
                (v.fpp - fd2).abs() <= 1e-5 * (1.0 + fd2.abs()),
                "fpp at {psi}: {} vs {}",
                v.fpp,
                fd2
            );
        }
    }

    #[test]
    fn polynomial_derivatives_match_finite_differences() {
        let p =
            AngularProfile::polynomial(vec![0.987609, -1.22053, 0.562108, -0.162117], 1.0).unwrap();
        for &psi in &[-0.9, -0.2, 0.3, 0.77] {
            let v = p.eval(psi).unwrap();
            let (fd1, fd2) = fd_derivatives(&p, psi, 1e-5);
            assert!((v.fp - fd1).abs() <= 1e-6 * (1.0 + fd1.abs()));
            assert!((v.fpp - fd2).abs() <= 1e-5 * (1.0 + fd2.abs()));
        }
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let p = AngularProfile::cos_power(2.0, 0.8).unwrap();
        assert!(matches!(p.eval(0.81), Err(Error::Domain { .. })));
        assert!(matches!(p.eval(-2.0), Err(Error::Domain { .. })));
        assert!(p.eval(0.8).is_ok());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(AngularProfile::cos_power(0.0, 0.8).is_err());
        assert!(AngularProfile::cos_power(-1.0, 0.8).is_err());
        assert!(AngularProfile::cos_power(2.0, 1.6).is_err());
        assert!(AngularProfile::polynomial(vec![], 0.8).is_err());
    }

    #[test]
    fn tabulated_mirrors_and_interpolates() {
        // quadratic test function f = 1 - psi^2, exactly representable
        let half: Vec<ProfileSample> = (0..=10)
            .map(|i| {
                let psi = i as f64 * 0.1;
                ProfileSample {
                    psi,
                    f: 1.0 - psi * psi,
                    fp: -2.0 * psi,
                    fpp: -2.0,
                }
            })
            .collect();
        let t = TabulatedProfile::from_symmetric_half(&half).unwrap();
        assert_eq!(t.samples().len(), 21);
        let p = AngularProfile::Tabulated(t);
        for &psi in &[-0.95, -0.5, 0.0, 0.33, 0.87] {
            let v = p.eval(psi).unwrap();
            assert!((v.f - (1.0 - psi * psi)).abs() < 1e-12, "f at {psi}");
            assert!((v.fp - (-2.0 * psi)).abs() < 1e-12, "fp at {psi}");
            assert!((v.fpp - (-2.0)).abs() < 1e-9, "fpp at {psi}");
        }
    }

    #[test]
    fn tabulated_rejects_disorder_and_asymmetry() {
        let bad = vec![
            ProfileSample { psi: 0.0, f: 1.0, fp: 0.0, fpp: 0.0 },
            ProfileSample { psi: 0.0, f: 1.0, fp: 0.0, fpp: 0.0 },
        ];
        assert!(TabulatedProfile::from_symmetric_half(&bad).is_err());
        let asym = vec![
            ProfileSample { psi: -1.0, f: 0.0, fp: 1.0, fpp: 0.0 },
            ProfileSample { psi: 0.0, f: 1.0, fp: 0.0, fpp: 0.0 },
            ProfileSample { psi: 1.0, f: 0.5, fp: -1.0, fpp: 0.0 },
        ];
        assert!(TabulatedProfile::from_samples(asym).is_err());
    }
}
