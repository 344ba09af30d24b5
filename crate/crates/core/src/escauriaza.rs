//! The small-angle counterexample to backward uniqueness: the entire
//! harmonic function h = Re exp(-z^alpha) with alpha > 2, its Appell
//! transform v(x, t) = exp(|x|²/4t) h(x/t) solving the backward heat
//! equation with v(·, 0) = 0 inside the cone of opening pi/alpha, and the
//! translated, time-reflected u built from it.
//!
//! Magnitudes grow doubly exponentially outside the good sector, so every
//! bound here is tracked in log space and every residual threshold scales
//! with local derivative magnitudes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{deg_to_rad, CartesianPoint};

/// Parameters of the counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscauriazaExample {
    /// Exponent of the harmonic seed, strictly above 2 (distinct from the
    /// weight exponents, which stay at or below 2).
    pub alpha_e: f64,
    /// Spatial translation applied when building u.
    pub offset: (f64, f64),
    /// Step for the finite-difference residual checks.
    pub fd_step: f64,
}

impl EscauriazaExample {
    pub fn new(alpha_e: f64) -> Result<Self> {
        if !(alpha_e > 2.0) {
            return Err(Error::Parameter {
                name: "alpha_e",
                value: alpha_e,
                reason: "the harmonic seed needs exponent > 2",
            });
        }
        Ok(Self {
            alpha_e,
            offset: (1.0, 1.0),
            fd_step: 1e-4,
        })
    }

    fn zpow(&self, p: CartesianPoint) -> Result<Complex64> {
        let z = Complex64::new(p.x, p.y);
        let a = self.alpha_e;
        if a.fract() == 0.0 {
            // integer exponents are entire; no cut to avoid
            return Ok(z.powi(a as i32));
        }
        if p.y == 0.0 && p.x <= 0.0 {
            return Err(Error::BranchCut { exponent: a });
        }
        Ok(z.powf(a))
    }

    /// h(x) = Re exp(-z^alpha), entire and harmonic.
    pub fn harmonic_h(&self, p: CartesianPoint) -> Result<f64> {
        Ok((-self.zpow(p)?).exp().re)
    }

    /// Appell transform v(x, t) = exp(|x|²/4t) h(x/t), t > 0; solves
    /// dt v + lap v = 0 with v(x, 0) = 0 inside the good sector.
    pub fn appell_v(&self, p: CartesianPoint, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::TimeDomain { t });
        }
        let w = self.zpow(CartesianPoint::new(p.x / t, p.y / t))?;
        let log_env = (p.x * p.x + p.y * p.y) / (4.0 * t) - w.re;
        Ok(log_env.exp() * w.im.cos())
    }

    /// log |v|, stable where |v| itself overflows; -inf at zeros of the
    /// oscillatory factor.
    pub fn log_abs_v(&self, p: CartesianPoint, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::TimeDomain { t });
        }
        let w = self.zpow(CartesianPoint::new(p.x / t, p.y / t))?;
        let log_env = (p.x * p.x + p.y * p.y) / (4.0 * t) - w.re;
        Ok(log_env + w.im.cos().abs().ln())
    }

    /// Analytic d/dt of the Appell transform via the chain rule:
    /// dt v = -exp(|x|²/4t) [ |x|²/(4t²) h(x/t) + (x · grad h)(x/t) / t² ].
    pub fn appell_v_dt(&self, p: CartesianPoint, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::TimeDomain { t });
        }
        let y = CartesianPoint::new(p.x / t, p.y / t);
        let w = self.zpow(y)?;
        let ew = (-w).exp();
        // grad of Re exp(-z^a): holomorphic derivative -a z^(a-1) exp(-z^a)
        let zym1 = if self.alpha_e.fract() == 0.0 {
            Complex64::new(y.x, y.y).powi(self.alpha_e as i32 - 1)
        } else {
            Complex64::new(y.x, y.y).powf(self.alpha_e - 1.0)
        };
        let dh = -self.alpha_e * zym1 * ew;
        let grad_h = [dh.re, -dh.im];
        let r2 = p.x * p.x + p.y * p.y;
        let env = (r2 / (4.0 * t)).exp();
        let h = ew.re;
        Ok(-env * (r2 / (4.0 * t * t) * h + (p.x * grad_h[0] + p.y * grad_h[1]) / (t * t)))
    }

    /// u(x, t) = v(x + offset, 1 - t): the forward-heat solution with
    /// vanishing final datum, defined for t < 1.
    pub fn u(&self, p: CartesianPoint, t: f64) -> Result<f64> {
        if !(t < 1.0) {
            return Err(Error::TimeDomain { t });
        }
        self.appell_v(
            CartesianPoint::new(p.x + self.offset.0, p.y + self.offset.1),
            1.0 - t,
        )
    }
}

/// Boundedness verdict of a cone scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundedness {
    Bounded,
    Unbounded,
    Inconclusive,
}

/// One scan sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub r: f64,
    pub psi: f64,
    pub abs_v: f64,
}

/// Angular sup scan of |v(·, 1)| over the cone, radius by radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeBoundReport {
    pub theta_deg: f64,
    pub alpha_e: f64,
    pub rows: Vec<ScanRow>,
    /// (radius, sup over angles of log10 |v|).
    pub sup_log10_by_radius: Vec<(f64, f64)>,
    pub verdict: Boundedness,
}

/// Scans sup |v| at t = 1 over angular samples at each radius.
///
/// Growth beyond 10x between successive radii yields `Unbounded`; a
/// non-increasing tail yields `Bounded`. Magnitudes are compared in log10,
/// so overflow never corrupts the verdict.
pub fn cone_bound_scan(
    ex: &EscauriazaExample,
    theta_deg: f64,
    radii: &[f64],
    angular_n: usize,
) -> Result<ConeBoundReport> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::Parameter {
            name: "radii",
            value: f64::NAN,
            reason: "need a non-empty list of positive finite radii",
        });
    }
    let half = deg_to_rad(theta_deg) / 2.0;
    let n = angular_n.max(3);
    let mut rows = Vec::with_capacity(radii.len() * n);
    let mut sup_log10_by_radius = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut sup = f64::NEG_INFINITY;
        for i in 0..n {
            let psi = if n == 1 {
                0.0
            } else {
                half * (2.0 * (i as f64 / (n - 1) as f64) - 1.0)
            };
            let p = CartesianPoint::new(r * psi.cos(), r * psi.sin());
            let log_abs = ex.log_abs_v(p, 1.0)?;
            let log10_abs = log_abs / std::f64::consts::LN_10;
            sup = sup.max(log10_abs);
            rows.push(ScanRow {
                r,
                psi,
                abs_v: pow10(log10_abs),
            });
        }
        sup_log10_by_radius.push((r, sup));
    }

    let mut grew = false;
    let mut tail_nonincreasing = true;
    for w in sup_log10_by_radius.windows(2) {
        let delta = w[1].1 - w[0].1;
        if delta > 1.0 {
            grew = true;
        }
    }
    if let Some(w) = sup_log10_by_radius.windows(2).last() {
        tail_nonincreasing = w[1].1 <= w[0].1;
    }
    let verdict = if grew {
        Boundedness::Unbounded
    } else if tail_nonincreasing {
        Boundedness::Bounded
    } else {
        Boundedness::Inconclusive
    };

    Ok(ConeBoundReport {
        theta_deg,
        alpha_e: ex.alpha_e,
        rows,
        sup_log10_by_radius,
        verdict,
    })
}

fn pow10(x: f64) -> f64 {
    (x * std::f64::consts::LN_10).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_values_on_the_axes() {
        let ex = EscauriazaExample::new(3.0).unwrap();
        let h = ex.harmonic_h(CartesianPoint::new(1.0, 0.0)).unwrap();
        assert!((h - (-1.0_f64).exp()).abs() < 1e-15, "h = {h}");
        let ex4 = EscauriazaExample::new(4.0).unwrap();
        let h4 = ex4.harmonic_h(CartesianPoint::new(0.0, 1.0)).unwrap();
        assert!((h4 - (-1.0_f64).exp()).abs() < 1e-15, "h = {h4}");
    }

    #[test]
    fn appell_value_at_unit_time() {
        let ex = EscauriazaExample::new(3.0).unwrap();
        let v = ex.appell_v(CartesianPoint::new(1.0, 0.0), 1.0).unwrap();
        assert!((v - (-0.75_f64).exp()).abs() < 1e-15, "v = {v}");
    }

    #[test]
    fn v_decays_monotonically_to_zero_at_small_time() {
        // fixed point inside the good sector of alpha_e = 3
        let ex = EscauriazaExample::new(3.0).unwrap();
        let p = CartesianPoint::new(1.0, 0.2);
        let mut prev = f64::INFINITY;
        for &t in &[1e-1, 1e-2, 1e-3, 1e-4] {
            let log_abs = ex.log_abs_v(p, t).unwrap();
            assert!(log_abs < prev, "t = {t}");
            prev = log_abs;
        }
        assert!(prev < -1e9);
    }

    #[test]
    fn u_vanishes_at_the_final_time() {
        let ex = EscauriazaExample::new(3.0).unwrap();
        // interior samples whose translate stays in the decay sector
        for &(r, psi_deg) in &[(5.0, 0.0), (10.0, 15.0), (20.0, -20.0), (30.0, 10.0)] {
            let psi = deg_to_rad(psi_deg);
            let p = CartesianPoint::new(r * psi.cos(), r * psi.sin());
            let u = ex.u(p, 1.0 - 1e-6).unwrap();
            assert!(u.abs() <= 1e-8, "|u| = {} at r={r}", u.abs());
        }
        assert!(ex.u(CartesianPoint::new(5.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn fd_laplacian_of_h_vanishes() {
        let ex = EscauriazaExample::new(3.0).unwrap();
        let h = ex.fd_step;
        for &(x, y) in &[(1.0, 0.3), (0.5, -0.4), (1.5, 0.1), (0.2, 0.9)] {
            let f = |x: f64, y: f64| ex.harmonic_h(CartesianPoint::new(x, y)).unwrap();
            let lap = (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y))
                / (h * h);
            // scale with local derivative magnitude
            let gx = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
            let gy = (f(x, y + h) - f(x, y - h)) / (2.0 * h);
            let scale = 1.0 + f(x, y).abs() * gx.hypot(gy);
            assert!(lap.abs() <= 1e-4 * scale, "lap = {lap} at ({x}, {y})");
        }
    }

    #[test]
    fn fd_backward_heat_residual_of_v() {
        let ex = EscauriazaExample::new(3.0).unwrap();
        let h = ex.fd_step;
        for &(x, y, t) in &[(1.0, 0.2, 1.0), (0.8, -0.1, 0.7), (1.5, 0.3, 1.3)] {
            let v = |x: f64, y: f64, t: f64| ex.appell_v(CartesianPoint::new(x, y), t).unwrap();
            let dt = (v(x, y, t + h) - v(x, y, t - h)) / (2.0 * h);
            let lap =
                (v(x + h, y, t) + v(x - h, y, t) + v(x, y + h, t) + v(x, y - h, t)
                    - 4.0 * v(x, y, t))
                    / (h * h);
            let scale = 1.0 + dt.abs() + lap.abs();
            assert!((dt + lap).abs() <= 1e-3 * scale, "residual at ({x},{y},{t})");
        }
    }

    #[test]
    fn analytic_dt_matches_finite_differences() {
        let ex = EscauriazaExample::new(3.0).unwrap();
        for &(x, y, t) in &[(1.0, 0.2, 1.0), (0.6, -0.3, 0.8)] {
            let p = CartesianPoint::new(x, y);
            let h = 1e-6;
            let fd = (ex.appell_v(p, t + h).unwrap() - ex.appell_v(p, t - h).unwrap()) / (2.0 * h);
            let an = ex.appell_v_dt(p, t).unwrap();
            assert!(
                (an - fd).abs() <= 1e-5 * (1.0 + fd.abs()),
                "dt v at ({x},{y},{t}): {an} vs {fd}"
            );
        }
    }

    #[test]
    fn scan_verdicts_flip_across_the_critical_opening() {
        let ex = EscauriazaExample::new(3.0).unwrap();
        let radii = [1.0, 10.0, 100.0, 1000.0];
        let bounded = cone_bound_scan(&ex, 55.0, &radii, 181).unwrap();
        assert_eq!(bounded.verdict, Boundedness::Bounded);
        let unbounded = cone_bound_scan(&ex, 65.0, &radii, 181).unwrap();
        assert_eq!(unbounded.verdict, Boundedness::Unbounded);
        // axis ray alone stays bounded for any exponent
        let axis = cone_bound_scan(&ex, 0.0, &radii, 1).unwrap();
        assert_eq!(axis.verdict, Boundedness::Bounded);
    }

    #[test]
    fn branch_cut_and_parameter_errors() {
        assert!(EscauriazaExample::new(2.0).is_err());
        let ex = EscauriazaExample::new(2.5).unwrap();
        assert!(matches!(
            ex.harmonic_h(CartesianPoint::new(-1.0, 0.0)),
            Err(Error::BranchCut { .. })
        ));
        let ex3 = EscauriazaExample::new(3.0).unwrap();
        assert!(ex3.harmonic_h(CartesianPoint::new(-1.0, 0.0)).is_ok());
        assert!(ex3.appell_v(CartesianPoint::new(1.0, 0.0), 0.0).is_err());
    }
}
