//! Shooting solver for the equality case of the cubic pseudoconvexity
//! expression, treated as an implicit second-order ODE for the angular
//! profile.
//!
//! The expression is quadratic-plus-square-root in f'', so the implicit
//! solve tracks the root nearest the previous step's value (branch
//! continuity from the symmetric start). At the even initial data
//! f(0) = 1, f'(0) = 0 the root is unique and equals -alpha² f(0), which
//! seeds the continuation.
//!
//! The integrator is an explicit adaptive embedded Bogacki–Shampine 3(2)
//! pair under a max-step cap; the profile zero is located by bisecting the
//! final step (event detection), which is where the reported stiffness of
//! the equality case concentrates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{AngularProfile, ProfileSample, TabulatedProfile};
use crate::pseudo::eq6_unchecked;
use crate::tol;

/// Tolerances and limits for one shot.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Cap on the step, which also bounds the knot spacing of the recorded
    /// trajectory; the default keeps cubic-Hermite feedback error below the
    /// cross-section tolerance.
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: 2e-4,
            min_step: tol::MIN_STEP,
            max_steps: 2_000_000,
        }
    }
}

/// One accepted sample of the trajectory; `fpp` is re-solved at the
/// accepted state so the triple satisfies the equality case to root
/// tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub psi: f64,
    pub f: f64,
    pub fp: f64,
    pub fpp: f64,
}

/// Why the integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// The profile crossed zero; the event was bisected in psi.
    ProfileZero,
    /// The step collapsed below the minimum (stiffness failure).
    StepCollapse,
    /// No root of the implicit equation could be bracketed when stepping.
    RootLost,
    /// psi exceeded pi/2 without the profile vanishing.
    AngleLimit,
}

/// Result of one shot, successful or stiff; a failed shot still carries the
/// last good trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootingResult {
    pub alpha: f64,
    pub trajectory: Vec<TrajectoryPoint>,
    /// Angle at which the profile first vanishes (last reached angle for
    /// stiff failures).
    pub half_angle: f64,
    pub converged: bool,
    /// Largest |expression| / (1 + |f|³) over the recorded trajectory.
    pub max_residual: f64,
    pub termination: Termination,
}

impl ShootingResult {
    pub fn full_angle_deg(&self) -> f64 {
        crate::geometry::rad_to_deg(2.0 * self.half_angle)
    }

    /// Even extension of the trajectory as a tabulated profile, suitable for
    /// feeding back into the cross-section checkers.
    pub fn tabulated_profile(&self) -> Result<AngularProfile> {
        let half: Vec<ProfileSample> = self
            .trajectory
            .iter()
            .map(|t| ProfileSample {
                psi: t.psi,
                f: t.f,
                fp: t.fp,
                fpp: t.fpp,
            })
            .collect();
        Ok(AngularProfile::Tabulated(TabulatedProfile::from_symmetric_half(&half)?))
    }
}

/// Root of the equality case in f'' nearest `fpp_guess`.
///
/// Searches for a sign change in an expanding window around the guess
/// (geometric expansion up to 2^20 times the seed width), then bisects to a
/// residual of [`tol::ROOT_RESIDUAL_REL`] times the local cubic scale.
pub fn solve_fpp(alpha: f64, f: f64, fp: f64, fpp_guess: f64) -> Result<f64> {
    if !(f >= 0.0) {
        return Err(Error::Parameter {
            name: "f",
            value: f,
            reason: "profile must be nonnegative along the shot",
        });
    }
    let g = |z: f64| eq6_unchecked(alpha, f, fp, z);
    let scale = 1.0 + f.abs().powi(3) + fp.abs().powi(3) + fpp_guess.abs().powi(3);

    let w0 = 0.5_f64.max(1e-3 * fpp_guess.abs());
    let mut w = w0;
    for _ in 0..=20 {
        let (lo, hi) = (fpp_guess - w, fpp_guess + w);
        // scan a few interior panels: the expression is flat on one side of
        // the pinch, so endpoint signs alone can miss the crossing
        let panels = 8;
        let mut prev_z = lo;
        let mut prev_g = g(lo);
        for i in 1..=panels {
            let z = lo + (hi - lo) * i as f64 / panels as f64;
            let gz = g(z);
            if prev_g == 0.0 {
                return Ok(prev_z);
            }
            if prev_g * gz <= 0.0 && prev_g.is_finite() && gz.is_finite() {
                return Ok(bisect_root(&g, prev_z, z, prev_g, scale));
            }
            prev_z = z;
            prev_g = gz;
        }
        w *= 2.0;
    }
    Err(Error::NoRoot {
        lo: fpp_guess - w,
        hi: fpp_guess + w,
    })
}

fn bisect_root(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut glo: f64, scale: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm.abs() <= tol::ROOT_RESIDUAL_REL * scale {
            return mid;
        }
        if glo * gm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
        if hi - lo <= f64::EPSILON * (1.0 + mid.abs()) {
            return 0.5 * (lo + hi);
        }
    }
    0.5 * (lo + hi)
}

/// Closed-form root at the even start f' = 0: the expression is piecewise
/// linear-then-constant in f'' there, with the single root -alpha² f.
fn start_fpp(alpha: f64, f: f64) -> f64 {
    -alpha * alpha * f
}

struct Rhs {
    alpha: f64,
    fpp_guess: f64,
}

impl Rhs {
    /// dy/dpsi for y = (f, f'), with f'' from the tracked implicit root.
    fn eval(&mut self, y: [f64; 2]) -> Result<[f64; 2]> {
        let fpp = solve_fpp(self.alpha, y[0].max(0.0), y[1], self.fpp_guess)?;
        self.fpp_guess = fpp;
        Ok([y[1], fpp])
    }
}

/// Integrates the equality case from the symmetric start f(0) = 1,
/// f'(0) = 0 until the profile vanishes.
pub fn shoot(alpha: f64, ctrl: StepControl) -> Result<ShootingResult> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::Parameter {
            name: "alpha",
            value: alpha,
            reason: "shooting requires alpha strictly inside (1, 2)",
        });
    }

    let mut rhs = Rhs {
        alpha,
        fpp_guess: start_fpp(alpha, 1.0),
    };
    let mut psi = 0.0_f64;
    let mut y = [1.0_f64, 0.0_f64];
    let mut h = ctrl.max_step;
    let mut trajectory = vec![TrajectoryPoint {
        psi,
        f: 1.0,
        fp: 0.0,
        fpp: start_fpp(alpha, 1.0),
    }];
    let mut max_residual = 0.0_f64;
    let mut termination = Termination::StepCollapse;
    let mut converged = false;

    for _ in 0..ctrl.max_steps {
        let saved_guess = rhs.fpp_guess;
        match bs23_step(&mut rhs, y, h) {
            Ok((y_new, err)) => {
                let tol_scale = ctrl.atol
                    + ctrl.rtol * y[0].abs().max(y_new[0].abs()).max(y[1].abs()).max(y_new[1].abs());
                if err > tol_scale {
                    rhs.fpp_guess = saved_guess;
                    h = (h * 0.9 * (tol_scale / err).powf(1.0 / 3.0)).max(0.25 * h);
                    if h < ctrl.min_step {
                        break;
                    }
                    continue;
                }
                if y_new[0] <= 0.0 {
                    // event: bisect the step length until the zero is
                    // located to EVENT_PSI_TOL in psi
                    let (h_event, y_event) = bisect_event(&mut rhs, y, h, saved_guess)?;
                    psi += h_event;
                    let fpp_end = solve_fpp(alpha, 0.0, y_event[1], rhs.fpp_guess).unwrap_or(f64::NAN);
                    trajectory.push(TrajectoryPoint {
                        psi,
                        f: 0.0,
                        fp: y_event[1],
                        fpp: fpp_end,
                    });
                    termination = Termination::ProfileZero;
                    converged = max_residual <= tol::TRAJECTORY_RESIDUAL_REL;
                    break;
                }
                psi += h;
                y = y_new;
                match solve_fpp(alpha, y[0], y[1], rhs.fpp_guess) {
                    Ok(fpp) => {
                        rhs.fpp_guess = fpp;
                        let res = eq6_unchecked(alpha, y[0], y[1], fpp).abs()
                            / (1.0 + y[0].abs().powi(3));
                        max_residual = max_residual.max(res);
                        trajectory.push(TrajectoryPoint {
                            psi,
                            f: y[0],
                            fp: y[1],
                            fpp,
                        });
                    }
                    Err(_) => {
                        termination = Termination::RootLost;
                        break;
                    }
                }
                if psi > std::f64::consts::FRAC_PI_2 {
                    termination = Termination::AngleLimit;
                    break;
                }
                let grow = 0.9 * (tol_scale / err.max(1e-300)).powf(1.0 / 3.0);
                h = (h * grow.min(5.0)).min(ctrl.max_step);
            }
            Err(_) => {
                rhs.fpp_guess = saved_guess;
                h *= 0.5;
                if h < ctrl.min_step {
                    break;
                }
            }
        }
    }

    Ok(ShootingResult {
        alpha,
        trajectory,
        half_angle: psi,
        converged,
        max_residual,
        termination,
    })
}

/// One Bogacki–Shampine 3(2) step; returns the third-order solution and the
/// max-norm embedded error estimate.
fn bs23_step(rhs: &mut Rhs, y: [f64; 2], h: f64) -> Result<([f64; 2], f64)> {
    let k1 = rhs.eval(y)?;
    let k2 = rhs.eval(add(y, scale(k1, 0.5 * h)))?;
    let k3 = rhs.eval(add(y, scale(k2, 0.75 * h)))?;
    let y3 = add(
        y,
        [
            h * (2.0 / 9.0 * k1[0] + 1.0 / 3.0 * k2[0] + 4.0 / 9.0 * k3[0]),
            h * (2.0 / 9.0 * k1[1] + 1.0 / 3.0 * k2[1] + 4.0 / 9.0 * k3[1]),
        ],
    );
    let k4 = rhs.eval(y3)?;
    let e = [
        h * (5.0 / 72.0 * k1[0] - 1.0 / 12.0 * k2[0] - 1.0 / 9.0 * k3[0] + 1.0 / 8.0 * k4[0]),
        h * (5.0 / 72.0 * k1[1] - 1.0 / 12.0 * k2[1] - 1.0 / 9.0 * k3[1] + 1.0 / 8.0 * k4[1]),
    ];
    Ok((y3, e[0].abs().max(e[1].abs())))
}

fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn scale(a: [f64; 2], s: f64) -> [f64; 2] {
    [a[0] * s, a[1] * s]
}

/// Bisects the step length of the crossing step until the zero of f is
/// pinned to [`tol::EVENT_PSI_TOL`]; returns the last positive state.
fn bisect_event(
    rhs: &mut Rhs,
    y: [f64; 2],
    h_cross: f64,
    guess: f64,
) -> Result<(f64, [f64; 2])> {
    let mut lo = 0.0_f64;
    let mut hi = h_cross;
    let mut y_lo = y;
    while hi - lo > tol::EVENT_PSI_TOL * 0.5 {
        let mid = 0.5 * (lo + hi);
        rhs.fpp_guess = guess;
        let (y_mid, _) = bs23_step(rhs, y, mid)?;
        if y_mid[0] <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            y_lo = y_mid;
        }
    }
    Ok((hi, y_lo))
}
