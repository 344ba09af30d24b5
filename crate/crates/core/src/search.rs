//! Angle-threshold scans and derivative-free parameter optimization for the
//! bundled weight families.
//!
//! The admissibility margin maximized by the optimizer is the cross-section
//! minimum of the cubic expression divided pointwise by
//! 1 + |f|³ + |f'|³ + |f''|³, so shrinking the profile cannot inflate the
//! margin (the expression is cubically homogeneous).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::deg_to_rad;
use crate::pseudo::{angular_report, eq6_unchecked};
use crate::tol;
use crate::weight::{PolarWeight, WeightFamily};

/// A weight family with its scan/optimization policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: WeightFamily,
    /// When set, each probed angle first re-optimizes the free parameters.
    pub optimize: bool,
    pub grid_n: usize,
    pub tolerance: f64,
}

impl FamilySpec {
    pub fn fixed(family: WeightFamily) -> Self {
        Self {
            family,
            optimize: false,
            grid_n: tol::DEFAULT_GRID_N,
            tolerance: tol::ADMISSIBILITY_REL,
        }
    }

    pub fn optimizing(family: WeightFamily) -> Self {
        Self {
            optimize: true,
            ..Self::fixed(family)
        }
    }

    /// Free parameter vector: [alpha] for the tied family, [alpha, beta] for
    /// the two-parameter family, the non-constant coefficients for the
    /// polynomial family (its constant entry is bound to the boundary
    /// condition).
    pub fn initial_params(&self) -> Vec<f64> {
        match &self.family {
            WeightFamily::Sverak { alpha, .. } => vec![*alpha],
            WeightFamily::CosPow { alpha, beta, .. } => vec![*alpha, *beta],
            WeightFamily::Poly { coeffs, .. } => coeffs[1..].to_vec(),
        }
    }

    /// Lower/upper clamping bounds per free parameter; the homogeneity
    /// exponent is hard-clamped to (1, 2].
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        match &self.family {
            WeightFamily::Sverak { .. } => vec![(1.0 + 1e-9, 2.0)],
            WeightFamily::CosPow { .. } => vec![(1.0 + 1e-9, 2.0), (1e-6, 64.0)],
            WeightFamily::Poly { coeffs, .. } => vec![(-1e3, 1e3); coeffs.len() - 1],
        }
    }

    /// Builds the weight at an angle for a given free-parameter vector.
    pub fn weight_at(&self, theta_deg: f64, params: &[f64]) -> Result<PolarWeight> {
        let fam = self.family_at(theta_deg, params)?;
        fam.build()
    }

    fn family_at(&self, theta_deg: f64, params: &[f64]) -> Result<WeightFamily> {
        let expect = self.initial_params().len();
        if params.len() != expect {
            return Err(Error::Parameter {
                name: "params",
                value: params.len() as f64,
                reason: "free-parameter vector has the wrong length",
            });
        }
        Ok(match &self.family {
            WeightFamily::Sverak { .. } => WeightFamily::Sverak {
                alpha: params[0],
                theta_deg,
            },
            WeightFamily::CosPow { .. } => WeightFamily::CosPow {
                alpha: params[0],
                beta: params[1],
                theta_deg,
            },
            WeightFamily::Poly { alpha, coeffs, .. } => {
                let mut c = Vec::with_capacity(coeffs.len());
                c.push(0.0); // rebound to the boundary condition by build()
                c.extend_from_slice(params);
                WeightFamily::Poly {
                    alpha: *alpha,
                    coeffs: c,
                    theta_deg,
                }
            }
        })
    }
}

/// Normalized admissibility margin of a weight over a cross-section: the
/// minimum of the cubic expression divided by 1 + |f|³ + |f'|³ + |f''|³.
pub fn normalized_margin(weight: &PolarWeight, theta_deg: f64, grid_n: usize) -> Result<f64> {
    let half = deg_to_rad(theta_deg) / 2.0;
    let alpha = weight.alpha();
    let mut min = f64::INFINITY;
    for i in 0..grid_n {
        let t = i as f64 / (grid_n - 1) as f64;
        let psi = half * (2.0 * t - 1.0);
        let v = weight.profile().eval(psi)?;
        let denom = 1.0 + v.f.abs().powi(3) + v.fp.abs().powi(3) + v.fpp.abs().powi(3);
        min = min.min(eq6_unchecked(alpha, v.f, v.fp, v.fpp) / denom);
    }
    Ok(min)
}

/// One probed angle of a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub theta_deg: f64,
    pub params: Vec<f64>,
    pub margin: f64,
    pub admissible: bool,
}

/// Which side of the threshold is admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanDirection {
    /// Wider cones admissible (the angle-coupled cosine families).
    AdmissibleAbove,
    /// Narrower cones admissible (profiles whose shape ignores theta).
    AdmissibleBelow,
}

/// Bisection scan result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub theta_min_deg: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub direction: ScanDirection,
    pub probes: Vec<ProbeRecord>,
    /// Fresh re-evaluations at theta_min ± tol reproduce
    /// (inadmissible, admissible) in scan direction.
    pub certificate: (bool, bool),
    /// Five post-hoc probes were consistent with one-sided admissibility.
    pub monotone_verified: bool,
    pub grid_n: usize,
    pub tolerance_deg: f64,
}

/// Bisects the admissibility threshold of a family between two angles.
///
/// The endpoint verdicts fix the scan direction; equal verdicts are a
/// bracket error. Monotonicity of admissibility in the angle is assumed for
/// the bisection and verified post hoc at five probe angles.
pub fn bisect_min_angle(
    spec: &FamilySpec,
    theta_lo: f64,
    theta_hi: f64,
    tol_deg: f64,
) -> Result<ScanResult> {
    if !(theta_hi > theta_lo) || !(tol_deg > 0.0) {
        return Err(Error::Parameter {
            name: "theta_hi",
            value: theta_hi,
            reason: "need theta_lo < theta_hi and a positive tolerance",
        });
    }
    let mut probes = Vec::new();
    let adm_lo = probe(spec, theta_lo, &mut probes)?;
    let adm_hi = probe(spec, theta_hi, &mut probes)?;
    if adm_lo == adm_hi {
        return Err(Error::Bracket {
            lo_deg: theta_lo,
            hi_deg: theta_hi,
            verdict: adm_lo,
        });
    }
    let direction = if adm_hi {
        ScanDirection::AdmissibleAbove
    } else {
        ScanDirection::AdmissibleBelow
    };

    let (mut lo, mut hi) = (theta_lo, theta_hi);
    let mut iterations = 0;
    while hi - lo > tol_deg {
        let mid = 0.5 * (lo + hi);
        iterations += 1;
        let adm_mid = probe(spec, mid, &mut probes)?;
        if adm_mid == adm_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let theta_min_deg = 0.5 * (lo + hi);

    // certificate: fresh evaluations either side of the threshold
    let below = probe(spec, theta_min_deg - tol_deg, &mut probes)?;
    let above = probe(spec, theta_min_deg + tol_deg, &mut probes)?;
    let certificate = (below, above);

    // post-hoc monotonicity probes across the original bracket
    let mut monotone_verified = true;
    for k in 1..=5 {
        let theta = theta_lo + (theta_hi - theta_lo) * k as f64 / 6.0;
        let adm = probe(spec, theta, &mut probes)?;
        let expected = match direction {
            ScanDirection::AdmissibleAbove => theta >= theta_min_deg + tol_deg,
            ScanDirection::AdmissibleBelow => theta <= theta_min_deg - tol_deg,
        };
        // only angles clear of the threshold band can contradict
        if (theta - theta_min_deg).abs() > tol_deg && adm != expected {
            monotone_verified = false;
        }
    }

    Ok(ScanResult {
        theta_min_deg,
        bracket: (lo, hi),
        iterations,
        direction,
        probes,
        certificate,
        monotone_verified,
        grid_n: spec.grid_n,
        tolerance_deg: tol_deg,
    })
}

fn probe(spec: &FamilySpec, theta_deg: f64, probes: &mut Vec<ProbeRecord>) -> Result<bool> {
    let (params, margin, weight) = if spec.optimize {
        let opt = optimize_params(spec, theta_deg, OptimizeOptions::default())?;
        let w = spec.weight_at(theta_deg, &opt.params)?;
        (opt.params, opt.margin, w)
    } else {
        let params = spec.initial_params();
        let w = spec.weight_at(theta_deg, &params)?;
        let margin = normalized_margin(&w, theta_deg, spec.grid_n)?;
        (params, margin, w)
    };
    let report = angular_report(&weight, theta_deg, spec.grid_n, spec.tolerance)?;
    probes.push(ProbeRecord {
        theta_deg,
        params,
        margin,
        admissible: report.admissible,
    });
    Ok(report.admissible)
}

/// Options of the simplex search.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OptimizeOptions {
    pub max_iter: usize,
    /// Relative size of the seed simplex steps.
    pub initial_step: f64,
    pub param_tol: f64,
    pub margin_tol: f64,
    /// Grid used inside the objective (coarser than report grids for speed).
    pub grid_n: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            initial_step: 0.05,
            param_tol: 1e-9,
            margin_tol: 1e-13,
            grid_n: 801,
        }
    }
}

/// One row of the optimization trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub margin: f64,
    pub params: Vec<f64>,
}

/// Best-found parameters (not certified global).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub params: Vec<f64>,
    pub margin: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub trace: Vec<TraceRow>,
}

/// Nelder–Mead search maximizing the normalized margin at a fixed angle.
///
/// Deterministic given the seed simplex; candidates are projected onto the
/// family's bounds before evaluation, so returned parameters never violate
/// them.
pub fn optimize_params(
    spec: &FamilySpec,
    theta_deg: f64,
    opts: OptimizeOptions,
) -> Result<OptimizeResult> {
    let x0 = spec.initial_params();
    if x0.is_empty() {
        return Err(Error::Parameter {
            name: "free parameters",
            value: 0.0,
            reason: "family exposes no free parameter",
        });
    }
    let bounds = spec.bounds();
    let clamp = |x: &mut Vec<f64>| {
        for (v, (lo, hi)) in x.iter_mut().zip(&bounds) {
            *v = v.clamp(*lo, *hi);
        }
    };
    let mut evaluations = 0usize;
    let mut objective = |x: &[f64]| -> f64 {
        evaluations += 1;
        match spec.weight_at(theta_deg, x) {
            Ok(w) => normalized_margin(&w, theta_deg, opts.grid_n).unwrap_or(f64::NEG_INFINITY),
            Err(_) => f64::NEG_INFINITY,
        }
    };

    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.clone());
    for i in 0..n {
        let mut v = x0.clone();
        let step = opts.initial_step * (1.0 + v[i].abs());
        v[i] += step;
        clamp(&mut v);
        // keep the vertex distinct if the clamp collapsed the step
        if v[i] == x0[i] {
            v[i] -= step;
            clamp(&mut v);
        }
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| objective(x)).collect();
    let mut trace = Vec::new();

    for iter in 0..opts.max_iter {
        let iterations = iter + 1;
        // sort best (largest margin) first
        let mut order: Vec<usize> = (0..simplex.len()).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        trace.push(TraceRow {
            iter,
            margin: values[0],
            params: simplex[0].clone(),
        });

        let spread = simplex[1..]
            .iter()
            .map(|x| {
                x.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0_f64, f64::max)
            })
            .fold(0.0_f64, f64::max);
        if spread < opts.param_tol && (values[0] - values[n]).abs() < opts.margin_tol {
            return Ok(OptimizeResult {
                params: simplex[0].clone(),
                margin: values[0],
                iterations,
                evaluations,
                trace,
            });
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|x| x[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let mut reflected: Vec<f64> = centroid
            .iter()
            .zip(&worst)
            .map(|(c, w)| c + (c - w))
            .collect();
        clamp(&mut reflected);
        let f_r = objective(&reflected);

        if f_r > values[0] {
            let mut expanded: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + 2.0 * (c - w))
                .collect();
            clamp(&mut expanded);
            let f_e = objective(&expanded);
            if f_e > f_r {
                simplex[n] = expanded;
                values[n] = f_e;
            } else {
                simplex[n] = reflected;
                values[n] = f_r;
            }
        } else if f_r > values[n - 1] {
            simplex[n] = reflected;
            values[n] = f_r;
        } else {
            let mut contracted: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + 0.5 * (w - c))
                .collect();
            clamp(&mut contracted);
            let f_c = objective(&contracted);
            if f_c > values[n] {
                simplex[n] = contracted;
                values[n] = f_c;
            } else {
                // shrink toward the best vertex
                for i in 1..=n {
                    let best = simplex[0].clone();
                    for (v, b) in simplex[i].iter_mut().zip(&best) {
                        *v = b + 0.5 * (*v - b);
                    }
                    clamp(&mut simplex[i]);
                    values[i] = objective(&simplex[i]);
                }
            }
        }
    }

    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    Err(Error::Convergence {
        max_iter: opts.max_iter,
        best_margin: values[best],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::presets;

    fn sverak_spec() -> FamilySpec {
        FamilySpec::fixed(WeightFamily::Sverak {
            alpha: presets::ALPHA_NEAR_TWO,
            theta_deg: 110.0,
        })
    }

    fn cospow_spec() -> FamilySpec {
        FamilySpec::fixed(WeightFamily::CosPow {
            alpha: presets::ALPHA_NEAR_TWO,
            beta: presets::COSPOW_BETA,
            theta_deg: 95.4,
        })
    }

    fn poly_spec() -> FamilySpec {
        FamilySpec::fixed(WeightFamily::Poly {
            alpha: presets::POLY_ALPHA,
            coeffs: presets::POLY_COEFFS.to_vec(),
            theta_deg: 95.0,
        })
    }

    #[test]
    fn tied_family_threshold() {
        let r = bisect_min_angle(&sverak_spec(), 100.0, 120.0, 0.05).unwrap();
        assert_eq!(r.direction, ScanDirection::AdmissibleAbove);
        assert!(
            (r.theta_min_deg - 109.4712).abs() <= 0.3,
            "threshold {}",
            r.theta_min_deg
        );
        assert_eq!(r.certificate, (false, true));
        assert!(r.monotone_verified);
    }

    #[test]
    fn two_param_family_threshold() {
        let r = bisect_min_angle(&cospow_spec(), 93.0, 96.0, 0.05).unwrap();
        assert!(r.theta_min_deg <= 95.4 + 0.1, "threshold {}", r.theta_min_deg);
        assert!((r.theta_min_deg - 95.3126).abs() <= 0.1, "threshold {}", r.theta_min_deg);
    }

    #[test]
    fn polynomial_family_reaches_below_ninety_five() {
        let r = bisect_min_angle(&poly_spec(), 90.0, 96.0, 0.05).unwrap();
        assert_eq!(r.direction, ScanDirection::AdmissibleAbove);
        assert!(r.theta_min_deg < 95.0, "threshold {}", r.theta_min_deg);
        assert!(r.theta_min_deg > 94.0, "threshold {}", r.theta_min_deg);
    }

    #[test]
    fn equal_endpoints_are_a_bracket_error() {
        let r = bisect_min_angle(&sverak_spec(), 112.0, 120.0, 0.05);
        assert!(matches!(r, Err(Error::Bracket { verdict: true, .. })));
    }

    #[test]
    fn optimizer_recovers_admissibility_at_the_tuned_angle() {
        let spec = FamilySpec {
            family: WeightFamily::CosPow {
                alpha: 1.9,
                beta: 2.0,
                theta_deg: 95.4,
            },
            optimize: true,
            grid_n: tol::DEFAULT_GRID_N,
            tolerance: tol::ADMISSIBILITY_REL,
        };
        let r = optimize_params(&spec, 95.4, OptimizeOptions::default()).unwrap();
        assert!(r.margin >= -1e-6, "margin {}", r.margin);
        assert!(r.params[0] > 1.99 && r.params[0] <= 2.0, "alpha {}", r.params[0]);
        assert!(
            r.params[1] >= 2.3 && r.params[1] <= 2.7,
            "beta {}",
            r.params[1]
        );
    }

    #[test]
    fn optimizer_respects_bounds() {
        let spec = FamilySpec::optimizing(WeightFamily::Sverak {
            alpha: 1.9,
            theta_deg: 109.5,
        });
        let r = optimize_params(&spec, 109.5, OptimizeOptions::default()).unwrap();
        assert!(r.params[0] > 1.0 && r.params[0] <= 2.0);
        assert!(r.margin >= 0.0, "margin {}", r.margin);
    }

    #[test]
    fn wide_cones_are_easy() {
        let w = cospow_spec().weight_at(170.0, &cospow_spec().initial_params()).unwrap();
        let m = normalized_margin(&w, 170.0, 2001).unwrap();
        assert!(m > 0.0, "margin {m}");
    }

    #[test]
    fn optimizer_is_deterministic() {
        let spec = FamilySpec::optimizing(WeightFamily::CosPow {
            alpha: 1.9,
            beta: 2.0,
            theta_deg: 100.0,
        });
        let a = optimize_params(&spec, 100.0, OptimizeOptions::default()).unwrap();
        let b = optimize_params(&spec, 100.0, OptimizeOptions::default()).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.margin, b.margin);
    }
}
