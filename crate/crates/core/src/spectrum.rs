//! Closed-form eigendecomposition of symmetric 2×2 matrices.

use serde::{Deserialize, Serialize};

use crate::geometry::SymMat2;

/// Eigenvalues of a symmetric 2×2 matrix together with a unit eigenvector
/// for the smallest one.
///
/// `lambda_min <= lambda_max` always holds; the eigenvector orientation is
/// deterministic (first nonzero component positive), and the degenerate case
/// `lambda_min == lambda_max` returns `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HessianSpectrum {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub eigvec_min: [f64; 2],
}

/// Eigenvalues via lambda = tr/2 ∓ sqrt((tr/2)² − det).
///
/// The discriminant is computed as ((xx−yy)/2)² + xy², which is nonnegative
/// by construction, so rounding can never produce a NaN square root.
pub fn spectrum(h: &SymMat2) -> HessianSpectrum {
    let mid = 0.5 * (h.xx + h.yy);
    let disc = (0.5 * (h.xx - h.yy)).hypot(h.xy);
    let lambda_min = mid - disc;
    let lambda_max = mid + disc;

    let eigvec_min = if disc == 0.0 {
        // isotropic: every direction is an eigenvector
        [1.0, 0.0]
    } else {
        // Two candidate null-vector formulas for (H - lambda_min I);
        // pick the better conditioned one.
        let a = [h.xy, lambda_min - h.xx];
        let b = [lambda_min - h.yy, h.xy];
        let v = if a[0].hypot(a[1]) >= b[0].hypot(b[1]) {
            a
        } else {
            b
        };
        orient(normalize(v))
    };

    HessianSpectrum {
        lambda_min,
        lambda_max,
        eigvec_min,
    }
}

fn normalize(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

fn orient(v: [f64; 2]) -> [f64; 2] {
    if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) {
        [-v[0], -v[1]]
    } else {
        [v[0], v[1]]
    }
}
