//! Points, 2-vectors, and symmetric 2×2 matrices in the plane.
//!
//! Angles are radians everywhere inside the crate; degrees appear only at
//! external interfaces. The two conversion helpers below are the single
//! place where the factor π/180 lives.

use serde::{Deserialize, Serialize};

pub fn deg_to_rad(deg: f64) -> f64 {
    deg * std::f64::consts::PI / 180.0
}

pub fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / std::f64::consts::PI
}

/// Point in polar coordinates, r > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    pub r: f64,
    pub psi: f64,
}

/// Point in Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
}

impl PolarPoint {
    pub fn new(r: f64, psi: f64) -> Self {
        Self { r, psi }
    }

    pub fn to_cartesian(self) -> CartesianPoint {
        CartesianPoint {
            x: self.r * self.psi.cos(),
            y: self.r * self.psi.sin(),
        }
    }
}

impl CartesianPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn to_polar(self) -> PolarPoint {
        PolarPoint {
            r: self.x.hypot(self.y),
            psi: self.y.atan2(self.x),
        }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Plain 2-vector operations on `[f64; 2]`.
pub fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

/// Symmetric 2×2 matrix stored as its three independent entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymMat2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl SymMat2 {
    pub fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Self { xx, xy, yy }
    }

    pub fn identity() -> Self {
        Self::new(1.0, 0.0, 1.0)
    }

    /// Accepts a general 2×2 matrix, enforcing relative asymmetry below 1e-12,
    /// and symmetrizes the off-diagonal entry.
    pub fn from_general(m: [[f64; 2]; 2]) -> crate::Result<Self> {
        let scale = m[0][0]
            .abs()
            .max(m[0][1].abs())
            .max(m[1][0].abs())
            .max(m[1][1].abs())
            .max(1e-300);
        if (m[0][1] - m[1][0]).abs() > 1e-12 * scale {
            return Err(crate::Error::Parameter {
                name: "matrix asymmetry",
                value: (m[0][1] - m[1][0]).abs() / scale,
                reason: "relative asymmetry exceeds 1e-12",
            });
        }
        Ok(Self::new(m[0][0], 0.5 * (m[0][1] + m[1][0]), m[1][1]))
    }

    pub fn trace(self) -> f64 {
        self.xx + self.yy
    }

    pub fn det(self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn mul_vec(self, v: [f64; 2]) -> [f64; 2] {
        [
            self.xx * v[0] + self.xy * v[1],
            self.xy * v[0] + self.yy * v[1],
        ]
    }

    /// v · M v
    pub fn quadratic_form(self, v: [f64; 2]) -> f64 {
        dot(v, self.mul_vec(v))
    }

    /// Largest absolute entry, used to scale residual tolerances.
    pub fn max_abs_entry(self) -> f64 {
        self.xx.abs().max(self.xy.abs()).max(self.yy.abs())
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(s * self.xx, s * self.xy, s * self.yy)
    }

    /// Congruence R M Rᵀ with the rotation R = [[c, -s], [s, c]].
    ///
    /// Used to push a matrix expressed in the orthonormal polar frame
    /// (e_r, e_psi) into Cartesian components.
    pub fn rotate(self, c: f64, s: f64) -> Self {
        let rxx = c * self.xx * c - 2.0 * c * self.xy * s + s * self.yy * s;
        let rxy = c * self.xy * c + c * s * (self.xx - self.yy) - s * self.xy * s;
        let ryy = s * self.xx * s + 2.0 * s * self.xy * c + c * self.yy * c;
        Self::new(rxx, rxy, ryy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polar_roundtrip_over_twelve_decades() {
        for &r in &[1e-6, 1e-3, 1.0, 1e3, 1e6] {
            for &psi in &[-1.2, -0.3, 0.0, 0.7, 1.4] {
                let p = PolarPoint::new(r, psi).to_cartesian().to_polar();
                assert!((p.r - r).abs() <= 1e-12 * r, "r={r} psi={psi}");
                assert!((p.psi - psi).abs() <= 1e-12, "r={r} psi={psi}");
            }
        }
    }

    #[test]
    fn rotation_preserves_trace_and_det() {
        let m = SymMat2::new(2.0, 0.5, -1.0);
        let r = m.rotate(0.6, 0.8);
        assert!((r.trace() - m.trace()).abs() < 1e-14);
        assert!((r.det() - m.det()).abs() < 1e-14);
    }

    #[test]
    fn from_general_rejects_asymmetric() {
        assert!(SymMat2::from_general([[1.0, 2.0], [2.1, 1.0]]).is_err());
        assert!(SymMat2::from_general([[1.0, 2.0], [2.0, 1.0]]).is_ok());
    }
}
