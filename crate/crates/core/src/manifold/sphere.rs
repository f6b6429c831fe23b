//! Closed forms on the unit sphere S^2 in R^3.

use nalgebra::Vector3;

/// Default angular distance from the antipode treated as the cut locus.
pub const DEFAULT_TOL_CUT: f64 = 1e-3;

/// Unit sphere with its round metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sphere2 {
    pub tol_cut: f64,
}

impl Default for Sphere2 {
    fn default() -> Self {
        Self { tol_cut: DEFAULT_TOL_CUT }
    }
}

/// Angle between two unit vectors, accurate at both ends of `[0, pi]`.
pub fn angle(p: &Vector3<f64>, q: &Vector3<f64>) -> f64 {
    p.cross(q).norm().atan2(p.dot(q))
}

impl Sphere2 {
    pub fn new(tol_cut: f64) -> Self {
        Self { tol_cut }
    }

    pub fn outside_cut_locus(&self, p: &Vector3<f64>, q: &Vector3<f64>) -> bool {
        angle(p, q) < std::f64::consts::PI - self.tol_cut
    }

    pub fn exp(&self, p: &Vector3<f64>, v: &Vector3<f64>, t: f64) -> Vector3<f64> {
        let speed = v.norm();
        if speed == 0.0 || t == 0.0 {
            return *p;
        }
        let (s, c) = (t * speed).sin_cos();
        (p * c + v * (s / speed)).normalize()
    }

    /// Inverse of `exp` on the complement of the antipode.
    pub fn log(&self, p: &Vector3<f64>, q: &Vector3<f64>) -> Vector3<f64> {
        let w = q - p * p.dot(q);
        let wn = w.norm();
        if wn == 0.0 {
            return Vector3::zeros();
        }
        w * (angle(p, q) / wn)
    }

    /// Parallel transport of `v` (tangent at `p`) to `q` along the minimal great circle.
    pub fn transport(&self, p: &Vector3<f64>, q: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
        let denom = 1.0 + p.dot(q);
        v - (p + q) * (q.dot(v) / denom)
    }

    /// Orthonormal basis of the tangent plane at `p`.
    ///
    /// The first vector is the coordinate axis least aligned with `p`, projected;
    /// the second completes a right-handed frame with `p`.
    pub fn frame(&self, p: &Vector3<f64>) -> [Vector3<f64>; 2] {
        let k = (0..3)
            .min_by(|&i, &j| p[i].abs().total_cmp(&p[j].abs()))
            .unwrap_or(0);
        let mut axis = Vector3::zeros();
        axis[k] = 1.0;
        let e1 = (axis - p * p.dot(&axis)).normalize();
        let e2 = p.cross(&e1);
        [e1, e2]
    }
}
