//! Riemannian manifolds given in a single chart by a metric and its Christoffel symbols.
//!
//! Geodesics solve `u'' = -Gamma(u)(u', u')` and parallel fields along a curve `u`
//! solve `v' = -Gamma(u)(u', v)`. Geodesics (and transport along them) use fixed-step
//! RK4; transport along an arbitrary sampled curve uses the explicit midpoint rule
//! on each piecewise-linear segment.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type MetricFn = Arc<dyn Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync>;
/// `(x, u, v) -> Gamma(x)(u, v)`, bilinear and symmetric in `u`, `v`.
pub type ChristoffelFn = Arc<dyn Fn(&DVector<f64>, &DVector<f64>, &DVector<f64>) -> DVector<f64> + Send + Sync>;
pub type DomainFn = Arc<dyn Fn(&DVector<f64>) -> bool + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartOptions {
    /// RK4 steps per unit of geodesic parameter.
    pub geodesic_steps: usize,
    /// Residual tolerance of the shooting method behind `log`.
    pub newton_tol: f64,
    pub max_newton: usize,
}

impl Default for ChartOptions {
    fn default() -> Self {
        Self { geodesic_steps: 64, newton_tol: 1e-13, max_newton: 50 }
    }
}

#[derive(Clone)]
pub struct ChartManifold {
    name: String,
    dim: usize,
    metric: MetricFn,
    christoffel: ChristoffelFn,
    domain: DomainFn,
    pub options: ChartOptions,
}

impl fmt::Debug for ChartManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartManifold")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("options", &self.options)
            .finish_non_exhaustive()
    }
}

/// Christoffel symbols of the conformal metric `exp(2 phi) I`:
/// `Gamma(u, v) = u (dphi . v) + v (dphi . u) - (u . v) dphi`.
fn conformal_christoffel(dphi: &DVector<f64>, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    u * dphi.dot(v) + v * dphi.dot(u) - dphi * u.dot(v)
}

impl ChartManifold {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        metric: MetricFn,
        christoffel: ChristoffelFn,
        domain: DomainFn,
    ) -> Self {
        Self { name: name.into(), dim, metric, christoffel, domain, options: ChartOptions::default() }
    }

    pub fn with_options(mut self, options: ChartOptions) -> Self {
        self.options = options;
        self
    }

    /// Euclidean `R^m` with the identity chart.
    pub fn flat(dim: usize) -> Self {
        Self::new(
            format!("flat-{dim}"),
            dim,
            Arc::new(move |_| DMatrix::identity(dim, dim)),
            Arc::new(move |_, _, _| DVector::zeros(dim)),
            Arc::new(|x| x.iter().all(|v| v.is_finite())),
        )
    }

    /// The unit sphere in stereographic coordinates projected from the north pole.
    ///
    /// The south pole is the origin; the north pole is the point at infinity, so the
    /// domain is cut off at radius `1e3`.
    pub fn stereographic_sphere() -> Self {
        Self::new(
            "stereographic-sphere",
            2,
            Arc::new(|x| {
                let s = 1.0 + x.norm_squared();
                DMatrix::identity(2, 2) * (4.0 / (s * s))
            }),
            Arc::new(|x, u, v| {
                let dphi = x * (-2.0 / (1.0 + x.norm_squared()));
                conformal_christoffel(&dphi, u, v)
            }),
            Arc::new(|x| x.len() == 2 && x.iter().all(|v| v.is_finite()) && x.norm() < 1e3),
        )
    }

    /// Upper half-plane model of the hyperbolic plane, metric `I / y^2`.
    pub fn hyperbolic_halfplane() -> Self {
        Self::new(
            "hyperbolic-halfplane",
            2,
            Arc::new(|x| DMatrix::identity(2, 2) / (x[1] * x[1])),
            Arc::new(|x, u, v| {
                let dphi = DVector::from_vec(vec![0.0, -1.0 / x[1]]);
                conformal_christoffel(&dphi, u, v)
            }),
            Arc::new(|x| x.len() == 2 && x.iter().all(|v| v.is_finite()) && x[1] > 0.0),
        )
    }

    /// Look up a built-in chart: `stereographic-sphere`, `hyperbolic-halfplane` or `flat-<m>`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "stereographic-sphere" => Ok(Self::stereographic_sphere()),
            "hyperbolic-halfplane" => Ok(Self::hyperbolic_halfplane()),
            _ => match name.strip_prefix("flat-").and_then(|m| m.parse::<usize>().ok()) {
                Some(m) if m > 0 => Ok(Self::flat(m)),
                _ => Err(Error::InvalidArgument(format!("unknown chart manifold '{name}'"))),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        x.len() == self.dim && (self.domain)(x)
    }

    pub fn metric(&self, x: &DVector<f64>) -> DMatrix<f64> {
        (self.metric)(x)
    }

    pub fn christoffel(&self, x: &DVector<f64>, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        (self.christoffel)(x, u, v)
    }

    pub fn inner(&self, x: &DVector<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        u.dot(&(self.metric(x) * v))
    }

    pub fn norm(&self, x: &DVector<f64>, v: &DVector<f64>) -> f64 {
        self.inner(x, v, v).max(0.0).sqrt()
    }

    /// Check domain membership, positive definiteness of `G(x)` and symmetry of `Gamma(x)`.
    pub fn validate_point(&self, x: &DVector<f64>) -> Result<()> {
        if !self.contains(x) {
            return Err(Error::OutsideChart);
        }
        let g = self.metric(x);
        let asym = (&g - g.transpose()).norm();
        if asym > 1e-12 * g.norm().max(1.0) {
            return Err(Error::InvalidMetric(f64::NAN));
        }
        let smallest = g.symmetric_eigenvalues().min();
        if !(smallest > 1e-12) {
            return Err(Error::InvalidMetric(smallest));
        }
        let mut defect = 0.0f64;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let (ei, ej) = (unit(self.dim, i), unit(self.dim, j));
                let d = (self.christoffel(x, &ei, &ej) - self.christoffel(x, &ej, &ei)).norm();
                defect = defect.max(d);
            }
        }
        if defect > 1e-10 {
            return Err(Error::AsymmetricChristoffel(defect));
        }
        Ok(())
    }

    /// Basis of `T_x M` orthonormal for `G(x)`: Gram-Schmidt on the coordinate basis.
    pub fn frame(&self, x: &DVector<f64>) -> Vec<DVector<f64>> {
        let g = self.metric(x);
        let mut out: Vec<DVector<f64>> = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut e = unit(self.dim, i);
            for f in &out {
                let c = f.dot(&(&g * &e));
                e -= f * c;
            }
            let n = e.dot(&(&g * &e)).sqrt();
            out.push(e / n);
        }
        out
    }

    /// Integrate the geodesic from `p` with velocity `v` for time `t`, transporting `carry`.
    fn flow(
        &self,
        p: &DVector<f64>,
        v: &DVector<f64>,
        t: f64,
        carry: &[DVector<f64>],
    ) -> Result<(DVector<f64>, DVector<f64>, Vec<DVector<f64>>)> {
        let mut u = p.clone();
        let mut w = v.clone();
        let mut vs = carry.to_vec();
        if t == 0.0 || v.iter().all(|&x| x == 0.0) {
            return Ok((u, w, vs));
        }
        let length = (t.abs() * self.norm(p, v)).max(t.abs()).max(1.0);
        let steps = (self.options.geodesic_steps as f64 * length).ceil() as usize;
        let h = t / steps as f64;
        let gamma = |x: &DVector<f64>, a: &DVector<f64>, b: &DVector<f64>| -> Result<DVector<f64>> {
            if !self.contains(x) {
                return Err(Error::GeodesicLeftChart);
            }
            Ok(self.christoffel(x, a, b))
        };
        type State = (DVector<f64>, DVector<f64>, Vec<DVector<f64>>);
        let rhs = |s: &State| -> Result<State> {
            let (x, a, carried) = s;
            let acc = -gamma(x, a, a)?;
            let dv = carried
                .iter()
                .map(|c| gamma(x, a, c).map(|g| -g))
                .collect::<Result<Vec<_>>>()?;
            Ok((a.clone(), acc, dv))
        };
        let axpy = |s: &State, k: &State, c: f64| -> State {
            (
                &s.0 + &k.0 * c,
                &s.1 + &k.1 * c,
                s.2.iter().zip(&k.2).map(|(a, b)| a + b * c).collect(),
            )
        };
        for _ in 0..steps {
            let s = (u, w, vs);
            let k1 = rhs(&s)?;
            let k2 = rhs(&axpy(&s, &k1, h / 2.0))?;
            let k3 = rhs(&axpy(&s, &k2, h / 2.0))?;
            let k4 = rhs(&axpy(&s, &k3, h))?;
            let comb = |a: &DVector<f64>, b: &DVector<f64>, c: &DVector<f64>, d: &DVector<f64>| {
                (a + b * 2.0 + c * 2.0 + d) * (h / 6.0)
            };
            u = &s.0 + comb(&k1.0, &k2.0, &k3.0, &k4.0);
            w = &s.1 + comb(&k1.1, &k2.1, &k3.1, &k4.1);
            vs = (0..s.2.len())
                .map(|j| &s.2[j] + comb(&k1.2[j], &k2.2[j], &k3.2[j], &k4.2[j]))
                .collect();
        }
        if !self.contains(&u) {
            return Err(Error::GeodesicLeftChart);
        }
        Ok((u, w, vs))
    }

    pub fn exp(&self, p: &DVector<f64>, v: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
        Ok(self.flow(p, v, t, &[])?.0)
    }

    /// Shooting method: Newton iteration on `exp(p, v, 1) = q` with a finite-difference Jacobian.
    pub fn log(&self, p: &DVector<f64>, q: &DVector<f64>) -> Result<DVector<f64>> {
        if !self.contains(p) || !self.contains(q) {
            return Err(Error::OutsideChart);
        }
        if p == q {
            return Ok(DVector::zeros(self.dim));
        }
        let guess = q - p;
        self.shoot(p, q, guess.clone()).or_else(|_| self.shoot_continued(p, q, &guess, 0))
    }

    // Failed shots retry via the midpoint of the chart segment, doubling its log as the guess.
    fn shoot_continued(&self, p: &DVector<f64>, q: &DVector<f64>, guess: &DVector<f64>, depth: usize) -> Result<DVector<f64>> {
        let mid = (p + q) / 2.0;
        let half = match self.shoot(p, &mid, guess / 2.0) {
            Ok(v) => v,
            Err(_) if depth < 6 => self.shoot_continued(p, &mid, &(guess / 2.0), depth + 1)?,
            Err(e) => return Err(e),
        };
        self.shoot(p, q, half * 2.0)
    }

    fn shoot(&self, p: &DVector<f64>, q: &DVector<f64>, mut v: DVector<f64>) -> Result<DVector<f64>> {
        let tol = self.options.newton_tol * (1.0 + q.norm());
        let mut r = self.exp(p, &v, 1.0)? - q;
        for _ in 0..self.options.max_newton {
            if r.norm() <= tol {
                return Ok(v);
            }
            let delta = 1e-7 * v.norm().max(1.0);
            let mut jac = DMatrix::zeros(self.dim, self.dim);
            for k in 0..self.dim {
                let mut vk = v.clone();
                vk[k] += delta;
                let col = (self.exp(p, &vk, 1.0)? - q - &r) / delta;
                jac.set_column(k, &col);
            }
            let step = jac.lu().solve(&r).ok_or(Error::LogDidNotConverge(r.norm()))?;
            let mut lambda = 1.0;
            loop {
                let cand = &v - &step * lambda;
                match self.exp(p, &cand, 1.0) {
                    Ok(x) => {
                        if (&x - q).norm() < r.norm() || lambda < 1e-3 {
                            v = cand;
                            r = x - q;
                            break;
                        }
                    }
                    Err(Error::GeodesicLeftChart) if lambda >= 1e-3 => {}
                    Err(e) => return Err(e),
                }
                lambda *= 0.5;
            }
        }
        if r.norm() <= tol {
            Ok(v)
        } else {
            Err(Error::LogDidNotConverge(r.norm()))
        }
    }

    /// Transport each vector in `vs` (tangent at `p`) to `q` along the geodesic `exp(p, t log(p, q))`.
    pub fn transport_along_geodesic(
        &self,
        p: &DVector<f64>,
        q: &DVector<f64>,
        vs: &[DVector<f64>],
    ) -> Result<Vec<DVector<f64>>> {
        let v = self.log(p, q)?;
        Ok(self.flow(p, &v, 1.0, vs)?.2)
    }

    /// Parallel transport of `v0` along the piecewise-linear chart curve through `points`,
    /// explicit midpoint rule per segment. Returns the field at every sample.
    pub fn transport_ode(&self, points: &[DVector<f64>], v0: &DVector<f64>) -> Result<Vec<DVector<f64>>> {
        let mut out = Vec::with_capacity(points.len());
        let mut v = v0.clone();
        out.push(v.clone());
        for w in points.windows(2) {
            let du = &w[1] - &w[0];
            let mid = (&w[0] + &w[1]) * 0.5;
            if !self.contains(&w[0]) || !self.contains(&mid) || !self.contains(&w[1]) {
                return Err(Error::GeodesicLeftChart);
            }
            // du already carries the step length, so the increments need no extra h.
            let k1 = -self.christoffel(&w[0], &du, &v);
            let vm = &v + &k1 * 0.5;
            let k2 = -self.christoffel(&mid, &du, &vm);
            v += k2;
            out.push(v.clone());
        }
        Ok(out)
    }
}

fn unit(dim: usize, i: usize) -> DVector<f64> {
    let mut e = DVector::zeros(dim);
    e[i] = 1.0;
    e
}

/// Coordinate maps between the unit sphere in R^3 and the stereographic chart.
pub mod stereographic {
    use nalgebra::{DVector, Vector3};

    /// Projection from the north pole.
    pub fn to_chart(p: &Vector3<f64>) -> DVector<f64> {
        let d = 1.0 - p.z;
        DVector::from_vec(vec![p.x / d, p.y / d])
    }

    pub fn from_chart(x: &DVector<f64>) -> Vector3<f64> {
        let r2 = x.norm_squared();
        let s = 1.0 + r2;
        Vector3::new(2.0 * x[0] / s, 2.0 * x[1] / s, (r2 - 1.0) / s)
    }

    /// Differential of [`from_chart`] applied to the chart vector `v`.
    pub fn push_forward(x: &DVector<f64>, v: &DVector<f64>) -> Vector3<f64> {
        let s = 1.0 + x.norm_squared();
        let xv = x.dot(v);
        Vector3::new(
            2.0 * v[0] / s - 4.0 * x[0] * xv / (s * s),
            2.0 * v[1] / s - 4.0 * x[1] * xv / (s * s),
            4.0 * xv / (s * s),
        )
    }

    /// Differential of [`to_chart`] applied to the ambient tangent vector `v` at `p`.
    pub fn pull_back(p: &Vector3<f64>, v: &Vector3<f64>) -> DVector<f64> {
        let d = 1.0 - p.z;
        DVector::from_vec(vec![v.x / d + p.x * v.z / (d * d), v.y / d + p.y * v.z / (d * d)])
    }
}
