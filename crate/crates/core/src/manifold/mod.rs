//! SRVT for curves in a Riemannian manifold, by parallel transport to a reference point.
//!
//! A velocity `v` at `p` is identified with a vector of `T_star M` by transporting it
//! back along the minimal geodesic from `star` to `p`; vectors of `T_star M` are written
//! in a fixed orthonormal frame there. The transform of a curve is the scaled transported
//! velocity, and its inverse integrates `a' = P_{star -> a}(sc^-1(h))`.
//!
//! Two geometry backends are provided: the unit sphere with closed forms, and a
//! generic single-chart manifold driven by its metric and Christoffel symbols.

pub mod chart;
pub mod sphere;

use nalgebra::{DMatrix, DVector, Vector3};

use crate::curve::{ac_norm, lp_norm, PExponent, SampledCurve, StepFunction};
use crate::error::{Error, Result};
use crate::scaling::{scale_vec, unscale_vec};

pub use chart::{ChartManifold, ChartOptions};
pub use sphere::Sphere2;

/// Geometry backend.
#[derive(Debug, Clone)]
pub enum ManifoldSpec {
    Sphere2(Sphere2),
    Chart(ChartManifold),
}

/// Point of the manifold: a unit vector of R^3 for the sphere, chart coordinates otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldPoint(DVector<f64>);

impl ManifoldPoint {
    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_coords(self) -> DVector<f64> {
        self.0
    }
}

/// Tangent vector together with its base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: ManifoldPoint,
    vec: DVector<f64>,
}

impl TangentVector {
    pub fn base(&self) -> &ManifoldPoint {
        &self.base
    }

    pub fn vec(&self) -> &DVector<f64> {
        &self.vec
    }
}

fn v3(x: &DVector<f64>) -> Vector3<f64> {
    Vector3::new(x[0], x[1], x[2])
}

fn dv3(x: Vector3<f64>) -> DVector<f64> {
    DVector::from_column_slice(x.as_slice())
}

const SPHERE_UNIT_TOL: f64 = 1e-10;

impl ManifoldSpec {
    pub fn sphere() -> Self {
        ManifoldSpec::Sphere2(Sphere2::default())
    }

    /// Intrinsic dimension (the number of frame coordinates of `T_star M`).
    pub fn dim(&self) -> usize {
        match self {
            ManifoldSpec::Sphere2(_) => 2,
            ManifoldSpec::Chart(c) => c.dim(),
        }
    }

    /// Length of a coordinate vector.
    pub fn coord_dim(&self) -> usize {
        match self {
            ManifoldSpec::Sphere2(_) => 3,
            ManifoldSpec::Chart(c) => c.dim(),
        }
    }

    pub fn point(&self, coords: DVector<f64>) -> Result<ManifoldPoint> {
        self.check_point(&coords)?;
        Ok(ManifoldPoint(coords))
    }

    pub fn point_from_slice(&self, coords: &[f64]) -> Result<ManifoldPoint> {
        self.point(DVector::from_column_slice(coords))
    }

    fn check_point(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.coord_dim() {
            return Err(Error::DimensionMismatch { expected: self.coord_dim(), found: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: 0 });
        }
        match self {
            ManifoldSpec::Sphere2(_) => {
                let drift = (x.norm() - 1.0).abs();
                if drift > SPHERE_UNIT_TOL {
                    return Err(Error::InvalidArgument(format!("not a unit vector (norm drift {drift:e})")));
                }
                Ok(())
            }
            ManifoldSpec::Chart(c) => c.validate_point(x),
        }
    }

    pub fn tangent(&self, base: &ManifoldPoint, vec: DVector<f64>) -> Result<TangentVector> {
        if vec.len() != self.coord_dim() {
            return Err(Error::DimensionMismatch { expected: self.coord_dim(), found: vec.len() });
        }
        if let ManifoldSpec::Sphere2(_) = self {
            let off = base.0.dot(&vec).abs();
            if off > SPHERE_UNIT_TOL * vec.norm().max(1.0) {
                return Err(Error::InvalidArgument(format!("vector is not tangent (normal part {off:e})")));
            }
        }
        Ok(TangentVector { base: base.clone(), vec })
    }

    fn exp_raw(&self, p: &DVector<f64>, v: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
        match self {
            ManifoldSpec::Sphere2(s) => Ok(dv3(s.exp(&v3(p), &v3(v), t))),
            ManifoldSpec::Chart(c) => c.exp(p, v, t),
        }
    }

    fn log_raw(&self, p: &DVector<f64>, q: &DVector<f64>) -> Result<DVector<f64>> {
        if !self.outside_cut_locus(p, q) {
            return Err(Error::CutLocusViolation { index: None });
        }
        match self {
            ManifoldSpec::Sphere2(s) => Ok(dv3(s.log(&v3(p), &v3(q)))),
            ManifoldSpec::Chart(c) => c.log(p, q),
        }
    }

    fn outside_cut_locus(&self, p: &DVector<f64>, q: &DVector<f64>) -> bool {
        match self {
            ManifoldSpec::Sphere2(s) => s.outside_cut_locus(&v3(p), &v3(q)),
            ManifoldSpec::Chart(c) => c.contains(p) && c.contains(q),
        }
    }

    fn norm_raw(&self, p: &DVector<f64>, v: &DVector<f64>) -> f64 {
        match self {
            ManifoldSpec::Sphere2(_) => v.norm(),
            ManifoldSpec::Chart(c) => c.norm(p, v),
        }
    }

    fn inner_raw(&self, p: &DVector<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        match self {
            ManifoldSpec::Sphere2(_) => u.dot(v),
            ManifoldSpec::Chart(c) => c.inner(p, u, v),
        }
    }

    /// Transport vectors tangent at `p` to `q` along the minimal geodesic.
    fn transport_raw(&self, p: &DVector<f64>, q: &DVector<f64>, vs: &[DVector<f64>]) -> Result<Vec<DVector<f64>>> {
        if !self.outside_cut_locus(p, q) {
            return Err(Error::CutLocusViolation { index: None });
        }
        match self {
            ManifoldSpec::Sphere2(s) => {
                let (a, b) = (v3(p), v3(q));
                Ok(vs.iter().map(|v| dv3(s.transport(&a, &b, &v3(v)))).collect())
            }
            ManifoldSpec::Chart(c) => c.transport_along_geodesic(p, q, vs),
        }
    }

    /// Orthonormal frame of the tangent space at `p`, as coordinate vectors.
    pub fn frame(&self, p: &ManifoldPoint) -> Vec<DVector<f64>> {
        self.frame_raw(&p.0)
    }

    fn frame_raw(&self, p: &DVector<f64>) -> Vec<DVector<f64>> {
        match self {
            ManifoldSpec::Sphere2(s) => s.frame(&v3(p)).iter().map(|e| dv3(*e)).collect(),
            ManifoldSpec::Chart(c) => c.frame(p),
        }
    }

    /// `exp_p(t v)`.
    pub fn exp(&self, v: &TangentVector, t: f64) -> Result<ManifoldPoint> {
        Ok(ManifoldPoint(self.exp_raw(&v.base.0, &v.vec, t)?))
    }

    /// Inverse of `exp_p` away from the cut locus of `p`.
    pub fn log(&self, p: &ManifoldPoint, q: &ManifoldPoint) -> Result<TangentVector> {
        Ok(TangentVector { base: p.clone(), vec: self.log_raw(&p.0, &q.0)? })
    }

    /// True when `q` is joined to `p` by a unique minimal geodesic (for charts:
    /// both lie in the chart domain).
    pub fn cut_locus_check(&self, p: &ManifoldPoint, q: &ManifoldPoint) -> bool {
        self.outside_cut_locus(&p.0, &q.0)
    }

    /// Geodesic distance.
    pub fn distance(&self, p: &ManifoldPoint, q: &ManifoldPoint) -> Result<f64> {
        match self {
            ManifoldSpec::Sphere2(_) => Ok(sphere::angle(&v3(&p.0), &v3(&q.0))),
            ManifoldSpec::Chart(c) => Ok(c.norm(&p.0, &c.log(&p.0, &q.0)?)),
        }
    }

    /// Riemannian norm of a tangent vector.
    pub fn norm(&self, v: &TangentVector) -> f64 {
        self.norm_raw(&v.base.0, &v.vec)
    }

    /// Parallel transport of `v` to `q` along the minimal geodesic from its base point.
    pub fn transport_along_geodesic(&self, q: &ManifoldPoint, v: &TangentVector) -> Result<TangentVector> {
        let out = self.transport_raw(&v.base.0, &q.0, std::slice::from_ref(&v.vec))?;
        Ok(TangentVector { base: q.clone(), vec: out.into_iter().next().expect("one vector") })
    }

    /// Frame at `star` transported to `p` along the minimal geodesic from `star`.
    ///
    /// Columns are the images of the frame vectors, so `m w` is the transport of the
    /// frame coordinates `w`.
    fn star_transport(&self, p: &DVector<f64>, star: &DVector<f64>, frame: &[DVector<f64>]) -> Result<DMatrix<f64>> {
        let cols = self.transport_raw(star, p, frame)?;
        Ok(DMatrix::from_columns(&cols))
    }

    fn raw_to_star(&self, p: &DVector<f64>, v: &DVector<f64>, star: &DVector<f64>, frame: &[DVector<f64>]) -> Result<DVector<f64>> {
        match self {
            ManifoldSpec::Sphere2(_) => {
                let back = self.transport_raw(p, star, std::slice::from_ref(v))?.remove(0);
                Ok(DVector::from_iterator(frame.len(), frame.iter().map(|e| e.dot(&back))))
            }
            ManifoldSpec::Chart(_) => {
                let m = self.star_transport(p, star, frame)?;
                m.lu().solve(v).ok_or(Error::InvalidMetric(0.0))
            }
        }
    }

    fn raw_from_star(&self, p: &DVector<f64>, w: &DVector<f64>, star: &DVector<f64>, frame: &[DVector<f64>]) -> Result<DVector<f64>> {
        Ok(self.star_transport(p, star, frame)? * w)
    }

    /// `pt_star`: transport `v` back to `star` and return its frame coordinates.
    pub fn transport_to_star(&self, v: &TangentVector, star: &ManifoldPoint) -> Result<DVector<f64>> {
        self.raw_to_star(&v.base.0, &v.vec, &star.0, &self.frame_raw(&star.0))
    }

    /// Inverse of [`transport_to_star`](Self::transport_to_star) at the point `p`.
    pub fn transport_from_star(&self, p: &ManifoldPoint, w: &DVector<f64>, star: &ManifoldPoint) -> Result<TangentVector> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: w.len() });
        }
        let vec = self.raw_from_star(&p.0, w, &star.0, &self.frame_raw(&star.0))?;
        Ok(TangentVector { base: p.clone(), vec })
    }
}

/// Grid curve with values in a manifold.
#[derive(Debug, Clone)]
pub struct ManifoldCurve {
    spec: ManifoldSpec,
    points: Vec<ManifoldPoint>,
}

impl ManifoldCurve {
    pub fn new(spec: ManifoldSpec, points: Vec<DVector<f64>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewSamples(points.len()));
        }
        let points = points
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                spec.point(x).map_err(|e| Error::InvalidSample { index: i, reason: e.to_string() })
            })
            .collect::<Result<_>>()?;
        Ok(Self { spec, points })
    }

    /// Interpret the samples of a [`SampledCurve`] as manifold coordinates.
    pub fn from_sampled(spec: ManifoldSpec, c: &SampledCurve) -> Result<Self> {
        Self::new(spec, c.samples().map(DVector::from_column_slice).collect())
    }

    /// Sample `f` at the grid times `i / n`.
    pub fn from_fn<F>(spec: ManifoldSpec, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> DVector<f64>,
    {
        Self::new(spec, (0..=n).map(|i| f(i as f64 / n as f64)).collect())
    }

    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }

    pub fn intervals(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[ManifoldPoint] {
        &self.points
    }

    pub fn start(&self) -> &ManifoldPoint {
        &self.points[0]
    }

    /// Coordinates as a [`SampledCurve`].
    pub fn to_sampled(&self) -> SampledCurve {
        let data = self.points.iter().flat_map(|p| p.0.iter().copied()).collect();
        SampledCurve::new(self.spec.coord_dim(), data).expect("points are finite")
    }

    /// Geodesic interpolation between adjacent samples.
    pub fn eval(&self, t: f64) -> Result<ManifoldPoint> {
        let (i, frac) = crate::curve::locate(t, self.intervals())?;
        let a = &self.points[i].0;
        if frac == 0.0 {
            return Ok(self.points[i].clone());
        }
        let v = self.spec.log_raw(a, &self.points[i + 1].0).map_err(|e| e.at(i))?;
        Ok(ManifoldPoint(self.spec.exp_raw(a, &v, frac)?))
    }

    pub fn resample(&self, times: &[f64]) -> Result<Self> {
        let points = times.iter().map(|&t| self.eval(t)).collect::<Result<Vec<_>>>()?;
        if points.len() < 2 {
            return Err(Error::TooFewSamples(points.len()));
        }
        Ok(Self { spec: self.spec.clone(), points })
    }

    pub fn resample_uniform(&self, n: usize) -> Result<Self> {
        if n == self.intervals() {
            return Ok(self.clone());
        }
        let times: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        self.resample(&times)
    }

    /// Largest geodesic distance between corresponding samples.
    pub fn max_distance(&self, other: &Self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (a, b) in self.points.iter().zip(&other.points) {
            worst = worst.max(self.spec.distance(a, b)?);
        }
        Ok(worst)
    }
}

/// The pair `(c(0), R(c))`.
#[derive(Debug, Clone)]
pub struct ManifoldSrvt {
    pub start: ManifoldPoint,
    /// Values in frame coordinates of `T_star M`.
    pub q: StepFunction,
}

/// SRVT of a manifold curve relative to `star`.
///
/// The velocity on subinterval `i` is `N log(c_i, c_{i+1})`, attached to `c_i`.
pub fn srvt_manifold(c: &ManifoldCurve, star: &ManifoldPoint) -> Result<ManifoldSrvt> {
    let spec = &c.spec;
    for (i, p) in c.points.iter().enumerate() {
        if !spec.outside_cut_locus(&star.0, &p.0) {
            return Err(Error::CutLocusViolation { index: Some(i) });
        }
    }
    let frame = spec.frame_raw(&star.0);
    let n = c.intervals() as f64;
    let mut data = Vec::with_capacity(c.intervals() * spec.dim());
    for (i, w) in c.points.windows(2).enumerate() {
        let vel = spec.log_raw(&w[0].0, &w[1].0).map_err(|e| e.at(i))? * n;
        let coords = spec.raw_to_star(&w[0].0, &vel, &star.0, &frame).map_err(|e| e.at(i))?;
        data.extend(scale_vec(coords.as_slice()));
    }
    Ok(ManifoldSrvt { start: c.start().clone(), q: StepFunction::new(spec.dim(), data)? })
}

/// Time stepping for the inverse transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InverseScheme {
    /// `a_{i+1} = exp(a_i, P_{star -> a_i}(w_i) / N)`; exactly inverts [`srvt_manifold`].
    #[default]
    GeometricEuler,
    /// Riemannian midpoint rule for `a' = P_{star -> a}(w(t))` with `w` piecewise constant;
    /// second-order accurate for that ODE.
    Midpoint,
}

/// Inverse SRVT: integrate `a' = P_{star -> a}(sc^-1(h))` from `alpha0`.
pub fn srvt_manifold_inverse(
    spec: &ManifoldSpec,
    h: &StepFunction,
    alpha0: &ManifoldPoint,
    star: &ManifoldPoint,
) -> Result<ManifoldCurve> {
    srvt_manifold_inverse_with(spec, h, alpha0, star, InverseScheme::GeometricEuler)
}

pub fn srvt_manifold_inverse_with(
    spec: &ManifoldSpec,
    h: &StepFunction,
    alpha0: &ManifoldPoint,
    star: &ManifoldPoint,
    scheme: InverseScheme,
) -> Result<ManifoldCurve> {
    if h.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: h.dim() });
    }
    if !spec.outside_cut_locus(&star.0, &alpha0.0) {
        return Err(Error::CutLocusViolation { index: Some(0) });
    }
    let frame = spec.frame_raw(&star.0);
    let dt = 1.0 / h.intervals() as f64;
    let mut points = Vec::with_capacity(h.intervals() + 1);
    points.push(alpha0.clone());
    for i in 0..h.intervals() {
        let w = DVector::from_vec(unscale_vec(h.value(i)));
        let a = &points[i].0;
        let field = |p: &DVector<f64>| spec.raw_from_star(p, &w, &star.0, &frame);
        let next = match scheme {
            InverseScheme::GeometricEuler => spec.exp_raw(a, &field(a).map_err(|e| e.at(i))?, dt)?,
            InverseScheme::Midpoint => {
                let mid = spec.exp_raw(a, &field(a).map_err(|e| e.at(i))?, 0.5 * dt)?;
                if !spec.outside_cut_locus(&star.0, &mid) {
                    return Err(Error::CutLocusViolation { index: Some(i) });
                }
                let vm = field(&mid).map_err(|e| e.at(i))?;
                let back = spec.transport_raw(&mid, a, &[vm])?.remove(0);
                spec.exp_raw(a, &back, dt)?
            }
        };
        if !spec.outside_cut_locus(&star.0, &next) {
            return Err(Error::CutLocusViolation { index: Some(i + 1) });
        }
        points.push(ManifoldPoint(next));
    }
    Ok(ManifoldCurve { spec: spec.clone(), points })
}

fn harmonize(a: &ManifoldCurve, c: &ManifoldCurve) -> Result<(ManifoldCurve, ManifoldCurve)> {
    if a.spec.coord_dim() != c.spec.coord_dim() {
        return Err(Error::DimensionMismatch { expected: a.spec.coord_dim(), found: c.spec.coord_dim() });
    }
    let n = a.intervals().max(c.intervals());
    Ok((a.resample_uniform(n)?, c.resample_uniform(n)?))
}

/// `L^2` distance of the SRVT images; with `basepoint` the geodesic distance of the
/// starting points is added.
pub fn manifold_distance(a: &ManifoldCurve, c: &ManifoldCurve, star: &ManifoldPoint, basepoint: bool) -> Result<f64> {
    let (a, c) = harmonize(a, c)?;
    let qa = srvt_manifold(&a, star)?;
    let qc = srvt_manifold(&c, star)?;
    let d = lp_norm(&qa.q.sub(&qc.q)?, PExponent::TWO, None)?;
    if basepoint {
        Ok(d + a.spec.distance(a.start(), c.start())?)
    } else {
        Ok(d)
    }
}

/// `k + 1` curves along the straight line between the SRVT images, with starting
/// points on the geodesic between the two starting points.
pub fn manifold_geodesic(a: &ManifoldCurve, c: &ManifoldCurve, star: &ManifoldPoint, k: usize) -> Result<Vec<ManifoldCurve>> {
    if k == 0 {
        return Err(Error::InvalidArgument("geodesic needs at least one step".into()));
    }
    let (a, c) = harmonize(a, c)?;
    let spec = &a.spec;
    let qa = srvt_manifold(&a, star)?;
    let qc = srvt_manifold(&c, star)?;
    let between = spec.log(a.start(), c.start())?;
    (0..=k)
        .map(|j| {
            if j == 0 {
                return Ok(a.clone());
            }
            if j == k {
                return Ok(c.clone());
            }
            let s = j as f64 / k as f64;
            let start = spec.exp(&between, s)?;
            srvt_manifold_inverse(spec, &qa.q.lerp(&qc.q, s)?, &start, star)
        })
        .collect()
}

/// Parallel transport of `v0` (tangent at the first sample) along the curve.
///
/// Chart manifolds integrate `v' = -Gamma(u)(u', v)` along the piecewise-linear chart
/// curve with the midpoint rule; on the sphere the curve is piecewise geodesic and each
/// segment is transported in closed form.
pub fn parallel_transport_ode(c: &ManifoldCurve, v0: &DVector<f64>) -> Result<Vec<DVector<f64>>> {
    Ok(transport_along_curve(c, std::slice::from_ref(v0))?
        .into_iter()
        .map(|mut vs| vs.remove(0))
        .collect())
}

fn transport_along_curve(c: &ManifoldCurve, vs: &[DVector<f64>]) -> Result<Vec<Vec<DVector<f64>>>> {
    let points: Vec<DVector<f64>> = c.points.iter().map(|p| p.0.clone()).collect();
    match &c.spec {
        ManifoldSpec::Chart(ch) => {
            let per_vector = vs
                .iter()
                .map(|v| ch.transport_ode(&points, v))
                .collect::<Result<Vec<_>>>()?;
            Ok((0..points.len())
                .map(|i| per_vector.iter().map(|f| f[i].clone()).collect())
                .collect())
        }
        ManifoldSpec::Sphere2(_) => {
            let mut out = Vec::with_capacity(points.len());
            let mut cur = vs.to_vec();
            out.push(cur.clone());
            for (i, w) in points.windows(2).enumerate() {
                cur = c.spec.transport_raw(&w[0], &w[1], &cur).map_err(|e| e.at(i))?;
                out.push(cur.clone());
            }
            Ok(out)
        }
    }
}

/// Which section norm to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionNorm {
    /// `(int |X(t)|_{c(t)}^p dt)^(1/p)`.
    L0,
    /// `|X(0)| + |nabla_c X|_p`.
    Ac1,
}

fn check_section(c: &ManifoldCurve, x: &[DVector<f64>]) -> Result<()> {
    if x.len() != c.points.len() {
        return Err(Error::DimensionMismatch { expected: c.points.len(), found: x.len() });
    }
    for (i, (p, v)) in c.points.iter().zip(x).enumerate() {
        c.spec.tangent(p, v.clone()).map_err(|e| Error::InvalidSample { index: i, reason: e.to_string() })?;
    }
    Ok(())
}

/// Express a vector field along `c` in a parallel orthonormal frame started at `c(0)`.
///
/// This is the isometry that identifies sections along `c` with `T_{c(0)} M`-valued
/// functions; the covariant derivative becomes the ordinary derivative.
pub fn section_to_start(c: &ManifoldCurve, x: &[DVector<f64>]) -> Result<SampledCurve> {
    check_section(c, x)?;
    let frame = c.spec.frame_raw(&c.start().0);
    let frames = transport_along_curve(c, &frame)?;
    let m = frame.len();
    let mut data = Vec::with_capacity(x.len() * m);
    for ((p, v), f) in c.points.iter().zip(x).zip(&frames) {
        data.extend(f.iter().map(|e| c.spec.inner_raw(&p.0, e, v)));
    }
    SampledCurve::new(m, data)
}

/// Norm of a vector field `x` along `c` (one tangent vector per sample).
///
/// On each subinterval the field takes its left-endpoint value.
pub fn section_norm(c: &ManifoldCurve, x: &[DVector<f64>], p: PExponent, kind: SectionNorm) -> Result<f64> {
    match kind {
        SectionNorm::L0 => {
            check_section(c, x)?;
            let pointwise: Vec<f64> = c.points[..c.intervals()]
                .iter()
                .zip(x)
                .map(|(pt, v)| c.spec.norm_raw(&pt.0, v))
                .collect();
            lp_norm(&StepFunction::new(1, pointwise)?, p, None)
        }
        SectionNorm::Ac1 => Ok(ac_norm(&section_to_start(c, x)?, p)),
    }
}
