//! SRVT for curves in the matrix Lie groups SO(3) and SE(3).
//!
//! The transport is the right Maurer-Cartan form: a curve `g(t)` is sent to its right
//! logarithmic derivative `g'(t) g(t)^-1` in the Lie algebra, which is then scaled.
//! Discretely the right logarithmic derivative on subinterval `i` is
//! `N log(g_{i+1} g_i^-1)` and the evolution operator inverts it with the
//! exponential Euler step `g_{i+1} = exp(xi_i / N) g_i`, which is exact for
//! piecewise-constant algebra-valued inputs.
//!
//! Algebra coordinates are `(w1, w2, w3)` for so(3) and `(w1, w2, w3, v1, v2, v3)` for
//! se(3), rotation first.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix3, Matrix4, Quaternion, Rotation3, UnitQuaternion, Vector3};

use crate::curve::{lp_norm, PExponent, StepFunction};
use crate::error::{Error, Result};
use crate::scaling::{scale, unscale};

/// Distance below pi at which the group logarithm refuses to pick a branch.
pub const TOL_BRANCH: f64 = 1e-6;

/// Tolerance for orthogonality and determinant checks.
pub const GROUP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    So3,
    Se3,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::So3 => "so3",
            GroupKind::Se3 => "se3",
        }
    }

    /// Dimension of the Lie algebra.
    pub fn algebra_dim(self) -> usize {
        match self {
            GroupKind::So3 => 3,
            GroupKind::Se3 => 6,
        }
    }

    pub fn matrix_size(self) -> usize {
        match self {
            GroupKind::So3 => 3,
            GroupKind::Se3 => 4,
        }
    }

    fn ensure_same(self, other: GroupKind) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::KindMismatch(self.name(), other.name()))
        }
    }
}

fn hat3(w: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

/// `sin(x)/x`, `(1 - cos x)/x^2` and `(x - sin x)/x^3`.
fn exp_coefficients(theta: f64) -> (f64, f64, f64) {
    let t2 = theta * theta;
    if theta < 1e-2 {
        let a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
        let b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
        let c = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
        (a, b, c)
    } else {
        let half = (0.5 * theta).sin();
        (theta.sin() / theta, 2.0 * half * half / t2, (theta - theta.sin()) / (t2 * theta))
    }
}

fn so3_exp(w: &Vector3<f64>) -> Matrix3<f64> {
    let theta = w.norm();
    let (a, b, _) = exp_coefficients(theta);
    let k = hat3(w);
    Matrix3::identity() + k * a + k * k * b
}

fn so3_log(r: &Matrix3<f64>) -> Result<Vector3<f64>> {
    let skew = Vector3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]) * 0.5;
    let cos = ((r.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let sin = skew.norm();
    let theta = sin.atan2(cos);
    if theta > PI - TOL_BRANCH {
        return Err(Error::AngleNearPi { angle: theta, index: None });
    }
    if cos >= 0.0 {
        let factor = if theta < 1e-4 {
            1.0 + theta * theta / 6.0
        } else {
            theta / sin
        };
        return Ok(skew * factor);
    }
    // Obtuse angles: read the axis off the symmetric part, (1 - cos) n n^T.
    let sym = (r + r.transpose()) * 0.5 - Matrix3::identity() * cos;
    let k = (0..3)
        .max_by(|&i, &j| sym[(i, i)].total_cmp(&sym[(j, j)]))
        .unwrap_or(0);
    let mut axis: Vector3<f64> = sym.column(k).into();
    axis /= axis.norm();
    if axis.dot(&skew) < 0.0 {
        axis = -axis;
    }
    Ok(axis * theta)
}

/// Element of SO(3) or SE(3).
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    So3(Matrix3<f64>),
    Se3 { rotation: Matrix3<f64>, translation: Vector3<f64> },
}

fn check_rotation(r: &Matrix3<f64>) -> Result<()> {
    if r.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index: 0 });
    }
    let orth = (r.transpose() * r - Matrix3::identity()).norm();
    let det = r.determinant();
    if orth > GROUP_TOLERANCE || (det - 1.0).abs() > GROUP_TOLERANCE {
        return Err(Error::InvalidArgument(format!(
            "not a rotation (orthogonality defect {orth:e}, determinant {det})"
        )));
    }
    Ok(())
}

impl GroupElement {
    pub fn identity(kind: GroupKind) -> Self {
        match kind {
            GroupKind::So3 => GroupElement::So3(Matrix3::identity()),
            GroupKind::Se3 => GroupElement::Se3 {
                rotation: Matrix3::identity(),
                translation: Vector3::zeros(),
            },
        }
    }

    pub fn rotation(r: Matrix3<f64>) -> Result<Self> {
        check_rotation(&r)?;
        Ok(GroupElement::So3(r))
    }

    pub fn rigid(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self> {
        check_rotation(&rotation)?;
        if translation.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: 0 });
        }
        Ok(GroupElement::Se3 { rotation, translation })
    }

    /// Validate a 3x3 (SO3) or 4x4 homogeneous (SE3) matrix.
    pub fn from_matrix(kind: GroupKind, m: &DMatrix<f64>) -> Result<Self> {
        let n = kind.matrix_size();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
        }
        let r = Matrix3::from_fn(|i, j| m[(i, j)]);
        match kind {
            GroupKind::So3 => Self::rotation(r),
            GroupKind::Se3 => {
                if m[(3, 0)] != 0.0 || m[(3, 1)] != 0.0 || m[(3, 2)] != 0.0 || m[(3, 3)] != 1.0 {
                    return Err(Error::InvalidArgument("bottom row must be (0, 0, 0, 1)".into()));
                }
                Self::rigid(r, Vector3::new(m[(0, 3)], m[(1, 3)], m[(2, 3)]))
            }
        }
    }

    /// Rotation from a unit quaternion `(w, x, y, z)`; the norm may drift from 1 by at most `1e-6`.
    pub fn from_quaternion(q: [f64; 4]) -> Result<Matrix3<f64>> {
        if q.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: 0 });
        }
        let raw = Quaternion::new(q[0], q[1], q[2], q[3]);
        let drift = (raw.norm() - 1.0).abs();
        if drift > 1e-6 {
            return Err(Error::InvalidArgument(format!("quaternion norm drifts from 1 by {drift:e}")));
        }
        Ok(*UnitQuaternion::from_quaternion(raw).to_rotation_matrix().matrix())
    }

    /// Unit quaternion `(w, x, y, z)` of the rotation part, with `w >= 0`.
    pub fn quaternion(&self) -> [f64; 4] {
        let r = Rotation3::from_matrix_unchecked(*self.rotation_part());
        let q = UnitQuaternion::from_rotation_matrix(&r);
        let q = if q.w < 0.0 { -q.into_inner() } else { q.into_inner() };
        [q.w, q.i, q.j, q.k]
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            GroupElement::So3(_) => GroupKind::So3,
            GroupElement::Se3 { .. } => GroupKind::Se3,
        }
    }

    pub fn rotation_part(&self) -> &Matrix3<f64> {
        match self {
            GroupElement::So3(r) => r,
            GroupElement::Se3 { rotation, .. } => rotation,
        }
    }

    pub fn translation_part(&self) -> Option<&Vector3<f64>> {
        match self {
            GroupElement::So3(_) => None,
            GroupElement::Se3 { translation, .. } => Some(translation),
        }
    }

    /// The matrix representation (3x3 or 4x4 homogeneous).
    pub fn matrix(&self) -> DMatrix<f64> {
        match self {
            GroupElement::So3(r) => DMatrix::from_fn(3, 3, |i, j| r[(i, j)]),
            GroupElement::Se3 { rotation, translation } => {
                let mut m = Matrix4::identity();
                m.fixed_view_mut::<3, 3>(0, 0).copy_from(rotation);
                m.fixed_view_mut::<3, 1>(0, 3).copy_from(translation);
                DMatrix::from_fn(4, 4, |i, j| m[(i, j)])
            }
        }
    }

    /// Group product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.kind().ensure_same(other.kind())?;
        Ok(match (self, other) {
            (GroupElement::So3(a), GroupElement::So3(b)) => GroupElement::So3(a * b),
            (
                GroupElement::Se3 { rotation: ra, translation: ta },
                GroupElement::Se3 { rotation: rb, translation: tb },
            ) => GroupElement::Se3 { rotation: ra * rb, translation: ra * tb + ta },
            _ => unreachable!(),
        })
    }

    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::So3(r) => GroupElement::So3(r.transpose()),
            GroupElement::Se3 { rotation, translation } => {
                let rt = rotation.transpose();
                GroupElement::Se3 { rotation: rt, translation: -(rt * translation) }
            }
        }
    }

    /// Validate the group invariants at [`GROUP_TOLERANCE`].
    pub fn validate(&self) -> Result<()> {
        check_rotation(self.rotation_part())
    }

    /// Frobenius distance of the matrix representations.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (self.matrix() - other.matrix()).norm()
    }
}

/// Lie algebra element in coordinates (rotation first for se(3)).
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    kind: GroupKind,
    coords: Vec<f64>,
}

impl AlgebraElement {
    pub fn new(kind: GroupKind, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != kind.algebra_dim() {
            return Err(Error::DimensionMismatch { expected: kind.algebra_dim(), found: coords.len() });
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: 0 });
        }
        Ok(Self { kind, coords })
    }

    pub fn so3(w: [f64; 3]) -> Self {
        Self { kind: GroupKind::So3, coords: w.to_vec() }
    }

    pub fn se3(w: [f64; 3], v: [f64; 3]) -> Self {
        Self { kind: GroupKind::Se3, coords: [w, v].concat() }
    }

    pub fn zero(kind: GroupKind) -> Self {
        Self { kind, coords: vec![0.0; kind.algebra_dim()] }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    fn rot(&self) -> Vector3<f64> {
        Vector3::new(self.coords[0], self.coords[1], self.coords[2])
    }

    /// Matrix form of the element (skew matrix, or 4x4 twist matrix).
    pub fn hat(&self) -> DMatrix<f64> {
        let w = hat3(&self.rot());
        match self.kind {
            GroupKind::So3 => DMatrix::from_fn(3, 3, |i, j| w[(i, j)]),
            GroupKind::Se3 => DMatrix::from_fn(4, 4, |i, j| match (i, j) {
                (3, _) => 0.0,
                (i, 3) => self.coords[3 + i],
                (i, j) => w[(i, j)],
            }),
        }
    }
}

/// `exp(t * xi)`.
pub fn group_exp(xi: &AlgebraElement, t: f64) -> GroupElement {
    let w = xi.rot() * t;
    match xi.kind {
        GroupKind::So3 => GroupElement::So3(so3_exp(&w)),
        GroupKind::Se3 => {
            let v = Vector3::new(xi.coords[3], xi.coords[4], xi.coords[5]) * t;
            let theta = w.norm();
            let (_, b, c) = exp_coefficients(theta);
            let k = hat3(&w);
            let jac = Matrix3::identity() + k * b + k * k * c;
            GroupElement::Se3 { rotation: so3_exp(&w), translation: jac * v }
        }
    }
}

/// Principal logarithm; fails within [`TOL_BRANCH`] of a rotation by pi.
pub fn group_log(g: &GroupElement) -> Result<AlgebraElement> {
    match g {
        GroupElement::So3(r) => {
            let w = so3_log(r)?;
            Ok(AlgebraElement { kind: GroupKind::So3, coords: w.as_slice().to_vec() })
        }
        GroupElement::Se3 { rotation, translation } => {
            let w = so3_log(rotation)?;
            let theta = w.norm();
            let d = if theta < 1e-2 {
                let t2 = theta * theta;
                1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0
            } else {
                let half = 0.5 * theta;
                (1.0 - half / half.tan()) / (theta * theta)
            };
            let k = hat3(&w);
            let jac_inv = Matrix3::identity() - k * 0.5 + k * k * d;
            let v = jac_inv * translation;
            Ok(AlgebraElement::se3([w.x, w.y, w.z], [v.x, v.y, v.z]))
        }
    }
}

/// Group-valued curve sampled on the uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCurve {
    kind: GroupKind,
    elements: Vec<GroupElement>,
}

impl GroupCurve {
    pub fn new(elements: Vec<GroupElement>) -> Result<Self> {
        if elements.len() < 2 {
            return Err(Error::TooFewSamples(elements.len()));
        }
        let kind = elements[0].kind();
        for (i, g) in elements.iter().enumerate() {
            kind.ensure_same(g.kind())?;
            g.validate().map_err(|e| Error::InvalidSample { index: i, reason: e.to_string() })?;
        }
        Ok(Self { kind, elements })
    }

    /// Sample `f` at the grid times `i / n`.
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> GroupElement,
    {
        Self::new((0..=n).map(|i| f(i as f64 / n as f64)).collect())
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn intervals(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn start(&self) -> &GroupElement {
        &self.elements[0]
    }

    /// Pointwise product `self(t) * other(t)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.kind.ensure_same(other.kind)?;
        if self.intervals() != other.intervals() {
            return Err(Error::InvalidArgument("group curves on different grids".into()));
        }
        let elements = self
            .elements
            .iter()
            .zip(&other.elements)
            .map(|(a, b)| a.compose(b))
            .collect::<Result<_>>()?;
        Ok(Self { kind: self.kind, elements })
    }

    /// Pointwise inverse.
    pub fn inverse(&self) -> Self {
        Self { kind: self.kind, elements: self.elements.iter().map(GroupElement::inverse).collect() }
    }

    /// `t -> self(t) * g`.
    pub fn right_translate(&self, g: &GroupElement) -> Result<Self> {
        let elements = self.elements.iter().map(|a| a.compose(g)).collect::<Result<_>>()?;
        Ok(Self { kind: self.kind, elements })
    }

    /// `t -> g * self(t)`.
    pub fn left_translate(&self, g: &GroupElement) -> Result<Self> {
        let elements = self.elements.iter().map(|a| g.compose(a)).collect::<Result<_>>()?;
        Ok(Self { kind: self.kind, elements })
    }

    /// Group-geodesic interpolation `exp(s log(g_{i+1} g_i^-1)) g_i`.
    pub fn eval(&self, t: f64) -> Result<GroupElement> {
        let (i, frac) = crate::curve::locate(t, self.intervals())?;
        let a = &self.elements[i];
        if frac == 0.0 {
            return Ok(a.clone());
        }
        let step = group_log(&self.elements[i + 1].compose(&a.inverse())?).map_err(|e| e.at(i))?;
        group_exp(&step, frac).compose(a)
    }

    pub fn resample(&self, times: &[f64]) -> Result<Self> {
        let elements = times.iter().map(|&t| self.eval(t)).collect::<Result<_>>()?;
        Self::new(elements)
    }

    pub fn resample_uniform(&self, n: usize) -> Result<Self> {
        if n == self.intervals() {
            return Ok(self.clone());
        }
        let times: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        self.resample(&times)
    }

    /// Largest Frobenius distance between corresponding samples.
    pub fn max_frobenius_distance(&self, other: &Self) -> f64 {
        self.elements
            .iter()
            .zip(&other.elements)
            .map(|(a, b)| a.frobenius_distance(b))
            .fold(0.0, f64::max)
    }
}

/// Algebra-valued step function.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraStepFunction {
    kind: GroupKind,
    values: StepFunction,
}

impl AlgebraStepFunction {
    pub fn new(kind: GroupKind, values: StepFunction) -> Result<Self> {
        if values.dim() != kind.algebra_dim() {
            return Err(Error::DimensionMismatch { expected: kind.algebra_dim(), found: values.dim() });
        }
        Ok(Self { kind, values })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn values(&self) -> &StepFunction {
        &self.values
    }

    pub fn into_values(self) -> StepFunction {
        self.values
    }

    pub fn intervals(&self) -> usize {
        self.values.intervals()
    }

    pub fn element(&self, i: usize) -> AlgebraElement {
        AlgebraElement { kind: self.kind, coords: self.values.value(i).to_vec() }
    }
}

/// Diagonal inner product on algebra coordinates, `<a, b> = sum_k w_k a_k b_k`.
///
/// The default is the Euclidean product of the coordinate vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraMetric {
    weights: Vec<f64>,
}

impl AlgebraMetric {
    pub fn euclidean(kind: GroupKind) -> Self {
        Self { weights: vec![1.0; kind.algebra_dim()] }
    }

    pub fn diagonal(weights: Vec<f64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::NonPositiveWeight { index: i });
        }
        Ok(Self { weights })
    }

    fn is_euclidean(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    fn check(&self, kind: GroupKind) -> Result<()> {
        if self.weights.len() != kind.algebra_dim() {
            return Err(Error::DimensionMismatch { expected: kind.algebra_dim(), found: self.weights.len() });
        }
        Ok(())
    }

    /// Map to coordinates in which the metric is Euclidean.
    fn whiten(&self, f: &StepFunction) -> StepFunction {
        if self.is_euclidean() {
            return f.clone();
        }
        let s: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        f.map_values(|v| v.iter().zip(&s).map(|(x, s)| x * s).collect()).expect("shape kept")
    }

    fn unwhiten(&self, f: &StepFunction) -> StepFunction {
        if self.is_euclidean() {
            return f.clone();
        }
        let s: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        f.map_values(|v| v.iter().zip(&s).map(|(x, s)| x / s).collect()).expect("shape kept")
    }
}

/// Discrete right logarithmic derivative `xi_i = N log(g_{i+1} g_i^-1)`.
pub fn right_log_derivative(curve: &GroupCurve) -> Result<AlgebraStepFunction> {
    let n = curve.intervals() as f64;
    let mut data = Vec::with_capacity(curve.intervals() * curve.kind.algebra_dim());
    for (i, w) in curve.elements.windows(2).enumerate() {
        let step = w[1].compose(&w[0].inverse())?;
        let xi = group_log(&step).map_err(|e| e.at(i))?;
        data.extend(xi.coords.iter().map(|x| n * x));
    }
    AlgebraStepFunction::new(curve.kind, StepFunction::new(curve.kind.algebra_dim(), data)?)
}

/// Evolution operator: the grid curve starting at `g0` with right logarithmic derivative `xi`.
pub fn evolve(xi: &AlgebraStepFunction, g0: &GroupElement) -> Result<GroupCurve> {
    xi.kind.ensure_same(g0.kind())?;
    let h = 1.0 / xi.intervals() as f64;
    let mut elements = Vec::with_capacity(xi.intervals() + 1);
    elements.push(g0.clone());
    for i in 0..xi.intervals() {
        let next = group_exp(&xi.element(i), h).compose(&elements[i])?;
        elements.push(next);
    }
    Ok(GroupCurve { kind: xi.kind, elements })
}

/// `sc(right_log_derivative(curve))`.
pub fn srvt_lie(curve: &GroupCurve) -> Result<AlgebraStepFunction> {
    srvt_lie_with(curve, &AlgebraMetric::euclidean(curve.kind))
}

pub fn srvt_lie_with(curve: &GroupCurve, metric: &AlgebraMetric) -> Result<AlgebraStepFunction> {
    metric.check(curve.kind)?;
    let xi = right_log_derivative(curve)?;
    AlgebraStepFunction::new(curve.kind, scale(&metric.whiten(&xi.values)))
}

/// `Evol(sc^-1(q))` started at `g0`.
pub fn srvt_lie_inverse(q: &AlgebraStepFunction, g0: &GroupElement) -> Result<GroupCurve> {
    srvt_lie_inverse_with(q, g0, &AlgebraMetric::euclidean(q.kind))
}

pub fn srvt_lie_inverse_with(
    q: &AlgebraStepFunction,
    g0: &GroupElement,
    metric: &AlgebraMetric,
) -> Result<GroupCurve> {
    metric.check(q.kind)?;
    let xi = AlgebraStepFunction::new(q.kind, metric.unwhiten(&unscale(&q.values)))?;
    evolve(&xi, g0)
}

fn harmonize(a: &GroupCurve, c: &GroupCurve) -> Result<(GroupCurve, GroupCurve)> {
    a.kind.ensure_same(c.kind)?;
    let n = a.intervals().max(c.intervals());
    Ok((a.resample_uniform(n)?, c.resample_uniform(n)?))
}

/// `L^2` distance of the Lie SRVT images.
pub fn lie_distance(a: &GroupCurve, c: &GroupCurve) -> Result<f64> {
    let (a, c) = harmonize(a, c)?;
    let diff = srvt_lie(&a)?.values.sub(&srvt_lie(&c)?.values)?;
    lp_norm(&diff, PExponent::TWO, None)
}

/// Right-invariant distance `|log(c g^-1)|` between two group elements.
pub fn group_distance(g: &GroupElement, c: &GroupElement) -> Result<f64> {
    let xi = group_log(&c.compose(&g.inverse())?)?;
    Ok(crate::curve::norm(&xi.coords))
}

/// [`lie_distance`] plus the distance between the starting elements.
pub fn lie_distance_with_basepoint(a: &GroupCurve, c: &GroupCurve) -> Result<f64> {
    Ok(lie_distance(a, c)? + group_distance(a.start(), c.start())?)
}

/// `k + 1` group curves along the straight line between the two SRVT images,
/// with starting points on the group geodesic between the two starting points.
pub fn lie_geodesic(a: &GroupCurve, c: &GroupCurve, k: usize) -> Result<Vec<GroupCurve>> {
    if k == 0 {
        return Err(Error::InvalidArgument("geodesic needs at least one step".into()));
    }
    let (a, c) = harmonize(a, c)?;
    let (qa, qc) = (srvt_lie(&a)?, srvt_lie(&c)?);
    let start_step = group_log(&c.start().compose(&a.start().inverse())?)?;
    (0..=k)
        .map(|j| {
            if j == 0 {
                return Ok(a.clone());
            }
            if j == k {
                return Ok(c.clone());
            }
            let s = j as f64 / k as f64;
            let q = AlgebraStepFunction::new(a.kind, qa.values.lerp(&qc.values, s)?)?;
            let g0 = group_exp(&start_step, s).compose(a.start())?;
            srvt_lie_inverse(&q, &g0)
        })
        .collect()
}
