//! Discrete absolutely continuous curves and L^p functions on the unit interval.
//!
//! A [`SampledCurve`] stores values at the `N + 1` uniform grid times `t_i = i / N`
//! and is interpolated linearly in between. A [`StepFunction`] stores one value per
//! subinterval `[t_i, t_{i+1})`. With forward differences as the derivative and the
//! left Riemann sum as the antiderivative the two representations form an exact
//! discrete inverse pair.

use crate::error::{Error, Result};

fn check_finite(data: &[f64], dim: usize) -> Result<()> {
    match data.iter().position(|x| !x.is_finite()) {
        Some(k) => Err(Error::NonFinite { index: k / dim }),
        None => Ok(()),
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Curve on `[0, 1]` sampled at `N + 1` uniform grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    dim: usize,
    data: Vec<f64>,
}

impl SampledCurve {
    /// Build from a flat row-major buffer of `(N + 1) * dim` values.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: data.len() % dim });
        }
        let samples = data.len() / dim;
        if samples < 2 {
            return Err(Error::TooFewSamples(samples));
        }
        check_finite(&data, dim)?;
        Ok(Self { dim, data })
    }

    pub fn from_samples<S: AsRef<[f64]>>(samples: &[S]) -> Result<Self> {
        let dim = samples.first().map(|s| s.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(samples.len() * dim);
        for (i, s) in samples.iter().enumerate() {
            let s = s.as_ref();
            if s.len() != dim {
                return Err(Error::InvalidSample {
                    index: i,
                    reason: format!("expected {dim} components, found {}", s.len()),
                });
            }
            data.extend_from_slice(s);
        }
        Self::new(dim, data)
    }

    /// Sample `f` at the grid times `i / n`, `i = 0..=n`.
    pub fn from_fn<F>(n: usize, dim: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Vec<f64>,
    {
        let mut data = Vec::with_capacity((n + 1) * dim);
        for i in 0..=n {
            let v = f(i as f64 / n as f64);
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
            data.extend(v);
        }
        Self::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of subintervals `N`.
    pub fn intervals(&self) -> usize {
        self.data.len() / self.dim - 1
    }

    /// Number of samples `N + 1`.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn samples(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn start(&self) -> &[f64] {
        self.sample(0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// The curve shifted by the constant vector `v`.
    pub fn translate(&self, v: &[f64]) -> Result<Self> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(k, x)| x + v[k % self.dim])
            .collect();
        Self::new(self.dim, data)
    }

    /// Apply a map to every sample, e.g. a rotation.
    pub fn map_samples<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        let samples: Vec<Vec<f64>> = self.samples().map(f).collect();
        Self::from_samples(&samples)
    }

    /// Linear interpolation at one time in `[0, 1]`.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let (i, frac) = locate(t, self.intervals())?;
        let a = self.sample(i);
        if frac == 0.0 {
            return Ok(a.to_vec());
        }
        let b = self.sample(i + 1);
        Ok(a.iter().zip(b).map(|(x, y)| x + frac * (y - x)).collect())
    }

    /// Piecewise-linear resampling onto a uniform grid with `n` subintervals.
    pub fn resample_uniform(&self, n: usize) -> Result<Self> {
        if n == self.intervals() {
            return Ok(self.clone());
        }
        let times: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let samples = resample(self, &times)?;
        Self::from_samples(&samples)
    }
}

/// Split `t` into a subinterval index and a fraction in `[0, 1)`.
///
/// Times within `1e-9` grid units of a grid point snap to it so that queries at grid
/// times return samples exactly.
pub(crate) fn locate(t: f64, n: usize) -> Result<(usize, f64)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::TimeOutOfRange(t));
    }
    let s = t * n as f64;
    let r = s.round();
    let s = if (s - r).abs() < 1e-9 { r } else { s };
    let i = (s.floor() as usize).min(n - 1);
    Ok((i, s - i as f64))
}

/// Bring two curves onto the finer of their two grids.
pub fn harmonize(a: &SampledCurve, c: &SampledCurve) -> Result<(SampledCurve, SampledCurve)> {
    if a.dim() != c.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: c.dim() });
    }
    let n = a.intervals().max(c.intervals());
    Ok((a.resample_uniform(n)?, c.resample_uniform(n)?))
}

/// Piecewise-constant function on the `N` uniform subintervals of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    dim: usize,
    data: Vec<f64>,
}

impl StepFunction {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: data.len() % dim });
        }
        if data.is_empty() {
            return Err(Error::TooFewSamples(0));
        }
        check_finite(&data, dim)?;
        Ok(Self { dim, data })
    }

    pub fn from_values<S: AsRef<[f64]>>(values: &[S]) -> Result<Self> {
        let dim = values.first().map(|s| s.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(values.len() * dim);
        for (i, s) in values.iter().enumerate() {
            let s = s.as_ref();
            if s.len() != dim {
                return Err(Error::InvalidSample {
                    index: i,
                    reason: format!("expected {dim} components, found {}", s.len()),
                });
            }
            data.extend_from_slice(s);
        }
        Self::new(dim, data)
    }

    pub fn zeros(dim: usize, n: usize) -> Result<Self> {
        Self::new(dim, vec![0.0; dim * n])
    }

    /// Constant function with value `v` on `n` subintervals.
    pub fn constant(v: &[f64], n: usize) -> Result<Self> {
        Self::new(v.len(), v.repeat(n))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of subintervals `N`.
    pub fn intervals(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn value(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn values(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.intervals() != other.intervals() {
            return Err(Error::InvalidArgument(format!(
                "step functions on different grids ({} vs {} subintervals)",
                self.intervals(),
                other.intervals()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| s * x).collect() }
    }

    /// `(1 - s) * self + s * other`.
    pub fn lerp(&self, other: &Self, s: f64) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (1.0 - s) * a + s * b)
            .collect();
        Ok(Self { dim: self.dim, data })
    }

    /// Apply a map to every value.
    pub fn map_values<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        let values: Vec<Vec<f64>> = self.values().map(f).collect();
        Self::from_values(&values)
    }
}

/// Integrability exponent `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent(f64);

impl PExponent {
    pub const ONE: PExponent = PExponent(1.0);
    pub const TWO: PExponent = PExponent(2.0);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Self(p))
        } else {
            Err(Error::InvalidExponent(p))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Forward differences `d_i = N (c_{i+1} - c_i)`.
pub fn derivative(c: &SampledCurve) -> StepFunction {
    let n = c.intervals() as f64;
    let data = c
        .data
        .windows(2 * c.dim)
        .step_by(c.dim)
        .flat_map(|w| {
            let (a, b) = w.split_at(c.dim);
            a.iter().zip(b).map(move |(x, y)| n * (y - x))
        })
        .collect();
    StepFunction { dim: c.dim, data }
}

/// Cumulative left Riemann sum `c_0 = start`, `c_{i+1} = c_i + f_i / N`.
pub fn antiderivative(f: &StepFunction, start: &[f64]) -> Result<SampledCurve> {
    if start.len() != f.dim {
        return Err(Error::DimensionMismatch { expected: f.dim, found: start.len() });
    }
    let n = f.intervals() as f64;
    let mut data = Vec::with_capacity(f.data.len() + f.dim);
    data.extend_from_slice(start);
    let mut cur = start.to_vec();
    for v in f.values() {
        for (c, x) in cur.iter_mut().zip(v) {
            *c += x / n;
        }
        data.extend_from_slice(&cur);
    }
    SampledCurve::new(f.dim, data)
}

/// Discrete `L^p` norm `(sum_i |f_i|^p / N)^(1/p)`.
///
/// `weights`, when given, are positive per-subinterval factors multiplying the
/// Euclidean norm of each value (a conformal pointwise metric).
pub fn lp_norm(f: &StepFunction, p: PExponent, weights: Option<&[f64]>) -> Result<f64> {
    let n = f.intervals();
    if let Some(w) = weights {
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: w.len() });
        }
        if let Some(i) = w.iter().position(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::NonPositiveWeight { index: i });
        }
    }
    let p = p.get();
    let pointwise = f.values().enumerate().map(|(i, v)| {
        let w = weights.map_or(1.0, |w| w[i]);
        w * norm(v)
    });
    let total: f64 = if p == 1.0 {
        pointwise.sum()
    } else if p == 2.0 {
        pointwise.map(|x| x * x).sum()
    } else {
        pointwise.map(|x| x.powf(p)).sum()
    };
    let mean = total / n as f64;
    Ok(if p == 1.0 {
        mean
    } else if p == 2.0 {
        mean.sqrt()
    } else {
        mean.powf(1.0 / p)
    })
}

/// Discrete `L^2` inner product `sum_i <f_i, g_i> / N`.
pub fn l2_inner(f: &StepFunction, g: &StepFunction) -> Result<f64> {
    f.check_same_shape(g)?;
    let s: f64 = f.data.iter().zip(&g.data).map(|(a, b)| a * b).sum();
    Ok(s / f.intervals() as f64)
}

/// `|c(0)| + |c'|_p`.
pub fn ac_norm(c: &SampledCurve, p: PExponent) -> f64 {
    norm(c.start()) + lp_norm(&derivative(c), p, None).expect("no weights")
}

/// Maximum Euclidean norm over the grid samples.
pub fn sup_norm(c: &SampledCurve) -> f64 {
    c.samples().map(norm).fold(0.0, f64::max)
}

/// Evaluate the piecewise-linear interpolant at the given times.
pub fn resample(c: &SampledCurve, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    times.iter().map(|&t| c.eval(t)).collect()
}
