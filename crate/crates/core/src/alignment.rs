//! Reparametrization: warping functions, their action on curves and SRVT images,
//! and a dynamic-programming search for the best warp.

use std::fmt;
use std::str::FromStr;

use crate::curve::{harmonize, lp_norm, resample, PExponent, SampledCurve, StepFunction};
use crate::error::{Error, Result};
use crate::euclidean::srvt;
use crate::lie::{srvt_lie, GroupCurve};
use crate::manifold::{srvt_manifold, ManifoldCurve, ManifoldPoint};

/// Grid values `0 = phi_0 <= ... <= phi_N = 1` of a piecewise-linear warp.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpingFunction {
    values: Vec<f64>,
}

impl WarpingFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooFewSamples(values.len()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        if values[0] != 0.0 || values[values.len() - 1] != 1.0 {
            return Err(Error::InvalidWarp("endpoints must be exactly 0 and 1".into()));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::InvalidWarp(format!("decreasing at index {}", i + 1)));
        }
        Ok(Self { values })
    }

    pub fn identity(n: usize) -> Self {
        Self { values: (0..=n).map(|i| i as f64 / n as f64).collect() }
    }

    /// Sample `f` on the grid; the endpoints are pinned to 0 and 1.
    pub fn from_fn<F: Fn(f64) -> f64>(n: usize, f: F) -> Result<Self> {
        let mut values: Vec<f64> = (0..=n).map(|i| f(i as f64 / n as f64)).collect();
        values[0] = 0.0;
        values[n] = 1.0;
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    /// Piecewise-linear evaluation.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let (i, frac) = crate::curve::locate(t, self.intervals())?;
        if frac == 0.0 {
            return Ok(self.values[i]);
        }
        Ok(self.values[i] + frac * (self.values[i + 1] - self.values[i]))
    }

    /// `self o psi`, on the grid of `psi`.
    pub fn compose(&self, psi: &WarpingFunction) -> Result<Self> {
        let values = psi.values.iter().map(|&t| self.eval(t)).collect::<Result<_>>()?;
        Self::new(values)
    }

    /// Slopes `N (phi_{i+1} - phi_i)`.
    pub fn derivative(&self) -> Vec<f64> {
        let n = self.intervals() as f64;
        self.values.windows(2).map(|w| n * (w[1] - w[0])).collect()
    }
}

/// Curves that can be reparametrized by sampling at warped times.
pub trait Warp: Sized {
    fn warp(&self, phi: &WarpingFunction) -> Result<Self>;
}

impl Warp for SampledCurve {
    fn warp(&self, phi: &WarpingFunction) -> Result<Self> {
        SampledCurve::from_samples(&resample(self, phi.values())?)
    }
}

impl Warp for GroupCurve {
    fn warp(&self, phi: &WarpingFunction) -> Result<Self> {
        self.resample(phi.values())
    }
}

impl Warp for ManifoldCurve {
    fn warp(&self, phi: &WarpingFunction) -> Result<Self> {
        self.resample(phi.values())
    }
}

/// `c o phi`, sampled on the grid of `phi`.
pub fn warp<C: Warp>(c: &C, phi: &WarpingFunction) -> Result<C> {
    c.warp(phi)
}

fn integrate_step(q: &StepFunction, a: f64, b: f64, out: &mut [f64]) {
    let m = q.intervals();
    let mf = m as f64;
    let first = ((a * mf).floor() as usize).min(m - 1);
    let mut cell = first;
    while cell < m {
        let lo = (cell as f64 / mf).max(a);
        let hi = ((cell + 1) as f64 / mf).min(b);
        if hi > lo {
            for (o, v) in out.iter_mut().zip(q.value(cell)) {
                *o += (hi - lo) * v;
            }
        }
        if (cell + 1) as f64 / mf >= b {
            break;
        }
        cell += 1;
    }
}

/// `q -> sqrt(phi') (q o phi)`, with `q` averaged over each image subinterval.
pub fn srvt_warp_action(q: &StepFunction, phi: &WarpingFunction) -> StepFunction {
    let n = phi.intervals();
    let nf = n as f64;
    let mut data = vec![0.0; n * q.dim()];
    for (i, w) in phi.values.windows(2).enumerate() {
        let len = w[1] - w[0];
        if len <= 0.0 {
            continue;
        }
        let out = &mut data[i * q.dim()..(i + 1) * q.dim()];
        integrate_step(q, w[0], w[1], out);
        // sqrt(N len) * (integral / len)
        let factor = nf / (nf * len).sqrt();
        out.iter_mut().for_each(|x| *x *= factor);
    }
    StepFunction::new(q.dim(), data).expect("finite input gives finite output")
}

/// Admissible DP steps `(k, l)`: `k` cells of the first function matched with `l`
/// cells of the second, i.e. local slope `phi' = l / k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeSet {
    steps: Vec<(usize, usize)>,
}

impl Default for SlopeSet {
    fn default() -> Self {
        Self { steps: vec![(1, 1), (2, 1), (1, 2), (3, 2), (2, 3), (3, 1), (1, 3)] }
    }
}

impl SlopeSet {
    pub fn new(steps: Vec<(usize, usize)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidArgument("empty slope set".into()));
        }
        if steps.iter().any(|&(k, l)| k == 0 || l == 0) {
            return Err(Error::InvalidArgument("slopes must be positive".into()));
        }
        let mut out: Vec<(usize, usize)> = Vec::with_capacity(steps.len());
        for (k, l) in steps {
            let g = gcd(k, l);
            let s = (k / g, l / g);
            if !out.contains(&s) {
                out.push(s);
            }
        }
        Ok(Self { steps: out })
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.steps
    }

    /// Whether the identity warp is reachable.
    pub fn contains_identity(&self) -> bool {
        self.steps.contains(&(1, 1))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Parse a positive slope such as `3/2`, `0.5` or `2` into `(k, l)` with `slope = l / k`.
fn parse_slope(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("invalid slope '{s}'"));
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let l: usize = num.trim().parse().map_err(|_| bad())?;
        let k: usize = den.trim().parse().map_err(|_| bad())?;
        if k == 0 || l == 0 {
            return Err(bad());
        }
        return Ok((k, l));
    }
    let x: f64 = s.parse().map_err(|_| bad())?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(bad());
    }
    for k in 1..=12usize {
        let l = (x * k as f64).round();
        if l >= 1.0 && (l / k as f64 - x).abs() <= 1e-9 {
            return Ok((k, l as usize));
        }
    }
    Err(Error::Parse(format!("slope '{s}' is not a ratio of small integers")))
}

impl FromStr for SlopeSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.split(',').map(parse_slope).collect::<Result<_>>()?)
    }
}

impl fmt::Display for SlopeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|&(k, l)| if k == 1 { format!("{l}") } else { format!("{l}/{k}") })
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Exact `int |qa(t) - sqrt(phi') qc(phi(t))|^2 dt` over the segment from grid node
/// `(i, j)` to `(i + k, j + l)`, with `phi` linear there.
///
/// On the `k l` pieces of length `1 / (N l)` both step functions are constant.
pub fn edge_cost(qa: &StepFunction, qc: &StepFunction, i: usize, j: usize, k: usize, l: usize) -> f64 {
    let n = qa.intervals() as f64;
    let s = (l as f64 / k as f64).sqrt();
    let mut sum = 0.0;
    for u in 0..k * l {
        let a = qa.value(i + u / l);
        let c = qc.value(j + u / k);
        sum += a.iter().zip(c).map(|(x, y)| (x - s * y).powi(2)).sum::<f64>();
    }
    sum / (n * l as f64)
}

/// Result of [`optimal_warp`].
#[derive(Debug, Clone)]
pub struct Alignment {
    /// Warp `phi` with `qa ~ srvt_warp_action(qc, phi)`.
    pub warp: WarpingFunction,
    /// `|qa - (qc, phi)|_{L^2}` along the chosen path.
    pub cost: f64,
}

/// Dynamic program over monotone lattice paths from `(0, 0)` to `(N, N)`.
///
/// Among paths of equal cost the one with the smallest total `|k - l|` wins.
pub fn optimal_warp(qa: &StepFunction, qc: &StepFunction, slopes: &SlopeSet) -> Result<Alignment> {
    if qa.dim() != qc.dim() {
        return Err(Error::DimensionMismatch { expected: qa.dim(), found: qc.dim() });
    }
    if qa.intervals() != qc.intervals() {
        return Err(Error::DimensionMismatch { expected: qa.intervals(), found: qc.intervals() });
    }
    let n = qa.intervals();
    let w = n + 1;
    let mut cost = vec![f64::INFINITY; w * w];
    let mut dev = vec![usize::MAX; w * w];
    let mut back = vec![u8::MAX; w * w];
    cost[0] = 0.0;
    dev[0] = 0;
    for i in 0..=n {
        for j in 0..=n {
            for (s, &(k, l)) in slopes.steps.iter().enumerate() {
                if i < k || j < l {
                    continue;
                }
                let from = (i - k) * w + (j - l);
                if !cost[from].is_finite() {
                    continue;
                }
                let c = cost[from] + edge_cost(qa, qc, i - k, j - l, k, l);
                let d = dev[from] + k.abs_diff(l);
                let at = i * w + j;
                if c < cost[at] || (c == cost[at] && d < dev[at]) {
                    cost[at] = c;
                    dev[at] = d;
                    back[at] = s as u8;
                }
            }
        }
    }
    let end = n * w + n;
    if !cost[end].is_finite() {
        return Err(Error::InvalidArgument(format!("no admissible path with slopes {slopes}")));
    }
    let mut phi = vec![0.0; w];
    let (mut i, mut j) = (n, n);
    while i > 0 {
        let (k, l) = slopes.steps[back[i * w + j] as usize];
        for r in 0..k {
            phi[i - k + r] = ((j - l) as f64 + (l * r) as f64 / k as f64) / n as f64;
        }
        i -= k;
        j -= l;
    }
    phi[n] = 1.0;
    Ok(Alignment { warp: WarpingFunction::new(phi)?, cost: cost[end].max(0.0).sqrt() })
}

/// Exact `|qa - (qc, phi)|_{L^2}` for an arbitrary piecewise-linear warp on the grid of `qa`.
pub fn warp_cost(qa: &StepFunction, qc: &StepFunction, phi: &WarpingFunction) -> Result<f64> {
    if qa.dim() != qc.dim() {
        return Err(Error::DimensionMismatch { expected: qa.dim(), found: qc.dim() });
    }
    if phi.intervals() != qa.intervals() {
        return Err(Error::DimensionMismatch { expected: qa.intervals(), found: phi.intervals() });
    }
    let n = qa.intervals() as f64;
    let m = qc.intervals();
    let mf = m as f64;
    let mut sum = 0.0;
    for (i, w) in phi.values.windows(2).enumerate() {
        let a = qa.value(i);
        let slope = n * (w[1] - w[0]);
        if slope == 0.0 {
            sum += a.iter().map(|x| x * x).sum::<f64>() / n;
            continue;
        }
        let s = slope.sqrt();
        let mut cell = ((w[0] * mf).floor() as usize).min(m - 1);
        loop {
            let lo = (cell as f64 / mf).max(w[0]);
            let hi = ((cell + 1) as f64 / mf).min(w[1]);
            if hi > lo {
                let d: f64 = a.iter().zip(qc.value(cell)).map(|(x, y)| (x - s * y).powi(2)).sum();
                sum += d * (hi - lo) / slope;
            }
            if cell + 1 >= m || (cell + 1) as f64 / mf >= w[1] {
                break;
            }
            cell += 1;
        }
    }
    Ok(sum.sqrt())
}

/// Antiderivative `Q(s) = int_0^s q` of a step function, piecewise linear.
struct Primitive<'a> {
    q: &'a StepFunction,
    nodes: Vec<f64>,
}

impl<'a> Primitive<'a> {
    fn new(q: &'a StepFunction) -> Self {
        let (m, d) = (q.intervals(), q.dim());
        let mut nodes = vec![0.0; (m + 1) * d];
        for c in 0..m {
            for k in 0..d {
                nodes[(c + 1) * d + k] = nodes[c * d + k] + q.value(c)[k] / m as f64;
            }
        }
        Self { q, nodes }
    }

    fn eval(&self, s: f64, out: &mut [f64]) {
        let (m, d) = (self.q.intervals(), self.q.dim());
        let x = s * m as f64;
        let c = (x.floor() as usize).min(m - 1);
        let frac = (x - c as f64) / m as f64;
        for k in 0..d {
            out[k] = self.nodes[c * d + k] + frac * self.q.value(c)[k];
        }
    }
}

/// Refinement of a warp by multilevel ascent.
///
/// With `Q` the antiderivative of `qc`, the squared cost equals
/// `|qa|^2 + |qc|^2 - 2 sum_i <qa_i, Q(phi_{i+1}) - Q(phi_i)> / sqrt(N (phi_{i+1} - phi_i))`.
/// A sweep adds hat-shaped perturbations of half-widths `N/2, N/4, ..., 1` to `phi`,
/// each scaled by a golden-section search over the monotone range, so smooth
/// deviations are removed in a few sweeps.
struct Refiner<'a> {
    qa: &'a StepFunction,
    prim: Primitive<'a>,
    buf: (Vec<f64>, Vec<f64>),
    trial: Vec<f64>,
}

const INV_GOLD: f64 = 0.618_033_988_749_894_8;

impl Refiner<'_> {
    fn term(&mut self, i: usize, x0: f64, x1: f64) -> f64 {
        let len = x1 - x0;
        if len <= 0.0 {
            return 0.0;
        }
        self.prim.eval(x0, &mut self.buf.0);
        self.prim.eval(x1, &mut self.buf.1);
        let a = self.qa.value(i);
        let dot: f64 = (0..a.len()).map(|k| a[k] * (self.buf.1[k] - self.buf.0[k])).sum();
        dot / (self.qa.intervals() as f64 * len).sqrt()
    }

    /// Sum of the terms on `lo..hi` after adding `delta` times the hat centred at `c`.
    fn local(&mut self, phi: &[f64], c: usize, h: usize, lo: usize, hi: usize, delta: f64) -> f64 {
        for r in lo..=hi {
            let weight = 1.0 - r.abs_diff(c) as f64 / h as f64;
            self.trial[r - lo] = phi[r] + delta * weight.max(0.0);
        }
        let mut f = 0.0;
        for r in lo..hi {
            f += self.term(r, self.trial[r - lo], self.trial[r + 1 - lo]);
        }
        f
    }

    fn sweep(&mut self, phi: &mut [f64]) -> f64 {
        let n = phi.len() - 1;
        let mut gain = 0.0;
        let mut h = (n / 2).max(1).next_power_of_two();
        loop {
            let mut c = h.min(n - 1);
            while c < n {
                gain += self.bump(phi, c, h);
                c += h;
            }
            if h == 1 {
                break;
            }
            h /= 2;
        }
        gain
    }

    fn bump(&mut self, phi: &mut [f64], c: usize, h: usize) -> f64 {
        let n = phi.len() - 1;
        let lo = c.saturating_sub(h);
        let hi = (c + h).min(n);
        // hat weights at lo and hi are zero, so the endpoints stay fixed
        let (mut dmin, mut dmax) = (f64::NEG_INFINITY, f64::INFINITY);
        for r in lo..hi {
            let w0 = (1.0 - r.abs_diff(c) as f64 / h as f64).max(0.0);
            let w1 = (1.0 - (r + 1).abs_diff(c) as f64 / h as f64).max(0.0);
            let slope = w1 - w0;
            let gap = phi[r + 1] - phi[r];
            if slope > 0.0 {
                dmin = dmin.max(-gap / slope);
            } else if slope < 0.0 {
                dmax = dmax.min(-gap / slope);
            }
        }
        if !(dmin < dmax) || !dmin.is_finite() || !dmax.is_finite() {
            return 0.0;
        }
        let current = self.local(phi, c, h, lo, hi, 0.0);
        let (mut a, mut b) = (dmin, dmax);
        let mut x1 = b - INV_GOLD * (b - a);
        let mut x2 = a + INV_GOLD * (b - a);
        let mut f1 = self.local(phi, c, h, lo, hi, x1);
        let mut f2 = self.local(phi, c, h, lo, hi, x2);
        for _ in 0..40 {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_GOLD * (b - a);
                f2 = self.local(phi, c, h, lo, hi, x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - INV_GOLD * (b - a);
                f1 = self.local(phi, c, h, lo, hi, x1);
            }
        }
        let (delta, f) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
        if f <= current {
            return 0.0;
        }
        for r in lo + 1..hi {
            let weight = (1.0 - r.abs_diff(c) as f64 / h as f64).max(0.0);
            phi[r] += delta * weight;
        }
        // keep the grid exactly monotone after rounding
        for r in lo + 1..hi {
            phi[r] = phi[r].clamp(phi[r - 1], 1.0);
        }
        f - current
    }
}

/// Alignment settings: the DP slope set and the number of refinement sweeps
/// applied to the DP warp (0 keeps the lattice path).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignOptions {
    pub slopes: SlopeSet,
    pub refine_sweeps: usize,
}

impl Default for AlignOptions {
    fn default() -> Self {
        Self { slopes: SlopeSet::default(), refine_sweeps: 20 }
    }
}

/// [`optimal_warp`] followed by continuous refinement of the warp off the lattice.
///
/// The refined warp is kept only when its exact cost is lower.
pub fn align(qa: &StepFunction, qc: &StepFunction, options: &AlignOptions) -> Result<Alignment> {
    let dp = optimal_warp(qa, qc, &options.slopes)?;
    if options.refine_sweeps == 0 || dp.cost == 0.0 || qa.intervals() < 2 {
        return Ok(dp);
    }
    let d = qa.dim();
    let trial = vec![0.0; qa.intervals() + 1];
    let mut refiner = Refiner { qa, prim: Primitive::new(qc), buf: (vec![0.0; d], vec![0.0; d]), trial };
    let mut phi = dp.warp.values.clone();
    let scale = lp_norm(qa, PExponent::TWO, None)? * lp_norm(qc, PExponent::TWO, None)?;
    for _ in 0..options.refine_sweeps {
        if refiner.sweep(&mut phi) <= 1e-15 * scale {
            break;
        }
    }
    let warp = WarpingFunction::new(phi)?;
    let cost = warp_cost(qa, qc, &warp)?;
    if cost < dp.cost {
        Ok(Alignment { warp, cost })
    } else {
        Ok(dp)
    }
}

/// Symmetrized aligned distance of two SRVT images: the average of both alignment
/// directions, never above the unaligned distance.
pub fn aligned_distance(qa: &StepFunction, qc: &StepFunction, options: &AlignOptions) -> Result<f64> {
    let plain = lp_norm(&qa.sub(qc)?, PExponent::TWO, None)?;
    let there = align(qa, qc, options)?.cost;
    let back = align(qc, qa, options)?.cost;
    Ok((0.5 * (there + back)).min(plain))
}

/// Shape distance of Euclidean curves.
pub fn shape_distance(a: &SampledCurve, c: &SampledCurve, options: &AlignOptions) -> Result<f64> {
    let (a, c) = harmonize(a, c)?;
    aligned_distance(&srvt(&a), &srvt(&c), options)
}

/// Shape distance of Lie group curves, aligning the algebra-valued SRVT images.
pub fn lie_shape_distance(a: &GroupCurve, c: &GroupCurve, options: &AlignOptions) -> Result<f64> {
    let n = a.intervals().max(c.intervals());
    let (a, c) = (a.resample_uniform(n)?, c.resample_uniform(n)?);
    aligned_distance(srvt_lie(&a)?.values(), srvt_lie(&c)?.values(), options)
}

/// Shape distance of manifold curves, aligning the `T_star M`-valued SRVT images.
pub fn manifold_shape_distance(
    a: &ManifoldCurve,
    c: &ManifoldCurve,
    star: &ManifoldPoint,
    options: &AlignOptions,
) -> Result<f64> {
    let n = a.intervals().max(c.intervals());
    let (a, c) = (a.resample_uniform(n)?, c.resample_uniform(n)?);
    aligned_distance(&srvt_manifold(&a, star)?.q, &srvt_manifold(&c, star)?.q, options)
}
