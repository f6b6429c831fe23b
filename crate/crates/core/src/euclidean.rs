//! SRVT for curves in `R^d`: `c -> sc(c')`, its inverse, and the pulled-back `L^2` distance.

use crate::curve::{antiderivative, derivative, harmonize, lp_norm, norm, PExponent, SampledCurve, StepFunction};
use crate::error::{Error, Result};
use crate::scaling::{scale, unscale};

/// Curve whose first sample is the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct BasedCurve(SampledCurve);

impl BasedCurve {
    pub const START_TOLERANCE: f64 = 1e-12;

    pub fn new(curve: SampledCurve) -> Result<Self> {
        if norm(curve.start()) > Self::START_TOLERANCE {
            return Err(Error::InvalidSample {
                index: 0,
                reason: "based curve must start at the origin".into(),
            });
        }
        Ok(Self(curve))
    }

    /// Translate `curve` so that it starts at the origin.
    pub fn from_unbased(curve: &SampledCurve) -> Result<Self> {
        let shift: Vec<f64> = curve.start().iter().map(|x| -x).collect();
        Ok(Self(curve.translate(&shift)?))
    }

    pub fn curve(&self) -> &SampledCurve {
        &self.0
    }

    pub fn into_curve(self) -> SampledCurve {
        self.0
    }
}

/// `sc(c')`. The starting point is forgotten.
pub fn srvt(c: &SampledCurve) -> StepFunction {
    scale(&derivative(c))
}

/// Rebuild the curve with SRVT `q` starting at `start`.
pub fn srvt_inverse(q: &StepFunction, start: &[f64]) -> Result<SampledCurve> {
    antiderivative(&unscale(q), start)
}

/// `|R(a) - R(c)|_{L^2}`; a pseudo-distance that ignores starting points.
pub fn distance(a: &SampledCurve, c: &SampledCurve) -> Result<f64> {
    let (a, c) = harmonize(a, c)?;
    lp_norm(&srvt(&a).sub(&srvt(&c))?, PExponent::TWO, None)
}

/// [`distance`] plus `|a(0) - c(0)|`, the product metric on `R^d x L^2`.
pub fn distance_with_basepoint(a: &SampledCurve, c: &SampledCurve) -> Result<f64> {
    let d = distance(a, c)?;
    let gap: Vec<f64> = a.start().iter().zip(c.start()).map(|(x, y)| x - y).collect();
    Ok(d + norm(&gap))
}

/// `k + 1` curves along the straight line between `srvt(a)` and `srvt(c)`,
/// with starting points interpolated linearly.
pub fn geodesic(a: &SampledCurve, c: &SampledCurve, k: usize) -> Result<Vec<SampledCurve>> {
    if k == 0 {
        return Err(Error::InvalidArgument("geodesic needs at least one step".into()));
    }
    let (a, c) = harmonize(a, c)?;
    let (qa, qc) = (srvt(&a), srvt(&c));
    (0..=k)
        .map(|j| {
            if j == 0 {
                return Ok(a.clone());
            }
            if j == k {
                return Ok(c.clone());
            }
            let s = j as f64 / k as f64;
            let start: Vec<f64> = a
                .start()
                .iter()
                .zip(c.start())
                .map(|(x, y)| (1.0 - s) * x + s * y)
                .collect();
            srvt_inverse(&qa.lerp(&qc, s)?, &start)
        })
        .collect()
}
