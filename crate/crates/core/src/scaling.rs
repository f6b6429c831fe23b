//! The pointwise scaling `v -> v / sqrt(|v|)` and its inverse `q -> q |q|`.
//!
//! Scaling maps `L^1` to `L^2` homeomorphically but is not differentiable at zero.
//! On step functions both sides share one representation and the relation
//! `|scale(f)|_2^2 = |f|_1` holds exactly.

use crate::curve::{norm, StepFunction};

/// Values with norm below this take the zero branch.
pub const ZERO_THRESHOLD: f64 = 1e-300;

/// Scale a single vector.
pub fn scale_vec(v: &[f64]) -> Vec<f64> {
    let r = norm(v);
    if r < ZERO_THRESHOLD {
        return vec![0.0; v.len()];
    }
    let s = r.sqrt();
    v.iter().map(|x| x / s).collect()
}

/// Inverse of [`scale_vec`].
pub fn unscale_vec(q: &[f64]) -> Vec<f64> {
    let r = norm(q);
    q.iter().map(|x| x * r).collect()
}

pub fn scale(f: &StepFunction) -> StepFunction {
    f.map_values(scale_vec).expect("scaling preserves shape")
}

pub fn unscale(q: &StepFunction) -> StepFunction {
    q.map_values(unscale_vec).expect("unscaling preserves shape")
}
