//! Square root velocity transforms (SRVT) for curves in Euclidean space, in the
//! matrix Lie groups SO(3) and SE(3), and in Riemannian manifolds, with the
//! distances, geodesics and reparametrization alignment built on them.
//!
//! Curves are sampled on a uniform grid of `[0, 1]`; derivatives and transforms
//! are piecewise constant on the subintervals.
//!
//! ```
//! use srvt_core::{euclidean, SampledCurve};
//!
//! let a = SampledCurve::from_fn(8, 2, |t| vec![4.0 * t, 0.0]).unwrap();
//! let c = SampledCurve::from_fn(8, 2, |t| vec![0.0, 4.0 * t]).unwrap();
//! let d = euclidean::distance(&a, &c).unwrap();
//! assert!((d - 8f64.sqrt()).abs() < 1e-12);
//! ```

pub mod alignment;
pub mod curve;
pub mod error;
pub mod euclidean;
pub mod io;
pub mod lie;
pub mod manifold;
pub mod scaling;

pub use alignment::{AlignOptions, Alignment, SlopeSet, WarpingFunction};
pub use curve::{PExponent, SampledCurve, StepFunction};
pub use error::{Error, Result};
pub use lie::{AlgebraElement, AlgebraMetric, AlgebraStepFunction, GroupCurve, GroupElement, GroupKind};
pub use manifold::{ChartManifold, InverseScheme, ManifoldCurve, ManifoldPoint, ManifoldSpec, Sphere2};
