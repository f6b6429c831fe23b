//! Curve files: JSON for every kind, CSV for Euclidean curves.
//!
//! ```text
//! {"kind":"euclidean","dim":2,"samples":[[0,0],[1,0]]}
//! {"kind":"so3","samples":[[w,x,y,z], ...]}
//! {"kind":"se3","samples":[[qw,qx,qy,qz,x,y,z], ...]}
//! {"kind":"sphere2","samples":[[x,y,z], ...]}
//! {"kind":"chart","dim":2,"chart":"hyperbolic-halfplane","samples":[[x,y], ...]}
//! ```

use std::fmt;
use std::str::FromStr;

use nalgebra::{DVector, Vector3};
use serde::Deserialize;

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::lie::{GroupCurve, GroupElement, GroupKind};
use crate::manifold::{ChartManifold, ManifoldCurve, ManifoldSpec, Sphere2};

/// Largest unit-norm drift repaired on reading.
pub const NORM_DRIFT: f64 = 1e-6;

/// Curve kind, as named in files and on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    Euclidean,
    So3,
    Se3,
    Sphere2,
    /// Chart manifold; the name selects a built-in chart.
    Chart(Option<String>),
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Euclidean => "euclidean",
            Kind::So3 => "so3",
            Kind::Se3 => "se3",
            Kind::Sphere2 => "sphere2",
            Kind::Chart(_) => "chart",
        }
    }

    fn same_family(&self, other: &Kind) -> bool {
        self.name() == other.name()
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Kind::Euclidean),
            "so3" => Ok(Kind::So3),
            "se3" => Ok(Kind::Se3),
            "sphere2" => Ok(Kind::Sphere2),
            "chart" => Ok(Kind::Chart(None)),
            _ => match s.strip_prefix("chart:") {
                Some(name) if !name.is_empty() => Ok(Kind::Chart(Some(name.to_string()))),
                _ => Err(Error::Parse(format!("unknown curve kind '{s}'"))),
            },
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Chart(Some(name)) => write!(f, "chart:{name}"),
            k => f.write_str(k.name()),
        }
    }
}

/// A curve of any supported kind.
#[derive(Debug, Clone)]
pub enum Curve {
    Euclidean(SampledCurve),
    Group(GroupCurve),
    Manifold(ManifoldCurve),
}

impl Curve {
    pub fn intervals(&self) -> usize {
        match self {
            Curve::Euclidean(c) => c.intervals(),
            Curve::Group(c) => c.intervals(),
            Curve::Manifold(c) => c.intervals(),
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Curve::Euclidean(_) => Kind::Euclidean,
            Curve::Group(c) => match c.kind() {
                GroupKind::So3 => Kind::So3,
                GroupKind::Se3 => Kind::Se3,
            },
            Curve::Manifold(c) => match c.spec() {
                ManifoldSpec::Sphere2(_) => Kind::Sphere2,
                ManifoldSpec::Chart(ch) => Kind::Chart(Some(ch.name().to_string())),
            },
        }
    }

    /// Resample on a uniform grid with `n` subintervals, using the kind's interpolation.
    pub fn resample_uniform(&self, n: usize) -> Result<Self> {
        Ok(match self {
            Curve::Euclidean(c) => Curve::Euclidean(c.resample_uniform(n)?),
            Curve::Group(c) => Curve::Group(c.resample_uniform(n)?),
            Curve::Manifold(c) => Curve::Manifold(c.resample_uniform(n)?),
        })
    }
}

/// On-disk encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// CSV for a `.csv` extension, JSON otherwise.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    kind: String,
    dim: Option<usize>,
    chart: Option<String>,
    samples: Vec<Vec<f64>>,
}

fn invalid(index: usize, reason: impl Into<String>) -> Error {
    Error::InvalidSample { index, reason: reason.into() }
}

fn check_rows(samples: &[Vec<f64>], width: usize) -> Result<()> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples(samples.len()));
    }
    for (i, row) in samples.iter().enumerate() {
        if row.len() != width {
            return Err(invalid(i, format!("expected {width} values, found {}", row.len())));
        }
        if row.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
    }
    Ok(())
}

fn unit_or_reject(row: &[f64], index: usize, what: &str) -> Result<Vec<f64>> {
    let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
    let drift = (norm - 1.0).abs();
    if drift > NORM_DRIFT {
        return Err(invalid(index, format!("{what} norm drifts from 1 by {drift:e}")));
    }
    Ok(row.iter().map(|x| x / norm).collect())
}

fn group_curve(samples: &[Vec<f64>], kind: GroupKind) -> Result<GroupCurve> {
    let width = match kind {
        GroupKind::So3 => 4,
        GroupKind::Se3 => 7,
    };
    check_rows(samples, width)?;
    let elements = samples
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let q = unit_or_reject(&row[..4], i, "quaternion")?;
            let r = GroupElement::from_quaternion([q[0], q[1], q[2], q[3]]).map_err(|e| invalid(i, e.to_string()))?;
            match kind {
                GroupKind::So3 => GroupElement::rotation(r),
                GroupKind::Se3 => GroupElement::rigid(r, Vector3::new(row[4], row[5], row[6])),
            }
            .map_err(|e| invalid(i, e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    GroupCurve::new(elements)
}

fn sphere_curve(samples: &[Vec<f64>]) -> Result<ManifoldCurve> {
    check_rows(samples, 3)?;
    let points = samples
        .iter()
        .enumerate()
        .map(|(i, row)| unit_or_reject(row, i, "point").map(DVector::from_vec))
        .collect::<Result<Vec<_>>>()?;
    ManifoldCurve::new(ManifoldSpec::Sphere2(Sphere2::default()), points)
}

fn chart_curve(samples: &[Vec<f64>], chart: ChartManifold) -> Result<ManifoldCurve> {
    check_rows(samples, chart.dim())?;
    ManifoldCurve::new(ManifoldSpec::Chart(chart), samples.iter().map(|r| DVector::from_column_slice(r)).collect())
}

/// Parse a JSON curve file. `expect` (from the command line) must agree with the
/// file's kind; its chart name overrides the one in the file.
pub fn parse_json(text: &str, expect: Option<&Kind>) -> Result<Curve> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut kind: Kind = raw.kind.parse()?;
    if let Kind::Chart(None) = kind {
        kind = Kind::Chart(raw.chart.clone());
    }
    if let Some(expect) = expect {
        if !expect.same_family(&kind) {
            return Err(Error::KindMismatch(expect.name(), kind.name()));
        }
        if let Kind::Chart(Some(_)) = expect {
            kind = expect.clone();
        }
    }
    match kind {
        Kind::Euclidean => {
            let dim = raw.dim.or_else(|| raw.samples.first().map(Vec::len)).unwrap_or(0);
            if dim == 0 {
                return Err(Error::ZeroDimension);
            }
            check_rows(&raw.samples, dim)?;
            SampledCurve::from_samples(&raw.samples).map(Curve::Euclidean)
        }
        Kind::So3 => group_curve(&raw.samples, GroupKind::So3).map(Curve::Group),
        Kind::Se3 => group_curve(&raw.samples, GroupKind::Se3).map(Curve::Group),
        Kind::Sphere2 => sphere_curve(&raw.samples).map(Curve::Manifold),
        Kind::Chart(name) => {
            let name = name.ok_or_else(|| Error::InvalidArgument("chart curve without a chart name".into()))?;
            let chart = ChartManifold::builtin(&name)?;
            if let Some(dim) = raw.dim {
                if dim != chart.dim() {
                    return Err(Error::DimensionMismatch { expected: chart.dim(), found: dim });
                }
            }
            chart_curve(&raw.samples, chart).map(Curve::Manifold)
        }
    }
}

/// Parse a headerless CSV file of Euclidean samples, one grid point per row.
pub fn parse_csv(text: &str) -> Result<SampledCurve> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut samples = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| invalid(i, e.to_string()))?;
        let row = record
            .iter()
            .map(|field| field.parse::<f64>().map_err(|_| invalid(i, format!("'{field}' is not a number"))))
            .collect::<Result<Vec<_>>>()?;
        samples.push(row);
    }
    let dim = samples.first().map(Vec::len).unwrap_or(0);
    if samples.len() >= 2 && dim == 0 {
        return Err(Error::ZeroDimension);
    }
    check_rows(&samples, dim)?;
    SampledCurve::from_samples(&samples)
}

/// Parse curve text in the given format.
pub fn parse_curve(text: &str, format: Format, expect: Option<&Kind>) -> Result<Curve> {
    match format {
        Format::Json => parse_json(text, expect),
        Format::Csv => {
            if let Some(k) = expect {
                if *k != Kind::Euclidean {
                    return Err(Error::InvalidArgument(format!("CSV files hold euclidean curves, not {}", k.name())));
                }
            }
            parse_csv(text).map(Curve::Euclidean)
        }
    }
}

fn json_rows<'a>(out: &mut String, rows: impl Iterator<Item = Vec<f64>> + 'a) {
    out.push_str("\"samples\":[\n");
    let rows: Vec<String> = rows.map(|r| serde_json::to_string(&r).expect("finite floats serialize")).collect();
    out.push_str(&rows.join(",\n"));
    out.push_str("\n]}\n");
}

/// JSON text for a curve, one sample per line.
pub fn to_json(curve: &Curve) -> String {
    let mut out = String::from("{");
    match curve {
        Curve::Euclidean(c) => {
            out.push_str(&format!("\"kind\":\"euclidean\",\"dim\":{},", c.dim()));
            json_rows(&mut out, c.samples().map(<[f64]>::to_vec));
        }
        Curve::Group(c) => {
            out.push_str(&format!("\"kind\":\"{}\",", c.kind().name()));
            json_rows(
                &mut out,
                c.elements().iter().map(|g| {
                    let mut row = g.quaternion().to_vec();
                    if let Some(t) = g.translation_part() {
                        row.extend(t.iter());
                    }
                    row
                }),
            );
        }
        Curve::Manifold(c) => {
            match c.spec() {
                ManifoldSpec::Sphere2(_) => out.push_str("\"kind\":\"sphere2\","),
                ManifoldSpec::Chart(ch) => {
                    out.push_str(&format!("\"kind\":\"chart\",\"dim\":{},", ch.dim()));
                    out.push_str(&format!("\"chart\":{},", serde_json::to_string(ch.name()).expect("string")));
                }
            }
            json_rows(&mut out, c.points().iter().map(|p| p.coords().as_slice().to_vec()));
        }
    }
    out
}

/// CSV text for a Euclidean curve.
pub fn to_csv(c: &SampledCurve) -> String {
    let mut out = String::new();
    for s in c.samples() {
        let row: Vec<String> = s.iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Text for a curve in the given format.
pub fn write_curve(curve: &Curve, format: Format) -> Result<String> {
    match (format, curve) {
        (Format::Json, c) => Ok(to_json(c)),
        (Format::Csv, Curve::Euclidean(c)) => Ok(to_csv(c)),
        (Format::Csv, c) => Err(Error::InvalidArgument(format!("CSV files hold euclidean curves, not {}", c.kind().name()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_json_round_trip() {
        let text = r#"{"kind":"euclidean","dim":2,"samples":[[0,0],[1,0.5],[2,-1]]}"#;
        let c = parse_json(text, None).unwrap();
        let again = parse_json(&to_json(&c), Some(&Kind::Euclidean)).unwrap();
        match (c, again) {
            (Curve::Euclidean(a), Curve::Euclidean(b)) => assert_eq!(a, b),
            _ => panic!("kind changed"),
        }
    }

    #[test]
    fn rejects_bad_rows_with_index() {
        let wrong_width = r#"{"kind":"euclidean","dim":2,"samples":[[0,0],[1,0,3]]}"#;
        assert!(matches!(parse_json(wrong_width, None), Err(Error::InvalidSample { index: 1, .. })));
        let one = r#"{"kind":"euclidean","dim":2,"samples":[[0,0]]}"#;
        assert_eq!(parse_json(one, None).unwrap_err(), Error::TooFewSamples(1));
        let far = r#"{"kind":"sphere2","samples":[[0,0,1],[0,0,1.1]]}"#;
        assert!(matches!(parse_json(far, None), Err(Error::InvalidSample { index: 1, .. })));
        assert_eq!(parse_csv("0,0\n1,nan\n").unwrap_err(), Error::NonFinite { index: 1 });
        assert!(matches!(parse_csv("0,0\n1,x\n"), Err(Error::InvalidSample { index: 1, .. })));
        assert!(matches!(parse_json("{\"kind\":\"euclidean\"", None), Err(Error::Parse(_))));
    }

    #[test]
    fn kind_checks() {
        let text = r#"{"kind":"sphere2","samples":[[0,0,1],[1,0,0]]}"#;
        assert_eq!(parse_json(text, Some(&Kind::So3)).unwrap_err(), Error::KindMismatch("so3", "sphere2"));
        assert_eq!("chart:flat-3".parse::<Kind>().unwrap(), Kind::Chart(Some("flat-3".into())));
        assert!("chart:".parse::<Kind>().is_err());
        assert!("torus".parse::<Kind>().is_err());
    }

    #[test]
    fn small_drift_is_repaired() {
        let text = r#"{"kind":"sphere2","samples":[[0,0,1.0000005],[0.6,0.8,0]]}"#;
        let Curve::Manifold(c) = parse_json(text, None).unwrap() else { panic!() };
        assert_eq!(c.points()[0].coords()[2], 1.0);
        let so3 = r#"{"kind":"so3","samples":[[1.0000004,0,0,0],[0,1,0,0]]}"#;
        assert!(parse_json(so3, None).is_ok());
        let bad = r#"{"kind":"so3","samples":[[1.001,0,0,0],[0,1,0,0]]}"#;
        assert!(matches!(parse_json(bad, None), Err(Error::InvalidSample { index: 0, .. })));
    }

    #[test]
    fn se3_round_trip() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let text = format!(r#"{{"kind":"se3","samples":[[1,0,0,0,0,0,0],[{h},0,0,{h},1,2,3]]}}"#);
        let c = parse_json(&text, None).unwrap();
        let Curve::Group(g) = parse_json(&to_json(&c), None).unwrap() else { panic!() };
        assert_eq!(g.elements()[1].translation_part().unwrap(), &Vector3::new(1.0, 2.0, 3.0));
        let q = g.elements()[1].quaternion();
        assert!((q[0] - h).abs() < 1e-15 && (q[3] - h).abs() < 1e-15);
    }

    #[test]
    fn chart_name_resolution() {
        let text = r#"{"kind":"chart","dim":2,"samples":[[0,1],[0,2]]}"#;
        assert!(parse_json(text, None).is_err());
        let kind = Kind::Chart(Some("hyperbolic-halfplane".into()));
        let c = parse_json(text, Some(&kind)).unwrap();
        assert_eq!(c.kind(), kind);
        let back = parse_json(&to_json(&c), None).unwrap();
        assert_eq!(back.kind(), kind);
        let outside = r#"{"kind":"chart","chart":"hyperbolic-halfplane","samples":[[0,1],[0,-2]]}"#;
        assert!(matches!(parse_json(outside, None), Err(Error::InvalidSample { index: 1, .. })));
    }

    #[test]
    fn csv_round_trip() {
        let c = parse_csv("0, 0\n0.5, 0.25\n1, 1\n").unwrap();
        assert_eq!(parse_csv(&to_csv(&c)).unwrap(), c);
    }
}
