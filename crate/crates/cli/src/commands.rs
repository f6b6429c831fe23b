use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use srvt_core::alignment::{self, warp, AlignOptions, SlopeSet, WarpingFunction};
use srvt_core::curve::{lp_norm, PExponent, StepFunction};
use srvt_core::io::{self, Curve, Format, Kind};
use srvt_core::manifold::{self, ManifoldPoint, ManifoldSpec};
use srvt_core::{euclidean, lie, Error};

use crate::number;
use crate::{Common, Metric};

/// Exit status and the messages explaining it.
pub struct Failure {
    pub code: u8,
    pub messages: Vec<String>,
}

impl Failure {
    fn usage(message: String) -> Self {
        Self { code: 2, messages: vec![message] }
    }

    fn from_error(context: &str, e: &Error) -> Self {
        let code = if e.is_geometric() { 3 } else { 2 };
        Self { code, messages: vec![format!("{context}: {e}")] }
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

/// Parsed flags shared by all commands.
struct Context {
    kind: Option<Kind>,
    metric: Metric,
    samples: Option<usize>,
    star: Option<Vec<f64>>,
    options: AlignOptions,
}

impl Context {
    fn new(common: &Common) -> CmdResult<Self> {
        let kind = common
            .kind
            .as_deref()
            .map(str::parse::<Kind>)
            .transpose()
            .map_err(|e| Failure::usage(format!("--kind: {e}")))?;
        let star = common
            .star
            .as_deref()
            .map(|s| {
                s.split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|_| Failure::usage(format!("--star: '{x}' is not a number"))))
                    .collect::<CmdResult<Vec<f64>>>()
            })
            .transpose()?;
        let mut options = AlignOptions::default();
        if let Some(s) = &common.slopes {
            options.slopes = s.parse::<SlopeSet>().map_err(|e| Failure::usage(format!("--slopes: {e}")))?;
        }
        if common.samples == Some(0) {
            return Err(Failure::usage("--samples must be positive".into()));
        }
        Ok(Self { kind, metric: common.metric, samples: common.samples, star, options })
    }

    /// Reference point in the manifold of `spec`.
    fn star(&self, spec: &ManifoldSpec) -> CmdResult<ManifoldPoint> {
        let raw = self
            .star
            .as_ref()
            .ok_or_else(|| Failure::usage("--star is required for manifold curves".into()))?;
        let mut coords = raw.clone();
        if let ManifoldSpec::Sphere2(_) = spec {
            let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() <= io::NORM_DRIFT {
                coords.iter_mut().for_each(|x| *x /= norm);
            }
        }
        spec.point_from_slice(&coords).map_err(|e| Failure::usage(format!("--star: {e}")))
    }
}

/// A curve read from disk together with its name and format.
struct Loaded {
    path: PathBuf,
    format: Format,
    curve: Curve,
}

fn load(path: &Path, ctx: &Context) -> CmdResult<Loaded> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{name}: {e}")))?;
    let format = Format::from_path(path);
    let mut curve = io::parse_curve(&text, format, ctx.kind.as_ref()).map_err(|e| Failure::from_error(&name, &e))?;
    if let Some(n) = ctx.samples {
        curve = curve.resample_uniform(n).map_err(|e| Failure::from_error(&name, &e))?;
    }
    // transform once so that geometric failures name the file they come from
    match &curve {
        Curve::Euclidean(_) => {}
        Curve::Group(c) => {
            lie::srvt_lie(c).map_err(|e| Failure::from_error(&name, &e))?;
        }
        Curve::Manifold(c) => {
            let star = ctx.star(c.spec())?;
            manifold::srvt_manifold(c, &star).map_err(|e| Failure::from_error(&name, &e))?;
        }
    }
    Ok(Loaded { path: path.to_path_buf(), format, curve })
}

fn same_kind(a: &Loaded, b: &Loaded) -> CmdResult<()> {
    if a.curve.kind() != b.curve.kind() {
        return Err(Failure::usage(format!(
            "{} is {} but {} is {}",
            a.path.display(),
            a.curve.kind(),
            b.path.display(),
            b.curve.kind()
        )));
    }
    Ok(())
}

fn pair_distance(a: &Curve, b: &Curve, ctx: &Context) -> CmdResult<f64> {
    let r = match (a, b) {
        (Curve::Euclidean(a), Curve::Euclidean(b)) => match ctx.metric {
            Metric::Plain => euclidean::distance(a, b),
            Metric::Based => euclidean::distance_with_basepoint(a, b),
            Metric::Shape => alignment::shape_distance(a, b, &ctx.options),
        },
        (Curve::Group(a), Curve::Group(b)) => match ctx.metric {
            Metric::Plain => lie::lie_distance(a, b),
            Metric::Based => lie::lie_distance_with_basepoint(a, b),
            Metric::Shape => alignment::lie_shape_distance(a, b, &ctx.options),
        },
        (Curve::Manifold(a), Curve::Manifold(b)) => {
            let star = ctx.star(a.spec())?;
            match ctx.metric {
                Metric::Plain => manifold::manifold_distance(a, b, &star, false),
                Metric::Based => manifold::manifold_distance(a, b, &star, true),
                Metric::Shape => alignment::manifold_shape_distance(a, b, &star, &ctx.options),
            }
        }
        _ => Err(Error::KindMismatch(a.kind().name(), b.kind().name())),
    };
    r.map_err(|e| Failure::from_error("distance", &e))
}

pub fn distance(a: &Path, b: &Path, common: &Common) -> CmdResult<()> {
    let ctx = Context::new(common)?;
    let (a, b) = (load(a, &ctx)?, load(b, &ctx)?);
    same_kind(&a, &b)?;
    println!("{}", number::format(pair_distance(&a.curve, &b.curve, &ctx)?));
    Ok(())
}

fn curve_files(dir: &Path) -> CmdResult<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .filter(|p| {
            matches!(p.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(), Some("json" | "csv"))
        })
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if files.len() < 2 {
        return Err(Failure::usage(format!("{}: need at least 2 curve files, found {}", dir.display(), files.len())));
    }
    Ok(files)
}

fn merge(failures: Vec<Failure>) -> Failure {
    Failure {
        code: failures.iter().map(|f| f.code).max().unwrap_or(2),
        messages: failures.into_iter().flat_map(|f| f.messages).collect(),
    }
}

pub fn matrix(dir: &Path, common: &Common, out: Option<&Path>) -> CmdResult<()> {
    let ctx = Context::new(common)?;
    let files = curve_files(dir)?;
    let loaded: Vec<CmdResult<Loaded>> = files.par_iter().map(|p| load(p, &ctx)).collect();
    let (curves, failures): (Vec<_>, Vec<_>) = loaded.into_iter().partition(Result::is_ok);
    if !failures.is_empty() {
        return Err(merge(failures.into_iter().filter_map(Result::err).collect()));
    }
    let curves: Vec<Loaded> = curves.into_iter().filter_map(Result::ok).collect();
    for c in &curves[1..] {
        same_kind(&curves[0], c)?;
    }
    let n = curves.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let results: Vec<CmdResult<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            pair_distance(&curves[i].curve, &curves[j].curve, &ctx).map_err(|mut f| {
                let names = format!("{} vs {}", curves[i].path.display(), curves[j].path.display());
                f.messages.iter_mut().for_each(|m| *m = format!("{names}: {m}"));
                f
            })
        })
        .collect();
    let mut d = vec![vec![0.0; n]; n];
    let mut failures = Vec::new();
    for (&(i, j), r) in pairs.iter().zip(results) {
        match r {
            Ok(v) => {
                d[i][j] = v;
                d[j][i] = v;
            }
            Err(f) => failures.push(f),
        }
    }
    if !failures.is_empty() {
        return Err(merge(failures));
    }
    let names: Vec<String> = curves
        .iter()
        .map(|c| c.path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default())
        .collect();
    let mut writer = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once(String::new()).chain(names.iter().cloned());
    let write_err = |e: csv::Error| Failure::usage(format!("writing matrix: {e}"));
    writer.write_record(header).map_err(write_err)?;
    for (name, row) in names.iter().zip(&d) {
        let record = std::iter::once(name.clone()).chain(row.iter().map(|&x| number::format(x)));
        writer.write_record(record).map_err(write_err)?;
    }
    let bytes = writer.into_inner().map_err(|e| Failure::usage(format!("writing matrix: {e}")))?;
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{}", String::from_utf8_lossy(&bytes));
            Ok(())
        }
    }
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

fn write_file(path: &Path, text: &str) -> CmdResult<()> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn create_dir(dir: &Path) -> CmdResult<()> {
    fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))
}

pub fn geodesic(a: &Path, b: &Path, common: &Common, steps: usize, out: &Path) -> CmdResult<()> {
    let ctx = Context::new(common)?;
    if steps == 0 {
        return Err(Failure::usage("--steps must be positive".into()));
    }
    let (a, b) = (load(a, &ctx)?, load(b, &ctx)?);
    same_kind(&a, &b)?;
    let fail = |e: Error| Failure::from_error("geodesic", &e);
    let path: Vec<Curve> = match (&a.curve, &b.curve) {
        (Curve::Euclidean(x), Curve::Euclidean(y)) => {
            euclidean::geodesic(x, y, steps).map_err(fail)?.into_iter().map(Curve::Euclidean).collect()
        }
        (Curve::Group(x), Curve::Group(y)) => {
            lie::lie_geodesic(x, y, steps).map_err(fail)?.into_iter().map(Curve::Group).collect()
        }
        (Curve::Manifold(x), Curve::Manifold(y)) => {
            let star = ctx.star(x.spec())?;
            manifold::manifold_geodesic(x, y, &star, steps).map_err(fail)?.into_iter().map(Curve::Manifold).collect()
        }
        _ => unreachable!("kinds checked"),
    };
    create_dir(out)?;
    for (j, c) in path.iter().enumerate() {
        let text = io::write_curve(c, a.format).map_err(fail)?;
        write_file(&out.join(format!("geodesic_{j:03}.{}", extension(a.format))), &text)?;
    }
    Ok(())
}

fn transforms(a: &Curve, b: &Curve, ctx: &Context) -> Result<(StepFunction, StepFunction), Error> {
    Ok(match (a, b) {
        (Curve::Euclidean(x), Curve::Euclidean(y)) => (euclidean::srvt(x), euclidean::srvt(y)),
        (Curve::Group(x), Curve::Group(y)) => {
            (lie::srvt_lie(x)?.into_values(), lie::srvt_lie(y)?.into_values())
        }
        (Curve::Manifold(x), Curve::Manifold(y)) => {
            let star = ctx.star(x.spec()).map_err(|f| Error::InvalidArgument(f.messages.join("; ")))?;
            (manifold::srvt_manifold(x, &star)?.q, manifold::srvt_manifold(y, &star)?.q)
        }
        _ => return Err(Error::KindMismatch(a.kind().name(), b.kind().name())),
    })
}

pub fn align(a: &Path, b: &Path, common: &Common, out: &Path) -> CmdResult<()> {
    let ctx = Context::new(common)?;
    let (a, b) = (load(a, &ctx)?, load(b, &ctx)?);
    same_kind(&a, &b)?;
    let fail = |e: Error| Failure::from_error("align", &e);
    let n = a.curve.intervals().max(b.curve.intervals());
    let (ca, cb) = (a.curve.resample_uniform(n).map_err(fail)?, b.curve.resample_uniform(n).map_err(fail)?);
    let (qa, qb) = transforms(&ca, &cb, &ctx).map_err(fail)?;
    let unaligned = lp_norm(&qa.sub(&qb).map_err(fail)?, PExponent::TWO, None).map_err(fail)?;
    let found = alignment::align(&qa, &qb, &ctx.options).map_err(fail)?;
    let (phi, aligned) = if found.cost <= unaligned {
        (found.warp, found.cost)
    } else {
        (WarpingFunction::identity(n), unaligned)
    };
    let warped = match &cb {
        Curve::Euclidean(c) => Curve::Euclidean(warp(c, &phi).map_err(fail)?),
        Curve::Group(c) => Curve::Group(warp(c, &phi).map_err(fail)?),
        Curve::Manifold(c) => Curve::Manifold(warp(c, &phi).map_err(fail)?),
    };
    create_dir(out)?;
    let text = io::write_curve(&warped, b.format).map_err(fail)?;
    write_file(&out.join(format!("aligned.{}", extension(b.format))), &text)?;
    let warp_json = serde_json::json!({ "phi": phi.values() });
    write_file(&out.join("warp.json"), &format!("{warp_json}\n"))?;
    println!("unaligned={}", number::format(unaligned));
    println!("aligned={}", number::format(aligned));
    Ok(())
}
