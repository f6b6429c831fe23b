//! Acceptance suite. Runs without the libtest harness and prints one line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{DVector, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use srvt_core::alignment::{edge_cost, optimal_warp, srvt_warp_action, warp_cost, SlopeSet, WarpingFunction};
use srvt_core::curve::{lp_norm, PExponent, SampledCurve, StepFunction};
use srvt_core::lie::{
    evolve, group_exp, lie_distance, right_log_derivative, srvt_lie, srvt_lie_inverse, AlgebraElement,
    GroupCurve, GroupElement, GroupKind,
};
use srvt_core::manifold::chart::stereographic;
use srvt_core::manifold::{
    manifold_distance, parallel_transport_ode, srvt_manifold, srvt_manifold_inverse_with, ChartManifold,
    InverseScheme, ManifoldCurve, ManifoldSpec, Sphere2,
};
use srvt_core::scaling::{scale, scale_vec, unscale_vec};
use srvt_core::euclidean;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn l2(f: &StepFunction) -> f64 {
    lp_norm(f, PExponent::TWO, None).unwrap()
}

/// Least-squares slope of `log err` against `log n`, negated.
fn order(ns: &[usize], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    -sxy / sxx
}

fn random_walk(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> SampledCurve {
    let mut p: Vec<f64> = (0..dim).map(|_| normal(rng)).collect();
    let mut samples = vec![p.clone()];
    for _ in 0..n {
        // occasional repeated samples give zero-velocity subintervals
        if rng.gen_bool(0.05) {
            samples.push(p.clone());
            continue;
        }
        p.iter_mut().for_each(|x| *x += normal(rng) * 0.1);
        samples.push(p.clone());
    }
    SampledCurve::from_samples(&samples).unwrap()
}

fn bijection() -> Outcome {
    let mut rng = rng(1);
    let (mut worst, mut slowest) = (0.0f64, Duration::ZERO);
    for k in 0..50 {
        let c = random_walk(&mut rng, 256, 2 + k % 2);
        let started = Instant::now();
        let back = euclidean::srvt_inverse(&euclidean::srvt(&c), c.start()).unwrap();
        slowest = slowest.max(started.elapsed());
        worst = worst.max(max_abs_diff(back.as_slice(), c.as_slice()));
    }
    check(
        worst <= 1e-9 && slowest < Duration::from_millis(10),
        format!("sup error {worst:.2e} (<= 1e-9), slowest {slowest:?} (< 10ms)"),
    )
}

fn scaling_round_trip() -> Outcome {
    let mut rng = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let dim = rng.gen_range(1..=4);
        let v: Vec<f64> = if rng.gen_bool(0.1) {
            vec![0.0; dim]
        } else {
            let mag = 10f64.powf(rng.gen_range(-6.0..6.0));
            (0..dim).map(|_| if rng.gen_bool(0.1) { 0.0 } else { mag * normal(&mut rng) }).collect()
        };
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for back in [unscale_vec(&scale_vec(&v)), scale_vec(&unscale_vec(&v))] {
            let err = max_abs_diff(&back, &v);
            worst = worst.max(if norm == 0.0 { err } else { err / norm });
        }
    }
    let mut identity = 0.0f64;
    for _ in 0..100 {
        let data: Vec<f64> = (0..64 * 3).map(|_| normal(&mut rng)).collect();
        let f = StepFunction::new(3, data).unwrap();
        let lhs = l2(&scale(&f)).powi(2);
        let rhs = lp_norm(&f, PExponent::ONE, None).unwrap();
        identity = identity.max((lhs - rhs).abs());
    }
    check(
        worst <= 1e-10 && identity <= 1e-12,
        format!("round trip relative error {worst:.2e} (<= 1e-10), norm identity {identity:.2e} (<= 1e-12)"),
    )
}

fn algebra(kind: GroupKind, coords: Vec<f64>) -> AlgebraElement {
    AlgebraElement::new(kind, coords).unwrap()
}

fn random_element(rng: &mut ChaCha8Rng, kind: GroupKind) -> GroupElement {
    let coords = (0..kind.algebra_dim()).map(|_| normal(rng)).collect();
    let mut xi = algebra(kind, coords);
    // keep the rotation angle below pi
    let angle = Vector3::from_column_slice(&xi.coords()[..3]).norm();
    if angle > 2.5 {
        xi = algebra(kind, xi.coords().iter().map(|x| x * 2.5 / angle).collect());
    }
    group_exp(&xi, 1.0)
}

/// `t -> exp(a t + b sin(w t)) g0`, a smooth curve with small steps on any fine grid.
fn smooth_group_curve(rng: &mut ChaCha8Rng, kind: GroupKind, n: usize) -> GroupCurve {
    let d = kind.algebra_dim();
    let a: Vec<f64> = (0..d).map(|_| normal(rng)).collect();
    let b: Vec<f64> = (0..d).map(|_| 0.5 * normal(rng)).collect();
    let w: f64 = rng.gen_range(1.0..6.0);
    let g0 = random_element(rng, kind);
    GroupCurve::from_fn(n, |t| {
        let coords = a.iter().zip(&b).map(|(a, b)| a * t + b * (w * t).sin()).collect();
        group_exp(&algebra(kind, coords), 1.0).compose(&g0).unwrap()
    })
    .unwrap()
}

fn lie_round_trip() -> Outcome {
    let mut rng = rng(3);
    let (mut evol, mut srvt) = (0.0f64, 0.0f64);
    for k in 0..50 {
        let kind = if k % 2 == 0 { GroupKind::So3 } else { GroupKind::Se3 };
        let c = smooth_group_curve(&mut rng, kind, 256);
        let xi = right_log_derivative(&c).unwrap();
        evol = evol.max(evolve(&xi, c.start()).unwrap().max_frobenius_distance(&c));
        let q = srvt_lie(&c).unwrap();
        srvt = srvt.max(srvt_lie_inverse(&q, c.start()).unwrap().max_frobenius_distance(&c));
    }
    check(
        evol <= 1e-12 && srvt <= 1e-10,
        format!("evolve round trip {evol:.2e} (<= 1e-12), SRVT round trip {srvt:.2e} (<= 1e-10)"),
    )
}

fn right_invariance() -> Outcome {
    let mut rng = rng(4);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let kind = if k % 2 == 0 { GroupKind::So3 } else { GroupKind::Se3 };
        let a = smooth_group_curve(&mut rng, kind, 128);
        let c = smooth_group_curve(&mut rng, kind, 128);
        let g = random_element(&mut rng, kind);
        let before = lie_distance(&a, &c).unwrap();
        let after = lie_distance(&a.right_translate(&g).unwrap(), &c.right_translate(&g).unwrap()).unwrap();
        worst = worst.max((before - after).abs());
    }
    check(worst <= 1e-12, format!("max |d(a g, c g) - d(a, c)| = {worst:.2e} (<= 1e-12)"))
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    Vector3::new(normal(rng), normal(rng), normal(rng)).normalize()
}

fn stereo_curve(n: usize, f: &dyn Fn(f64) -> DVector<f64>) -> ManifoldCurve {
    ManifoldCurve::from_fn(ManifoldSpec::Chart(ChartManifold::stereographic_sphere()), n, f).unwrap()
}

fn g_norm(p: &DVector<f64>, v: &DVector<f64>) -> f64 {
    ChartManifold::stereographic_sphere().norm(p, v)
}

fn transport_isometry() -> Outcome {
    let mut rng = rng(5);
    let sphere = Sphere2::default();
    let mut closed = 0.0f64;
    let mut cases = 0;
    while cases < 1000 {
        let (p, q) = (random_unit(&mut rng), random_unit(&mut rng));
        if !sphere.outside_cut_locus(&p, &q) {
            continue;
        }
        let raw = Vector3::new(normal(&mut rng), normal(&mut rng), normal(&mut rng));
        let v = raw - p * p.dot(&raw);
        closed = closed.max((sphere.transport(&p, &q, &v).norm() - v.norm()).abs());
        cases += 1;
    }
    let ns = [64, 128, 256, 512];
    let mut worst_drift = 0.0f64;
    let mut worst_order = f64::INFINITY;
    for k in 0..3 {
        let phase = k as f64;
        let path = move |t: f64| {
            DVector::from_vec(vec![
                0.9 * (3.0 * t + phase).cos() + 0.2 * t,
                0.7 * (2.0 * t + 0.5 * phase).sin() - 0.3 * t * t,
            ])
        };
        let p0 = path(0.0);
        let v0 = DVector::from_vec(vec![0.3 + 0.1 * phase, -0.4]);
        let drifts: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let c = stereo_curve(n, &path);
                let vs = parallel_transport_ode(&c, &v0).unwrap();
                (g_norm(&path(1.0), &vs[n]) - g_norm(&p0, &v0)).abs()
            })
            .collect();
        worst_drift = worst_drift.max(drifts[3]);
        worst_order = worst_order.min(order(&ns, &drifts));
    }
    check(
        closed <= 1e-10 && worst_drift <= 1e-4 && worst_order >= 1.9,
        format!(
            "closed form {closed:.2e} (<= 1e-10), chart drift at N=512 {worst_drift:.2e} (<= 1e-4), order {worst_order:.3} (>= 1.9)"
        ),
    )
}

/// Smooth curve in the southern hemisphere, away from the projection pole.
fn southern_curve(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> Vector3<f64> {
    let c: Vec<f64> = (0..8).map(|_| rng.gen_range(-0.5..0.5)).collect();
    move |t: f64| {
        let x = c[0] * (3.0 * t + c[1]).sin() + c[2] * t + c[6];
        let y = c[3] * (2.0 * t + c[4]).cos() + c[5] * t * t + c[7];
        Vector3::new(x, y, -1.0).normalize()
    }
}

fn oracle_equivalence() -> Outcome {
    let mut rng = rng(6);
    let sphere = ManifoldSpec::Sphere2(Sphere2::default());
    let (n, fine) = (512, 8192);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let f = southern_curve(&mut rng);
        let p0 = f(0.0);
        let raw = random_unit(&mut rng);
        let v0 = (raw - p0 * p0.dot(&raw)).normalize();
        let reference = ManifoldCurve::from_fn(sphere.clone(), fine, |t| DVector::from_column_slice(f(t).as_slice())).unwrap();
        let closed = parallel_transport_ode(&reference, &DVector::from_column_slice(v0.as_slice())).unwrap();
        let chart = stereo_curve(n, &|t| stereographic::to_chart(&f(t)));
        let ode = parallel_transport_ode(&chart, &stereographic::pull_back(&p0, &v0)).unwrap();
        for (i, v) in ode.iter().enumerate() {
            let pushed = stereographic::push_forward(chart.points()[i].coords(), v);
            let target = Vector3::from_column_slice(closed[i * fine / n].as_slice());
            worst = worst.max((pushed - target).norm());
        }
    }
    check(worst <= 1e-4, format!("max closed form vs chart ODE difference {worst:.2e} (<= 1e-4)"))
}

fn northern_curve(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> DVector<f64> {
    let c: Vec<f64> = (0..8).map(|_| rng.gen_range(-0.5..0.5)).collect();
    move |t: f64| {
        let x = c[0] * (3.0 * t + c[1]).sin() + c[2] * t + c[6];
        let y = c[3] * (2.0 * t + c[4]).cos() + c[5] * t * t + c[7];
        DVector::from_vec(vec![x, y, 1.0]).normalize()
    }
}

fn manifold_round_trip() -> Outcome {
    let mut rng = rng(7);
    let spec = ManifoldSpec::Sphere2(Sphere2::default());
    let star = spec.point_from_slice(&[0.0, 0.0, 1.0]).unwrap();
    let (mut worst, mut lo, mut hi) = (0.0f64, f64::INFINITY, 0.0f64);
    for _ in 0..20 {
        let f = northern_curve(&mut rng);
        let errs: Vec<f64> = [256, 512, 1024]
            .iter()
            .map(|&n| {
                let c = ManifoldCurve::from_fn(spec.clone(), n, &f).unwrap();
                let r = srvt_manifold(&c, &star).unwrap();
                let back = srvt_manifold_inverse_with(&spec, &r.q, &r.start, &star, InverseScheme::Midpoint).unwrap();
                c.max_distance(&back).unwrap()
            })
            .collect();
        worst = worst.max(errs[1]);
        for ratio in [errs[1] / errs[0], errs[2] / errs[1]] {
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    check(
        worst <= 1e-3 && lo >= 0.35 && hi <= 0.65,
        format!("sup error at N=512 {worst:.2e} (<= 1e-3), error ratios in [{lo:.3}, {hi:.3}] (within [0.35, 0.65])"),
    )
}

fn flat_reduction() -> Outcome {
    let mut rng = rng(8);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let dim = 2 + k % 2;
        let (a, c) = (random_walk(&mut rng, 48, dim), random_walk(&mut rng, 48, dim));
        let spec = ManifoldSpec::Chart(ChartManifold::flat(dim));
        let ma = ManifoldCurve::from_sampled(spec.clone(), &a).unwrap();
        let mc = ManifoldCurve::from_sampled(spec.clone(), &c).unwrap();
        let star = spec.point_from_slice(&vec![0.0; dim]).unwrap();
        let plain = (manifold_distance(&ma, &mc, &star, false).unwrap() - euclidean::distance(&a, &c).unwrap()).abs();
        let based = (manifold_distance(&ma, &mc, &star, true).unwrap()
            - euclidean::distance_with_basepoint(&a, &c).unwrap())
        .abs();
        worst = worst.max(plain).max(based);
    }
    check(worst <= 1e-12, format!("max flat chart vs Euclidean difference {worst:.2e} (<= 1e-12)"))
}

/// Smallest path cost over all lattice paths, summed edge by edge from the origin.
fn brute_force(qa: &StepFunction, qc: &StepFunction, steps: &[(usize, usize)]) -> f64 {
    fn walk(qa: &StepFunction, qc: &StepFunction, steps: &[(usize, usize)], i: usize, j: usize, acc: f64, best: &mut f64) {
        let n = qa.intervals();
        if i == n && j == n {
            *best = best.min(acc);
            return;
        }
        for &(k, l) in steps {
            if i + k <= n && j + l <= n {
                walk(qa, qc, steps, i + k, j + l, acc + edge_cost(qa, qc, i, j, k, l), best);
            }
        }
    }
    let mut best = f64::INFINITY;
    walk(qa, qc, steps, 0, 0, 0.0, &mut best);
    best
}

fn random_step(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> StepFunction {
    StepFunction::new(dim, (0..n * dim).map(|_| normal(rng)).collect()).unwrap()
}

/// Random lattice path from `(0, 0)` to `(n, n)` with the given steps, as a warp.
fn lattice_warp(rng: &mut ChaCha8Rng, n: usize, steps: &[(usize, usize)]) -> WarpingFunction {
    loop {
        let (mut i, mut j) = (0, 0);
        let mut phi = vec![0.0; n + 1];
        while i < n && j < n {
            let &(k, l) = &steps[rng.gen_range(0..steps.len())];
            if i + k > n || j + l > n {
                break;
            }
            for r in 0..k {
                phi[i + r] = (j as f64 + (l * r) as f64 / k as f64) / n as f64;
            }
            i += k;
            j += l;
        }
        if i == n && j == n {
            phi[n] = 1.0;
            return WarpingFunction::new(phi).unwrap();
        }
    }
}

fn dp_alignment() -> Outcome {
    let mut rng = rng(9);
    let small: SlopeSet = "1/2,1,2".parse().unwrap();
    let (mut mismatches, mut instances, mut path_check) = (0, 0, 0.0f64);
    for n in 1..=8 {
        for k in 0..30 {
            let dim = 1 + k % 2;
            let qa = random_step(&mut rng, n, dim);
            let qc = if k % 5 == 0 { qa.clone() } else { random_step(&mut rng, n, dim) };
            let dp = optimal_warp(&qa, &qc, &small).unwrap();
            let brute = brute_force(&qa, &qc, small.steps()).sqrt();
            if dp.cost != brute {
                mismatches += 1;
            }
            path_check = path_check.max((warp_cost(&qa, &qc, &dp.warp).unwrap() - dp.cost).abs());
            instances += 1;
        }
    }
    let n = 128;
    let qa = euclidean::srvt(&SampledCurve::from_fn(n, 2, |t| vec![(3.0 * t).sin(), (2.0 * t).cos() + t]).unwrap());
    let mut worst_recover = 0.0f64;
    let mut worst_relative = 0.0f64;
    for _ in 0..5 {
        let psi = lattice_warp(&mut rng, n, SlopeSet::default().steps());
        let qc = srvt_warp_action(&qa, &psi);
        let cost = optimal_warp(&qa, &qc, &SlopeSet::default()).unwrap().cost;
        worst_recover = worst_recover.max(cost / l2(&qa));
        worst_relative = worst_relative.max(cost / l2(&qa.sub(&qc).unwrap()));
    }
    let big_a = random_step(&mut rng, 256, 2);
    let big_c = random_step(&mut rng, 256, 2);
    let started = Instant::now();
    optimal_warp(&big_a, &big_c, &SlopeSet::default()).unwrap();
    let elapsed = started.elapsed();
    check(
        mismatches == 0 && path_check <= 1e-12 && worst_recover <= 0.05 && worst_relative <= 0.1 && elapsed < Duration::from_secs(1),
        format!(
            "{mismatches} DP/brute-force mismatches in {instances} instances, planted recovery {worst_recover:.4} |qa| (<= 0.05) and {worst_relative:.4} of unaligned (<= 0.1), N=256 DP {elapsed:?} (< 1s)"
        ),
    )
}

fn metric_axioms() -> Outcome {
    let mut rng = rng(10);
    let (mut sym, mut tri) = (0.0f64, f64::NEG_INFINITY);
    type Dist<'a, C> = &'a dyn Fn(&C, &C) -> f64;
    fn axioms<C>(xs: &[C; 3], d: Dist<C>, sym: &mut f64, tri: &mut f64) {
        let [a, b, c] = xs;
        *sym = sym.max((d(a, b) - d(b, a)).abs()).max((d(a, c) - d(c, a)).abs());
        *tri = tri.max(d(a, c) - d(a, b) - d(b, c)).max(d(a, b) - d(a, c) - d(c, b));
    }
    let plain = |a: &SampledCurve, c: &SampledCurve| euclidean::distance(a, c).unwrap();
    let based = |a: &SampledCurve, c: &SampledCurve| euclidean::distance_with_basepoint(a, c).unwrap();
    let lie = |a: &GroupCurve, c: &GroupCurve| lie_distance(a, c).unwrap();
    let mut shift = 0.0f64;
    for k in 0..100 {
        let dim = 2 + k % 2;
        let xs = [random_walk(&mut rng, 64, dim), random_walk(&mut rng, 64, dim), random_walk(&mut rng, 64, dim)];
        axioms(&xs, &plain, &mut sym, &mut tri);
        axioms(&xs, &based, &mut sym, &mut tri);
        let kind = if k % 2 == 0 { GroupKind::So3 } else { GroupKind::Se3 };
        let gs = [
            smooth_group_curve(&mut rng, kind, 64),
            smooth_group_curve(&mut rng, kind, 64),
            smooth_group_curve(&mut rng, kind, 64),
        ];
        axioms(&gs, &lie, &mut sym, &mut tri);
        let v: Vec<f64> = (0..dim).map(|_| normal(&mut rng)).collect();
        let moved = based(&xs[0].translate(&v).unwrap(), &xs[1].translate(&v).unwrap());
        shift = shift.max((moved - based(&xs[0], &xs[1])).abs());
    }
    check(
        sym <= 1e-12 && tri <= 1e-10 && shift <= 1e-12,
        format!("symmetry {sym:.2e} (<= 1e-12), worst triangle excess {tri:.2e} (<= 1e-10), translation {shift:.2e} (<= 1e-12)"),
    )
}

fn golden(name: &str) -> Vec<u8> {
    std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn srvt_cmd(args: &[&str]) -> std::process::Output {
    let golden_dir: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    Command::new(env!("CARGO_BIN_EXE_srvt")).current_dir(golden_dir).args(args).output().unwrap()
}

fn cli_golden() -> Outcome {
    let out = std::env::temp_dir().join(format!("srvt-acceptance-{}", std::process::id()));
    let out_s = out.to_str().unwrap();
    let distance = srvt_cmd(&["distance", "line_u.json", "line_w.json"]);
    let geo_dir = out.join("geodesic");
    let geodesic = srvt_cmd(&["geodesic", "line_u.json", "line_w.json", "--steps", "2", "--out", geo_dir.to_str().unwrap()]);
    let midpoint = std::fs::read(geo_dir.join("geodesic_001.json")).unwrap_or_default();
    let align = srvt_cmd(&["align", "line_u.json", "line_u.json", "--out", out_s]);
    let warp = std::fs::read(out.join("warp.json")).unwrap_or_default();
    let _ = std::fs::remove_dir_all(&out);
    let results = [
        ("distance", distance.status.success() && distance.stdout == golden("distance.txt")),
        ("midpoint", geodesic.status.success() && midpoint == golden("midpoint.json")),
        ("align", align.status.success() && align.stdout == golden("align.txt") && warp == golden("warp.json")),
    ];
    let failed: Vec<&str> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    check(failed.is_empty(), if failed.is_empty() { "3 of 3 outputs byte-identical".into() } else { format!("differs: {}", failed.join(", ")) })
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Euclidean SRVT bijection", bijection),
        ("scaling round trip and norm identity", scaling_round_trip),
        ("Lie round trip", lie_round_trip),
        ("right invariance of the Lie distance", right_invariance),
        ("transport isometry", transport_isometry),
        ("closed form vs Christoffel transport", oracle_equivalence),
        ("manifold SRVT self-consistency", manifold_round_trip),
        ("flat chart reduction", flat_reduction),
        ("DP alignment", dp_alignment),
        ("metric axioms", metric_axioms),
        ("CLI golden outputs", cli_golden),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
