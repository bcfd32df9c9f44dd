//! Subcommand implementations.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use shrinker_core::arrangement::{build_arrangement, domain_boundary_lengths, verify_length_theorem, Arrangement, ImmersedLoop, LengthTheoremReport};
use shrinker_core::bounds::{isoparametric_window, BoundReport, RotationalBoundReport};
use shrinker_core::entropy::{entropy_of_shrinker, profile_k, profile_residual, EntropyOptions, EntropyReport, ProfileCurve};
use shrinker_core::foliation::{FoliationType, ADMISSIBLE_G};
use shrinker_core::geodesics::{scan_return_defect, shoot_closed, ClosedGeodesic, ScanSample, ShootingConfig, ShrinkerContext};
use shrinker_core::io::{format_curve, parse_curve, CurveFile};
use shrinker_core::metrics::{
    gauss_curvature_closed_form, gauss_curvature_fd, isoparametric_metric, metric_length, segment_length, FlatMetric, ParameterDomain, PointUV,
    SurfaceMetric, DEFAULT_FD_STEP,
};
use shrinker_core::Error;

use crate::context::{axis_names, foliation, metadata};
use crate::output::{emit, read_file, write_file, Failure, OutputArgs, Report, EXIT_NOT_CERTIFIED, EXIT_NOT_FOUND, EXIT_OK, SCHEMA};
use crate::plot::{self, Layer};
use crate::{ArrangeArgs, BoundsArgs, CurvatureArgs, EntropyArgs, ShootArgs, VerifyArgs};

/// Types checked by `curvature-check` when none are given.
const CURVATURE_TYPES: [(u32, u32); 7] = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (4, 1), (6, 1)];

fn write_plot(
    args: &OutputArgs,
    title: &str,
    ctx: Option<ShrinkerContext>,
    domain: ParameterDomain,
    layers: &[Layer<'_>],
) -> Result<(), Failure> {
    match &args.plot {
        Some(path) => write_file(path, &plot::render(title, axis_names(ctx), domain, layers)),
        None => Ok(()),
    }
}

fn context_label(ctx: ShrinkerContext) -> String {
    ctx.to_string()
}

// ---------------------------------------------------------------- bounds

#[derive(Serialize)]
struct BoundsReport {
    schema: u32,
    isoparametric: Vec<BoundReport>,
    rotational: Vec<RotationalBoundReport>,
}

#[derive(Serialize)]
struct BoundsRow {
    kind: &'static str,
    g: Option<u32>,
    m: Option<u32>,
    n: u32,
    wallis: Option<f64>,
    sphere_volume: Option<f64>,
    fiber_constant: Option<f64>,
    y: Option<f64>,
    kappa: f64,
    entropy_bound: f64,
    k: Option<u32>,
    immersed_bound: Option<f64>,
}

impl Report for BoundsReport {
    type Row = BoundsRow;

    fn rows(&self) -> Vec<BoundsRow> {
        let iso = self.isoparametric.iter().map(|b| BoundsRow {
            kind: "isoparametric",
            g: Some(b.g),
            m: Some(b.m),
            n: b.n,
            wallis: Some(b.wallis),
            sphere_volume: Some(b.sphere_volume),
            fiber_constant: Some(b.fiber_constant),
            y: Some(b.y),
            kappa: b.kappa,
            entropy_bound: b.entropy_bound,
            k: None,
            immersed_bound: None,
        });
        let rot = self.rotational.iter().flat_map(|r| {
            r.immersed.iter().map(move |&(k, e)| BoundsRow {
                kind: "rotational",
                g: None,
                m: None,
                n: r.n,
                wallis: None,
                sphere_volume: None,
                fiber_constant: None,
                y: None,
                kappa: r.kappa,
                entropy_bound: r.entropy_bound,
                k: Some(k),
                immersed_bound: Some(e),
            })
        });
        iso.chain(rot).collect()
    }
}

pub fn bounds(args: &BoundsArgs) -> Result<u8, Failure> {
    let any = !(args.g.is_empty() && args.m.is_empty() && args.n.is_empty());
    let mut types = Vec::new();
    if !args.g.is_empty() || !args.m.is_empty() || !any {
        let gs = if args.g.is_empty() { ADMISSIBLE_G.to_vec() } else { args.g.clone() };
        for &g in &gs {
            let ms: Vec<u32> = if !args.m.is_empty() {
                args.m.clone()
            } else if any {
                vec![1]
            } else {
                (1..).take_while(|m| m * g < 13).collect()
            };
            for &m in &ms {
                types.push(foliation(g, m, args.allow_any_g)?);
            }
        }
    }
    let ns: Vec<u32> = if !args.n.is_empty() {
        args.n.clone()
    } else if !any || !args.k.is_empty() {
        (2..=10).collect()
    } else {
        Vec::new()
    };
    let ks = if args.k.is_empty() { vec![0] } else { args.k.clone() };
    let report = BoundsReport {
        schema: SCHEMA,
        isoparametric: types.into_iter().map(BoundReport::new).collect(),
        rotational: ns
            .iter()
            .map(|&n| RotationalBoundReport::new(n, &ks))
            .collect::<Result<_, _>>()?,
    };
    emit(&report, &args.output)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------- shoot

#[derive(Serialize)]
struct LoopReport {
    index: usize,
    launch: f64,
    return_position: f64,
    iterations: usize,
    closure_defect: f64,
    /// Integrated arclength.
    ode_length: f64,
    points: usize,
    curve: Option<String>,
    certified: bool,
    residual: f64,
    /// Length of the emitted polyline.
    length: f64,
    lambda: Option<f64>,
    lambda_quadrature: Option<f64>,
    k: Option<usize>,
    bound: Option<f64>,
    margin: Option<f64>,
    length_theorem: Option<LengthTheoremReport>,
    error: Option<String>,
}

#[derive(Serialize)]
struct ShootReport {
    schema: u32,
    status: &'static str,
    context: ShrinkerContext,
    kappa: f64,
    entropy_bound: f64,
    length_bound: f64,
    config: ShootingConfig,
    loops: Vec<LoopReport>,
    message: Option<String>,
    scan: Option<Vec<ScanSample>>,
}

#[derive(Serialize)]
struct ShootRow {
    context: String,
    index: usize,
    launch: f64,
    closure_defect: f64,
    length: f64,
    certified: bool,
    residual: f64,
    lambda: Option<f64>,
    k: Option<usize>,
    bound: Option<f64>,
    margin: Option<f64>,
    curve: Option<String>,
}

impl Report for ShootReport {
    type Row = ShootRow;

    fn rows(&self) -> Vec<ShootRow> {
        self.loops
            .iter()
            .map(|l| ShootRow {
                context: context_label(self.context),
                index: l.index,
                launch: l.launch,
                closure_defect: l.closure_defect,
                length: l.length,
                certified: l.certified,
                residual: l.residual,
                lambda: l.lambda,
                k: l.k,
                bound: l.bound,
                margin: l.margin,
                curve: l.curve.clone(),
            })
            .collect()
    }
}

/// `base`, then `base-2`, `base-3`, ... with the extension kept.
fn numbered_path(base: &Path, index: usize) -> PathBuf {
    if index == 0 {
        return base.to_path_buf();
    }
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}-{}.{}", index + 1, ext.to_string_lossy()),
        None => format!("{stem}-{}", index + 1),
    };
    base.with_file_name(name)
}

fn loop_report(
    index: usize,
    geodesic: &ClosedGeodesic,
    ctx: ShrinkerContext,
    metric: &dyn SurfaceMetric,
    threshold: f64,
    curve: Option<String>,
) -> Result<LoopReport, Failure> {
    let points = geodesic.polyline();
    let profile = ProfileCurve::new(points.clone(), true, ctx.dimension())?;
    let options = EntropyOptions {
        residual_threshold: threshold,
        ..EntropyOptions::default()
    };
    let mut report = LoopReport {
        index,
        launch: geodesic.launch,
        return_position: geodesic.return_position,
        iterations: geodesic.iterations,
        closure_defect: geodesic.closure_defect(),
        ode_length: geodesic.length(),
        points: points.len(),
        curve,
        certified: false,
        residual: profile_residual(metric, &profile)?,
        length: metric_length(metric, &ImmersedLoop::new(points.clone(), None)?.closed_polyline())?,
        lambda: None,
        lambda_quadrature: None,
        k: None,
        bound: None,
        margin: None,
        length_theorem: None,
        error: None,
    };
    match entropy_of_shrinker(&profile, ctx, &options) {
        Ok(e) => {
            report.certified = true;
            report.length = e.length;
            report.lambda = Some(e.lambda);
            report.lambda_quadrature = e.lambda_quadrature;
            report.k = Some(e.k);
            report.bound = Some(e.bound);
            report.margin = Some(e.margin);
        }
        Err(e @ Error::NotAGeodesic { .. }) => report.error = Some(e.to_string()),
        Err(e) => return Err(e.into()),
    }
    if report.certified {
        let lp = ImmersedLoop::new(points, None)?;
        report.length_theorem = Some(verify_length_theorem(&lp, metric, ctx.kappa()?, threshold)?);
    }
    Ok(report)
}

pub fn shoot(args: &ShootArgs) -> Result<u8, Failure> {
    let ctx = args.metric.require(None)?;
    let metric = ctx.metric()?;
    let mut config = ShootingConfig::for_context(&ctx)?;
    if let Some(b) = &args.bracket {
        config.bracket = (b[0], b[1]);
    }
    if let Some(tol) = args.tol {
        config.secant_tol = tol;
    }
    config.validate()?;
    let kappa = ctx.kappa()?;
    let mut report = ShootReport {
        schema: SCHEMA,
        status: "found",
        context: ctx,
        kappa,
        entropy_bound: ctx.entropy_bound()?,
        length_bound: std::f64::consts::TAU / kappa.sqrt(),
        config: config.clone(),
        loops: Vec::new(),
        message: None,
        scan: None,
    };

    let loops = match shoot_closed(metric.as_ref(), ctx.symmetry_axis(), &config) {
        Ok(loops) => loops,
        Err(e @ Error::NotFound(_)) => {
            report.status = "not_found";
            report.message = Some(e.to_string());
            report.scan = Some(scan_return_defect(metric.as_ref(), ctx.symmetry_axis(), &config)?);
            emit(&report, &args.output)?;
            eprintln!("{e}");
            return Ok(EXIT_NOT_FOUND);
        }
        Err(e) => return Err(e.into()),
    };

    for (i, geodesic) in loops.iter().enumerate() {
        let path = args.curve.as_ref().map(|base| numbered_path(base, i));
        if let Some(path) = &path {
            let mut meta = metadata(ctx, true);
            meta.push(("launch", geodesic.launch.to_string()));
            write_file(path, &format_curve(&geodesic.polyline(), &meta))?;
        }
        let curve = path.map(|p| p.display().to_string());
        report
            .loops
            .push(loop_report(i, geodesic, ctx, metric.as_ref(), args.residual_tol, curve)?);
    }

    let polylines: Vec<Vec<PointUV>> = loops.iter().map(|g| g.polyline()).collect();
    if args.output.plot.is_some() {
        let arrangements: Vec<Option<Arrangement>> = polylines
            .iter()
            .map(|pts| ImmersedLoop::new(pts.clone(), None).and_then(|lp| build_arrangement(&lp)).ok())
            .collect();
        let layers: Vec<Layer<'_>> = polylines
            .iter()
            .zip(&arrangements)
            .map(|(pts, arr)| Layer {
                points: pts,
                closed: true,
                arrangement: arr.as_ref(),
            })
            .collect();
        write_plot(&args.output, &format!("closed geodesics, {ctx}"), Some(ctx), metric.domain(), &layers)?;
    }

    emit(&report, &args.output)?;
    let ok = report.loops.iter().all(|l| {
        l.certified && l.margin.is_some_and(|m| m >= 0.0) && l.length_theorem.as_ref().is_some_and(|t| t.passed)
    });
    Ok(if ok { EXIT_OK } else { EXIT_NOT_CERTIFIED })
}

// ---------------------------------------------------------------- verify

#[derive(Serialize)]
struct VerifyReport {
    schema: u32,
    status: &'static str,
    file: String,
    context: ShrinkerContext,
    closed: bool,
    points: usize,
    residual: f64,
    threshold: f64,
    certified: bool,
    k: Option<usize>,
    face_count: Option<usize>,
    total_length: f64,
    domain_lengths: Vec<f64>,
    domain_bound: Option<f64>,
    total_bound: Option<f64>,
    domain_margin: Option<f64>,
    total_margin: Option<f64>,
    bounds_passed: Option<bool>,
    entropy: Option<EntropyReport>,
    topology: Option<&'static str>,
    note: Option<String>,
    error: Option<String>,
}

#[derive(Serialize)]
struct VerifyRow {
    file: String,
    context: String,
    closed: bool,
    residual: f64,
    certified: bool,
    k: Option<usize>,
    face_count: Option<usize>,
    total_length: f64,
    total_bound: Option<f64>,
    bounds_passed: Option<bool>,
    lambda: Option<f64>,
    entropy_bound: Option<f64>,
    margin: Option<f64>,
}

impl Report for VerifyReport {
    type Row = VerifyRow;

    fn rows(&self) -> Vec<VerifyRow> {
        vec![VerifyRow {
            file: self.file.clone(),
            context: context_label(self.context),
            closed: self.closed,
            residual: self.residual,
            certified: self.certified,
            k: self.k,
            face_count: self.face_count,
            total_length: self.total_length,
            total_bound: self.total_bound,
            bounds_passed: self.bounds_passed,
            lambda: self.entropy.as_ref().map(|e| e.lambda),
            entropy_bound: self.entropy.as_ref().map(|e| e.bound),
            margin: self.entropy.as_ref().map(|e| e.margin),
        }]
    }
}

struct LoadedProfile {
    file: CurveFile,
    context: ShrinkerContext,
    profile: ProfileCurve,
}

fn load_profile(path: &Path, metric: &crate::context::MetricArgs, open_flag: bool) -> Result<LoadedProfile, Failure> {
    let file = parse_curve(&read_file(path)?)?;
    let context = metric.require(Some(&file))?;
    let pts = &file.points;
    if pts.is_empty() {
        return Err(Failure::usage(format!("{} has no points", path.display())));
    }
    let closed = if open_flag {
        false
    } else if let Some(c) = file.flag("closed")? {
        c
    } else {
        let on_axis = |p: &PointUV| p.v == 0.0;
        !(matches!(context, ShrinkerContext::Rotational { .. }) && on_axis(&pts[0]) && on_axis(&pts[pts.len() - 1]))
    };
    let dom = context.metric()?.domain();
    let last = pts.len() - 1;
    for (i, p) in pts.iter().enumerate() {
        let endpoint = !closed && (i == 0 || i == last);
        let inside = if endpoint {
            p.u >= dom.u_min && p.u <= dom.u_max && p.v >= dom.v_min && p.v <= dom.v_max
        } else {
            dom.contains(*p)
        };
        if !inside {
            return Err(Failure::usage(format!(
                "point {i} = ({}, {}) lies outside the domain {dom}",
                p.u, p.v
            )));
        }
    }
    let profile = ProfileCurve::new(pts.clone(), closed, context.dimension())?;
    Ok(LoadedProfile { file, context, profile })
}

pub fn verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let LoadedProfile { file, context, profile } = load_profile(&args.file, &args.metric, args.open)?;
    let metric = context.metric()?;
    let residual = profile_residual(metric.as_ref(), &profile)?;
    let certified = residual <= args.tol;
    let kappa = context.kappa()?;
    let domain_bound = std::f64::consts::TAU / kappa.sqrt();

    let mut report = VerifyReport {
        schema: SCHEMA,
        status: if certified { "certified" } else { "not_certified" },
        file: args.file.display().to_string(),
        context,
        closed: profile.closed,
        points: file.points.len(),
        residual,
        threshold: args.tol,
        certified,
        k: None,
        face_count: None,
        total_length: 0.0,
        domain_lengths: Vec::new(),
        domain_bound: None,
        total_bound: None,
        domain_margin: None,
        total_margin: None,
        bounds_passed: None,
        entropy: None,
        topology: None,
        note: None,
        error: None,
    };

    let mut arrangement = None;
    if profile.closed {
        let lp = ImmersedLoop::new(profile.points.clone(), None)?;
        let arr = build_arrangement(&lp)?;
        report.total_length = metric_length(metric.as_ref(), &lp.closed_polyline())?;
        report.domain_lengths = domain_boundary_lengths(&arr, metric.as_ref())?;
        let total_bound = (arr.k + 1) as f64 * domain_bound;
        let domain_margin = report
            .domain_lengths
            .iter()
            .map(|l| domain_bound - l)
            .fold(f64::INFINITY, f64::min);
        let total_margin = total_bound - report.total_length;
        report.k = Some(arr.k);
        report.face_count = Some(arr.faces.len());
        report.domain_bound = Some(domain_bound);
        report.total_bound = Some(total_bound);
        report.domain_margin = Some(domain_margin);
        report.total_margin = Some(total_margin);
        report.bounds_passed = Some(domain_margin >= 0.0 && total_margin >= 0.0);
        arrangement = Some(arr);
    } else {
        report.k = Some(profile_k(&profile)?);
        report.total_length = profile
            .points
            .windows(2)
            .map(|w| segment_length(metric.as_ref(), w[0], w[1]))
            .sum();
    }

    match context {
        ShrinkerContext::Rotational { .. } if profile.closed => {
            report.topology = Some("torus");
            report.note = Some("closed profile away from the axis: toroidal topology".into());
        }
        ShrinkerContext::Rotational { .. } => {
            report.topology = Some("sphere");
            report.note = Some("open profile with both ends on the rotation axis: spherical topology".into());
        }
        ShrinkerContext::Isoparametric(_) if !profile.closed => {
            report.note = Some("open isoparametric profiles carry no entropy report".into());
        }
        ShrinkerContext::Isoparametric(_) => {}
    }

    if certified && (profile.closed || matches!(context, ShrinkerContext::Rotational { .. })) {
        let options = EntropyOptions {
            residual_threshold: args.tol,
            ..EntropyOptions::default()
        };
        report.entropy = Some(entropy_of_shrinker(&profile, context, &options)?);
    }

    write_plot(
        &args.output,
        &format!("{} ({context})", args.file.display()),
        Some(context),
        metric.domain(),
        &[Layer {
            points: &profile.points,
            closed: profile.closed,
            arrangement: arrangement.as_ref(),
        }],
    )?;

    let passed = certified && report.bounds_passed.unwrap_or(true);
    if certified && !passed {
        report.status = "bound_violated";
    }
    emit(&report, &args.output)?;
    Ok(if passed { EXIT_OK } else { EXIT_NOT_CERTIFIED })
}

// ---------------------------------------------------------------- entropy

#[derive(Serialize)]
struct EntropyCommandReport {
    schema: u32,
    file: String,
    closed: bool,
    entropy: EntropyReport,
}

#[derive(Serialize)]
struct EntropyRow {
    file: String,
    context: String,
    closed: bool,
    length: f64,
    lambda: f64,
    lambda_quadrature: Option<f64>,
    relative_difference: Option<f64>,
    k: usize,
    bound: f64,
    margin: f64,
    residual: f64,
}

impl Report for EntropyCommandReport {
    type Row = EntropyRow;

    fn rows(&self) -> Vec<EntropyRow> {
        let e = &self.entropy;
        vec![EntropyRow {
            file: self.file.clone(),
            context: context_label(e.context),
            closed: self.closed,
            length: e.length,
            lambda: e.lambda,
            lambda_quadrature: e.lambda_quadrature,
            relative_difference: e.relative_difference,
            k: e.k,
            bound: e.bound,
            margin: e.margin,
            residual: e.residual,
        }]
    }
}

pub fn entropy(args: &EntropyArgs) -> Result<u8, Failure> {
    let LoadedProfile { context, profile, .. } = load_profile(&args.file, &args.metric, args.open)?;
    let options = EntropyOptions {
        residual_threshold: args.tol,
        ..EntropyOptions::default()
    };
    let entropy = entropy_of_shrinker(&profile, context, &options)?;
    let report = EntropyCommandReport {
        schema: SCHEMA,
        file: args.file.display().to_string(),
        closed: profile.closed,
        entropy,
    };
    if args.output.plot.is_some() {
        let metric = context.metric()?;
        write_plot(
            &args.output,
            &format!("{} ({context})", args.file.display()),
            Some(context),
            metric.domain(),
            &[Layer {
                points: &profile.points,
                closed: profile.closed,
                arrangement: None,
            }],
        )?;
    }
    emit(&report, &args.output)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------- curvature-check

#[derive(Clone, Serialize)]
struct CurvatureRow {
    g: u32,
    m: u32,
    n: u32,
    grid: usize,
    max_relative_error: f64,
    worst_u: f64,
    worst_v: f64,
    passed: bool,
}

#[derive(Serialize)]
struct CurvatureReport {
    schema: u32,
    tol: f64,
    fd_step: f64,
    passed: bool,
    types: Vec<CurvatureRow>,
}

impl Report for CurvatureReport {
    type Row = CurvatureRow;

    fn rows(&self) -> Vec<CurvatureRow> {
        self.types.clone()
    }
}

fn curvature_row(t: FoliationType, grid: usize, tol: f64) -> Result<CurvatureRow, Failure> {
    let h = isoparametric_metric(t);
    let w = isoparametric_window(t);
    let mut worst = (0.0f64, PointUV::new(f64::NAN, f64::NAN));
    for i in 1..=grid {
        for j in 1..=grid {
            let q = PointUV::new(
                w.u_lo + (w.u_hi - w.u_lo) * i as f64 / (grid + 1) as f64,
                w.v_lo + (w.v_hi - w.v_lo) * j as f64 / (grid + 1) as f64,
            );
            let closed = gauss_curvature_closed_form(t, q)?;
            let fd = gauss_curvature_fd(&h, q, DEFAULT_FD_STEP)?;
            let err = (fd - closed).abs() / closed.abs();
            if !(err <= worst.0) {
                worst = (err, q);
            }
        }
    }
    Ok(CurvatureRow {
        g: t.g(),
        m: t.m(),
        n: t.n(),
        grid,
        max_relative_error: worst.0,
        worst_u: worst.1.u,
        worst_v: worst.1.v,
        passed: worst.0 <= tol,
    })
}

pub fn curvature_check(args: &CurvatureArgs) -> Result<u8, Failure> {
    if args.grid == 0 {
        return Err(Failure::usage("--grid must be positive"));
    }
    let types: Vec<FoliationType> = if args.g.is_empty() && args.m.is_empty() {
        CURVATURE_TYPES
            .iter()
            .map(|&(g, m)| foliation(g, m, false))
            .collect::<Result<_, _>>()?
    } else {
        let gs = if args.g.is_empty() { ADMISSIBLE_G.to_vec() } else { args.g.clone() };
        let ms = if args.m.is_empty() { vec![1] } else { args.m.clone() };
        let mut out = Vec::new();
        for &g in &gs {
            for &m in &ms {
                out.push(foliation(g, m, args.allow_any_g)?);
            }
        }
        out
    };
    let rows: Vec<CurvatureRow> = types
        .into_iter()
        .map(|t| curvature_row(t, args.grid, args.tol))
        .collect::<Result<_, _>>()?;
    let passed = rows.iter().all(|r| r.passed);
    let report = CurvatureReport {
        schema: SCHEMA,
        tol: args.tol,
        fd_step: DEFAULT_FD_STEP,
        passed,
        types: rows,
    };
    emit(&report, &args.output)?;
    Ok(if passed { EXIT_OK } else { EXIT_NOT_CERTIFIED })
}

// ---------------------------------------------------------------- arrange

#[derive(Serialize)]
struct CrossingReport {
    u: f64,
    v: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct FaceReport {
    face: usize,
    signed_area: f64,
    boundary_length: f64,
    corners: usize,
}

#[derive(Serialize)]
struct ArrangeReport {
    schema: u32,
    source: String,
    seed: Option<u64>,
    metric: String,
    points: usize,
    k: usize,
    crossings: Vec<CrossingReport>,
    edge_count: usize,
    face_count: usize,
    euler_characteristic: i64,
    total_length: f64,
    faces: Vec<FaceReport>,
}

impl Report for ArrangeReport {
    type Row = FaceReportRow;

    fn rows(&self) -> Vec<FaceReportRow> {
        self.faces
            .iter()
            .map(|f| FaceReportRow {
                source: self.source.clone(),
                k: self.k,
                face: f.face,
                signed_area: f.signed_area,
                boundary_length: f.boundary_length,
                corners: f.corners,
            })
            .collect()
    }
}

#[derive(Serialize)]
struct FaceReportRow {
    source: String,
    k: usize,
    face: usize,
    signed_area: f64,
    boundary_length: f64,
    corners: usize,
}

fn random_polygon(seed: u64, vertices: usize) -> Vec<PointUV> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..vertices)
        .map(|_| PointUV::new(rng.gen::<f64>(), rng.gen::<f64>()))
        .collect()
}

pub fn arrange(args: &ArrangeArgs) -> Result<u8, Failure> {
    let (points, file, source) = match (&args.file, args.seed) {
        (Some(path), _) => {
            let file = parse_curve(&read_file(path)?)?;
            (file.points.clone(), Some(file), path.display().to_string())
        }
        (None, Some(seed)) => {
            if args.vertices < 3 {
                return Err(Failure::usage("--vertices must be at least 3"));
            }
            let pts = random_polygon(seed, args.vertices);
            if let Some(path) = &args.curve {
                write_file(path, &format_curve(&pts, &[("seed", seed.to_string()), ("closed", "true".into())]))?;
            }
            (pts, None, format!("random polygon, seed {seed}"))
        }
        (None, None) => return Err(Failure::usage("give a curve file or --seed")),
    };
    if file.as_ref().map(|f| f.flag("closed")).transpose()?.flatten() == Some(false) {
        return Err(Failure::usage("arrange needs a closed curve"));
    }
    let ctx = args.metric.resolve(file.as_ref())?;
    let metric: Box<dyn SurfaceMetric> = match ctx {
        Some(c) => c.metric()?,
        None => Box::new(FlatMetric::plane()),
    };
    let lp = ImmersedLoop::new(points, None)?;
    let arr = build_arrangement(&lp)?;
    let lengths = domain_boundary_lengths(&arr, metric.as_ref())?;
    let report = ArrangeReport {
        schema: SCHEMA,
        source,
        seed: args.seed,
        metric: metric.label(),
        points: lp.len(),
        k: arr.k,
        crossings: arr
            .vertices
            .iter()
            .map(|c| CrossingReport {
                u: c.point.u,
                v: c.point.v,
                multiplicity: c.multiplicity,
            })
            .collect(),
        edge_count: arr.edges.len(),
        face_count: arr.faces.len(),
        euler_characteristic: arr.euler_characteristic(),
        total_length: metric_length(metric.as_ref(), &lp.closed_polyline())?,
        faces: arr
            .faces
            .iter()
            .zip(&lengths)
            .enumerate()
            .map(|(i, (f, &l))| FaceReport {
                face: i,
                signed_area: f.signed_area,
                boundary_length: l,
                corners: f.polygon.len(),
            })
            .collect(),
    };
    write_plot(
        &args.output,
        &format!("arrangement: k = {}, {} bounded faces", arr.k, arr.faces.len()),
        ctx,
        metric.domain(),
        &[Layer {
            points: lp.points(),
            closed: true,
            arrangement: Some(&arr),
        }],
    )?;
    emit(&report, &args.output)?;
    Ok(EXIT_OK)
}
