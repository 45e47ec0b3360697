use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::PathBuf;

use pencil_core::elliptic::{self, Modulus};
use pencil_core::pencil::admissible_orders;
use pencil_core::poncelet::{
    closure_test_at, diagonal_report, interscribed_ngon, jacobi_ratio, order_alpha,
};
use pencil_core::tangent_map::{
    a1_apply, a1_circle, apply, conjugate_tangency_circle, tangency_check, CirclePoint,
};
use pencil_core::{
    canonical_frame, CanonicalFrame, DiagonalReport, Error, Order, Orientation, OrientedCircle,
    Pencil, PencilParameter, Point, TangencyReport, TangentMap,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::svg::{self, RenderSpec, Scene};
use crate::EllFn;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Core(e) => match e {
                Error::InvalidModulus(_) => "invalid_modulus",
                Error::NonFinite(_) => "non_finite",
                Error::QuadratureNoConvergence { .. } => "quadrature_no_convergence",
                Error::ToleranceTooSmall(_) => "tolerance_too_small",
                Error::InvalidLimitPoint(_) => "invalid_limit_point",
                Error::NotInPencil(_) => "not_in_pencil",
                Error::InvalidOrder { .. } => "invalid_order",
                Error::Intersecting => "intersecting",
                Error::TangentPencil => "tangent_pencil",
                Error::Concentric => "concentric",
                Error::InvalidCircle(_) => "invalid_circle",
                Error::DegenerateChord => "degenerate_chord",
                Error::SingularParameter => "singular_parameter",
                Error::ForeignMap { .. } => "foreign_map",
                Error::InvalidAlpha(_) => "invalid_alpha",
                Error::NotClosed(_) => "not_closed",
                Error::NumericalInconsistency(_) => "numerical_inconsistency",
            },
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::NumericalInconsistency(_) | Error::QuadratureNoConvergence { .. } => 3,
                Error::TangentPencil => 4,
                Error::Concentric => 5,
                _ => 2,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult = Result<String, CliError>;

fn emit<T: Serialize>(value: &T) -> CliResult {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))
}

/// Rounds to 16 significant digits (15 after the leading one).
fn round_sig(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    format!("{v:.15e}").parse().unwrap_or(v)
}

#[derive(Debug, Clone, Copy, Serialize)]
struct PointReport {
    theta: f64,
    x: f64,
    y: f64,
}

impl From<CirclePoint> for PointReport {
    fn from(z: CirclePoint) -> Self {
        let p = z.to_point();
        Self {
            theta: z.theta(),
            x: p.x,
            y: p.y,
        }
    }
}

pub fn ell(function: EllFn, k: f64, theta: Option<f64>, u: Option<f64>) -> CliResult {
    let m = Modulus::new(k)?;
    let (arg_name, arg, value) = match function {
        EllFn::K => ("none", None, elliptic::quarter_period(&m)?.value()),
        EllFn::F => {
            let t = theta.ok_or_else(|| CliError::Usage("--fn F needs --theta".into()))?;
            ("theta", Some(t), elliptic::incomplete_f(t, &m)?)
        }
        _ => {
            let u = u.ok_or_else(|| CliError::Usage("this function needs --u".into()))?;
            let value = match function {
                EllFn::Am => elliptic::amplitude(u, &m)?,
                EllFn::Sn => elliptic::jacobi(u, &m)?.sn,
                EllFn::Cn => elliptic::jacobi(u, &m)?.cn,
                _ => elliptic::jacobi(u, &m)?.dn,
            };
            ("u", Some(u), value)
        }
    };
    let name = match function {
        EllFn::F => "F",
        EllFn::Am => "am",
        EllFn::Sn => "sn",
        EllFn::Cn => "cn",
        EllFn::Dn => "dn",
        EllFn::K => "K",
    };
    let mut out = serde_json::json!({ "fn": name, "k": k, "value": round_sig(value) });
    if let Some(a) = arg {
        out[arg_name] = a.into();
    }
    emit(&out)
}

fn parse_circle(text: &str, orientation: Orientation) -> Result<OrientedCircle, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "expected \"cx,cy,r\", got {text:?}"
        )));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| CliError::Usage(format!("not a number: {part:?}")))?;
    }
    Ok(OrientedCircle::new(
        Point::new(v[0], v[1]),
        v[2],
        orientation,
    )?)
}

#[derive(Debug, Serialize)]
struct PencilReport {
    pencil: Pencil,
    k_comp: f64,
    frame: Option<CanonicalFrame>,
    inner_parameter: Option<PencilParameter>,
    inner_circle: Option<OrientedCircle>,
    order: Option<Order>,
}

pub fn pencil(
    limit_point: Option<f64>,
    outer: Option<&str>,
    inner: Option<&str>,
    n_max: u32,
    tol: f64,
) -> CliResult {
    let report = match (limit_point, outer, inner) {
        (Some(l), None, None) => {
            let pencil = Pencil::from_limit_point(l)?;
            PencilReport {
                pencil,
                k_comp: pencil.m.k_comp,
                frame: None,
                inner_parameter: None,
                inner_circle: None,
                order: None,
            }
        }
        (None, Some(outer), Some(inner)) => {
            let outer = parse_circle(outer, Orientation::Unoriented)?;
            let inner = parse_circle(inner, Orientation::Positive)?;
            let frame = canonical_frame(&outer, &inner)?;
            let pencil = frame.pencil;
            PencilReport {
                pencil,
                k_comp: pencil.m.k_comp,
                frame: Some(frame),
                inner_parameter: Some(frame.parameter),
                inner_circle: Some(pencil.circle_at(frame.parameter)?),
                order: pencil.order_of(frame.parameter, n_max, tol),
            }
        }
        _ => {
            return Err(CliError::Usage(
                "give either --limit-point or both --outer and --inner".into(),
            ))
        }
    };
    emit(&report)
}

#[derive(Debug, Serialize)]
struct MapReport {
    group: &'static str,
    map: Option<TangentMap>,
    alpha: f64,
    input: PointReport,
    output: PointReport,
    tangency: Option<TangencyReport>,
    circle: Option<OrientedCircle>,
}

pub fn map(k: f64, alpha: f64, theta: f64, conjugate: bool) -> CliResult {
    let z = CirclePoint::new(theta);
    if k == 1.0 {
        if conjugate {
            return Err(CliError::Usage(
                "the tangent pencil has no conjugated maps here".into(),
            ));
        }
        let image = a1_apply(alpha, z)?;
        let circle = if alpha > 0.0 {
            Some(a1_circle(alpha)?)
        } else {
            None
        };
        return emit(&MapReport {
            group: "A1",
            map: None,
            alpha,
            input: z.into(),
            output: image.into(),
            tangency: None,
            circle,
        });
    }
    let pencil = Pencil::from_k(k)?;
    let f = if conjugate {
        TangentMap::conjugate(&pencil, alpha)?
    } else {
        TangentMap::new(&pencil, alpha)?
    };
    let image = apply(&pencil, &f, z)?;
    let (group, tangency, circle) = if conjugate {
        let circle = match conjugate_tangency_circle(&pencil, f.parameter(&pencil)) {
            Ok(c) => Some(c),
            Err(Error::SingularParameter) => None,
            Err(e) => return Err(e.into()),
        };
        ("Bk", None, circle)
    } else if f.alpha > 0.0 {
        let report = tangency_check(&pencil, &f, z)?;
        (
            "Ak",
            Some(report),
            Some(pencil.circle_at(f.parameter(&pencil))?),
        )
    } else {
        ("Ak", None, Some(pencil.circle_at(f.parameter(&pencil))?))
    };
    emit(&MapReport {
        group,
        map: Some(f),
        alpha: f.alpha,
        input: z.into(),
        output: image.into(),
        tangency,
        circle,
    })
}

#[derive(Debug, Serialize)]
struct DiagonalEntry {
    #[serde(flatten)]
    report: DiagonalReport,
    circle: OrientedCircle,
}

#[derive(Debug, Serialize)]
struct NgonReport {
    pencil: Pencil,
    n: u32,
    h: u32,
    alpha: f64,
    parameter: f64,
    inner_circle: OrientedCircle,
    vertices: Vec<PointReport>,
    closure_residual: f64,
    side_residuals: Vec<f64>,
    max_side_residual: f64,
    jacobi_ratio: f64,
    diagonals: Option<Vec<DiagonalEntry>>,
    svg: Option<PathBuf>,
}

pub fn ngon(
    k: f64,
    n: u32,
    h: u32,
    start_theta: f64,
    diagonals: bool,
    svg_path: Option<PathBuf>,
) -> CliResult {
    let pencil = Pencil::from_k(k)?;
    let polygon = interscribed_ngon(&pencil, n, h, CirclePoint::new(start_theta))?;
    let alpha = polygon.alphas[0];
    let a = TangentMap::new(&pencil, alpha)?.parameter(&pencil);
    let inner = pencil.circle_at(a)?;
    let side_residuals = polygon.tangency_residuals(&pencil)?;
    let max_side_residual = side_residuals.iter().copied().fold(0.0, f64::max);
    let diagonal_entries = if diagonals {
        let mut entries = Vec::new();
        for step in 2..n.saturating_sub(1) {
            let report = diagonal_report(&pencil, &polygon, step)?;
            let circle = pencil.circle_at(report.parameter)?;
            entries.push(DiagonalEntry { report, circle });
        }
        Some(entries)
    } else {
        None
    };
    if let Some(path) = &svg_path {
        let scene = Scene {
            pencil_circles: Vec::new(),
            inner: Some(inner),
            polygon: polygon.vertices[..n as usize]
                .iter()
                .map(|z| z.to_point())
                .collect(),
            diagonals: diagonal_chords(&polygon.vertices[..n as usize], diagonals),
            limit_points: limit_points(&pencil),
            radical_axis_x: None,
            conjugate_circles: Vec::new(),
            conjugate_chords: Vec::new(),
        };
        write_scene(&scene, &RenderSpec::new(path.clone()))?;
    }
    emit(&NgonReport {
        pencil,
        n,
        h,
        alpha,
        parameter: a.value(),
        inner_circle: inner,
        vertices: polygon.vertices[..n as usize]
            .iter()
            .map(|&z| z.into())
            .collect(),
        closure_residual: polygon.closure_residual(),
        side_residuals,
        max_side_residual,
        jacobi_ratio: jacobi_ratio(&pencil, alpha)?,
        diagonals: diagonal_entries,
        svg: svg_path,
    })
}

fn diagonal_chords(ring: &[CirclePoint], enabled: bool) -> Vec<(Point, Point)> {
    let n = ring.len();
    if !enabled {
        return Vec::new();
    }
    let mut chords = Vec::new();
    // steps s and n − s draw the same segments
    for step in 2..=n / 2 {
        for i in 0..n {
            let j = (i + step) % n;
            // each diagonal once
            if 2 * step == n && j < i {
                continue;
            }
            chords.push((ring[i].to_point(), ring[j].to_point()));
        }
    }
    chords
}

fn limit_points(pencil: &Pencil) -> Vec<Point> {
    let l = pencil.limit_point;
    if pencil.is_rotation() {
        vec![Point::new(0.0, 0.0)]
    } else {
        vec![Point::new(l, 0.0), Point::new(1.0 / l, 0.0)]
    }
}

fn write_scene(scene: &Scene, spec: &RenderSpec) -> Result<(), CliError> {
    svg::render_svg(scene, spec)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", spec.path.display())))
}

#[derive(Debug, Serialize)]
struct ScanRow {
    n: u32,
    h: u32,
    alpha: f64,
    jacobi_ratio: f64,
    closes: bool,
    max_residual: f64,
}

#[derive(Debug, Serialize)]
struct ScanReport {
    k: f64,
    n_max: u32,
    tol: f64,
    samples: usize,
    seed: u64,
    rows: Vec<ScanRow>,
}

pub fn scan(k: f64, n_max: u32, tol: f64, samples: usize, seed: u64) -> CliResult {
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    let pencil = Pencil::from_k(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<CirclePoint> = (0..samples)
        .map(|_| CirclePoint::new(rng.random_range(-FRAC_PI_2..FRAC_PI_2)))
        .collect();
    starts.extend([
        CirclePoint::new(FRAC_PI_2),
        CirclePoint::new(-FRAC_PI_2 + 1e-9),
        CirclePoint::new(FRAC_PI_2 - 1e-9),
    ]);
    let mut rows = Vec::new();
    for (n, h) in admissible_orders(n_max) {
        let alpha = order_alpha(&pencil, n, h)?;
        let report = closure_test_at(&pencil, alpha, n, &starts, tol)?;
        rows.push(ScanRow {
            n,
            h,
            alpha,
            jacobi_ratio: jacobi_ratio(&pencil, alpha)?,
            closes: report.closes,
            max_residual: report.max_residual,
        });
    }
    emit(&ScanReport {
        k,
        n_max,
        tol,
        samples,
        seed,
        rows,
    })
}

#[derive(Debug, Serialize)]
struct RenderReport {
    path: PathBuf,
    pencil: Pencil,
    pencil_circles: usize,
    vertices: usize,
    diagonals: usize,
    conjugate_circle: Option<OrientedCircle>,
}

pub fn render(
    k: f64,
    polygon: Option<(u32, u32)>,
    start_theta: f64,
    circles: u32,
    conjugate_alpha: Option<f64>,
    spec: RenderSpec,
) -> CliResult {
    let pencil = Pencil::from_k(k)?;
    let quarter = pencil.quarter_period();
    let mut scene = Scene {
        limit_points: limit_points(&pencil),
        radical_axis_x: pencil.radical_axis_x,
        ..Scene::default()
    };
    for j in 1..circles {
        let a = pencil.parameter(j as f64 * quarter / circles as f64);
        scene.pencil_circles.push(pencil.circle_at(a)?);
    }
    if let Some((n, h)) = polygon {
        let trajectory = interscribed_ngon(&pencil, n, h, CirclePoint::new(start_theta))?;
        let a = TangentMap::new(&pencil, trajectory.alphas[0])?.parameter(&pencil);
        let ring = &trajectory.vertices[..n as usize];
        scene.inner = Some(pencil.circle_at(a)?);
        scene.polygon = ring.iter().map(|z| z.to_point()).collect();
        scene.diagonals = diagonal_chords(ring, spec.show_diagonals);
    }
    let mut conjugate_circle = None;
    if let Some(alpha) = conjugate_alpha {
        let f = TangentMap::conjugate(&pencil, alpha)?;
        let circle = conjugate_tangency_circle(&pencil, f.parameter(&pencil))?;
        for j in 0..8 {
            let z = CirclePoint::new(-FRAC_PI_2 + (j as f64 + 0.5) * PI / 8.0);
            let image = apply(&pencil, &f, z)?;
            if z.chord_length(image) > 1e-6 {
                scene
                    .conjugate_chords
                    .push((z.to_point(), image.to_point()));
            }
        }
        scene.conjugate_circles.push(circle);
        conjugate_circle = Some(circle);
    }
    write_scene(&scene, &spec)?;
    emit(&RenderReport {
        path: spec.path.clone(),
        pencil,
        pencil_circles: scene.pencil_circles.len(),
        vertices: scene.polygon.len(),
        diagonals: scene.diagonals.len(),
        conjugate_circle,
    })
}
