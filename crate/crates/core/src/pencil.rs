//! The hyperbolic coaxal pencil spanned by the unit circle `T` and an
//! interior limit point `L` on the negative real axis.
//!
//! Oriented members are named by a parameter `a ∈ (−K, K]`: the circle
//! `C_a` has center `((dn a − 1)/(dn a + 1), 0)` and radius
//! `2 cn a/(1 + dn a)`, with `C_0 = T` and `C_K` the point circle at `L`.
//! Addition of parameters modulo `2K` turns the oriented members into a
//! commutative group.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::elliptic::{self, Modulus, QuarterPeriod};
use crate::error::{Error, Result};

/// Parameters this close to `−K` are taken to be `K`.
pub const BOUNDARY_SNAP: f64 = 1e-12;

/// Boundary-distance tolerance used to classify circle pairs.
const CONTACT_TOL: f64 = 1e-12;

/// A point in the canonical frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Positive,
    Negative,
    Unoriented,
}

impl Orientation {
    pub fn of_parameter(a: f64) -> Self {
        if a > 0.0 {
            Orientation::Positive
        } else if a < 0.0 {
            Orientation::Negative
        } else {
            Orientation::Unoriented
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedCircle {
    pub center: Point,
    pub radius: f64,
    pub orientation: Orientation,
}

impl OrientedCircle {
    pub fn new(center: Point, radius: f64, orientation: Orientation) -> Result<Self> {
        if !(center.x.is_finite() && center.y.is_finite() && radius.is_finite()) {
            return Err(Error::NonFinite("circle"));
        }
        if radius < 0.0 {
            return Err(Error::InvalidCircle(format!("negative radius {radius}")));
        }
        Ok(Self {
            center,
            radius,
            orientation,
        })
    }

    /// The unit circle `T`, which never carries an orientation.
    pub fn unit() -> Self {
        Self {
            center: Point::new(0.0, 0.0),
            radius: 1.0,
            orientation: Orientation::Unoriented,
        }
    }

    pub fn same_geometry(&self, other: &OrientedCircle, tol: f64) -> bool {
        self.center.distance(other.center) <= tol && (self.radius - other.radius).abs() <= tol
    }
}

/// `|xM|² − R²` for a circle of center `M` and radius `R`.
pub fn power_of_point(x: Point, c: &OrientedCircle) -> f64 {
    let dx = x.x - c.center.x;
    let dy = x.y - c.center.y;
    dx * dx + dy * dy - c.radius * c.radius
}

/// Representative of a class of `ℝ / 2Kℤ` in `(−K, K]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PencilParameter(f64);

impl PencilParameter {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Order `n` of a group element together with its winding `h`,
/// `n·a = 2hK`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order {
    pub n: u32,
    pub h: i64,
}

/// `rem_euclid` into `(−K, K]`, snapping the `−K` boundary to `K`.
pub(crate) fn reduce(x: f64, quarter: f64) -> f64 {
    let period = 2.0 * quarter;
    let mut r = x.rem_euclid(period);
    if r > quarter {
        r -= period;
    }
    if (r + quarter).abs() <= BOUNDARY_SNAP {
        r = quarter;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pencil {
    pub m: Modulus,
    #[serde(rename = "K")]
    pub quarter: QuarterPeriod,
    /// Abscissa of the limit point inside `T`.
    #[serde(rename = "L")]
    pub limit_point: f64,
    /// `None` for the concentric (`k = 0`) pencil, whose radical axis is
    /// at infinity.
    pub radical_axis_x: Option<f64>,
}

impl Pencil {
    /// Builds the pencil whose interior limit point is `(L, 0)`.
    pub fn from_limit_point(limit_point: f64) -> Result<Self> {
        if !limit_point.is_finite() {
            return Err(Error::NonFinite("limit point"));
        }
        if !(limit_point > -1.0 && limit_point < 0.0) {
            return Err(Error::InvalidLimitPoint(limit_point));
        }
        let m = Modulus::from_complement((1.0 + limit_point) / (1.0 - limit_point))?;
        Ok(Self {
            m,
            quarter: elliptic::quarter_period(&m)?,
            limit_point,
            radical_axis_x: Some((limit_point * limit_point + 1.0) / (2.0 * limit_point)),
        })
    }

    /// Builds the pencil for modulus `k ∈ [0, 1)`. `k = 0` gives the
    /// concentric pencil on which every map is a rotation.
    pub fn from_modulus(m: Modulus) -> Result<Self> {
        let quarter = elliptic::quarter_period(&m)?;
        // (k′ − 1)/(k′ + 1) without cancellation
        let denom = 1.0 + m.k_comp;
        let limit_point = -m.k_squared() / (denom * denom);
        let radical_axis_x = if limit_point < 0.0 {
            Some((limit_point * limit_point + 1.0) / (2.0 * limit_point))
        } else {
            None
        };
        Ok(Self {
            m,
            quarter,
            limit_point,
            radical_axis_x,
        })
    }

    pub fn from_k(k: f64) -> Result<Self> {
        Self::from_modulus(Modulus::new(k)?)
    }

    pub fn k(&self) -> f64 {
        self.m.k
    }

    pub fn quarter_period(&self) -> f64 {
        self.quarter.value()
    }

    pub fn is_rotation(&self) -> bool {
        self.m.k == 0.0
    }

    /// The power `((L² − 1)/(2L))²` shared by every member at the radical axis.
    pub fn radical_power(&self) -> Option<f64> {
        let l = self.limit_point;
        self.radical_axis_x.map(|_| {
            let p = (l * l - 1.0) / (2.0 * l);
            p * p
        })
    }

    pub fn parameter(&self, a: f64) -> PencilParameter {
        PencilParameter(reduce(a, self.quarter_period()))
    }

    pub fn circle_at(&self, a: PencilParameter) -> Result<OrientedCircle> {
        let a = a.value();
        if a == 0.0 {
            return Ok(OrientedCircle::unit());
        }
        let t = elliptic::jacobi(a, &self.m)?;
        Ok(OrientedCircle {
            center: Point::new((t.dn - 1.0) / (t.dn + 1.0), 0.0),
            radius: 2.0 * t.cn.abs() / (1.0 + t.dn),
            orientation: Orientation::of_parameter(a),
        })
    }

    /// Inverse of [`Pencil::circle_at`]. Unoriented circles other than `T`
    /// are read as positively oriented.
    pub fn parameter_of(&self, c: &OrientedCircle) -> Result<PencilParameter> {
        let x = c.center.x;
        if c.center.y.abs() > 1e-9 {
            return Err(Error::NotInPencil(format!(
                "center ({x}, {}) is off the line of centers",
                c.center.y
            )));
        }
        if !(x < 1.0) {
            return Err(Error::NotInPencil(format!("center abscissa {x} ≥ 1")));
        }
        let dn = (1.0 + x) / (1.0 - x);
        if dn < self.m.k_comp - 1e-9 || dn > 1.0 + 1e-9 {
            return Err(Error::NotInPencil(format!(
                "dn = {dn} outside [{}, 1]",
                self.m.k_comp
            )));
        }
        let cn = (0.5 * c.radius * (1.0 + dn)).min(1.0);
        let sn = if self.m.k >= 0.1 {
            // 1 − dn² = −4x/(1 − x)², exact in x
            (-4.0 * x / (self.m.k_squared() * (1.0 - x) * (1.0 - x)))
                .clamp(0.0, 1.0)
                .sqrt()
        } else {
            ((1.0 - cn) * (1.0 + cn)).max(0.0).sqrt()
        };
        let magnitude = elliptic::incomplete_f(sn.atan2(cn), &self.m)?;
        let signed = match c.orientation {
            Orientation::Negative => -magnitude,
            _ => magnitude,
        };
        let a = self.parameter(signed);
        let back = self.circle_at(a)?;
        if !back.same_geometry(c, 1e-8) {
            return Err(Error::NotInPencil(format!(
                "closest member (center {}, radius {}) does not match (center {}, radius {})",
                back.center.x, back.radius, c.center.x, c.radius
            )));
        }
        Ok(a)
    }

    /// `c ≡ a + b (mod 2K)`.
    pub fn group_op(&self, a: PencilParameter, b: PencilParameter) -> PencilParameter {
        self.parameter(a.value() + b.value())
    }

    pub fn inverse(&self, a: PencilParameter) -> PencilParameter {
        self.parameter(-a.value())
    }

    /// `a` added to itself `times` times.
    pub fn power(&self, a: PencilParameter, times: i64) -> PencilParameter {
        self.parameter(times as f64 * a.value())
    }

    /// Smallest `n ≤ n_max` with `n·a ≡ 0 (mod 2K)` up to `tol`.
    pub fn order_of(&self, a: PencilParameter, n_max: u32, tol: f64) -> Option<Order> {
        if n_max > 1000 {
            self.order_by_convergents(a, n_max, tol)
        } else {
            self.order_by_iteration(a, n_max, tol)
        }
    }

    fn winding(&self, a: PencilParameter, n: u32) -> i64 {
        (n as f64 * a.value() / (2.0 * self.quarter_period())).round() as i64
    }

    pub(crate) fn order_by_iteration(
        &self,
        a: PencilParameter,
        n_max: u32,
        tol: f64,
    ) -> Option<Order> {
        let quarter = self.quarter_period();
        (1..=n_max)
            .find(|&n| reduce(n as f64 * a.value(), quarter).abs() <= tol)
            .map(|n| Order {
                n,
                h: self.winding(a, n),
            })
    }

    /// The first `q` with `‖q·x‖ ≤ ε` is a record minimum of `‖q·x‖`, hence
    /// a convergent denominator of `x = a/2K`; only those are tested.
    pub(crate) fn order_by_convergents(
        &self,
        a: PencilParameter,
        n_max: u32,
        tol: f64,
    ) -> Option<Order> {
        let quarter = self.quarter_period();
        let hits = |q: u64| reduce(q as f64 * a.value(), quarter).abs() <= tol;
        let x = (a.value() / (2.0 * quarter)).abs();
        // convergents p/q of x ∈ [0, 1/2]
        let (mut q_prev, mut q) = (0_u64, 1_u64);
        let mut rest = x;
        loop {
            if q > n_max as u64 {
                return None;
            }
            if hits(q) {
                return Some(Order {
                    n: q as u32,
                    h: self.winding(a, q as u32),
                });
            }
            let frac = rest - rest.floor();
            if frac <= f64::EPSILON {
                return None;
            }
            rest = 1.0 / frac;
            let term = rest.floor();
            if term > n_max as f64 {
                return None;
            }
            let next = term as u64 * q + q_prev;
            q_prev = q;
            q = next;
        }
    }

    /// `a = 2hK/n` for an admissible pair: `n = 2, h = 1`, or `n ≥ 3`,
    /// `gcd(h, n) = 1`, `0 < 2h < n`.
    pub fn parameter_of_order(&self, n: u32, h: u32) -> Result<PencilParameter> {
        validate_order(n, h)?;
        Ok(self.parameter(2.0 * h as f64 * self.quarter_period() / n as f64))
    }
}

pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn validate_order(n: u32, h: u32) -> Result<()> {
    let ok = (n == 2 && h == 1) || (n >= 3 && h >= 1 && 2 * h < n && gcd(h, n) == 1);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidOrder { n, h })
    }
}

/// Every admissible `(n, h)` with `n ≤ n_max`, sorted by `(n, h)`.
pub fn admissible_orders(n_max: u32) -> Vec<(u32, u32)> {
    (2..=n_max)
        .flat_map(|n| (1..=n / 2).map(move |h| (n, h)))
        .filter(|&(n, h)| validate_order(n, h).is_ok())
        .collect()
}

/// `p ↦ R(rotation)·(scale·p) + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityTransform {
    pub rotation: f64,
    pub scale: f64,
    pub translation: Point,
}

impl SimilarityTransform {
    pub fn identity() -> Self {
        Self {
            rotation: 0.0,
            scale: 1.0,
            translation: Point::default(),
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        let (s, c) = self.rotation.sin_cos();
        let (x, y) = (self.scale * p.x, self.scale * p.y);
        Point::new(
            c * x - s * y + self.translation.x,
            s * x + c * y + self.translation.y,
        )
    }

    pub fn invert(&self, p: Point) -> Point {
        let (s, c) = self.rotation.sin_cos();
        let (x, y) = (p.x - self.translation.x, p.y - self.translation.y);
        Point::new((c * x + s * y) / self.scale, (-s * x + c * y) / self.scale)
    }

    pub fn apply_circle(&self, c: &OrientedCircle) -> OrientedCircle {
        OrientedCircle {
            center: self.apply(c.center),
            radius: c.radius * self.scale,
            orientation: c.orientation,
        }
    }

    pub fn invert_circle(&self, c: &OrientedCircle) -> OrientedCircle {
        OrientedCircle {
            center: self.invert(c.center),
            radius: c.radius / self.scale,
            orientation: c.orientation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalFrame {
    pub transform: SimilarityTransform,
    pub pencil: Pencil,
    pub parameter: PencilParameter,
}

/// Moves `outer` onto `T` and the center of `inner` onto the negative real
/// axis, then locates `inner` in the pencil the two circles span.
pub fn canonical_frame(outer: &OrientedCircle, inner: &OrientedCircle) -> Result<CanonicalFrame> {
    if !(outer.radius > 0.0) {
        return Err(Error::InvalidCircle("outer radius must be positive".into()));
    }
    let dx = inner.center.x - outer.center.x;
    let dy = inner.center.y - outer.center.y;
    let scale = 1.0 / outer.radius;
    let offset = dx.hypot(dy) * scale;
    let rho = inner.radius * scale;

    let gap = 1.0 - (offset + rho);
    if gap < -CONTACT_TOL {
        return Err(Error::Intersecting);
    }
    if gap.abs() <= CONTACT_TOL {
        return Err(Error::TangentPencil);
    }
    if offset <= CONTACT_TOL {
        return Err(Error::Concentric);
    }

    let rotation = if offset == 0.0 {
        0.0
    } else {
        PI - dy.atan2(dx)
    };
    let (s, c) = rotation.sin_cos();
    let (ox, oy) = (scale * outer.center.x, scale * outer.center.y);
    let transform = SimilarityTransform {
        rotation,
        scale,
        translation: Point::new(-(c * ox - s * oy), -(s * ox + c * oy)),
    };

    // Radical axis of T and the circle centered at (−offset, 0), then the
    // limit point inside T; the two limit points multiply to 1.
    let center = -offset;
    let axis = (center * center - rho * rho + 1.0) / (2.0 * center);
    let limit_point = 1.0 / (axis - (axis * axis - 1.0).sqrt());
    let pencil = Pencil::from_limit_point(limit_point)?;

    let canonical_inner = OrientedCircle {
        center: Point::new(center, 0.0),
        radius: rho,
        orientation: inner.orientation,
    };
    let parameter = pencil.parameter_of(&canonical_inner)?;
    Ok(CanonicalFrame {
        transform,
        pencil,
        parameter,
    })
}
