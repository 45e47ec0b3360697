//! Circle maps induced by members of the pencil.
//!
//! For `z = e^{2iθ}` on `T` and `a = F(α)`, the map `ψ_α` sends `θ` to
//! `am(F(θ) + a)`. The chord from `z` to `ψ_α(z)` touches `C_a`, so the
//! group of maps mirrors the group of oriented circles. Conjugated maps
//! `ψ̄_α(z) = conj(ψ_α(z))` are involutions and together with the plain
//! maps form a group containing the plain ones as a normal subgroup.
//!
//! The tangent pencil (circles touching `T` at `−1`) has no elliptic
//! functions; its maps are the `a1_*` functions at the end of this file.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::elliptic;
use crate::error::{Error, Result};
use crate::pencil::{reduce, Orientation, OrientedCircle, Pencil, PencilParameter, Point};

/// Tolerance for deciding that a map's stored `a` belongs to a pencil.
const MEMBERSHIP_TOL: f64 = 1e-10;

/// Reduces an angle mod `π` into `(−π/2, π/2]`.
pub fn reduce_half_turn(theta: f64) -> f64 {
    let mut r = theta - PI * (theta / PI).round();
    if r <= -FRAC_PI_2 {
        r += PI;
    }
    if r > FRAC_PI_2 {
        r -= PI;
    }
    r
}

/// The point `e^{2iθ}` of the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CirclePoint {
    theta: f64,
}

impl CirclePoint {
    pub fn new(theta: f64) -> Self {
        Self {
            theta: reduce_half_turn(theta),
        }
    }

    pub fn from_point(p: Point) -> Self {
        Self::new(0.5 * p.y.atan2(p.x))
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn to_point(self) -> Point {
        let (s, c) = (2.0 * self.theta).sin_cos();
        Point::new(c, s)
    }

    /// Euclidean distance between the two points of `T`.
    pub fn chord_length(self, other: CirclePoint) -> f64 {
        2.0 * (self.theta - other.theta).sin().abs()
    }

    pub fn conj(self) -> Self {
        Self::new(-self.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentMap {
    pub alpha: f64,
    pub a: f64,
    pub conjugated: bool,
}

impl TangentMap {
    /// `ψ_α` on the given pencil.
    pub fn new(pencil: &Pencil, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite("alpha"));
        }
        let alpha = reduce_half_turn(alpha);
        let a = pencil.parameter(elliptic::incomplete_f(alpha, &pencil.m)?);
        Ok(Self {
            alpha,
            a: a.value(),
            conjugated: false,
        })
    }

    /// `ψ̄_α` on the given pencil.
    pub fn conjugate(pencil: &Pencil, alpha: f64) -> Result<Self> {
        Ok(Self {
            conjugated: true,
            ..Self::new(pencil, alpha)?
        })
    }

    /// The plain map whose chords touch `C_a`.
    pub fn from_parameter(pencil: &Pencil, a: PencilParameter) -> Result<Self> {
        Self::from_parts(pencil, a, false)
    }

    fn from_parts(pencil: &Pencil, a: PencilParameter, conjugated: bool) -> Result<Self> {
        let alpha = reduce_half_turn(elliptic::amplitude(a.value(), &pencil.m)?);
        Ok(Self {
            alpha,
            a: a.value(),
            conjugated,
        })
    }

    pub fn identity() -> Self {
        Self {
            alpha: 0.0,
            a: 0.0,
            conjugated: false,
        }
    }

    pub fn parameter(&self, pencil: &Pencil) -> PencilParameter {
        pencil.parameter(self.a)
    }

    fn check_membership(&self, pencil: &Pencil) -> Result<()> {
        let expected = elliptic::incomplete_f(self.alpha, &pencil.m)?;
        let gap = reduce(self.a - expected, pencil.quarter_period()).abs();
        if gap > MEMBERSHIP_TOL {
            return Err(Error::ForeignMap {
                a: self.a,
                expected,
            });
        }
        Ok(())
    }
}

/// `ψ_α(z)`, or its conjugate for a conjugated map.
pub fn apply(pencil: &Pencil, f: &TangentMap, z: CirclePoint) -> Result<CirclePoint> {
    let u = elliptic::incomplete_f(z.theta(), &pencil.m)?;
    let image = CirclePoint::new(elliptic::amplitude(u + f.a, &pencil.m)?);
    Ok(if f.conjugated { image.conj() } else { image })
}

/// `f ∘ g` in closed form.
///
/// Writing `a`, `b` for the parameters of `f`, `g`:
/// `ψ_a∘ψ_b = ψ_{a+b}`, `ψ̄_a∘ψ_b = ψ̄_{a+b}`, `ψ_a∘ψ̄_b = ψ̄_{b−a}`,
/// `ψ̄_a∘ψ̄_b = ψ_{b−a}`.
pub fn compose(pencil: &Pencil, f: &TangentMap, g: &TangentMap) -> Result<TangentMap> {
    f.check_membership(pencil)?;
    g.check_membership(pencil)?;
    let (c, conjugated) = match (f.conjugated, g.conjugated) {
        (false, false) => (g.a + f.a, false),
        (true, false) => (g.a + f.a, true),
        (false, true) => (g.a - f.a, true),
        (true, true) => (g.a - f.a, false),
    };
    TangentMap::from_parts(pencil, pencil.parameter(c), conjugated)
}

/// Distance from the real point `x3` to the line through `z1` and `z2`,
/// `½ |x3 (1 + z1 z2) − (z1 + z2)|`.
pub fn chord_distance(z1: CirclePoint, z2: CirclePoint, x3: f64) -> Result<f64> {
    if reduce_half_turn(z1.theta() - z2.theta()).abs() <= 1e-12 {
        return Err(Error::DegenerateChord);
    }
    let (p, q) = (z1.to_point(), z2.to_point());
    // z1 z2 and z1 + z2 as complex numbers
    let (prod_re, prod_im) = (p.x * q.x - p.y * q.y, p.x * q.y + p.y * q.x);
    let re = x3 * (1.0 + prod_re) - (p.x + q.x);
    let im = x3 * prod_im - (p.y + q.y);
    Ok(0.5 * re.hypot(im))
}

/// Position of a point relative to a directed chord, in the standard
/// (counterclockwise) orientation of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    On,
}

/// `(to − from) × (p − from)`; positive when `p` is left of the chord.
pub fn cross(from: Point, to: Point, p: Point) -> f64 {
    (to.x - from.x) * (p.y - from.y) - (to.y - from.y) * (p.x - from.x)
}

/// Below this magnitude the cross product is reported as [`Side::On`].
pub const SIDE_EPS: f64 = 1e-12;

pub fn side_of(from: Point, to: Point, p: Point) -> Side {
    let c = cross(from, to, p);
    if c.abs() <= SIDE_EPS {
        Side::On
    } else if c < 0.0 {
        Side::Right
    } else {
        Side::Left
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangencyReport {
    pub image: CirclePoint,
    pub distance: f64,
    pub radius: f64,
    pub distance_error: f64,
    /// Where the center of `C_a` lies relative to the chord `z → ψ_α(z)`.
    pub side: Side,
    pub cross: f64,
}

/// Checks that the chord `z → ψ_α(z)` touches the positively oriented
/// `C_a` and reports the side of the chord on which its center lies.
pub fn tangency_check(pencil: &Pencil, f: &TangentMap, z: CirclePoint) -> Result<TangencyReport> {
    if f.conjugated || !(f.alpha > 0.0) {
        return Err(Error::InvalidAlpha(f.alpha));
    }
    let image = apply(pencil, f, z)?;
    let circle = pencil.circle_at(f.parameter(pencil))?;
    let distance = chord_distance(z, image, circle.center.x)?;
    let (from, to) = (z.to_point(), image.to_point());
    Ok(TangencyReport {
        image,
        distance,
        radius: circle.radius,
        distance_error: (distance - circle.radius).abs(),
        side: side_of(from, to, circle.center),
        cross: cross(from, to, circle.center),
    })
}

/// Second endpoint on `T` of the chord from `z` tangent to `circle`,
/// choosing the tangent along which the circle is traversed in its own
/// orientation: a positively oriented circle lies to the left of the
/// chord, a negatively oriented one to the right. A point circle yields
/// the chord through it.
pub fn tangent_chord_endpoint(circle: &OrientedCircle, z: CirclePoint) -> Result<CirclePoint> {
    let p = z.to_point();
    let (dx, dy) = (circle.center.x - p.x, circle.center.y - p.y);
    let dist = dx.hypot(dy);
    if dist <= circle.radius || dist == 0.0 {
        return Err(Error::DegenerateChord);
    }
    let turn = (circle.radius / dist).asin();
    let turn = match circle.orientation {
        Orientation::Negative => turn,
        _ => -turn,
    };
    let (s, c) = turn.sin_cos();
    let (ux, uy) = ((c * dx - s * dy) / dist, (s * dx + c * dy) / dist);
    let t = -2.0 * (p.x * ux + p.y * uy);
    Ok(CirclePoint::from_point(Point::new(
        p.x + t * ux,
        p.y + t * uy,
    )))
}

/// The member of the pencil inside `T` touched by the chord `z1 → z2`,
/// found geometrically by bisection on `a ∈ [0, K]`: `T` contains the
/// chord, the point circle `L` lies off it, and in between exactly one
/// member is tangent. The sign follows the side of the chord the center
/// lies on: positive when it is on the left.
pub fn touching_parameter(
    pencil: &Pencil,
    z1: CirclePoint,
    z2: CirclePoint,
) -> Result<PencilParameter> {
    let quarter = pencil.quarter_period();
    let gap = |a: f64| -> Result<f64> {
        let c = pencil.circle_at(pencil.parameter(a))?;
        Ok(chord_distance(z1, z2, c.center.x)? - c.radius)
    };
    let (mut lo, mut hi) = (0.0_f64, quarter);
    if gap(hi)? <= 0.0 {
        lo = hi;
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if gap(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let magnitude = 0.5 * (lo + hi);
    let center = pencil.circle_at(pencil.parameter(magnitude))?.center;
    let signed = match side_of(z1.to_point(), z2.to_point(), center) {
        Side::Right => -magnitude,
        _ => magnitude,
    };
    Ok(pencil.parameter(signed))
}

/// The circle touched by every chord `z → ψ̄_α(z)`: center
/// `(dn a + 1)/(dn a − 1)`, radius `2 cn a/(1 − dn a)`. It lies beyond
/// the radical axis, outside `T`.
pub fn conjugate_tangency_circle(pencil: &Pencil, a: PencilParameter) -> Result<OrientedCircle> {
    if a.value() == 0.0 {
        return Err(Error::SingularParameter);
    }
    let t = elliptic::jacobi(a.value(), &pencil.m)?;
    if t.dn >= 1.0 {
        return Err(Error::SingularParameter);
    }
    Ok(OrientedCircle {
        center: Point::new((t.dn + 1.0) / (t.dn - 1.0), 0.0),
        radius: 2.0 * t.cn.abs() / (1.0 - t.dn),
        orientation: Orientation::of_parameter(a.value()),
    })
}

fn check_a1_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite("alpha"));
    }
    if alpha.abs() >= FRAC_PI_2 {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(())
}

/// Addition rule shared by the tangent-pencil maps and their composition:
/// returns the angle with
/// `cos = cos x cos y/(1 + sin x sin y)`, `sin = (sin x + sin y)/(1 + sin x sin y)`.
fn a1_combine(x: f64, y: f64) -> f64 {
    let (sx, cx) = x.sin_cos();
    let (sy, cy) = y.sin_cos();
    let denom = 1.0 + sx * sy;
    let cos = cx * cy / denom;
    let sin = (sx + sy) / denom;
    sin.atan2(cos.max(0.0))
}

/// The tangent-pencil map `ψ_α`, `|α| < π/2`. It fixes `−1 ∈ T`.
pub fn a1_apply(alpha: f64, z: CirclePoint) -> Result<CirclePoint> {
    check_a1_alpha(alpha)?;
    if z.theta() == FRAC_PI_2 {
        return Ok(z);
    }
    Ok(CirclePoint::new(a1_combine(alpha, z.theta())))
}

/// `γ` with `ψ_γ = ψ_α ∘ ψ_β` in the tangent pencil.
pub fn a1_compose(alpha: f64, beta: f64) -> Result<f64> {
    check_a1_alpha(alpha)?;
    check_a1_alpha(beta)?;
    Ok(a1_combine(alpha, beta))
}

/// `C_{1,α}`: center `((cos α − 1)/(cos α + 1), 0)`, radius
/// `2 cos α/(cos α + 1)`, touching `T` at `(−1, 0)`.
pub fn a1_circle(alpha: f64) -> Result<OrientedCircle> {
    check_a1_alpha(alpha)?;
    if !(alpha > 0.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let c = alpha.cos();
    Ok(OrientedCircle {
        center: Point::new((c - 1.0) / (c + 1.0), 0.0),
        radius: 2.0 * c / (c + 1.0),
        orientation: Orientation::Positive,
    })
}
