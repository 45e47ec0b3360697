//! Real-argument Jacobi elliptic kernel.
//!
//! Everything here is built on the incomplete integral of the first kind
//!
//! ```text
//!            θ
//!           ⌠        dt
//! F(θ, k) = │  ───────────────────
//!           ⌡  √(1 − k² sin² t)
//!          0
//! ```
//!
//! evaluated on the principal range `[0, π/2]` through Carlson's symmetric
//! form `R_F` and extended to the whole real line by oddness and the
//! quasi-period law `F(θ + nπ) = F(θ) + 2nK`. The amplitude `am` inverts
//! `F`, and `sn`, `cn`, `dn` are read off the amplitude.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elliptic modulus `k` together with its complement `k′ = √(1 − k²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Modulus {
    pub k: f64,
    pub k_comp: f64,
}

impl Modulus {
    /// Accepts `k ∈ [0, 1]`. `k = 1` is representable but rejected by every
    /// evaluator in this module.
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::NonFinite("k"));
        }
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::InvalidModulus(k));
        }
        Ok(Self {
            k,
            k_comp: ((1.0 - k) * (1.0 + k)).sqrt(),
        })
    }

    pub fn from_complement(k_comp: f64) -> Result<Self> {
        if !k_comp.is_finite() {
            return Err(Error::NonFinite("k'"));
        }
        if !(0.0..=1.0).contains(&k_comp) {
            return Err(Error::InvalidModulus(k_comp));
        }
        Ok(Self {
            k: ((1.0 - k_comp) * (1.0 + k_comp)).sqrt(),
            k_comp,
        })
    }

    pub fn k_squared(&self) -> f64 {
        self.k * self.k
    }

    fn ensure_regular(&self) -> Result<()> {
        if !(self.k_comp > 0.0) {
            return Err(Error::InvalidModulus(self.k));
        }
        Ok(())
    }
}

/// The quarter period `K = F(π/2, k)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuarterPeriod(pub f64);

impl QuarterPeriod {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn half_period(self) -> f64 {
        2.0 * self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiTriple {
    pub cn: f64,
    pub sn: f64,
    pub dn: f64,
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
///
/// At most one argument may be zero.
pub(crate) fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    const ERRTOL: f64 = 0.0008;
    const C1: f64 = 1.0 / 24.0;
    const C2: f64 = 0.1;
    const C3: f64 = 3.0 / 44.0;
    const C4: f64 = 1.0 / 14.0;

    let (mut x, mut y, mut z) = (x, y, z);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let mu = (x + y + z) / 3.0;
        let dx = (mu - x) / mu;
        let dy = (mu - y) / mu;
        let dz = (mu - z) / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (C1 * e2 - C2 - C3 * e3) * e2 + C4 * e3) / mu.sqrt();
        }
    }
}

/// `F(φ, k)` for `φ ∈ [0, π/2]`.
fn principal_f(phi: f64, k2: f64) -> f64 {
    if phi == 0.0 {
        return 0.0;
    }
    let (s, c) = phi.sin_cos();
    s * carlson_rf(c * c, (1.0 - s * k2.sqrt()) * (1.0 + s * k2.sqrt()), 1.0)
}

fn agm_quarter_period(m: &Modulus) -> f64 {
    let mut a = 1.0_f64;
    let mut b = m.k_comp;
    for _ in 0..64 {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    FRAC_PI_2 / a
}

/// Quarter period by the arithmetic–geometric mean of `1` and `k′`.
pub fn quarter_period(m: &Modulus) -> Result<QuarterPeriod> {
    m.ensure_regular()?;
    Ok(QuarterPeriod(agm_quarter_period(m)))
}

/// `F(θ, k)` for any finite real `θ`.
pub fn incomplete_f(theta: f64, m: &Modulus) -> Result<f64> {
    m.ensure_regular()?;
    if !theta.is_finite() {
        return Err(Error::NonFinite("theta"));
    }
    if m.k == 0.0 {
        return Ok(theta);
    }
    let n = (theta / PI).round();
    let r = theta - n * PI;
    let value = r.signum() * principal_f(r.abs().min(FRAC_PI_2), m.k_squared());
    if n == 0.0 {
        Ok(value)
    } else {
        Ok(value + 2.0 * n * agm_quarter_period(m))
    }
}

/// Solves `F(θ) = target` for `θ ∈ [0, π/2]`, given `0 ≤ target ≤ K`.
fn principal_amplitude(target: f64, quarter: f64, k2: f64) -> f64 {
    if target <= 0.0 {
        return 0.0;
    }
    if target >= quarter {
        return FRAC_PI_2;
    }
    let (mut lo, mut hi) = (0.0_f64, FRAC_PI_2);
    let mut theta = FRAC_PI_2 * (target / quarter);
    for _ in 0..200 {
        let residual = principal_f(theta, k2) - target;
        if residual == 0.0 {
            return theta;
        }
        if residual > 0.0 {
            hi = theta;
        } else {
            lo = theta;
        }
        let s = theta.sin();
        // dθ/du = dn
        let mut next = theta - residual * (1.0 - k2 * s * s).sqrt();
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - theta).abs() <= 2.0 * f64::EPSILON * theta.max(1.0) || hi - lo <= f64::EPSILON {
            return next;
        }
        theta = next;
    }
    theta
}

/// The amplitude `am(u)`, inverse of [`incomplete_f`].
pub fn amplitude(u: f64, m: &Modulus) -> Result<f64> {
    m.ensure_regular()?;
    if !u.is_finite() {
        return Err(Error::NonFinite("u"));
    }
    if m.k == 0.0 {
        return Ok(u);
    }
    let quarter = agm_quarter_period(m);
    let n = (u / (2.0 * quarter)).round();
    let r = u - 2.0 * n * quarter;
    let theta = r.signum() * principal_amplitude(r.abs(), quarter, m.k_squared());
    Ok(theta + n * PI)
}

/// `dn` from `sn` and `cn`, choosing the better-conditioned of
/// `1 − k² sn²` and `k′² + k² cn²`.
pub(crate) fn delta(sn: f64, cn: f64, m: &Modulus) -> f64 {
    let k2 = m.k_squared();
    let d2 = if cn * cn < 0.5 {
        m.k_comp * m.k_comp + k2 * cn * cn
    } else {
        1.0 - k2 * sn * sn
    };
    d2.sqrt().clamp(m.k_comp, 1.0)
}

/// `(cn u, sn u, dn u)` with `sn = sin(am u)`, `cn = cos(am u)`.
pub fn jacobi(u: f64, m: &Modulus) -> Result<JacobiTriple> {
    let theta = amplitude(u, m)?;
    let (sn, cn) = theta.sin_cos();
    Ok(JacobiTriple {
        cn,
        sn,
        dn: delta(sn, cn, m),
    })
}

fn addition_denominator(su: f64, sv: f64, m: &Modulus) -> f64 {
    1.0 - m.k_squared() * su * su * sv * sv
}

/// Right-hand side of the addition law for `cn(u + v)`.
pub fn addition_cn(u: f64, v: f64, m: &Modulus) -> Result<f64> {
    let a = jacobi(u, m)?;
    let b = jacobi(v, m)?;
    Ok((a.cn * b.cn - a.sn * b.sn * a.dn * b.dn) / addition_denominator(a.sn, b.sn, m))
}

/// Right-hand side of the addition law for `sn(u + v)`.
pub fn addition_sn(u: f64, v: f64, m: &Modulus) -> Result<f64> {
    let a = jacobi(u, m)?;
    let b = jacobi(v, m)?;
    Ok((a.sn * b.cn * b.dn + b.sn * a.cn * a.dn) / addition_denominator(a.sn, b.sn, m))
}

/// Adaptive Simpson quadrature of the defining integral of `F(θ, k)`.
///
/// Independent of the Carlson and AGM machinery above; it exists to certify
/// [`incomplete_f`] and [`quarter_period`] in tests.
pub fn oracle_f_quadrature(theta: f64, m: &Modulus, tol: f64) -> Result<f64> {
    const MAX_DEPTH: u32 = 60;
    const MAX_EVALUATIONS: u64 = 4_000_000;
    // Simpson estimates on coarse panels can agree by accident
    const MIN_DEPTH: u32 = 3;
    const PANEL: f64 = std::f64::consts::FRAC_PI_8;
    if !theta.is_finite() {
        return Err(Error::NonFinite("theta"));
    }
    if !(tol >= 1e-14) {
        return Err(Error::ToleranceTooSmall(tol));
    }
    m.ensure_regular()?;
    if theta == 0.0 {
        return Ok(0.0);
    }
    let k2 = m.k_squared();
    let f = |t: f64| {
        let s = t.sin();
        1.0 / (1.0 - k2 * s * s).sqrt()
    };

    struct Simpson<'a, F: Fn(f64) -> f64> {
        f: &'a F,
        max_depth: u32,
        evaluations: u64,
        failed: bool,
    }

    impl<F: Fn(f64) -> f64> Simpson<'_, F> {
        #[allow(clippy::too_many_arguments)]
        fn recurse(
            &mut self,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            if self.failed {
                return whole;
            }
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = ((self.f)(lm), (self.f)(rm));
            self.evaluations += 2;
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol {
                return left + right + delta / 15.0;
            }
            if depth >= self.max_depth || self.evaluations >= MAX_EVALUATIONS {
                self.failed = true;
                return left + right + delta / 15.0;
            }
            self.recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
                + self.recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
        }
    }

    let panels = (theta.abs() / PANEL).ceil().max(1.0);
    let width = theta / panels;
    let mut simpson = Simpson {
        f: &f,
        max_depth: MAX_DEPTH,
        evaluations: 0,
        failed: false,
    };
    let mut value = 0.0;
    for j in 0..panels as u32 {
        let a = j as f64 * width;
        let b = if j + 1 == panels as u32 {
            theta
        } else {
            a + width
        };
        let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
        simpson.evaluations += 3;
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        value += simpson.recurse(a, b, fa, fm, fb, whole, tol / panels, 0);
    }
    if simpson.failed {
        return Err(Error::QuadratureNoConvergence {
            tol,
            max_depth: MAX_DEPTH,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(k: f64) -> Modulus {
        Modulus::new(k).unwrap()
    }

    #[test]
    fn modulus_from_either_side_agrees() {
        for &k in &[0.0, 0.1, 0.5, 0.8, 0.99] {
            let m = modulus(k);
            let back = Modulus::from_complement(m.k_comp).unwrap();
            assert!((back.k - k).abs() < 1e-15);
            assert!((m.k * m.k + m.k_comp * m.k_comp - 1.0).abs() < 1e-15);
        }
        assert!(Modulus::new(1.2).is_err());
        assert!(Modulus::new(f64::NAN).is_err());
    }

    #[test]
    fn unit_modulus_rejected() {
        let m = modulus(1.0);
        assert_eq!(incomplete_f(0.3, &m), Err(Error::InvalidModulus(1.0)));
        assert!(quarter_period(&m).is_err());
        assert!(amplitude(0.3, &m).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        let m = modulus(0.5);
        assert!(incomplete_f(f64::INFINITY, &m).is_err());
        assert!(amplitude(f64::NAN, &m).is_err());
    }

    #[test]
    fn trivial_values() {
        let m = modulus(0.7);
        let k = quarter_period(&m).unwrap().value();
        assert!((incomplete_f(FRAC_PI_2, &m).unwrap() - k).abs() < 1e-12);
        assert_eq!(incomplete_f(0.0, &m).unwrap(), 0.0);
        assert_eq!(incomplete_f(1.234, &modulus(0.0)).unwrap(), 1.234);
        assert_eq!(quarter_period(&modulus(0.0)).unwrap().value(), FRAC_PI_2);
        assert!((amplitude(k, &m).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(amplitude(0.0, &m).unwrap(), 0.0);
    }

    #[test]
    fn quarter_period_lower_bound() {
        let mut last = FRAC_PI_2;
        for i in 1..20 {
            let k = quarter_period(&modulus(i as f64 * 0.05)).unwrap().value();
            assert!(k > last);
            last = k;
        }
    }

    #[test]
    fn jacobi_at_quarter_period() {
        let m = modulus(0.6);
        let k = quarter_period(&m).unwrap().value();
        let t = jacobi(k, &m).unwrap();
        assert!(t.cn.abs() < 1e-15);
        assert!((t.sn - 1.0).abs() < 1e-15);
        assert!((t.dn - m.k_comp).abs() < 1e-15);
        let zero = jacobi(0.0, &m).unwrap();
        assert_eq!((zero.cn, zero.sn, zero.dn), (1.0, 0.0, 1.0));
    }

    #[test]
    fn jacobi_half_period_shift() {
        let m = modulus(0.6);
        let k = quarter_period(&m).unwrap().value();
        let a = jacobi(0.37, &m).unwrap();
        let b = jacobi(0.37 + 2.0 * k, &m).unwrap();
        assert!((a.cn + b.cn).abs() < 1e-12);
        assert!((a.sn + b.sn).abs() < 1e-12);
        assert!((a.dn - b.dn).abs() < 1e-12);
    }

    #[test]
    fn addition_trivial_cases() {
        let m = modulus(0.7);
        let k = quarter_period(&m).unwrap().value();
        let u = 0.81;
        assert!((addition_cn(u, 0.0, &m).unwrap() - jacobi(u, &m).unwrap().cn).abs() < 1e-15);
        assert!(addition_sn(k, k, &m).unwrap().abs() < 1e-12);
        let direct = jacobi(1.3, &m).unwrap().cn;
        assert!((addition_cn(0.4, 0.9, &m).unwrap() - direct).abs() < 1e-9);
    }

    #[test]
    fn oracle_trivial_cases() {
        let v = oracle_f_quadrature(FRAC_PI_2, &modulus(0.0), 1e-12).unwrap();
        assert!((v - FRAC_PI_2).abs() < 1e-12);
        let m = modulus(0.8);
        let tol = 1e-12;
        let full = oracle_f_quadrature(PI, &m, tol).unwrap();
        let k = quarter_period(&m).unwrap().value();
        assert!((full - 2.0 * k).abs() <= 2.0 * tol);
        assert!(matches!(
            oracle_f_quadrature(1.0, &m, 1e-16),
            Err(Error::ToleranceTooSmall(_))
        ));
    }

    #[test]
    fn oracle_reports_budget_exhaustion() {
        // A near-singular integrand over a long range cannot meet 1e-14
        // before the depth limit.
        let m = modulus(0.999_999_999);
        assert!(matches!(
            oracle_f_quadrature(60.0, &m, 1e-14),
            Err(Error::QuadratureNoConvergence { .. })
        ));
    }

    #[test]
    fn oracle_pins_reference_values() {
        let m = modulus(0.8);
        let oracle = oracle_f_quadrature(0.7, &m, 1e-13).unwrap();
        assert!((incomplete_f(0.7, &m).unwrap() - oracle).abs() < 1e-11);
        let m = modulus(0.95);
        let oracle = oracle_f_quadrature(1.1, &m, 1e-12).unwrap();
        assert!((incomplete_f(1.1, &m).unwrap() - oracle).abs() < 1e-11);
    }

    #[test]
    fn amplitude_round_trip_negative_argument() {
        let m = modulus(0.9);
        let u = incomplete_f(-2.5, &m).unwrap();
        assert!((amplitude(u, &m).unwrap() + 2.5).abs() < 1e-12);
        let oracle = -oracle_f_quadrature(2.5, &m, 1e-13).unwrap();
        assert!((u - oracle).abs() < 1e-11);
    }

    #[test]
    fn zero_modulus_is_trigonometry() {
        let m = modulus(0.0);
        for &u in &[-3.0, -0.2, 0.0, 1.0, 2.9, 7.5] {
            let t = jacobi(u, &m).unwrap();
            assert!((t.cn - f64::cos(u)).abs() < 1e-12);
            assert!((t.sn - f64::sin(u)).abs() < 1e-12);
            assert_eq!(t.dn, 1.0);
        }
    }
}
