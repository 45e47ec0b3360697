//! Tangent chains, Poncelet closure and interscribed polygons.
//!
//! A chain starts at `P ∈ T` and draws, for each `α_j`, the chord from the
//! current vertex tangent to `C_{F(α_j)}`. Because the chord maps form a
//! group, the chord from `P` to the last vertex always touches the member
//! `C_{F(γ)}` with `F(γ) ≡ Σ F(α_j) (mod 2K)`, whatever `P` is. An `n`-gon
//! inscribed in `T` and circumscribed about `C_a` exists exactly when
//! `n·a ≡ 0 (mod 2K)`, i.e. `F(α)/F(π) = h/n`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::elliptic;
use crate::error::{Error, Result};
use crate::pencil::{reduce, validate_order, Pencil, PencilParameter};
use crate::tangent_map::{apply, chord_distance, reduce_half_turn, CirclePoint, TangentMap};

/// Tolerance on `|n·a mod 2K|` for the analytic closure verdict.
pub const ANALYTIC_TOL: f64 = 1e-10;
/// Default tolerance on `|P_n − P|` for the empirical closure verdict.
pub const EMPIRICAL_TOL: f64 = 1e-8;
/// Tolerance for a chord touching its circle.
pub const TANGENCY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start: CirclePoint,
    pub alphas: Vec<f64>,
    pub vertices: Vec<CirclePoint>,
}

impl Trajectory {
    pub fn last(&self) -> CirclePoint {
        *self
            .vertices
            .last()
            .expect("trajectory always holds its start")
    }

    /// Distance between the last vertex and the start.
    pub fn closure_residual(&self) -> f64 {
        self.last().chord_length(self.start)
    }

    /// `|distance(center of C_{F(α_j)}, chord j) − radius|` for every chord.
    pub fn tangency_residuals(&self, pencil: &Pencil) -> Result<Vec<f64>> {
        self.alphas
            .iter()
            .zip(self.vertices.windows(2))
            .map(|(&alpha, pair)| {
                let map = TangentMap::new(pencil, alpha)?;
                let circle = pencil.circle_at(map.parameter(pencil))?;
                if map.alpha == 0.0 {
                    return Ok(0.0);
                }
                let d = chord_distance(pair[0], pair[1], circle.center.x)?;
                Ok((d - circle.radius).abs())
            })
            .collect()
    }
}

fn check_chain_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite("alpha"));
    }
    if !(alpha > -FRAC_PI_2 && alpha <= FRAC_PI_2) {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(())
}

/// `P_0 = start`, `P_j = ψ_{α_j}(P_{j−1})`.
pub fn trajectory(pencil: &Pencil, start: CirclePoint, alphas: &[f64]) -> Result<Trajectory> {
    let mut vertices = Vec::with_capacity(alphas.len() + 1);
    vertices.push(start);
    let mut current = start;
    for &alpha in alphas {
        check_chain_alpha(alpha)?;
        current = apply(pencil, &TangentMap::new(pencil, alpha)?, current)?;
        vertices.push(current);
    }
    Ok(Trajectory {
        start,
        alphas: alphas.to_vec(),
        vertices,
    })
}

/// `γ ∈ (−π/2, π/2]` with `ψ_{α_n} ∘ … ∘ ψ_{α_1} = ψ_γ`.
pub fn composite_gamma(pencil: &Pencil, alphas: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &alpha in alphas {
        check_chain_alpha(alpha)?;
        sum += TangentMap::new(pencil, alpha)?.a;
    }
    let c = pencil.parameter(sum);
    Ok(reduce_half_turn(elliptic::amplitude(c.value(), &pencil.m)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub closes: bool,
    pub n: u32,
    pub h: Option<i64>,
    pub max_residual: f64,
    pub gamma: Option<f64>,
    /// `|n·F(α) mod 2K|`.
    pub parameter_residual: f64,
}

/// `count` quasi-uniform starts followed by three starts hugging the seam
/// of the `θ` chart at `±π/2`.
pub fn default_starts(count: usize) -> Vec<CirclePoint> {
    const GOLDEN: f64 = 0.618_033_988_749_894_8;
    let mut starts: Vec<CirclePoint> = (0..count)
        .map(|j| {
            let frac = (0.5 + j as f64 * GOLDEN).fract();
            CirclePoint::new(-FRAC_PI_2 + PI * frac)
        })
        .collect();
    starts.extend([
        CirclePoint::new(FRAC_PI_2),
        CirclePoint::new(-FRAC_PI_2 + 1e-9),
        CirclePoint::new(FRAC_PI_2 - 1e-9),
    ]);
    starts
}

/// [`closure_test_at`] over [`default_starts`].
pub fn closure_test(
    pencil: &Pencil,
    alpha: f64,
    n: u32,
    starts: usize,
    tol: f64,
) -> Result<ClosureReport> {
    closure_test_at(pencil, alpha, n, &default_starts(starts), tol)
}

/// Decides whether `ψ_α` has order `n`, both from `n·F(α) mod 2K` and by
/// iterating the map `n` times from every start.
///
/// The verdicts must agree. Between the analytic tolerance and `2·tol/k′`
/// a small parameter miss can still look closed pointwise; there the
/// report says "does not close" without raising an error.
pub fn closure_test_at(
    pencil: &Pencil,
    alpha: f64,
    n: u32,
    starts: &[CirclePoint],
    tol: f64,
) -> Result<ClosureReport> {
    if n < 2 {
        return Err(Error::InvalidOrder { n, h: 0 });
    }
    check_chain_alpha(alpha)?;
    if !(alpha > 0.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let map = TangentMap::new(pencil, alpha)?;
    let quarter = pencil.quarter_period();
    let total = n as f64 * map.a;
    let parameter_residual = reduce(total, quarter).abs();
    let analytic = parameter_residual <= ANALYTIC_TOL;

    let mut max_residual = 0.0_f64;
    for &start in starts {
        let mut z = start;
        for _ in 0..n {
            z = apply(pencil, &map, z)?;
        }
        max_residual = max_residual.max(z.chord_length(start));
    }
    let empirical = max_residual <= tol;

    if analytic && !empirical {
        return Err(Error::NumericalInconsistency(format!(
            "n·a ≡ 0 within {parameter_residual:e} but iteration misses by {max_residual:e}"
        )));
    }
    let band = 2.0 * tol / pencil.m.k_comp;
    if !analytic && empirical && parameter_residual > band {
        return Err(Error::NumericalInconsistency(format!(
            "n·a misses 0 by {parameter_residual:e} but iteration closes within {max_residual:e}"
        )));
    }
    let closes = analytic && empirical;
    let gamma = reduce_half_turn(elliptic::amplitude(reduce(total, quarter), &pencil.m)?);
    Ok(ClosureReport {
        closes,
        n,
        h: closes.then(|| (total / (2.0 * quarter)).round() as i64),
        max_residual,
        gamma: Some(gamma),
        parameter_residual,
    })
}

/// `α` with `F(α) = 2hK/n`.
pub fn order_alpha(pencil: &Pencil, n: u32, h: u32) -> Result<f64> {
    let a = pencil.parameter_of_order(n, h)?;
    Ok(reduce_half_turn(elliptic::amplitude(a.value(), &pencil.m)?))
}

/// The closed `n`-gon inscribed in `T` whose sides touch `C_{2hK/n}`,
/// starting at `start`. `vertices` holds `n + 1` points, the last one
/// equal to the first up to round-off.
pub fn interscribed_ngon(
    pencil: &Pencil,
    n: u32,
    h: u32,
    start: CirclePoint,
) -> Result<Trajectory> {
    validate_order(n, h)?;
    let alpha = order_alpha(pencil, n, h)?;
    let polygon = trajectory(pencil, start, &vec![alpha; n as usize])?;
    let residual = polygon.closure_residual();
    if residual > EMPIRICAL_TOL {
        return Err(Error::NumericalInconsistency(format!(
            "order-{n} polygon misses its start by {residual:e}"
        )));
    }
    Ok(polygon)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagonalReport {
    pub step: u32,
    pub parameter: PencilParameter,
    pub max_residual: f64,
}

fn common_alpha(polygon: &Trajectory) -> Result<f64> {
    let first = *polygon.alphas.first().ok_or(Error::NotClosed(f64::NAN))?;
    if let Some(&other) = polygon.alphas.iter().find(|&&a| (a - first).abs() > 1e-15) {
        return Err(Error::InvalidAlpha(other));
    }
    Ok(first)
}

/// Chords joining each vertex to the one `step` places ahead, with the
/// member `C_c`, `c = step·a`, they all touch.
pub fn diagonal_report(pencil: &Pencil, polygon: &Trajectory, step: u32) -> Result<DiagonalReport> {
    let residual = polygon.closure_residual();
    if residual > EMPIRICAL_TOL {
        return Err(Error::NotClosed(residual));
    }
    let alpha = common_alpha(polygon)?;
    let n = polygon.alphas.len();
    if step == 0 || step as usize >= n {
        return Err(Error::InvalidOrder {
            n: n as u32,
            h: step,
        });
    }
    let a = TangentMap::new(pencil, alpha)?.parameter(pencil);
    let parameter = pencil.power(a, step as i64);
    let circle = pencil.circle_at(parameter)?;
    let ring = &polygon.vertices[..n];
    let mut max_residual = 0.0_f64;
    for i in 0..n {
        let (from, to) = (ring[i], ring[(i + step as usize) % n]);
        let d = chord_distance(from, to, circle.center.x)?;
        max_residual = max_residual.max((d - circle.radius).abs());
    }
    Ok(DiagonalReport {
        step,
        parameter,
        max_residual,
    })
}

/// [`diagonal_report`], failing unless every chord touches within
/// [`TANGENCY_TOL`].
pub fn diagonal_tangency(
    pencil: &Pencil,
    polygon: &Trajectory,
    step: u32,
) -> Result<PencilParameter> {
    let report = diagonal_report(pencil, polygon, step)?;
    if report.max_residual > TANGENCY_TOL {
        return Err(Error::NumericalInconsistency(format!(
            "step-{step} chords miss C_c by {:e}",
            report.max_residual
        )));
    }
    Ok(report.parameter)
}

/// `F(α)/F(π) = F(α)/(2K)`, equal to `h/n` exactly for closing angles.
pub fn jacobi_ratio(pencil: &Pencil, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= FRAC_PI_2) {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(elliptic::incomplete_f(alpha, &pencil.m)? / (2.0 * pencil.quarter_period()))
}
