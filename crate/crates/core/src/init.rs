//! Starting points for the simultaneous eigenvalue iteration.
//!
//! All strategies place `m * n` points on circles. The informed
//! strategies put each group of `m * multiplicity` points on the circle
//! of its Newton-polygon edge (or on the `u`-radii of the vertex set),
//! so every group starts inside the annulus that is known to contain it;
//! [`InitStrategy::UnitCircle`] ignores that structure and serves as the
//! uninformed baseline.
//!
//! Angular layout: the points of group `i` (1-based) are equally spaced,
//! rotated by `theta_i = 2 pi i (sqrt(5) - 1) / 2 + pi / (2 cnt)`. The
//! golden-ratio term decorrelates the groups from one another, and the
//! half-step term keeps points off the real axis, which would otherwise
//! be a symmetry trap for polynomials with real coefficients.

use num_complex::Complex64;
use thiserror::Error;

use crate::matpoly::MatrixPolynomial;
use crate::tropical::{vertex_set, NewtonPolygon, TropicalError};

/// Golden-ratio fraction of a full turn between consecutive group phases.
const GOLDEN_FRACTION: f64 = 0.618033988749894848;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InitError {
    #[error("polygon does not match the polynomial: {0}")]
    Mismatch(String),
    #[error("radius override must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("u/v starting circles require solvable endpoint abscissas 0 and n")]
    UvEndpointsMissing,
    #[error(transparent)]
    Tropical(#[from] TropicalError),
}

/// How to choose the starting circles.
#[derive(Debug, Clone, PartialEq)]
pub enum InitStrategy {
    /// One circle per Newton-polygon edge at its tropical root.
    TropicalCircles,
    /// All points on a single circle (default radius 1).
    UnitCircle { radius: Option<f64> },
    /// Circles at the `u`-radii of the vertex set, one per gap between
    /// consecutive members.
    UvCircles,
}

/// Equally spaced points on `|x| = radius` with the group-`index` phase.
fn circle_points(radius: f64, count: usize, index: usize, out: &mut Vec<Complex64>) {
    let theta = std::f64::consts::TAU * index as f64 * GOLDEN_FRACTION
        + std::f64::consts::PI / (2.0 * count as f64);
    for j in 0..count {
        let angle = std::f64::consts::TAU * j as f64 / count as f64 + theta;
        out.push(Complex64::from_polar(radius, angle));
    }
}

/// Produces the `m * n` starting points for `p` (with `n` its normalized
/// degree). `polygon` must come from `p`'s norm majorant; it is ignored
/// by [`InitStrategy::UnitCircle`].
pub fn initial_points(
    p: &MatrixPolynomial,
    polygon: &NewtonPolygon,
    strategy: &InitStrategy,
) -> Result<Vec<Complex64>, InitError> {
    let m = p.size();
    let n = p.degree();
    if polygon.total_multiplicity() != n {
        return Err(InitError::Mismatch(format!(
            "polygon covers degree {}, polynomial has degree {n}",
            polygon.total_multiplicity()
        )));
    }
    let mut points = Vec::with_capacity(m * n);
    match strategy {
        InitStrategy::TropicalCircles => {
            for (edge, (&r, &mult)) in polygon
                .radii
                .iter()
                .zip(polygon.multiplicities.iter())
                .enumerate()
            {
                circle_points(r, m * mult, edge + 1, &mut points);
            }
        }
        InitStrategy::UnitCircle { radius } => {
            let r = radius.unwrap_or(1.0);
            if !(r > 0.0) || !r.is_finite() {
                return Err(InitError::BadRadius(radius.unwrap_or(1.0)));
            }
            circle_points(r, m * n, 1, &mut points);
        }
        InitStrategy::UvCircles => {
            let vs = vertex_set(p)?;
            let members = vs.kappas();
            if members.first() != Some(&0) || members.last() != Some(&n) {
                return Err(InitError::UvEndpointsMissing);
            }
            for (gap, pair) in members.windows(2).enumerate() {
                let (lo, hi) = (pair[0], pair[1]);
                let u = crate::tropical::uv_bounds(p, hi).u;
                circle_points(u, m * (hi - lo), gap + 1, &mut points);
            }
        }
    }
    debug_assert_eq!(points.len(), m * n);
    Ok(points)
}
