//! Newton polygons and tropical roots of the norm majorant.
//!
//! For weights `w_i >= 0` the Newton polygon is the upper convex hull of
//! the points `(i, log w_i)`; zero weights sit at `-inf` and never become
//! vertices. Each hull edge between vertices `k_{i-1}` and `k_i` yields a
//! tropical root
//!
//! `r_i = (w_{k_{i-1}} / w_{k_i})^{1/(k_i - k_{i-1})}`
//!
//! of multiplicity `k_i - k_{i-1}`; the radii are strictly increasing.
//! The companion `u/v` bounds sandwich the Pellet roots and pick out the
//! abscissas where a Pellet disk can exist at all.

use std::io::{self, Write};

use thiserror::Error;

use crate::matpoly::{MatrixPolynomial, NormMajorant};

/// Relative slack allowed before a broken chain inequality `v_{k_i} <=
/// u_{k_{i+1}}` is treated as an internal error rather than roundoff.
const CHAIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TropicalError {
    /// Fewer than two points, non-increasing abscissas, or endpoint
    /// ordinates that are not finite.
    #[error("degenerate polygon input: {0}")]
    DegenerateInput(String),
    /// No abscissa has an invertible coefficient with `u < v`.
    #[error("no abscissa admits u < v bounds")]
    EmptyVertexSet,
    /// The ordering `v_{k_i} <= u_{k_{i+1}}` failed beyond roundoff slack;
    /// this indicates an internal inconsistency, not bad input.
    #[error("chain inequality violated between {lower_kappa} and {upper_kappa}: v={v} > u={u}")]
    ChainViolation {
        lower_kappa: usize,
        upper_kappa: usize,
        v: f64,
        u: f64,
    },
}

/// Upper convex hull of points with strictly increasing integer abscissas,
/// returned as indices into the input slice. Points with ordinate `-inf`
/// are skipped; collinear interior points are excluded, so consecutive
/// hull slopes strictly decrease.
pub fn upper_hull(points: &[(usize, f64)]) -> Result<Vec<usize>, TropicalError> {
    if points.len() < 2 {
        return Err(TropicalError::DegenerateInput(
            "need at least two points".into(),
        ));
    }
    for w in points.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(TropicalError::DegenerateInput(
                "abscissas must be strictly increasing".into(),
            ));
        }
    }
    let first = points.first().unwrap();
    let last = points.last().unwrap();
    if !first.1.is_finite() || !last.1.is_finite() {
        return Err(TropicalError::DegenerateInput(
            "endpoint ordinates must be finite".into(),
        ));
    }
    if points.iter().any(|p| p.1.is_nan() || p.1 == f64::INFINITY) {
        return Err(TropicalError::DegenerateInput(
            "ordinates must be finite or -inf".into(),
        ));
    }

    let mut hull: Vec<usize> = Vec::new();
    for (idx, &(x, y)) in points.iter().enumerate() {
        if y == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (x1, y1) = points[hull[hull.len() - 2]];
            let (x2, y2) = points[hull[hull.len() - 1]];
            // Clockwise (strictly convex-from-above) turns keep the middle
            // point; collinear or counter-clockwise drops it.
            let cross = (x2 as f64 - x1 as f64) * (y - y1) - (y2 - y1) * (x as f64 - x1 as f64);
            if cross < 0.0 {
                break;
            }
            hull.pop();
        }
        hull.push(idx);
    }
    Ok(hull)
}

/// The Newton polygon of a majorant: hull vertex abscissas plus the
/// tropical root and multiplicity of every edge.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolygon {
    /// Hull vertex abscissas, strictly increasing, starting at 0 and
    /// ending at the degree.
    pub vertices: Vec<usize>,
    /// Tropical roots, one per edge, strictly increasing.
    pub radii: Vec<f64>,
    /// Edge multiplicities; they sum to the degree.
    pub multiplicities: Vec<usize>,
}

impl NewtonPolygon {
    pub fn num_edges(&self) -> usize {
        self.radii.len()
    }

    /// Sum of the multiplicities, i.e. the polynomial degree.
    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

/// Builds the Newton polygon of the weights `w_0..w_n`.
///
/// Radii are computed in log space, `exp((ln w_a - ln w_b)/(b - a))`, so
/// extreme weight ratios never overflow.
pub fn tropical_roots(w: &NormMajorant) -> Result<NewtonPolygon, TropicalError> {
    let n = w.weights.len();
    if n < 2 {
        return Err(TropicalError::DegenerateInput(
            "polynomial must have positive degree".into(),
        ));
    }
    if w.weights.iter().any(|&x| x < 0.0 || x.is_nan() || x == f64::INFINITY) {
        return Err(TropicalError::DegenerateInput(
            "weights must be finite and nonnegative".into(),
        ));
    }
    let points: Vec<(usize, f64)> = w
        .weights
        .iter()
        .enumerate()
        .map(|(i, &wi)| (i, if wi == 0.0 { f64::NEG_INFINITY } else { wi.ln() }))
        .collect();
    let vertices = upper_hull(&points)?;

    let mut radii = Vec::with_capacity(vertices.len() - 1);
    let mut multiplicities = Vec::with_capacity(vertices.len() - 1);
    for pair in vertices.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let gap = (b - a) as f64;
        radii.push(((points[a].1 - points[b].1) / gap).exp());
        multiplicities.push(b - a);
    }
    Ok(NewtonPolygon {
        vertices,
        radii,
        multiplicities,
    })
}

/// The radius bounds at one abscissa:
/// `u_k = max_{i<k} ||A_k^{-1} A_i||^{1/(k-i)}` (0 for `k = 0`) and
/// `v_k = min_{i>k} ||A_k^{-1} A_i||^{1/(k-i)}` (`+inf` for `k = n`).
/// `defined` is false when `A_k` is singular and the bounds do not exist.
#[derive(Debug, Clone, Copy)]
pub struct UVBounds {
    pub kappa: usize,
    pub u: f64,
    pub v: f64,
    pub defined: bool,
}

/// Computes the `u/v` bounds at abscissa `kappa`.
pub fn uv_bounds(p: &MatrixPolynomial, kappa: usize) -> UVBounds {
    let n = p.degree();
    assert!(kappa <= n);
    let c = match p.relative_norms(kappa) {
        Some(c) => c,
        None => {
            return UVBounds {
                kappa,
                u: f64::NAN,
                v: f64::NAN,
                defined: false,
            }
        }
    };
    let mut u = 0.0f64;
    for i in 0..kappa {
        if c[i] > 0.0 {
            let cand = (c[i].ln() / (kappa - i) as f64).exp();
            u = u.max(cand);
        }
    }
    let mut v = f64::INFINITY;
    for i in kappa + 1..=n {
        if c[i] > 0.0 {
            let cand = (-c[i].ln() / (i - kappa) as f64).exp();
            v = v.min(cand);
        }
    }
    UVBounds {
        kappa,
        u,
        v,
        defined: true,
    }
}

/// The abscissas whose Pellet disk can exist: invertible coefficient and
/// `u < v`, in increasing order.
#[derive(Debug, Clone)]
pub struct VertexSet {
    pub members: Vec<UVBounds>,
}

impl VertexSet {
    pub fn kappas(&self) -> Vec<usize> {
        self.members.iter().map(|b| b.kappa).collect()
    }
}

/// Collects the vertex set and verifies the chain ordering
/// `u_{k_1} < v_{k_1} <= u_{k_2} < v_{k_2} <= ...` that makes the members'
/// annuli nest.
pub fn vertex_set(p: &MatrixPolynomial) -> Result<VertexSet, TropicalError> {
    let mut members = Vec::new();
    for kappa in 0..=p.degree() {
        let b = uv_bounds(p, kappa);
        if b.defined && b.u < b.v {
            members.push(b);
        }
    }
    if members.is_empty() {
        return Err(TropicalError::EmptyVertexSet);
    }
    for pair in members.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if lo.v > hi.u * (1.0 + CHAIN_SLACK) {
            return Err(TropicalError::ChainViolation {
                lower_kappa: lo.kappa,
                upper_kappa: hi.kappa,
                v: lo.v,
                u: hi.u,
            });
        }
    }
    Ok(VertexSet { members })
}

/// Writes the polygon as tab-separated rows `i  log_w  vertex` for
/// plotting: ordinate of each point and a 0/1 hull-membership flag.
pub fn write_tsv<W: Write>(
    w: &NormMajorant,
    polygon: &NewtonPolygon,
    out: &mut W,
) -> io::Result<()> {
    for (i, &wi) in w.weights.iter().enumerate() {
        let log_w = if wi == 0.0 { f64::NEG_INFINITY } else { wi.ln() };
        let is_vertex = polygon.vertices.contains(&i) as u8;
        writeln!(out, "{}\t{}\t{}", i, log_w, is_vertex)?;
    }
    Ok(())
}
