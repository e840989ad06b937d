//! Generalized Pellet bounds and tropical localization.
//!
//! For a normalized matrix polynomial and each abscissa `k` with
//! invertible `A_k`, the Pellet equation
//!
//! `x^k = sum_{i != k} ||A_k^{-1} A_i|| x^i`
//!
//! has zero, one (tangency), or two positive roots `s_k <= t_k` when
//! `0 < k < n`, and exactly one positive root at the endpoints `k = 0`
//! (an inner exclusion disk) and `k = n` (an outer exclusion region).
//! The closed disk of radius `s_k` then holds exactly `m k` eigenvalues
//! and the open annulus `(s_k, t_k)` holds none, which assembles into
//! inclusion annuli with exact counts between consecutive solvable
//! abscissas.
//!
//! When the tropical roots of the majorant are strongly separated the
//! polygon alone localizes eigenvalue groups: with the constants
//! `f = 1/delta_max`, `g = r_0`, and `g' = 2 + sqrt(2)` from the
//! `delta_+` analysis, an edge whose neighbor ratios fall below `1/f`
//! confines `m * multiplicity` eigenvalues to `(r/g, g r)` (endpoint
//! edges tighten one side to `g'`). [`refine_annulus`] inverts
//! `delta_+` to shrink those annuli further when the actual ratios are
//! known.

use std::f64::consts::SQRT_2;

use thiserror::Error;

use crate::kernels::{lu_factor, rcond_estimate, spectral_norm_or_frobenius};
use crate::matpoly::MatrixPolynomial;
use crate::tropical::NewtonPolygon;

/// Convergence target for posynomial roots, relative in the root.
const ROOT_RTOL: f64 = 1e-14;
/// A posynomial minimum within this bound of zero is declared a tangency.
const TANGENT_TOL: f64 = 1e-13;
/// Bisection target for inverting `delta_+`.
const REFINE_TOL: f64 = 1e-10;
/// Coefficient condition estimate beyond which localization warns that
/// the scaled-unitary constants may not apply.
const CONDITION_WARN: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PelletError {
    /// Coefficients violate the posynomial preconditions.
    #[error("invalid posynomial: {0}")]
    BadInput(String),
    /// No abscissa produced a usable Pellet interval.
    #[error("no Pellet bounds exist for this polynomial")]
    NoBounds,
    /// Argument outside a function's domain.
    #[error("domain error: {0}")]
    DomainError(String),
}

/// Outcome of one Pellet equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PelletStatus {
    /// Interior abscissa with roots `s <= t` (equal on tangency).
    TwoRoots,
    /// Endpoint abscissa: `k = 0` stores the root in `t` with `s = 0`,
    /// `k = n` stores it in `s` with `t = +inf`.
    SingleRootEndpoint,
    /// The equation has no positive roots.
    NoRoots,
    /// `A_k` is singular; the equation is undefined.
    UndefinedSingular,
}

/// Roots of the Pellet equation at one abscissa. `s` and `t` are
/// meaningful only for the two root-bearing statuses and are NaN
/// otherwise.
#[derive(Debug, Clone, Copy)]
pub struct PelletInterval {
    pub kappa: usize,
    pub s: f64,
    pub t: f64,
    pub status: PelletStatus,
}

/// A closed annulus `inner <= |x| <= outer` (open when used as an
/// exclusion region).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
}

/// An inclusion annulus carrying its exact eigenvalue count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InclusionAnnulus {
    pub inner: f64,
    pub outer: f64,
    pub count: usize,
}

/// Assembled inclusion/exclusion annuli.
#[derive(Debug, Clone)]
pub struct AnnuliReport {
    /// Abscissas with solvable Pellet equations, increasing.
    pub solvable: Vec<usize>,
    /// Closed annuli `[t_{h_{i-1}}, s_{h_i}]` with exact counts.
    pub inclusion: Vec<InclusionAnnulus>,
    /// Open annuli `(s_h, t_h)` that contain no eigenvalues.
    pub exclusion: Vec<Annulus>,
    /// Accounting for eigenvalues outside the listed annuli.
    pub note: String,
}

// ---------------------------------------------------------------------------
// Posynomial root solving in log space.
// ---------------------------------------------------------------------------

/// `phi(t) = log sum_k exp(logc_k + slope_k t)`, the log of the Pellet
/// right-hand side over `x^kappa` at `x = e^t`. Convex; its sign changes
/// are the Pellet roots.
struct LogPosynomial {
    /// `(slope, log coefficient)` per active term.
    terms: Vec<(f64, f64)>,
}

impl LogPosynomial {
    fn phi(&self, t: f64) -> f64 {
        let m = self
            .terms
            .iter()
            .map(|&(s, lc)| lc + s * t)
            .fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = self.terms.iter().map(|&(s, lc)| (lc + s * t - m).exp()).sum();
        m + sum.ln()
    }

    /// `(phi, phi', phi'')`; the derivatives are the weighted mean and
    /// variance of the slopes, so `phi'' >= 0`.
    fn phi_all(&self, t: f64) -> (f64, f64, f64) {
        let m = self
            .terms
            .iter()
            .map(|&(s, lc)| lc + s * t)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        let mut mean = 0.0;
        let mut second = 0.0;
        for &(s, lc) in &self.terms {
            let w = (lc + s * t - m).exp();
            sum += w;
            mean += s * w;
            second += s * s * w;
        }
        mean /= sum;
        second /= sum;
        (m + sum.ln(), mean, (second - mean * mean).max(0.0))
    }

    fn dphi(&self, t: f64) -> f64 {
        self.phi_all(t).1
    }
}

/// Finds the root of `phi` inside `[a, b]` with `sign(phi(a)) != sign(phi(b))`,
/// by bisection with Newton acceleration.
fn bracketed_root(p: &LogPosynomial, mut a: f64, mut b: f64) -> f64 {
    let mut fa = p.phi(a);
    debug_assert!(fa.signum() != p.phi(b).signum() || fa == 0.0);
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let (fx, dfx, _) = p.phi_all(x);
        if fx == 0.0 {
            return x;
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let width = b - a;
        if width <= ROOT_RTOL * (1.0 + x.abs()) {
            break;
        }
        let newton = x - fx / dfx;
        x = if dfx != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
    }
    x
}

/// Expands from `start` in direction `dir` until `pred` holds; the
/// posynomial tails are exponential, so doubling terminates quickly.
fn expand_until(start: f64, dir: f64, mut pred: impl FnMut(f64) -> bool) -> f64 {
    let mut step = 1.0;
    let mut t = start + dir * step;
    for _ in 0..400 {
        if pred(t) {
            return t;
        }
        step *= 2.0;
        t = start + dir * step;
    }
    t
}

/// Solves the Pellet equation `x^kappa = sum_{i != kappa} c_i x^i` for
/// positive roots. `c[kappa]` is ignored (the equation is normalized by
/// the own coefficient). Preconditions: some `c_i > 0` with `i != kappa`;
/// `c_0 > 0` when `kappa > 0`; `c_n > 0` when `kappa < n`.
pub fn posynomial_roots(c: &[f64], kappa: usize) -> Result<PelletInterval, PelletError> {
    let n = c.len().checked_sub(1).ok_or_else(|| PelletError::BadInput("empty coefficients".into()))?;
    if kappa > n {
        return Err(PelletError::BadInput(format!("kappa {kappa} exceeds degree {n}")));
    }
    for (i, &ci) in c.iter().enumerate() {
        if i != kappa && (ci < 0.0 || !ci.is_finite()) {
            return Err(PelletError::BadInput(format!("c[{i}] = {ci} must be finite and >= 0")));
        }
    }
    if kappa > 0 && c[0] <= 0.0 {
        return Err(PelletError::BadInput("constant coefficient must be positive".into()));
    }
    if kappa < n && c[n] <= 0.0 {
        return Err(PelletError::BadInput("leading coefficient must be positive".into()));
    }
    let terms: Vec<(f64, f64)> = c
        .iter()
        .enumerate()
        .filter(|&(i, &ci)| i != kappa && ci > 0.0)
        .map(|(i, &ci)| (i as f64 - kappa as f64, ci.ln()))
        .collect();
    if terms.is_empty() {
        return Err(PelletError::BadInput("no nonzero coefficient besides kappa".into()));
    }
    let p = LogPosynomial { terms };

    if kappa == 0 {
        // All slopes positive: phi is strictly increasing with a single
        // root, the radius below which no eigenvalues exist.
        let a = expand_until(0.0, -1.0, |t| p.phi(t) < 0.0);
        let b = expand_until(0.0, 1.0, |t| p.phi(t) > 0.0);
        let root = bracketed_root(&p, a, b).exp();
        return Ok(PelletInterval {
            kappa,
            s: 0.0,
            t: root,
            status: PelletStatus::SingleRootEndpoint,
        });
    }
    if kappa == n {
        // All slopes negative: one root, the radius beyond which no
        // eigenvalues exist.
        let a = expand_until(0.0, -1.0, |t| p.phi(t) > 0.0);
        let b = expand_until(0.0, 1.0, |t| p.phi(t) < 0.0);
        let root = bracketed_root(&p, a, b).exp();
        return Ok(PelletInterval {
            kappa,
            s: root,
            t: f64::INFINITY,
            status: PelletStatus::SingleRootEndpoint,
        });
    }

    // Interior abscissa: phi is convex with phi -> +inf on both sides.
    // Locate the minimizer first, then a root on each descending flank.
    let lo = expand_until(0.0, -1.0, |t| p.dphi(t) < 0.0);
    let hi = expand_until(0.0, 1.0, |t| p.dphi(t) > 0.0);
    let mut a = lo;
    let mut b = hi;
    for _ in 0..200 {
        if b - a <= ROOT_RTOL * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        let mid = 0.5 * (a + b);
        if p.dphi(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let mut t_min = 0.5 * (a + b);
    for _ in 0..4 {
        let (_, d1, d2) = p.phi_all(t_min);
        if d2 <= 0.0 {
            break;
        }
        let next = t_min - d1 / d2;
        if next.is_finite() && next > lo && next < hi {
            t_min = next;
        } else {
            break;
        }
    }
    let min_value = p.phi(t_min);

    if min_value > TANGENT_TOL {
        return Ok(PelletInterval {
            kappa,
            s: f64::NAN,
            t: f64::NAN,
            status: PelletStatus::NoRoots,
        });
    }
    if min_value.abs() <= TANGENT_TOL {
        let r = t_min.exp();
        return Ok(PelletInterval {
            kappa,
            s: r,
            t: r,
            status: PelletStatus::TwoRoots,
        });
    }

    let left = expand_until(t_min, -1.0, |t| p.phi(t) > 0.0);
    let right = expand_until(t_min, 1.0, |t| p.phi(t) > 0.0);
    let s = bracketed_root(&p, left, t_min).exp();
    let t = bracketed_root(&p, t_min, right).exp();
    Ok(PelletInterval {
        kappa,
        s,
        t,
        status: PelletStatus::TwoRoots,
    })
}

/// Solves the Pellet equation at every abscissa of `p`. Abscissas with
/// singular coefficients come back as `UndefinedSingular`; a degree-zero
/// polynomial has no equations and yields an empty list.
pub fn matrix_pellet(p: &MatrixPolynomial) -> Result<Vec<PelletInterval>, PelletError> {
    let n = p.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut intervals = Vec::with_capacity(n + 1);
    for kappa in 0..=n {
        match p.relative_norms(kappa) {
            None => intervals.push(PelletInterval {
                kappa,
                s: f64::NAN,
                t: f64::NAN,
                status: PelletStatus::UndefinedSingular,
            }),
            Some(c) => intervals.push(posynomial_roots(&c, kappa)?),
        }
    }
    Ok(intervals)
}

/// Assembles inclusion/exclusion annuli from the per-abscissa intervals
/// for an `m x m` polynomial of degree `n`.
pub fn annuli_report(
    m: usize,
    n: usize,
    intervals: &[PelletInterval],
) -> Result<AnnuliReport, PelletError> {
    let solvable: Vec<&PelletInterval> = intervals
        .iter()
        .filter(|iv| {
            matches!(
                iv.status,
                PelletStatus::TwoRoots | PelletStatus::SingleRootEndpoint
            )
        })
        .collect();
    if solvable.is_empty() {
        return Err(PelletError::NoBounds);
    }

    let mut inclusion = Vec::new();
    for pair in solvable.windows(2) {
        let (prev, next) = (pair[0], pair[1]);
        inclusion.push(InclusionAnnulus {
            inner: prev.t,
            outer: next.s,
            count: m * (next.kappa - prev.kappa),
        });
    }
    let exclusion: Vec<Annulus> = solvable
        .iter()
        .filter(|iv| iv.t > iv.s)
        .map(|iv| Annulus {
            inner: iv.s,
            outer: iv.t,
        })
        .collect();

    let first = solvable.first().unwrap();
    let last = solvable.last().unwrap();
    let mut notes = Vec::new();
    if first.kappa > 0 {
        notes.push(format!(
            "disk |x| <= {:.6e} holds {} eigenvalues (origin included)",
            first.s,
            m * first.kappa
        ));
    } else {
        notes.push(format!("no eigenvalues with |x| < {:.6e}", first.t));
    }
    if last.kappa < n {
        notes.push(format!(
            "region |x| >= {:.6e} holds {} eigenvalues (infinite ones included)",
            last.t,
            m * (n - last.kappa)
        ));
    } else {
        notes.push(format!("no eigenvalues with |x| > {:.6e}", last.s));
    }

    Ok(AnnuliReport {
        solvable: solvable.iter().map(|iv| iv.kappa).collect(),
        inclusion,
        exclusion,
        note: notes.join("; "),
    })
}

// ---------------------------------------------------------------------------
// Tropical localization.
// ---------------------------------------------------------------------------

/// Constants of the separation analysis. `delta_max` is the largest
/// neighbor ratio the theory tolerates, `f` its reciprocal, `r_0` the
/// ratio at which the tolerance is attained, `g = r_0` the generic
/// annulus factor, and `g' = 2 + sqrt(2)` the tighter factor available on
/// endpoint edges.
#[derive(Debug, Clone, Copy)]
pub struct LocalizationConstants {
    pub f: f64,
    pub g: f64,
    pub g_prime: f64,
    pub delta_max: f64,
    pub r0: f64,
}

impl LocalizationConstants {
    /// Constants for matrix polynomials with (approximately) unitary
    /// coefficient directions.
    pub fn matrix() -> Self {
        let s3 = 3.0f64.sqrt();
        let delta_max = (7.0 + 3.0 * s3) / 2.0 - (18.0 + 21.0 * s3 / 2.0).sqrt();
        let r0 = (3.0 + s3) / 2.0 + (2.0 + 7.0 * s3 / 6.0).sqrt();
        LocalizationConstants {
            f: 1.0 / delta_max,
            g: r0,
            g_prime: 2.0 + SQRT_2,
            delta_max,
            r0,
        }
    }

    /// Classical scalar-polynomial constants (`m = 1`): ratio threshold
    /// 1/9 and annulus factor 3 on every edge.
    pub fn scalar() -> Self {
        LocalizationConstants {
            f: 9.0,
            g: 3.0,
            g_prime: 3.0,
            delta_max: 1.0 / 9.0,
            r0: 3.0,
        }
    }
}

/// One localized eigenvalue group.
#[derive(Debug, Clone, Copy)]
pub struct LocalizedAnnulus {
    /// 1-based edge index in the polygon.
    pub edge: usize,
    /// The edge's tropical root.
    pub radius: f64,
    pub inner: f64,
    pub outer: f64,
    /// `m * multiplicity`: eigenvalues in the annulus when applicable.
    pub count: usize,
    /// Whether the required neighbor separations hold for this edge.
    pub applicable: bool,
}

#[derive(Debug, Clone)]
pub struct LocalizationReport {
    pub annuli: Vec<LocalizedAnnulus>,
    pub constants: LocalizationConstants,
    pub warnings: Vec<String>,
}

/// Localizes eigenvalue groups directly from the Newton polygon.
///
/// Edge `i` (1-based) is applicable when its neighbor ratios satisfy
/// `r_{i-1}/r_i < 1/f` and `r_i/r_{i+1} < 1/f`; endpoint edges only need
/// the one ratio they have, and get the tighter `g'` factor on their
/// outward side. Inapplicable edges are still listed with their would-be
/// annuli and `applicable = false`.
///
/// The constants assume coefficients that are scalar multiples of
/// well-conditioned matrices; a warning is attached for every coefficient
/// whose condition estimate exceeds 1e3.
pub fn tropical_localize(
    p: &MatrixPolynomial,
    polygon: &NewtonPolygon,
    constants: &LocalizationConstants,
) -> LocalizationReport {
    let m = p.size();
    let q = polygon.num_edges();
    let threshold = 1.0 / constants.f;

    let mut annuli = Vec::with_capacity(q);
    for i in 1..=q {
        let r = polygon.radii[i - 1];
        let left_ok = i == 1 || polygon.radii[i - 2] / r < threshold;
        let right_ok = i == q || r / polygon.radii[i] < threshold;
        let inner_factor = if i == 1 { constants.g_prime } else { constants.g };
        let outer_factor = if i == q { constants.g_prime } else { constants.g };
        annuli.push(LocalizedAnnulus {
            edge: i,
            radius: r,
            inner: r / inner_factor,
            outer: r * outer_factor,
            count: m * polygon.multiplicities[i - 1],
            applicable: left_ok && right_ok,
        });
    }

    let mut warnings = Vec::new();
    for (i, a) in p.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let f = lu_factor(a);
        let (norm, _) = spectral_norm_or_frobenius(a);
        let rc = rcond_estimate(&f, norm);
        if rc == 0.0 || 1.0 / rc > CONDITION_WARN {
            let cond = if rc == 0.0 { f64::INFINITY } else { 1.0 / rc };
            warnings.push(format!(
                "coefficient {i} has condition estimate {cond:.2e}; separation constants assume well-conditioned directions"
            ));
        }
    }

    LocalizationReport {
        annuli,
        constants: *constants,
        warnings,
    }
}

// ---------------------------------------------------------------------------
// delta_+ refinement.
// ---------------------------------------------------------------------------

/// `delta_+(r) = (-c(r) + (r-1) sqrt(c(r))) / (r (2r - 1))` with
/// `c(r) = r^2 - 4r + 2`, defined for `r > 2 + sqrt(2)`.
///
/// This is the largest neighbor ratio for which an annulus factor `r`
/// still isolates a group; it rises from 0 to `delta_max ~ 0.082552` at
/// `r_0 ~ 4.3712` and decreases beyond.
pub fn delta_plus(r: f64) -> Result<f64, PelletError> {
    let boundary = 2.0 + SQRT_2;
    if !(r > boundary) {
        return Err(PelletError::DomainError(format!(
            "delta_plus requires r > 2 + sqrt(2), got {r}"
        )));
    }
    let c = r * r - 4.0 * r + 2.0;
    Ok((-c + (r - 1.0) * c.sqrt()) / (r * (2.0 * r - 1.0)))
}

/// Inverts `delta_+` on its increasing branch: the smallest
/// `r in (2 + sqrt(2), r_0]` with `delta_+(r) = target`.
fn invert_delta_plus(target: f64) -> Result<f64, PelletError> {
    let consts = LocalizationConstants::matrix();
    if !(target > 0.0) || target >= consts.delta_max {
        return Err(PelletError::DomainError(format!(
            "ratio {target} outside (0, delta_max = {})",
            consts.delta_max
        )));
    }
    let mut lo = 2.0 + SQRT_2;
    let mut hi = consts.r0;
    // delta_+ -> 0 at the left boundary and delta_max at r_0, increasing
    // in between, so plain bisection is safe.
    while hi - lo > REFINE_TOL {
        let mid = 0.5 * (lo + hi);
        if delta_plus(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Shrinks the annulus around a tropical root `r_i` using the actual
/// neighbor ratios: with `delta = r_i/r_{i+1}` and `epsilon =
/// r_{i-1}/r_i`, both below `delta_max`, the annulus
/// `(r_i / r_in, r_i * r_out)` with `delta_+(r_out) = delta` and
/// `delta_+(r_in) = epsilon` still holds the group.
pub fn refine_annulus(delta: f64, epsilon: f64, r_i: f64) -> Result<Annulus, PelletError> {
    if !(r_i > 0.0) || !r_i.is_finite() {
        return Err(PelletError::DomainError(format!(
            "base radius must be positive and finite, got {r_i}"
        )));
    }
    let r_out = invert_delta_plus(delta)?;
    let r_in = invert_delta_plus(epsilon)?;
    Ok(Annulus {
        inner: r_i / r_in,
        outer: r_i * r_out,
    })
}
