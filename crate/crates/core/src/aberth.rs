//! Simultaneous eigenvalue refinement by the Ehrlich-Aberth iteration.
//!
//! Each of the `m n` approximations moves by
//!
//! `x_i <- x_i - N / (1 - N * S_i)`,   `S_i = sum_{j != i} 1/(x_i - x_j)`,
//!
//! where `N = 1 / trace(A(x_i)^{-1} A'(x_i))` is the Newton correction of
//! `det A` computed without forming the determinant. A component stops
//! when `A(x_i)` is numerically singular (`rcond <= delta`) or the
//! correction is negligible (`|N| <= eps |x_i|`); stopped components keep
//! repelling the active ones through `S_i`.
//!
//! When the leading coefficient is singular some eigenvalues are at
//! infinity: the solver then iterates on the reversed polynomial
//! `y^n A(1/y)`, maps finite results back through `lambda = 1/y`, and
//! flags the components that converged to `y ~ 0` as infinite.

use num_complex::Complex64;
use thiserror::Error;

use crate::init::{initial_points, InitError, InitStrategy};
use crate::kernels::lu_factor;
use crate::matpoly::MatrixPolynomial;
use crate::tropical::{tropical_roots, TropicalError};

/// Two points closer than this are treated as colliding; the affected
/// component is perturbed once and the sweep retried.
const COLLISION_TOL: f64 = 1e-300;
/// Relative size of the one-time collision perturbation.
const PERTURB_REL: f64 = 1e-10;

/// Order in which a sweep visits the components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOrder {
    /// Each update sees the moves already made in this sweep (the
    /// default; converges faster).
    Sequential,
    /// All updates are computed from the state at the start of the sweep.
    Simultaneous,
}

/// Why a component stopped iterating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// `|N| <= eps |x|`: the correction is below the accuracy target.
    NewtonSmall,
    /// `rcond(A(x)) <= delta`: the polynomial is numerically singular at
    /// `x`, so `x` is an eigenvalue to working precision.
    RcondSmall,
    /// Still active when the sweep budget ran out.
    NotConverged,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Relative Newton-correction stop threshold.
    pub eps: f64,
    /// Reciprocal-condition stop threshold.
    pub delta: f64,
    pub max_sweeps: usize,
    pub order: SweepOrder,
    /// In reversed mode, a component that stopped on `RcondSmall` with
    /// `|y|` at most this is reported as an infinite eigenvalue.
    pub inf_threshold: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            eps: 1e-13,
            delta: 1e-14,
            max_sweeps: 5000,
            order: SweepOrder::Sequential,
            inf_threshold: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    /// All `m n` eigenvalue approximations of the input (plus `m` exact
    /// zeros for every power of `x` dividing the polynomial). Components
    /// flagged in `infinite` hold a positive-infinity marker.
    pub eigenvalues: Vec<Complex64>,
    /// Sweeps executed.
    pub sweeps: usize,
    /// Whether every component stopped before the budget ran out.
    pub converged: bool,
    pub stop_reasons: Vec<StopReason>,
    pub infinite: Vec<bool>,
    /// Per-component iteration counts: the sweep on which each
    /// component froze (total sweeps for unconverged ones, 0 for the
    /// appended exact zeros).
    pub nu: Vec<usize>,
    /// Largest per-component sweep count.
    pub simul_it: usize,
    /// Mean per-component sweep count (over iterated components).
    pub aver_it: f64,
    /// Whether the reversed polynomial was iterated.
    pub used_reversal: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("components {i} and {j} collided twice; starting points are degenerate")]
    Collision { i: usize, j: usize },
    #[error(transparent)]
    Tropical(#[from] TropicalError),
    #[error(transparent)]
    Init(#[from] InitError),
}

struct Component {
    x: Complex64,
    frozen: Option<StopReason>,
    /// Sweeps this component was active for.
    nu: usize,
    perturbed: bool,
}

/// `sum_{j != i} 1/(x_i - x_j)`; `Err(j)` reports a collision partner.
fn repulsion_sum(comps: &[Component], snapshot: Option<&[Complex64]>, i: usize) -> Result<Complex64, usize> {
    let xi = comps[i].x;
    let mut s = Complex64::new(0.0, 0.0);
    for j in 0..comps.len() {
        if j == i {
            continue;
        }
        let xj = snapshot.map_or(comps[j].x, |snap| snap[j]);
        let d = xi - xj;
        if d.norm() < COLLISION_TOL {
            return Err(j);
        }
        s += Complex64::new(1.0, 0.0) / d;
    }
    Ok(s)
}

/// Updates component `i`; `snapshot` is `Some` for simultaneous sweeps.
fn visit(
    p: &MatrixPolynomial,
    comps: &mut [Component],
    snapshot: Option<&[Complex64]>,
    i: usize,
    sweep: usize,
    opts: &SolveOptions,
) -> Result<(), SolveError> {
    loop {
        let xi = comps[i].x;
        let nc = p.newton_correction(xi);
        if nc.rcond <= opts.delta {
            comps[i].frozen = Some(StopReason::RcondSmall);
            comps[i].nu = sweep;
            return Ok(());
        }
        if !nc.trace_underflow {
            let step = nc.value;
            if step.norm() <= opts.eps * xi.norm() {
                comps[i].frozen = Some(StopReason::NewtonSmall);
                comps[i].nu = sweep;
                return Ok(());
            }
        }
        let s = match repulsion_sum(comps, snapshot, i) {
            Ok(s) => s,
            Err(j) => {
                if comps[i].perturbed {
                    return Err(SolveError::Collision { i, j });
                }
                comps[i].perturbed = true;
                let shift = PERTURB_REL * (1.0 + xi.norm());
                comps[i].x = xi + Complex64::new(shift, 0.0);
                continue;
            }
        };
        if nc.trace_underflow {
            // The Newton correction overflowed (derivative trace
            // underflow); in the N -> infinity limit the update tends to
            // x + 1/S. With no other components there is nothing to do.
            if s.norm() > 0.0 {
                comps[i].x = xi + Complex64::new(1.0, 0.0) / s;
            }
            return Ok(());
        }
        let n = nc.value;
        let denom = Complex64::new(1.0, 0.0) - n * s;
        comps[i].x = if denom.norm() == 0.0 {
            xi - n
        } else {
            xi - n / denom
        };
        return Ok(());
    }
}

/// Runs the raw iteration on `p` exactly as given, from explicit
/// starting points. No reversal handling and no zero-padding: the result
/// has one entry per starting point and `infinite` is all false.
pub fn iterate(
    p: &MatrixPolynomial,
    starts: &[Complex64],
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    iterate_observed(p, starts, opts, |_, _, _| {})
}

/// [`iterate`] with a per-sweep observer `(sweep, points, active)`.
pub fn iterate_observed(
    p: &MatrixPolynomial,
    starts: &[Complex64],
    opts: &SolveOptions,
    mut observer: impl FnMut(usize, &[Complex64], usize),
) -> Result<SolveResult, SolveError> {
    let mut comps: Vec<Component> = starts
        .iter()
        .map(|&x| Component {
            x,
            frozen: None,
            nu: 0,
            perturbed: false,
        })
        .collect();

    let mut sweeps = 0;
    for sweep in 1..=opts.max_sweeps {
        if comps.iter().all(|c| c.frozen.is_some()) {
            break;
        }
        sweeps = sweep;
        let snapshot: Option<Vec<Complex64>> = match opts.order {
            SweepOrder::Sequential => None,
            SweepOrder::Simultaneous => Some(comps.iter().map(|c| c.x).collect()),
        };
        for i in 0..comps.len() {
            if comps[i].frozen.is_some() {
                continue;
            }
            visit(p, &mut comps, snapshot.as_deref(), i, sweep, opts)?;
        }
        let active = comps.iter().filter(|c| c.frozen.is_none()).count();
        let xs: Vec<Complex64> = comps.iter().map(|c| c.x).collect();
        observer(sweep, &xs, active);
    }

    let converged = comps.iter().all(|c| c.frozen.is_some());
    for c in comps.iter_mut() {
        if c.frozen.is_none() {
            c.nu = sweeps;
        }
    }
    let count = comps.len().max(1);
    let aver_it = comps.iter().map(|c| c.nu as f64).sum::<f64>() / count as f64;
    let simul_it = comps.iter().map(|c| c.nu).max().unwrap_or(0);
    Ok(SolveResult {
        eigenvalues: comps.iter().map(|c| c.x).collect(),
        sweeps,
        converged,
        stop_reasons: comps
            .iter()
            .map(|c| c.frozen.unwrap_or(StopReason::NotConverged))
            .collect(),
        infinite: vec![false; comps.len()],
        nu: comps.iter().map(|c| c.nu).collect(),
        simul_it,
        aver_it,
        used_reversal: false,
    })
}

/// Full pipeline: picks starting points by `strategy`, iterates (on the
/// reversed polynomial when the leading coefficient is singular — unless
/// the trailing one is singular too, in which case reversing buys
/// nothing), maps back, and appends the exact zero eigenvalues stripped
/// during normalization.
pub fn solve(
    p: &MatrixPolynomial,
    strategy: &InitStrategy,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    solve_observed(p, strategy, opts, |_, _, _| {})
}

/// [`solve`] with a per-sweep observer `(sweep, points, active)`.
pub fn solve_observed(
    p: &MatrixPolynomial,
    strategy: &InitStrategy,
    opts: &SolveOptions,
    observer: impl FnMut(usize, &[Complex64], usize),
) -> Result<SolveResult, SolveError> {
    let m = p.size();
    let n = p.degree();
    let zeros = m * p.stripped_power();

    if n == 0 {
        return Ok(SolveResult {
            eigenvalues: vec![Complex64::new(0.0, 0.0); zeros],
            sweeps: 0,
            converged: true,
            stop_reasons: vec![StopReason::RcondSmall; zeros],
            infinite: vec![false; zeros],
            nu: vec![0; zeros],
            simul_it: 0,
            aver_it: 0.0,
            used_reversal: false,
        });
    }

    let leading_singular = lu_factor(p.coeff(n)).is_singular();
    let trailing_singular = lu_factor(p.coeff(0)).is_singular();
    let use_reversal = leading_singular && !trailing_singular;
    let work = if use_reversal { p.reversal() } else { p.clone() };

    let polygon = tropical_roots(&work.norm_majorant())?;
    let starts = initial_points(&work, &polygon, strategy)?;
    let mut result = iterate_observed(&work, &starts, opts, observer)?;
    result.used_reversal = use_reversal;

    if use_reversal {
        for i in 0..result.eigenvalues.len() {
            let y = result.eigenvalues[i];
            let at_infinity = result.stop_reasons[i] == StopReason::RcondSmall
                && y.norm() <= opts.inf_threshold;
            result.infinite[i] = at_infinity;
            result.eigenvalues[i] = if at_infinity {
                Complex64::new(f64::INFINITY, 0.0)
            } else {
                Complex64::new(1.0, 0.0) / y
            };
        }
    }

    result.eigenvalues.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(zeros));
    result
        .stop_reasons
        .extend(std::iter::repeat(StopReason::RcondSmall).take(zeros));
    result.infinite.extend(std::iter::repeat(false).take(zeros));
    result.nu.extend(std::iter::repeat(0).take(zeros));
    Ok(result)
}
