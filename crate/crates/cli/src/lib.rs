//! Command-line surface for the matrix-polynomial eigensolver: file
//! I/O, polygon/bound/solve/oracle commands, plot-data emission, and a
//! seeded benchmark generator.

pub mod format;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use format::FormatError;
use polyeig::families::{q_class, random_scaled};
use polyeig::init::{InitError, InitStrategy};
use polyeig::matpoly::MatPolyError;
use polyeig::oracle::OracleError;
use polyeig::pellet::{
    matrix_pellet, refine_annulus, tropical_localize, LocalizationConstants, PelletError,
    PelletStatus,
};
use polyeig::tropical::TropicalError;
use polyeig::{
    annuli_report, companion_eigenvalues, solve, tropical_roots, SolveError, SolveOptions,
    StopReason, SweepOrder,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NO_BOUNDS: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;

/// The benchmark's default scale vector: five widely separated
/// eigenvalue groups over thirty orders of magnitude.
pub const DEFAULT_SIGMA: [f64; 14] = [
    1.0, 3e5, 3e10, 1e15, 0.0, 0.0, 0.0, 0.0, 0.0, 1e40, 0.0, 0.0, 0.0, 1.0,
];

#[derive(Parser)]
#[command(
    name = "polyeig",
    version,
    about = "Eigenvalues of regular matrix polynomials: tropical localization, \
             Pellet-style counted annuli, and Ehrlich-Aberth refinement"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Newton polygon: vertices, tropical roots, multiplicities
    Tropical {
        /// Input polynomial (text format, or JSON with a .json extension)
        file: PathBuf,
        /// Write the log-weight points and hull flags as TSV
        #[arg(long, value_name = "OUT.tsv")]
        plot: Option<PathBuf>,
    },
    /// Print root-free intervals and counted inclusion/exclusion annuli
    Bounds {
        file: PathBuf,
        /// Also localize per-edge annuli assuming scaled-unitary-like
        /// coefficients, with ratio-refined radii
        #[arg(long = "q-class")]
        q_class: bool,
    },
    /// Compute all eigenvalues by Ehrlich-Aberth iteration
    Solve {
        file: PathBuf,
        /// Starting points: newton (tropical circles), circle (one circle),
        /// uv (per-gap bound circles)
        #[arg(long, value_enum, default_value = "newton")]
        init: InitArg,
        /// Circle radius override (only with --init circle)
        #[arg(long)]
        radius: Option<f64>,
        /// Relative Newton-correction stop threshold
        #[arg(long, default_value_t = 1e-13)]
        eps: f64,
        /// Reciprocal-condition stop threshold
        #[arg(long, default_value_t = 1e-14)]
        delta: f64,
        #[arg(long = "max-sweeps", default_value_t = 5000)]
        max_sweeps: usize,
        /// Update order within a sweep
        #[arg(long, value_enum, default_value = "sequential")]
        order: OrderArg,
        /// Emit a machine-readable envelope instead of the table
        #[arg(long)]
        json: bool,
    },
    /// Reference eigenvalues via the block companion linearization
    Oracle {
        file: PathBuf,
        /// Work on the reversed polynomial (for singular leading blocks)
        #[arg(long)]
        reverse: bool,
    },
    /// Generate a seeded instance and compare starting strategies
    Bench {
        #[arg(long, value_enum, default_value = "q")]
        class: ClassArg,
        #[arg(long, default_value_t = 5)]
        m: usize,
        /// Comma-separated scale factors sigma_0..sigma_n (first and last
        /// nonzero); defaults to the built-in five-group vector
        #[arg(long, value_delimiter = ',')]
        sigma: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Strategies to compare (default: newton,circle)
        #[arg(long, value_enum, value_delimiter = ',')]
        strategies: Option<Vec<InitArg>>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitArg {
    /// Circles on the tropical roots, multiplicity-many points each
    Newton,
    /// All points on one circle
    Circle,
    /// Circles on the lower radius bound of each vertex gap
    Uv,
}

impl InitArg {
    fn name(self) -> &'static str {
        match self {
            InitArg::Newton => "newton",
            InitArg::Circle => "circle",
            InitArg::Uv => "uv",
        }
    }

    fn strategy(self, radius: Option<f64>) -> InitStrategy {
        match self {
            InitArg::Newton => InitStrategy::TropicalCircles,
            InitArg::Circle => InitStrategy::UnitCircle { radius },
            InitArg::Uv => InitStrategy::UvCircles,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Sequential,
    Simultaneous,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    /// Scaled random unitary coefficients
    Q,
    /// Scaled random Gaussian coefficients (normalized to unit spectral
    /// norm before scaling)
    RandomScaled,
}

/// An error carrying the process exit code it maps to.
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl CliError {
    fn new(code: i32, msg: impl Into<String>) -> Self {
        CliError { code, msg: msg.into() }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::new(EXIT_PARSE, e.to_string())
    }
}

impl From<TropicalError> for CliError {
    fn from(e: TropicalError) -> Self {
        let code = match e {
            TropicalError::DegenerateInput(_) => EXIT_PARSE,
            _ => EXIT_FAILURE,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<PelletError> for CliError {
    fn from(e: PelletError) -> Self {
        let code = match e {
            PelletError::NoBounds => EXIT_NO_BOUNDS,
            PelletError::BadInput(_) => EXIT_PARSE,
            PelletError::DomainError(_) => EXIT_FAILURE,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<InitError> for CliError {
    fn from(e: InitError) -> Self {
        match e {
            InitError::BadRadius(_) => CliError::new(EXIT_PARSE, e.to_string()),
            InitError::Tropical(t) => t.into(),
            _ => CliError::new(EXIT_FAILURE, e.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Tropical(t) => t.into(),
            SolveError::Init(i) => i.into(),
            other => CliError::new(EXIT_FAILURE, other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::new(EXIT_FAILURE, e.to_string())
    }
}

impl From<MatPolyError> for CliError {
    fn from(e: MatPolyError) -> Self {
        CliError::new(EXIT_PARSE, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(EXIT_FAILURE, e.to_string())
    }
}

/// Parses the process arguments, runs the selected command, and returns
/// the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Tropical { file, plot } => cmd_tropical(&file, plot.as_deref()),
        Command::Bounds { file, q_class } => cmd_bounds(&file, q_class),
        Command::Solve {
            file,
            init,
            radius,
            eps,
            delta,
            max_sweeps,
            order,
            json,
        } => cmd_solve(&file, init, radius, eps, delta, max_sweeps, order, json),
        Command::Oracle { file, reverse } => cmd_oracle(&file, reverse),
        Command::Bench {
            class,
            m,
            sigma,
            seed,
            strategies,
        } => cmd_bench(class, m, sigma, seed, strategies),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            e.code
        }
    }
}

fn cmd_tropical(file: &std::path::Path, plot: Option<&std::path::Path>) -> Result<i32, CliError> {
    let p = format::read_file(file)?;
    let majorant = p.norm_majorant();
    let polygon = tropical_roots(&majorant)?;
    let m = p.size();

    println!(
        "newton polygon: {} vertices, {} edges",
        polygon.vertices.len(),
        polygon.num_edges()
    );
    let verts: Vec<String> = polygon.vertices.iter().map(|k| k.to_string()).collect();
    println!("vertices: {}", verts.join(" "));
    for e in 0..polygon.num_edges() {
        println!(
            "edge {}: k {} -> {}, radius {:.6e}, multiplicity {}, eigenvalues {}",
            e + 1,
            polygon.vertices[e],
            polygon.vertices[e + 1],
            polygon.radii[e],
            polygon.multiplicities[e],
            m * polygon.multiplicities[e]
        );
    }
    if p.stripped_power() > 0 {
        println!(
            "note: input is divisible by x^{}; {} exact zero eigenvalues in addition to the groups above",
            p.stripped_power(),
            m * p.stripped_power()
        );
    }

    if let Some(out) = plot {
        let mut tsv = String::new();
        for (i, &w) in majorant.weights.iter().enumerate() {
            if w > 0.0 {
                let vertex = u8::from(polygon.vertices.contains(&i));
                tsv.push_str(&format!("{i}\t{}\t{vertex}\n", w.ln()));
            }
        }
        std::fs::write(out, tsv)?;
        println!("plot data written to {}", out.display());
    }
    Ok(EXIT_OK)
}

fn fmt_radius(x: f64) -> String {
    if x.is_nan() {
        "-".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x:.6e}")
    }
}

fn cmd_bounds(file: &std::path::Path, q_class: bool) -> Result<i32, CliError> {
    let p = format::read_file(file)?;
    let m = p.size();
    let n = p.degree();
    let intervals = matrix_pellet(&p)?;

    println!("pellet intervals:");
    for iv in &intervals {
        let status = match iv.status {
            PelletStatus::TwoRoots => "two roots",
            PelletStatus::SingleRootEndpoint => "single root",
            PelletStatus::NoRoots => "no positive roots",
            PelletStatus::UndefinedSingular => "undefined (singular coefficient)",
        };
        println!(
            "  kappa {:>3}  {:<32} s = {}, t = {}",
            iv.kappa,
            status,
            fmt_radius(iv.s),
            fmt_radius(iv.t)
        );
    }
    let origin_unsolvable = p.stripped_power() > 0
        || intervals
            .first()
            .is_some_and(|iv| !matches!(iv.status, PelletStatus::TwoRoots | PelletStatus::SingleRootEndpoint));
    if origin_unsolvable {
        println!("note: no lower bound t_0; zero eigenvalues present or possible");
    }

    let report = annuli_report(m, n, &intervals)?;
    println!("inclusion annuli:");
    if report.inclusion.is_empty() {
        println!("  (none: fewer than two solvable abscissas)");
    }
    for a in &report.inclusion {
        println!(
            "  [{}, {}] holds exactly {} eigenvalues",
            fmt_radius(a.inner),
            fmt_radius(a.outer),
            a.count
        );
    }
    println!("exclusion annuli:");
    if report.exclusion.is_empty() {
        println!("  (none)");
    }
    for a in &report.exclusion {
        println!(
            "  ({}, {}) holds no eigenvalues",
            fmt_radius(a.inner),
            fmt_radius(a.outer)
        );
    }
    println!("{}", report.note);

    if q_class {
        let polygon = tropical_roots(&p.norm_majorant())?;
        let constants = if m == 1 {
            LocalizationConstants::scalar()
        } else {
            LocalizationConstants::matrix()
        };
        println!(
            "tropical localization (f = {:.4}, g = {:.4}, g' = {:.4}):",
            constants.f, constants.g, constants.g_prime
        );
        let loc = tropical_localize(&p, &polygon, &constants);
        let q = polygon.num_edges();
        for a in &loc.annuli {
            if !a.applicable {
                println!(
                    "  edge {}: radius {}, neighbor separation too weak; bound not applicable",
                    a.edge,
                    fmt_radius(a.radius)
                );
                continue;
            }
            let mut line = format!(
                "  edge {}: radius {}, annulus [{}, {}] holds exactly {} eigenvalues",
                a.edge,
                fmt_radius(a.radius),
                fmt_radius(a.inner),
                fmt_radius(a.outer),
                a.count
            );
            // Ratio-refined factors tighten interior sides; endpoint
            // sides keep their fixed factor. Scalar-mode constants have
            // no refinement curve.
            if m > 1 {
                let e = a.edge - 1;
                let mut inner = a.inner;
                let mut outer = a.outer;
                if e > 0 {
                    let eps = polygon.radii[e - 1] / polygon.radii[e];
                    if let Ok(refined) = refine_annulus(eps, eps, a.radius) {
                        inner = refined.inner;
                    }
                }
                if e + 1 < q {
                    let del = polygon.radii[e] / polygon.radii[e + 1];
                    if let Ok(refined) = refine_annulus(del, del, a.radius) {
                        outer = refined.outer;
                    }
                }
                line.push_str(&format!(
                    " (refined [{}, {}])",
                    fmt_radius(inner),
                    fmt_radius(outer)
                ));
            }
            println!("{line}");
        }
        for w in &loc.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(EXIT_OK)
}

fn stop_reason_name(r: StopReason) -> &'static str {
    match r {
        StopReason::NewtonSmall => "newton-small",
        StopReason::RcondSmall => "rcond-small",
        StopReason::NotConverged => "not-converged",
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    file: &std::path::Path,
    init: InitArg,
    radius: Option<f64>,
    eps: f64,
    delta: f64,
    max_sweeps: usize,
    order: OrderArg,
    json: bool,
) -> Result<i32, CliError> {
    let p = format::read_file(file)?;
    let strategy = init.strategy(radius);
    let opts = SolveOptions {
        eps,
        delta,
        max_sweeps,
        order: match order {
            OrderArg::Sequential => SweepOrder::Sequential,
            OrderArg::Simultaneous => SweepOrder::Simultaneous,
        },
        ..SolveOptions::default()
    };
    let res = solve(&p, &strategy, &opts)?;

    if json {
        let annuli: Vec<Value> = matrix_pellet(&p)
            .ok()
            .and_then(|iv| annuli_report(p.size(), p.degree(), &iv).ok())
            .map(|r| {
                r.inclusion
                    .iter()
                    .map(|a| json!({"inner": a.inner, "outer": a.outer, "count": a.count}))
                    .collect()
            })
            .unwrap_or_default();
        let eigenvalues: Vec<Value> = res
            .eigenvalues
            .iter()
            .zip(&res.infinite)
            .map(|(z, &inf)| if inf { Value::Null } else { json!([z.re, z.im]) })
            .collect();
        let envelope = json!({
            "eigenvalues": eigenvalues,
            "nu": res.nu,
            "simul_it": res.simul_it,
            "aver_it": res.aver_it,
            "annuli": annuli,
        });
        println!("{envelope}");
    } else {
        println!("eigenvalues ({}):", res.eigenvalues.len());
        for (i, z) in res.eigenvalues.iter().enumerate() {
            if res.infinite[i] {
                println!(
                    "  {:>3}  infinite                                              nu = {:>4}  {}",
                    i,
                    res.nu[i],
                    stop_reason_name(res.stop_reasons[i])
                );
            } else {
                println!(
                    "  {:>3}  re = {:>13.6e}  im = {:>13.6e}  |x| = {:.6e}  nu = {:>4}  {}",
                    i,
                    z.re,
                    z.im,
                    z.norm(),
                    res.nu[i],
                    stop_reason_name(res.stop_reasons[i])
                );
            }
        }
        if res.used_reversal {
            println!("note: iterated the reversed polynomial (singular leading block)");
        }
        println!("simul_it = {}", res.simul_it);
        println!("aver_it = {:.1}", res.aver_it);
    }
    Ok(if res.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn cmd_oracle(file: &std::path::Path, reverse: bool) -> Result<i32, CliError> {
    let p = format::read_file(file)?;
    let m = p.size();
    let mut eigs: Vec<Complex64> = if reverse {
        let rev = p.reversal();
        let ys = companion_eigenvalues(&rev).map_err(|e| match e {
            OracleError::SingularLeading => CliError::new(
                EXIT_FAILURE,
                "trailing coefficient is singular as well; reversal does not help".to_string(),
            ),
            other => other.into(),
        })?;
        let mut lams: Vec<Complex64> = ys
            .iter()
            .map(|&y| {
                if y == Complex64::new(0.0, 0.0) {
                    Complex64::new(f64::INFINITY, 0.0)
                } else {
                    Complex64::new(1.0, 0.0) / y
                }
            })
            .collect();
        // Zero eigenvalues from powers of x dividing the input are its
        // own, not the reversal's.
        lams.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(m * p.stripped_power()));
        lams
    } else {
        companion_eigenvalues(&p).map_err(|e| match e {
            OracleError::SingularLeading => CliError::new(
                EXIT_FAILURE,
                "leading coefficient is singular (eigenvalues at infinity); try --reverse"
                    .to_string(),
            ),
            other => other.into(),
        })?
    };
    eigs.sort_by(|a, b| a.norm().total_cmp(&b.norm()));

    println!("companion eigenvalues ({}):", eigs.len());
    for (i, z) in eigs.iter().enumerate() {
        if z.re.is_infinite() {
            println!("  {i:>3}  infinite");
        } else {
            println!(
                "  {:>3}  re = {:>13.6e}  im = {:>13.6e}  |x| = {:.6e}",
                i,
                z.re,
                z.im,
                z.norm()
            );
        }
    }
    Ok(EXIT_OK)
}

fn cmd_bench(
    class: ClassArg,
    m: usize,
    sigma: Option<Vec<f64>>,
    seed: u64,
    strategies: Option<Vec<InitArg>>,
) -> Result<i32, CliError> {
    let sigma = sigma.unwrap_or_else(|| DEFAULT_SIGMA.to_vec());
    if sigma.len() < 2 {
        return Err(CliError::new(EXIT_PARSE, "sigma needs at least two entries"));
    }
    if sigma[0] == 0.0 || sigma[sigma.len() - 1] == 0.0 {
        return Err(CliError::new(
            EXIT_PARSE,
            "sigma's first and last entries must be nonzero",
        ));
    }
    let strategies = strategies.unwrap_or_else(|| vec![InitArg::Newton, InitArg::Circle]);

    let (class_name, p) = match class {
        ClassArg::Q => ("q", q_class(m, &sigma, seed)?),
        ClassArg::RandomScaled => ("random-scaled", random_scaled(m, &sigma, seed)?),
    };
    println!(
        "bench: class = {}, m = {}, n = {}, seed = {}",
        class_name,
        m,
        sigma.len() - 1,
        seed
    );
    if matches!(class, ClassArg::RandomScaled) {
        println!("note: random coefficients are normalized to unit spectral norm, then scaled by sigma_i");
    }
    println!("{:<10} {:>3} {:>9} {:>9}", "strategy", "m", "simul_it", "aver_it");
    for s in strategies {
        let res = solve(&p, &s.strategy(None), &SolveOptions::default())?;
        let flag = if res.converged { "" } else { "  (not converged)" };
        println!(
            "{:<10} {:>3} {:>9} {:>9.1}{}",
            s.name(),
            m,
            res.simul_it,
            res.aver_it,
            flag
        );
    }
    Ok(EXIT_OK)
}
