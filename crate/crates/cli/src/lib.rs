//! Command-line front end: argument model, command dispatch and the exit
//! code contract.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | a residual exceeded its tolerance (the table is still written), or I/O failure |
//! | 2 | invalid arguments or parameters |
//! | 3 | singular parameters for the explicit-sum route |

pub mod output;
pub mod suites;

use std::path::PathBuf;

use charlier_lattice::bivariate::{charlier2_explicit, charlier2_ladder, params_generic, Charlier2Table};
use charlier_lattice::continuum::{convergence_table, LimitKind};
use charlier_lattice::lattice_ops::{anisotropic_hamiltonian, eigen_residual, hamiltonian, window_points, Ladder};
use charlier_lattice::spectra::{degeneracy_report, truncated_matrix, DEFAULT_TAIL_TOL};
use charlier_lattice::{EnergyLabel, Error, LatticePoint, ModeIndex, ModelParams, TruncationSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Format, Table};
use suites::{Expect, Suite, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "charlier-lattice", version, about = "Bivariate Charlier polynomials and the discrete 2D oscillator")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true, default_value_t = 1.3, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, global = true, default_value_t = 0.8, allow_negative_numbers = true)]
    pub beta: f64,
    /// Rotation angle in radians.
    #[arg(long, global = true, default_value_t = 0.7, allow_negative_numbers = true)]
    pub theta: f64,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for the random probe functions.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Replace every default tolerance with this value.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate C_{n1,n2}(x1, x2) at a point or over a grid.
    Eval(EvalArgs),
    /// Run verification suites and report residuals.
    Verify(VerifyArgs),
    /// Energy levels, degeneracies and truncated-matrix spectra.
    Spectrum(SpectrumArgs),
    /// Convergence of the continuum limit over a list of scales.
    Limit(LimitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Ladder,
    Explicit,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, default_value_t = 0)]
    pub n1: u32,
    #[arg(long, default_value_t = 0)]
    pub n2: u32,
    #[arg(long, default_value_t = 0, conflicts_with = "grid")]
    pub x1: usize,
    #[arg(long, default_value_t = 0, conflicts_with = "grid")]
    pub x2: usize,
    /// `AxB`: every point with `x1 < A` and `x2 < B`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, value_enum, default_value_t = Route::Ladder)]
    pub route: Route,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: Suite,
    /// Largest total degree probed.
    #[arg(long, default_value_t = 5)]
    pub nmax: u32,
    /// Number of random probe functions.
    #[arg(long, default_value_t = 10)]
    pub probes: usize,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Highest energy level.
    #[arg(long = "Nmax", default_value_t = 3)]
    pub level_max: u32,
    /// Report the lowest eigenvalues of the gauged Hamiltonian matrix instead.
    #[arg(long, conflicts_with_all = ["k1", "k2"])]
    pub matrix: bool,
    /// Matrix window `[0..=window]²`.
    #[arg(long, default_value_t = 40, requires = "matrix")]
    pub window: usize,
    /// Number of matrix eigenvalues reported.
    #[arg(long, default_value_t = 10, requires = "matrix")]
    pub count: usize,
    /// Weights of the anisotropic Hamiltonian `k1 Y1 + k2 Y2`.
    #[arg(long, requires = "k2")]
    pub k1: Option<f64>,
    #[arg(long, requires = "k1")]
    pub k2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Weight,
    Wavefunction,
    Ladder,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long, value_enum, default_value_t = Quantity::Wavefunction)]
    pub what: Quantity,
    #[arg(long = "N", default_value_t = 0)]
    pub level: u32,
    #[arg(long = "n", default_value_t = 0)]
    pub n: u32,
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16")]
    pub scales: Vec<f64>,
    /// Half-width of the continuum window `|x̃_i| <= window`.
    #[arg(long, default_value_t = 2.0)]
    pub window: f64,
    #[arg(long, default_value = "raise1")]
    pub ladder: Ladder,
}

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Singular(String),
    Io(std::io::Error),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Singular(_) => 3,
            Failure::Io(_) | Failure::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Validation(m) => write!(f, "invalid input: {m}"),
            Failure::Singular(m) => write!(f, "singular parameters: {m}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
            Failure::Internal(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::InvalidLabel(_) => Failure::Validation(e.to_string()),
            Error::SingularParameters(_) => Failure::Singular(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

/// A finished command: the table to write and whether every tolerance held.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub ok: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let g = &cli.global;
    if let Some(t) = g.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Failure::Validation(format!("--tol must be positive, got {t}")));
        }
    }
    let params = ModelParams::new(g.alpha, g.beta, g.theta)?;
    match &cli.command {
        Command::Eval(a) => eval(a, &params),
        Command::Verify(a) => verify(a, g, &params),
        Command::Spectrum(a) => spectrum(a, g, &params),
        Command::Limit(a) => limit(a, g),
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Validation(format!("--grid expects AxB with positive integers, got {s:?}"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b == 0 {
        return Err(bad());
    }
    Ok((a, b))
}

fn eval(a: &EvalArgs, params: &ModelParams) -> Result<Outcome, Failure> {
    let n = ModeIndex::new(a.n1, a.n2);
    let points = match &a.grid {
        Some(s) => {
            let (g1, g2) = parse_grid(s)?;
            window_points(g1 - 1, g2 - 1)
        }
        None => vec![LatticePoint::new(a.x1, a.x2)],
    };
    let route = match a.route {
        Route::Ladder => "ladder",
        Route::Explicit => "explicit",
    };
    if a.route == Route::Explicit && !params_generic(params) {
        return Err(Failure::Singular(format!(
            "omega = {:.3e}, zeta = {:.3e}: the explicit sum is undefined here, use --route ladder",
            params.omega(),
            params.zeta()
        )));
    }
    let mut table = Table::new(&["n1", "n2", "x1", "x2", "route", "value"]);
    for p in points {
        let v = match a.route {
            Route::Ladder => charlier2_ladder(n, p, params),
            Route::Explicit => charlier2_explicit(n, p, params)?,
        };
        table.push(vec![n.n1.into(), n.n2.into(), p.x1.into(), p.x2.into(), route.into(), v.into()]);
    }
    Ok(Outcome { table, ok: true })
}

fn verify(a: &VerifyArgs, g: &GlobalArgs, params: &ModelParams) -> Result<Outcome, Failure> {
    let cfg = SuiteConfig { params: *params, nmax: a.nmax, seed: g.seed, probes: a.probes, tol: g.tol };
    let checks = suites::run(a.suite, &cfg)?;
    let mut table = Table::new(&["suite", "identity", "max_residual", "tolerance", "expect", "location", "status"]);
    let mut ok = true;
    for c in &checks {
        let passed = c.passed();
        ok &= passed;
        if !passed {
            eprintln!("FAIL {}: {} residual {:e} (tolerance {:e})", c.suite, c.identity, c.residual, c.tolerance);
        }
        let expect = match c.expect {
            Expect::Below => "below",
            Expect::Above => "above",
        };
        table.push(vec![
            c.suite.into(),
            c.identity.clone().into(),
            c.residual.into(),
            c.tolerance.into(),
            expect.into(),
            c.location.clone().into(),
            (if passed { "pass" } else { "fail" }).into(),
        ]);
    }
    Ok(Outcome { table, ok })
}

fn spectrum(a: &SpectrumArgs, g: &GlobalArgs, params: &ModelParams) -> Result<Outcome, Failure> {
    if a.matrix {
        return matrix_spectrum(a, params);
    }
    if let (Some(k1), Some(k2)) = (a.k1, a.k2) {
        return anisotropic_spectrum(a, g, k1, k2, params);
    }
    let trunc = TruncationSpec::for_params(params, a.level_max + 1);
    let mut table = Table::new(&[
        "N",
        "eigenvalue",
        "multiplicity",
        "gram_residual",
        "energy_residual",
        "raise_residual",
        "lower_residual",
        "closure_residual",
    ]);
    let mut ok = true;
    for level in 0..=a.level_max {
        let d = degeneracy_report(level, params, &trunc)?;
        ok &= d.gram.below(g.tol.unwrap_or(1e-8))
            && d.energy.below(g.tol.unwrap_or(1e-9))
            && d.raise_chain.below(g.tol.unwrap_or(1e-9))
            && d.lower_chain.below(g.tol.unwrap_or(1e-9))
            && d.closure.below(g.tol.unwrap_or(1e-8));
        table.push(vec![
            level.into(),
            f64::from(level).into(),
            d.multiplicity.into(),
            d.gram.max_abs.into(),
            d.energy.max_abs.into(),
            d.raise_chain.max_abs.into(),
            d.lower_chain.max_abs.into(),
            d.closure.max_abs.into(),
        ]);
    }
    Ok(Outcome { table, ok })
}

fn anisotropic_spectrum(
    a: &SpectrumArgs,
    g: &GlobalArgs,
    k1: f64,
    k2: f64,
    params: &ModelParams,
) -> Result<Outcome, Failure> {
    let forms = anisotropic_hamiltonian(k1, k2, params)?;
    // the composition reads one step up, so tabulate one row and column more
    let m = 10;
    let table_c = Charlier2Table::new(a.level_max, m + 1, m + 1, params);
    let points = window_points(m, m);
    let mut rows = Vec::new();
    for total in 0..=a.level_max {
        for n1 in 0..=total {
            let n = ModeIndex::new(n1, total - n1);
            let e = k1 * f64::from(n.n1) + k2 * f64::from(n.n2);
            let c = table_c.grid(n).expect("tabulated");
            let r = eigen_residual(&forms.composed, c, e, c, &points)?;
            rows.push((e, n, r.max_abs));
        }
    }
    rows.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let tol = g.tol.unwrap_or(1e-9);
    let mut table = Table::new(&["n1", "n2", "eigenvalue", "residual"]);
    let mut ok = true;
    for (e, n, r) in rows {
        ok &= r.is_finite() && r < tol;
        table.push(vec![n.n1.into(), n.n2.into(), e.into(), r.into()]);
    }
    Ok(Outcome { table, ok })
}

fn matrix_spectrum(a: &SpectrumArgs, params: &ModelParams) -> Result<Outcome, Failure> {
    let trunc = TruncationSpec::new(a.window, a.window, DEFAULT_TAIL_TOL);
    if !trunc.satisfies_tail(params) {
        eprintln!("warning: window {} leaves non-negligible weight outside; eigenvalues will be off", a.window);
    }
    let m = truncated_matrix(&hamiltonian(params), &trunc, true, params)?;
    eprintln!(
        "matrix {}x{}, asymmetry {:e}, {} rows truncated at the window edge",
        m.dim(),
        m.dim(),
        m.max_asymmetry(),
        m.truncated_rows.len()
    );
    let values = m.symmetric_eigenvalues()?;
    let mut table = Table::new(&["index", "eigenvalue", "nearest_level", "deviation"]);
    for (i, v) in values.iter().take(a.count).enumerate() {
        let level = v.round().max(0.0);
        table.push(vec![i.into(), (*v).into(), level.into(), (v - level).abs().into()]);
    }
    Ok(Outcome { table, ok: true })
}

fn limit(a: &LimitArgs, g: &GlobalArgs) -> Result<Outcome, Failure> {
    if a.scales.is_empty() || a.scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Failure::Validation("--scales must be a nonempty list of positive numbers".into()));
    }
    let label = EnergyLabel::new(a.level, a.n)?;
    let kind = match a.what {
        Quantity::Weight => LimitKind::Weight,
        Quantity::Wavefunction => LimitKind::Wavefunction,
        Quantity::Ladder => LimitKind::Ladder(a.ladder),
    };
    let rows = convergence_table(kind, label, g.theta, &a.scales, a.window)?;
    let mut table = Table::new(&["quantity", "scale", "N", "n", "theta", "window", "sup_error"]);
    for r in rows {
        table.push(vec![
            r.kind.name().into(),
            r.scale.into(),
            r.label.level().into(),
            r.label.n().into(),
            r.theta.into(),
            r.window.into(),
            r.sup_error.into(),
        ]);
    }
    Ok(Outcome { table, ok: true })
}

/// Size the global thread pool from `CHARLIER_LATTICE_THREADS` if set.
pub fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("CHARLIER_LATTICE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Validation(format!("CHARLIER_LATTICE_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("4x3").unwrap(), (4, 3));
        assert!(parse_grid("0x3").is_err());
        assert!(parse_grid("4by3").is_err());
    }

    #[test]
    fn error_mapping() {
        assert_eq!(Failure::from(Error::Domain("x".into())).exit_code(), 2);
        assert_eq!(Failure::from(Error::SingularParameters("x".into())).exit_code(), 3);
        assert_eq!(Failure::from(Error::OutOfDomain { x1: -1, x2: 0 }).exit_code(), 1);
    }

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from(["charlier-lattice", "limit", "--N", "2", "--n", "1", "--scales", "4,8"]).unwrap();
        match cli.command {
            Command::Limit(a) => {
                assert_eq!((a.level, a.n), (2, 1));
                assert_eq!(a.scales, vec![4.0, 8.0]);
            }
            _ => panic!("wrong subcommand"),
        }
        assert!(Cli::try_parse_from(["charlier-lattice", "verify", "--suite", "nope"]).is_err());
    }
}
