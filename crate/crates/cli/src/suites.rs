//! Verification suites behind `verify`. Each suite returns one [`Check`]
//! per identity, holding the largest residual seen and where it occurred.

use std::fmt::Display;
use std::str::FromStr;

use charlier_lattice::bivariate::{
    charlier2_explicit, generating_check, orthogonality_check, params_generic, Charlier2Table,
};
use charlier_lattice::lattice_ops::{
    anisotropic_hamiltonian, commutator, cross_ops, eigen_op, eigen_residual, gauge_transform, hamiltonian,
    hamiltonian_composed, max_residual, printed_gauged_ladder, probe_functions, window_points, FromFn,
    GridFunction, Ladder, Mode, OperatorForms, ProbeFunction, Su2Generators,
};
use charlier_lattice::spectra::{completeness_partial_sums, degeneracy_report, truncated_matrix, Wavefunctions};
use charlier_lattice::univariate::{
    generating_residual, orthonormality_sum, poisson_cutoff, univariate_difference_check,
    univariate_ladder_check, UniMeasure,
};
use charlier_lattice::{
    Complex64, EnergyLabel, Error, LatticeOperator, LatticePoint, ModeIndex, ModelParams,
    Residual, Result, TruncationSpec,
};

/// Pointwise identities on polynomials are probed on `[0..=10]²`.
const POLY_WINDOW: usize = 10;
/// Probe functions live on `[0..=12]²`; evaluating on `[0..=16]²` also
/// covers the points where the operators see the edge of their support.
const PROBE_WINDOW: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ladder,
    Eigen,
    Su2,
    Casimir,
    Ortho,
    Gauge,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [Suite::Ladder, Suite::Eigen, Suite::Su2, Suite::Casimir, Suite::Ortho, Suite::Gauge];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ladder => "ladder",
            Suite::Eigen => "eigen",
            Suite::Su2 => "su2",
            Suite::Casimir => "casimir",
            Suite::Ortho => "ortho",
            Suite::Gauge => "gauge",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Whether a check passes when the residual is small, or when it is large
/// (a discrepancy that is expected and being reported).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Below,
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub identity: String,
    pub residual: f64,
    pub tolerance: f64,
    pub expect: Expect,
    pub location: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        match self.expect {
            Expect::Below => self.residual.is_finite() && self.residual < self.tolerance,
            Expect::Above => self.residual.is_finite() && self.residual > self.tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub params: ModelParams,
    /// Largest total degree `n1 + n2` (or level `N`) probed.
    pub nmax: u32,
    pub seed: u64,
    pub probes: usize,
    /// Overrides every default tolerance of an `Expect::Below` check.
    pub tol: Option<f64>,
}

impl SuiteConfig {
    pub fn new(params: ModelParams) -> Self {
        Self { params, nmax: 5, seed: 0, probes: 10, tol: None }
    }
}

struct Recorder<'a> {
    suite: &'static str,
    cfg: &'a SuiteConfig,
    checks: Vec<Check>,
}

impl<'a> Recorder<'a> {
    fn new(suite: Suite, cfg: &'a SuiteConfig) -> Self {
        Self { suite: suite.name(), cfg, checks: Vec::new() }
    }

    fn below<L: Display>(&mut self, identity: impl Into<String>, r: &Residual<L>, tol: f64) {
        self.push(identity.into(), r, self.cfg.tol.unwrap_or(tol), Expect::Below);
    }

    fn above<L: Display>(&mut self, identity: impl Into<String>, r: &Residual<L>, threshold: f64) {
        self.push(identity.into(), r, threshold, Expect::Above);
    }

    fn push<L: Display>(&mut self, identity: String, r: &Residual<L>, tolerance: f64, expect: Expect) {
        let location = r.at.as_ref().map(ToString::to_string).unwrap_or_default();
        self.checks.push(Check { suite: self.suite, identity, residual: r.max_abs, tolerance, expect, location });
    }
}

/// Pair of locations, shown as `a / b`.
#[derive(Clone, Copy)]
struct Pair<A, B>(A, B);

impl<A: Display, B: Display> Display for Pair<A, B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} / {}", self.0, self.1)
    }
}

fn pair_residual<A: Copy, B: Copy>(r: Residual<(A, B)>) -> Residual<Pair<A, B>> {
    Residual { max_abs: r.max_abs, at: r.at.map(|(a, b)| Pair(a, b)) }
}

fn modes_up_to(total: u32) -> impl Iterator<Item = ModeIndex> {
    (0..=total).flat_map(|t| (0..=t).map(move |n1| ModeIndex::new(n1, t - n1)))
}

fn probes(cfg: &SuiteConfig) -> Vec<ProbeFunction> {
    probe_functions(cfg.seed, cfg.probes)
}

fn zero() -> FromFn<impl Fn(LatticePoint) -> Result<Complex64> + Sync> {
    FromFn(|_| Ok(Complex64::new(0.0, 0.0)))
}

fn on_probes(op_a: &LatticeOperator, op_b: &LatticeOperator, fs: &[ProbeFunction]) -> Result<Residual<LatticePoint>> {
    let points = window_points(PROBE_WINDOW, PROBE_WINDOW);
    let mut r = Residual::zero();
    for f in fs {
        r = r.merge(max_residual(&op_a.apply(f), &op_b.apply(f), &points)?);
    }
    Ok(r)
}

fn forms_agree(form: &OperatorForms, fs: &[ProbeFunction]) -> Result<Residual<LatticePoint>> {
    on_probes(&form.composed, &form.explicit, fs)
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    match suite {
        Suite::Ladder => ladder(cfg),
        Suite::Eigen => eigen(cfg),
        Suite::Su2 => su2(cfg),
        Suite::Casimir => casimir(cfg),
        Suite::Ortho => ortho(cfg),
        Suite::Gauge => gauge(cfg),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(run(s, cfg)?);
            }
            Ok(all)
        }
    }
}

/// Univariate ladder actions and difference equation, bivariate ladder
/// actions, and agreement of the two evaluation routes.
pub fn ladder(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rec = Recorder::new(Suite::Ladder, cfg);
    let p = &cfg.params;
    for (name, a) in [("alpha", p.alpha()), ("beta", p.beta())] {
        // absolute residuals grow with the polynomial values, so the 1D
        // degree follows --nmax like the bivariate checks
        let lc = univariate_ladder_check(cfg.nmax, 10, a)?;
        rec.below(format!("1d lowering, a = {name}"), &pair_residual(lc.lowering), 1e-10);
        rec.below(format!("1d raising, a = {name}"), &pair_residual(lc.raising), 1e-10);
        let dc = univariate_difference_check(cfg.nmax, 10, a)?;
        rec.below(format!("1d A+A- eigenvalue n, a = {name}"), &pair_residual(dc.eigen), 1e-10);
        rec.above(format!("1d printed three-point form differs, a = {name}"), &pair_residual(dc.printed_form), 1e-6);
    }

    let m = POLY_WINDOW + 1;
    let table = Charlier2Table::new(cfg.nmax + 1, m, m, p);
    let grid = |n: ModeIndex| table.grid(n).expect("tabulated");
    let points = window_points(POLY_WINDOW, POLY_WINDOW);
    for mode in [Mode::One, Mode::Two] {
        let (mut up, mut down) = (Residual::zero(), Residual::zero());
        let (raise, lower) = (Ladder::Raise(mode).operator(p), Ladder::Lower(mode).operator(p));
        for n in modes_up_to(cfg.nmax) {
            let (k, up_n, down_n) = match mode {
                Mode::One => (n.n1, ModeIndex::new(n.n1 + 1, n.n2), ModeIndex::new(n.n1.wrapping_sub(1), n.n2)),
                Mode::Two => (n.n2, ModeIndex::new(n.n1, n.n2 + 1), ModeIndex::new(n.n1, n.n2.wrapping_sub(1))),
            };
            up = up.merge(eigen_residual(&raise, grid(n), f64::from(k + 1).sqrt(), grid(up_n), &points)?);
            let r = if k == 0 {
                max_residual(&lower.apply(grid(n)), &zero(), &points)?
            } else {
                eigen_residual(&lower, grid(n), f64::from(k).sqrt(), grid(down_n), &points)?
            };
            down = down.merge(r);
        }
        let i = if mode == Mode::One { 1 } else { 2 };
        rec.below(format!("A+({i}) C_n = sqrt(n{i}+1) C_(n+e{i})"), &up, 1e-9);
        rec.below(format!("A-({i}) C_n = sqrt(n{i}) C_(n-e{i})"), &down, 1e-9);
    }

    if params_generic(p) {
        let cap = cfg.nmax.max(6);
        let table = Charlier2Table::new(cap, POLY_WINDOW, POLY_WINDOW, p);
        let mut r = Residual::zero();
        for n in modes_up_to(cap) {
            for &x in &points {
                let v = charlier2_explicit(n, x, p)?;
                r.observe((v - table.value(n, x).unwrap()).abs(), Pair(n, x));
            }
        }
        rec.below("recursion vs explicit sum", &r, 1e-8);
    } else {
        eprintln!("ladder: parameters are not generic, explicit-sum comparison skipped");
    }
    Ok(rec.checks)
}

/// `Y_i`, cross operators, the Hamiltonian and the anisotropic variant:
/// explicit stencils against compositions and eigenvalue actions.
pub fn eigen(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rec = Recorder::new(Suite::Eigen, cfg);
    let p = &cfg.params;
    let fs = probes(cfg);
    let m = POLY_WINDOW + 1;
    let table = Charlier2Table::new(cfg.nmax + 1, m, m, p);
    let grid = |n: ModeIndex| table.grid(n).expect("tabulated");
    let points = window_points(POLY_WINDOW, POLY_WINDOW);

    for (i, mode) in [(1, Mode::One), (2, Mode::Two)] {
        let y = eigen_op(mode, p);
        rec.below(format!("Y{i} explicit = A+({i})A-({i})"), &forms_agree(&y, &fs)?, 1e-10);
        let mut r = Residual::zero();
        for n in modes_up_to(cfg.nmax) {
            let k = if mode == Mode::One { n.n1 } else { n.n2 };
            r = r.merge(eigen_residual(&y.composed, grid(n), f64::from(k), grid(n), &points)?);
            r = r.merge(eigen_residual(&y.explicit, grid(n), f64::from(k), grid(n), &points)?);
        }
        rec.below(format!("Y{i} C_n = n{i} C_n"), &r, 1e-9);
    }

    let (pc, qc) = cross_ops(p);
    rec.below("A+(1)A-(2) explicit = composition", &forms_agree(&pc, &fs)?, 1e-10);
    rec.below("A+(2)A-(1) explicit = composition", &forms_agree(&qc, &fs)?, 1e-10);
    let (mut rp, mut rq) = (Residual::zero(), Residual::zero());
    for n in modes_up_to(cfg.nmax) {
        let (n1, n2) = (f64::from(n.n1), f64::from(n.n2));
        rp = rp.merge(if n.n2 == 0 {
            max_residual(&pc.composed.apply(grid(n)), &zero(), &points)?
        } else {
            let target = grid(ModeIndex::new(n.n1 + 1, n.n2 - 1));
            eigen_residual(&pc.composed, grid(n), ((n1 + 1.0) * n2).sqrt(), target, &points)?
        });
        rq = rq.merge(if n.n1 == 0 {
            max_residual(&qc.composed.apply(grid(n)), &zero(), &points)?
        } else {
            let target = grid(ModeIndex::new(n.n1 - 1, n.n2 + 1));
            eigen_residual(&qc.composed, grid(n), (n1 * (n2 + 1.0)).sqrt(), target, &points)?
        });
    }
    rec.below("A+(1)A-(2) C_n = sqrt((n1+1)n2) C_(n+e1-e2)", &rp, 1e-9);
    rec.below("A+(2)A-(1) C_n = sqrt(n1(n2+1)) C_(n-e1+e2)", &rq, 1e-9);

    let h = hamiltonian(p);
    let h_forms = OperatorForms { composed: hamiltonian_composed(p), explicit: h.clone() };
    rec.below("H five-point stencil = Y1 + Y2", &forms_agree(&h_forms, &fs)?, 1e-10);
    let mut r = Residual::zero();
    for n in modes_up_to(cfg.nmax) {
        r = r.merge(eigen_residual(&h, grid(n), f64::from(n.total()), grid(n), &points)?);
    }
    rec.below("H Phi_(N,n) = N Phi_(N,n)", &r, 1e-9);

    for (k1, k2) in [(1.0, 2.0), (2.0, 3.0)] {
        let aniso = anisotropic_hamiltonian(k1, k2, p)?;
        rec.below(format!("anisotropic ({k1}, {k2}) explicit = k1 Y1 + k2 Y2"), &forms_agree(&aniso, &fs)?, 1e-10);
        let mut r = Residual::zero();
        for n in modes_up_to(cfg.nmax) {
            let e = k1 * f64::from(n.n1) + k2 * f64::from(n.n2);
            r = r.merge(eigen_residual(&aniso.composed, grid(n), e, grid(n), &points)?);
        }
        rec.below(format!("anisotropic ({k1}, {k2}) eigenvalue k1 n1 + k2 n2"), &r, 1e-9);
    }
    Ok(rec.checks)
}

/// su(2) commutation relations and their commutation with `H`.
pub fn su2(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rec = Recorder::new(Suite::Su2, cfg);
    let p = &cfg.params;
    let fs = probes(cfg);
    let g = Su2Generators::new(p);
    let h = hamiltonian(p);
    let i = Complex64::i();
    let relations = [
        ("[J_X, J_Y] = i J_Z", commutator(&g.jx, &g.jy), i * g.jz.clone()),
        ("[J_Y, J_Z] = i J_X", commutator(&g.jy, &g.jz), i * g.jx.clone()),
        ("[J_Z, J_X] = i J_Y", commutator(&g.jz, &g.jx), i * g.jy.clone()),
        ("[H, J_X] = 0", commutator(&h, &g.jx), LatticeOperator::zero()),
        ("[H, J_Y] = 0", commutator(&h, &g.jy), LatticeOperator::zero()),
        ("[H, J_Z] = 0", commutator(&h, &g.jz), LatticeOperator::zero()),
        ("[J_Z, J_+] = J_+", commutator(&g.jz, &g.j_plus()), g.j_plus()),
        ("[J_+, J_-] = 2 J_Z", commutator(&g.j_plus(), &g.j_minus()), 2.0 * g.jz.clone()),
    ];
    for (name, lhs, rhs) in &relations {
        rec.below(*name, &on_probes(lhs, rhs, &fs)?, 1e-9);
    }
    Ok(rec.checks)
}

/// Casimir of the su(2) generators as a function of `H`.
pub fn casimir(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rec = Recorder::new(Suite::Casimir, cfg);
    let p = &cfg.params;
    let g = Su2Generators::new(p);
    let target = Su2Generators::casimir_from_hamiltonian(&hamiltonian(p));
    rec.below("J^2 = (H/2)(H/2 + 1)", &on_probes(&g.casimir(), &target, &probes(cfg))?, 1e-8);
    Ok(rec.checks)
}

/// Orthonormality, generating functions, completeness and the multiplet
/// structure of each energy level.
pub fn ortho(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rec = Recorder::new(Suite::Ortho, cfg);
    let p = &cfg.params;
    for (name, a) in [("alpha", p.alpha()), ("beta", p.beta())] {
        let cutoff = poisson_cutoff(a, 10)?;
        let mut r = Residual::zero();
        for n in 0..=10 {
            for m in 0..=10 {
                let s = orthonormality_sum(n, m, a, UniMeasure::Poisson, cutoff)?;
                r.observe((s - if n == m { 1.0 } else { 0.0 }).abs(), Pair(n, m));
            }
        }
        rec.below(format!("1d orthonormality, a = {name}"), &r, 1e-9);
        let mut r = Residual::zero();
        for z in [0.1, 0.3] {
            for x in 0..=10 {
                r.observe(generating_residual(x, z, a, 40)?, Pair(x, z));
            }
        }
        rec.below(format!("1d generating function, a = {name}"), &r, 1e-10);
    }

    let trunc = TruncationSpec::for_params(p, cfg.nmax);
    let modes: Vec<ModeIndex> = modes_up_to(cfg.nmax).collect();
    let mut r = Residual::zero();
    for &n in &modes {
        for &m in &modes {
            r.observe(orthogonality_check(p, n, m, &trunc), Pair(n, m));
        }
    }
    rec.below("sum w C_n C_m = delta", &r, 1e-8);

    let mut r = Residual::zero();
    for (z1, z2) in [(0.1, 0.2), (-0.3, 0.15)] {
        for x in window_points(6, 6) {
            r.observe(generating_check(p, z1, z2, x, 40), x);
        }
    }
    rec.below("bivariate generating function", &r, 1e-9);

    let mut r = Residual::zero();
    for (x, y) in [((0, 0), (0, 0)), ((1, 2), (1, 2)), ((1, 2), (2, 1)), ((3, 0), (0, 1))] {
        let (x, y) = (LatticePoint::new(x.0, x.1), LatticePoint::new(y.0, y.1));
        let sums = completeness_partial_sums(x, y, 30, p);
        let delta = if x == y { 1.0 } else { 0.0 };
        r.observe((sums[30] - delta).abs(), Pair(x, y));
    }
    rec.below("completeness, levels <= 30", &r, 1e-3);

    let level_trunc = TruncationSpec::for_params(p, cfg.nmax + 1);
    let (mut gram, mut energy, mut up, mut down, mut closure) =
        (Residual::zero(), Residual::zero(), Residual::zero(), Residual::zero(), Residual::zero());
    for level in 0..=cfg.nmax {
        let d = degeneracy_report(level, p, &level_trunc)?;
        if d.multiplicity != level as usize + 1 {
            return Err(Error::Domain(format!("level {level} has {} states", d.multiplicity)));
        }
        gram = gram.merge(pair_residual(d.gram));
        energy = energy.merge(d.energy);
        up = up.merge(d.raise_chain);
        down = down.merge(d.lower_chain);
        closure = closure.merge(d.closure);
    }
    rec.below("Gram matrix of Upsilon_(N,n) = identity", &gram, 1e-8);
    rec.below("gauged H Upsilon_(N,n) = N Upsilon_(N,n)", &energy, 1e-9);
    rec.below("J_+ Upsilon_(N,n) = sqrt((n+1)(N-n)) Upsilon_(N,n+1)", &up, 1e-9);
    rec.below("J_- Upsilon_(N,n) = sqrt(n(N-n+1)) Upsilon_(N,n-1)", &down, 1e-9);
    rec.below("J_+- keep each level closed", &closure, 1e-8);
    Ok(rec.checks)
}

/// Gauge-conjugated ladder operators against their printed closed forms,
/// and the self-consistency of the conjugated operators.
pub fn gauge(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rec = Recorder::new(Suite::Gauge, cfg);
    let p = &cfg.params;
    let fs = probes(cfg);
    // the printed lowering form reads below the lattice on the edges
    let interior: Vec<LatticePoint> =
        window_points(PROBE_WINDOW, PROBE_WINDOW).into_iter().filter(|x| x.x1 > 0 && x.x2 > 0).collect();
    for which in Ladder::ALL {
        let conj = gauge_transform(&which.operator(p), p);
        let printed = printed_gauged_ladder(which, p);
        let mut r = Residual::zero();
        for f in &fs {
            r = r.merge(max_residual(&conj.apply(f), &printed.apply(f), &interior)?);
        }
        if which == Ladder::Lower(Mode::Two) {
            rec.above(format!("printed gauged {} differs from conjugation", which.name()), &r, 1e-6);
        } else {
            rec.below(format!("gauged {} = printed closed form", which.name()), &r, 1e-10);
        }
    }

    let trunc = TruncationSpec::for_params(p, cfg.nmax);
    let wf = Wavefunctions::new(cfg.nmax, trunc.m1 + 1, trunc.m2 + 1, p);
    let points = trunc.points();
    for (i, mode) in [(1, Mode::One), (2, Mode::Two)] {
        let op = gauge_transform(&Ladder::Raise(mode).operator(p), p)
            .compose(&gauge_transform(&Ladder::Lower(mode).operator(p), p));
        let mut r = Residual::zero();
        for level in 0..=cfg.nmax {
            for label in EnergyLabel::multiplet(level) {
                let u: GridFunction = wf.upsilon(label);
                let m = label.mode();
                let k = if mode == Mode::One { m.n1 } else { m.n2 };
                r = r.merge(eigen_residual(&op, &u, f64::from(k), &u, &points)?);
            }
        }
        rec.below(format!("gauged A+({i})A-({i}) Upsilon = n{i} Upsilon"), &r, 1e-9);
    }

    let small = TruncationSpec::new(12, 12, trunc.tail_tol);
    let m = truncated_matrix(&hamiltonian(p), &small, true, p)?;
    let asym = Residual { max_abs: m.max_asymmetry(), at: None::<LatticePoint> };
    rec.below("gauged H matrix is symmetric", &asym, 1e-12);
    Ok(rec.checks)
}
