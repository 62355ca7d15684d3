//! Wavefunctions `Φ_{N,n} = C_{n,N−n}` and `Υ_{N,n} = sqrt(w) Φ_{N,n}`,
//! their orthonormality and completeness, the degeneracy of each energy
//! level and the su(2) multiplet structure. Also a truncated point-basis
//! matrix of any operator, used as a spectral diagnostic.
//!
//! Inner products are always plain ℓ² sums of `Υ` over a finite window,
//! which is the same as `w`-weighted sums of `Φ`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bivariate::{charlier2_ladder, log_weight, Charlier2Table, LatticePoint, ModeIndex, ModelParams};
use crate::error::{Error, Result};
use crate::lattice_ops::{
    gauge_transform, hamiltonian, max_residual, window_points, FromFn, GridFunction, LatticeFunction,
    LatticeOperator, Su2Generators,
};
use crate::report::Residual;
use crate::univariate::{poisson_cutoff, poisson_weight};

/// Default weight threshold at the window boundary.
pub const DEFAULT_TAIL_TOL: f64 = 1e-18;

/// Energy `N` and magnetic-type label `n` with `0 <= n <= N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnergyLabel {
    level: u32,
    n: u32,
}

impl EnergyLabel {
    pub fn new(level: u32, n: u32) -> Result<Self> {
        if n > level {
            return Err(Error::InvalidLabel(format!("need n <= N, got N={level}, n={n}")));
        }
        Ok(Self { level, n })
    }

    /// `N`
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `(n1, n2) = (n, N − n)`
    pub fn mode(&self) -> ModeIndex {
        ModeIndex::new(self.n, self.level - self.n)
    }

    /// All `N + 1` labels of one level.
    pub fn multiplet(level: u32) -> Vec<EnergyLabel> {
        (0..=level).map(|n| EnergyLabel { level, n }).collect()
    }
}

impl std::fmt::Display for EnergyLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "N={} n={}", self.level, self.n)
    }
}

/// Finite window `[0..=m1] x [0..=m2]` for sums that run over all of `N²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    pub m1: usize,
    pub m2: usize,
    pub tail_tol: f64,
}

impl TruncationSpec {
    pub fn new(m1: usize, m2: usize, tail_tol: f64) -> Self {
        Self { m1, m2, tail_tol }
    }

    /// Smallest window past which both the Poisson weight and the summands
    /// of degree up to `max_degree` are negligible.
    pub fn for_params(params: &ModelParams, max_degree: u32) -> Self {
        // both parameters are positive, so the cutoff search cannot fail
        let m1 = poisson_cutoff(params.alpha(), max_degree).expect("alpha > 0") as usize;
        let m2 = poisson_cutoff(params.beta(), max_degree).expect("beta > 0") as usize;
        Self { m1, m2, tail_tol: DEFAULT_TAIL_TOL }
    }

    /// Whether the marginal weights on the last row and column are below
    /// `tail_tol`, with the window past the Poisson modes.
    pub fn satisfies_tail(&self, params: &ModelParams) -> bool {
        let ok = |m: usize, a: f64| m as f64 >= a * a && poisson_weight(m as u64, a) < self.tail_tol;
        ok(self.m1, params.alpha()) && ok(self.m2, params.beta())
    }

    pub fn points(&self) -> Vec<LatticePoint> {
        window_points(self.m1, self.m2)
    }

    pub fn len(&self) -> usize {
        (self.m1 + 1) * (self.m2 + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn index(&self, p: LatticePoint) -> Option<usize> {
        (p.x1 <= self.m1 && p.x2 <= self.m2).then(|| p.x1 * (self.m2 + 1) + p.x2)
    }
}

/// `Φ_{N,n}(x)`
pub fn phi(label: EnergyLabel, p: LatticePoint, params: &ModelParams) -> f64 {
    charlier2_ladder(label.mode(), p, params)
}

/// `Υ_{N,n}(x)`
pub fn upsilon(label: EnergyLabel, p: LatticePoint, params: &ModelParams) -> f64 {
    (0.5 * log_weight(p, params)).exp() * phi(label, p, params)
}

/// All `Φ` and `Υ` up to some level on a common window.
#[derive(Debug, Clone)]
pub struct Wavefunctions {
    params: ModelParams,
    table: Charlier2Table,
}

impl Wavefunctions {
    pub fn new(max_level: u32, m1: usize, m2: usize, params: &ModelParams) -> Self {
        Self { params: *params, table: Charlier2Table::new(max_level, m1, m2, params) }
    }

    fn grid(&self, label: EnergyLabel) -> &crate::bivariate::Charlier2Grid {
        self.table.grid(label.mode()).expect("label above the tabulated level")
    }

    pub fn phi(&self, label: EnergyLabel) -> GridFunction {
        let g = self.grid(label);
        let (m1, m2) = g.window();
        GridFunction::from_fn(m1, m2, |p| g.get(p).unwrap().into())
    }

    pub fn upsilon(&self, label: EnergyLabel) -> GridFunction {
        let g = self.grid(label);
        let (m1, m2) = g.window();
        GridFunction::from_fn(m1, m2, |p| {
            ((0.5 * log_weight(p, &self.params)).exp() * g.get(p).unwrap()).into()
        })
    }
}

/// `Σ_{x in points} conj(f(x)) g(x)`
pub fn inner_product(f: &dyn LatticeFunction, g: &dyn LatticeFunction, points: &[LatticePoint]) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for &p in points {
        acc += f.eval(p)?.conj() * g.eval(p)?;
    }
    Ok(acc)
}

/// Gram matrix `<Υ_a, Υ_b>` over the window, and its deviation from the
/// identity.
pub fn gram_matrix(
    labels: &[EnergyLabel],
    trunc: &TruncationSpec,
    params: &ModelParams,
) -> (DMatrix<f64>, Residual<(EnergyLabel, EnergyLabel)>) {
    let max_level = labels.iter().map(|l| l.level()).max().unwrap_or(0);
    let wf = Wavefunctions::new(max_level, trunc.m1, trunc.m2, params);
    let grids: Vec<GridFunction> = labels.iter().map(|&l| wf.upsilon(l)).collect();
    let points = trunc.points();
    let k = labels.len();
    let mut gram = DMatrix::zeros(k, k);
    let mut res = Residual::zero();
    for i in 0..k {
        for j in 0..k {
            let v = inner_product(&grids[i], &grids[j], &points).expect("inside window").re;
            gram[(i, j)] = v;
            let delta = if i == j { 1.0 } else { 0.0 };
            res.observe((v - delta).abs(), (labels[i], labels[j]));
        }
    }
    (gram, res)
}

/// Partial sums `S_K = Σ_{N<=K} Σ_n Υ_{N,n}(p) Υ_{N,n}(q)` for `K = 0..=max_level`.
pub fn completeness_partial_sums(
    p: LatticePoint,
    q: LatticePoint,
    max_level: u32,
    params: &ModelParams,
) -> Vec<f64> {
    let m1 = p.x1.max(q.x1);
    let m2 = p.x2.max(q.x2);
    let table = Charlier2Table::new(max_level, m1, m2, params);
    let sw = (0.5 * (log_weight(p, params) + log_weight(q, params))).exp();
    let mut acc = 0.0;
    (0..=max_level)
        .map(|level| {
            for label in EnergyLabel::multiplet(level) {
                let g = table.grid(label.mode()).unwrap();
                acc += sw * g.get(p).unwrap() * g.get(q).unwrap();
            }
            acc
        })
        .collect()
}

/// Checks on one energy level `N`.
#[derive(Debug, Clone)]
pub struct DegeneracyReport {
    pub level: u32,
    pub multiplicity: usize,
    /// `<Υ_{N,n}, Υ_{N,n'}> − δ`
    pub gram: Residual<(EnergyLabel, EnergyLabel)>,
    /// `H̄ Υ_{N,n} − N Υ_{N,n}` pointwise.
    pub energy: Residual<LatticePoint>,
    /// `J̄_+ Υ_{N,n} − sqrt((n+1)(N−n)) Υ_{N,n+1}`, including `J̄_+ Υ_{N,N} = 0`.
    pub raise_chain: Residual<LatticePoint>,
    /// `J̄_- Υ_{N,n} − sqrt(n(N−n+1)) Υ_{N,n−1}`, including `J̄_- Υ_{N,0} = 0`.
    pub lower_chain: Residual<LatticePoint>,
    /// ℓ² norm of what remains of `J̄_± Υ_{N,n}` after projecting onto the
    /// level-`N` span.
    pub closure: Residual<EnergyLabel>,
}

impl DegeneracyReport {
    pub fn worst_pointwise(&self) -> f64 {
        self.energy.max_abs.max(self.raise_chain.max_abs).max(self.lower_chain.max_abs)
    }
}

pub fn degeneracy_report(level: u32, params: &ModelParams, trunc: &TruncationSpec) -> Result<DegeneracyReport> {
    let labels = EnergyLabel::multiplet(level);
    let (_, gram) = gram_matrix(&labels, trunc, params);

    // one extra row/column so that T⁺ reads stay inside the grids
    let wf = Wavefunctions::new(level, trunc.m1 + 1, trunc.m2 + 1, params);
    let ups: Vec<GridFunction> = labels.iter().map(|&l| wf.upsilon(l)).collect();
    let points = trunc.points();

    let h = gauge_transform(&hamiltonian(params), params);
    let gens = Su2Generators::new(params);
    let jp = gauge_transform(&gens.j_plus(), params);
    let jm = gauge_transform(&gens.j_minus(), params);

    let zero = GridFunction::from_fn(trunc.m1 + 1, trunc.m2 + 1, |_| Complex64::new(0.0, 0.0));
    let mut energy = Residual::zero();
    let mut raise_chain = Residual::zero();
    let mut lower_chain = Residual::zero();
    let mut closure = Residual::zero();
    let big_n = f64::from(level);
    for (k, label) in labels.iter().enumerate() {
        let n = f64::from(label.n());
        let u = &ups[k];
        energy = energy.merge(scaled_residual(&h, u, big_n, u, &points)?);

        let (up_coef, up_target) = if label.n() < level { ((n + 1.0) * (big_n - n), &ups[k + 1]) } else { (0.0, &zero) };
        raise_chain = raise_chain.merge(scaled_residual(&jp, u, up_coef.sqrt(), up_target, &points)?);

        let (down_coef, down_target) = if label.n() > 0 { (n * (big_n - n + 1.0), &ups[k - 1]) } else { (0.0, &zero) };
        lower_chain = lower_chain.merge(scaled_residual(&jm, u, down_coef.sqrt(), down_target, &points)?);

        for op in [&jp, &jm] {
            let image = GridFunction::tabulate(&op.apply(u), trunc.m1, trunc.m2)?;
            let coefs: Vec<Complex64> =
                ups.iter().map(|b| inner_product(b, &image, &points)).collect::<Result<_>>()?;
            let mut rem2 = 0.0;
            for &p in &points {
                let proj: Complex64 = coefs.iter().zip(&ups).map(|(c, b)| c * b.eval(p).unwrap()).sum();
                rem2 += (image.eval(p)? - proj).norm_sqr();
            }
            closure.observe(rem2.sqrt(), *label);
        }
    }
    Ok(DegeneracyReport { level, multiplicity: labels.len(), gram, energy, raise_chain, lower_chain, closure })
}

fn scaled_residual(
    op: &LatticeOperator,
    f: &GridFunction,
    lambda: f64,
    g: &GridFunction,
    points: &[LatticePoint],
) -> Result<Residual<LatticePoint>> {
    let rhs = FromFn(|p| Ok(lambda * g.eval(p)?));
    max_residual(&op.apply(f), &rhs, points)
}

/// Point-basis matrix of an operator restricted to a window.
#[derive(Debug, Clone)]
pub struct TruncatedMatrix {
    pub trunc: TruncationSpec,
    /// `(row, column, value)` with indices in row-major window order.
    pub entries: Vec<(usize, usize, Complex64)>,
    /// Rows whose stencil reads past the window; those reads are dropped.
    pub truncated_rows: Vec<LatticePoint>,
}

/// Matrix of `op` (or of its gauge conjugate) on the window. Reads below the
/// lattice with nonzero coefficient are an error; reads past the top edges
/// are dropped and the row is listed in `truncated_rows`.
///
/// Eigenvalues of a truncated matrix only approximate the lattice spectrum;
/// the error is governed by the weight left beyond the window.
pub fn truncated_matrix(
    op: &LatticeOperator,
    trunc: &TruncationSpec,
    gauged: bool,
    params: &ModelParams,
) -> Result<TruncatedMatrix> {
    let op = if gauged { gauge_transform(op, params) } else { op.clone() };
    let mut entries = Vec::new();
    let mut truncated_rows = Vec::new();
    for (row, p) in trunc.points().into_iter().enumerate() {
        let mut cut = false;
        for ((d1, d2), v) in op.local_stencil(p)? {
            let q = p.offset(d1, d2).expect("local_stencil only reports lattice offsets");
            match trunc.index(q) {
                Some(col) => entries.push((row, col, v)),
                None => cut = true,
            }
        }
        if cut {
            truncated_rows.push(p);
        }
    }
    Ok(TruncatedMatrix { trunc: *trunc, entries, truncated_rows })
}

impl TruncatedMatrix {
    pub fn dim(&self) -> usize {
        self.trunc.len()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// `max |M_ij − M_ji|`
    pub fn max_asymmetry(&self) -> f64 {
        let m = self.to_dense();
        let mut worst: f64 = 0.0;
        for &(r, c, _) in &self.entries {
            worst = worst.max((m[(r, c)] - m[(c, r)]).norm());
        }
        worst
    }

    /// Ascending eigenvalues of a real symmetric matrix.
    pub fn symmetric_eigenvalues(&self) -> Result<Vec<f64>> {
        if self.entries.iter().any(|(_, _, v)| v.im != 0.0) {
            return Err(Error::Domain("matrix has complex entries".into()));
        }
        let mut m = DMatrix::<f64>::zeros(self.dim(), self.dim());
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v.re;
        }
        let sym = (&m + m.transpose()) * 0.5;
        let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }
}
