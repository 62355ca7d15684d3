//! Two-variable Charlier polynomials `C_{n1,n2}(x1, x2)`.
//!
//! Two independent evaluation routes are provided:
//!
//! - [`charlier2_ladder`] starts from `C_{0,0} = 1` and applies the raising
//!   operators. It has no parameter restrictions and is the primary route.
//! - [`charlier2_explicit`] sums the terminating four-index hypergeometric
//!   series. Its coefficients `u_ij` blow up when `ω = 0` or `ζ = 0`, so it is
//!   used as a cross-check only, behind [`params_generic`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice_ops::LatticeFunction;
use crate::spectra::TruncationSpec;
use crate::univariate::{self, log_factorial, log_poisson_weight};

/// Threshold below which an explicit-sum denominator counts as zero.
pub const SINGULAR_DENOMINATOR: f64 = 1e-12;
/// Threshold used by [`params_generic`].
pub const GENERIC_MARGIN: f64 = 1e-9;

/// Parameters `(α, β, θ)` of the model. `ω` and `ζ` are always derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    alpha: f64,
    beta: f64,
    theta: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        if !theta.is_finite() {
            return Err(Error::Domain(format!("theta must be finite, got {theta}")));
        }
        Ok(Self { alpha, beta, theta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `α cosθ − β sinθ`
    pub fn omega(&self) -> f64 {
        self.alpha * self.theta.cos() - self.beta * self.theta.sin()
    }

    /// `α sinθ + β cosθ`
    pub fn zeta(&self) -> f64 {
        self.alpha * self.theta.sin() + self.beta * self.theta.cos()
    }

    pub(crate) fn cos_sin(&self) -> (f64, f64) {
        (self.theta.cos(), self.theta.sin())
    }

    /// Denominators of `u11, u12, u21, u22` in the explicit sum.
    pub fn explicit_denominators(&self) -> [f64; 4] {
        let (c, s) = self.cos_sin();
        let (a, b) = (self.alpha, self.beta);
        [
            a * a * c - a * b * s,
            a * a * s + a * b * c,
            b * b * s - a * b * c,
            b * b * c + a * b * s,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    pub n1: u32,
    pub n2: u32,
}

impl ModeIndex {
    pub fn new(n1: u32, n2: u32) -> Self {
        Self { n1, n2 }
    }

    pub fn total(&self) -> u32 {
        self.n1 + self.n2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x1: usize,
    pub x2: usize,
}

impl LatticePoint {
    pub fn new(x1: usize, x2: usize) -> Self {
        Self { x1, x2 }
    }

    /// `self + (d1, d2)`, or `None` when that leaves the lattice.
    pub fn offset(&self, d1: i32, d2: i32) -> Option<Self> {
        let x1 = self.x1 as i64 + i64::from(d1);
        let x2 = self.x2 as i64 + i64::from(d2);
        (x1 >= 0 && x2 >= 0).then(|| Self::new(x1 as usize, x2 as usize))
    }
}

impl std::fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.n1, self.n2)
    }
}

/// Product Poisson weight `e^{-(α²+β²)} α^{2x1} β^{2x2} / (x1! x2!)`.
pub fn weight(p: LatticePoint, params: &ModelParams) -> f64 {
    log_weight(p, params).exp()
}

pub fn log_weight(p: LatticePoint, params: &ModelParams) -> f64 {
    log_poisson_weight(p.x1 as u64, params.alpha) + log_poisson_weight(p.x2 as u64, params.beta)
}

/// True when every explicit-sum denominator is safely away from zero.
///
/// The four denominators are `αω`, `αζ`, `−βω` and `βζ`, so this amounts
/// to `ω ≠ 0` and `ζ ≠ 0`. At `θ = 0` the coefficients `u12`, `u21` are
/// simply zero and the parameters count as generic.
pub fn params_generic(params: &ModelParams) -> bool {
    params.omega().abs() > GENERIC_MARGIN
        && params.zeta().abs() > GENERIC_MARGIN
        && params.explicit_denominators().iter().all(|d| d.abs() > GENERIC_MARGIN)
}

/// Values of one polynomial on the window `[0..=m1] x [0..=m2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Charlier2Grid {
    m1: usize,
    m2: usize,
    values: Vec<f64>,
}

impl Charlier2Grid {
    fn ones(m1: usize, m2: usize) -> Self {
        Self { m1, m2, values: vec![1.0; (m1 + 1) * (m2 + 1)] }
    }

    pub fn window(&self) -> (usize, usize) {
        (self.m1, self.m2)
    }

    pub fn get(&self, p: LatticePoint) -> Option<f64> {
        (p.x1 <= self.m1 && p.x2 <= self.m2).then(|| self.values[self.index(p.x1, p.x2)])
    }

    fn index(&self, x1: usize, x2: usize) -> usize {
        x1 * (self.m2 + 1) + x2
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// One application of `A_+^{(i)} / sqrt(k)`. Only downward shifts are
    /// read, so the window is closed under the step.
    fn raised(&self, mode: u8, params: &ModelParams, k: u32) -> Self {
        let (c, s) = params.cos_sin();
        let (a, b) = (params.alpha, params.beta);
        let (c1, c2, shift) = match mode {
            1 => (c / a, -s / b, params.omega()),
            _ => (s / a, c / b, params.zeta()),
        };
        let norm = f64::from(k).sqrt();
        let mut out = vec![0.0; self.values.len()];
        for x1 in 0..=self.m1 {
            for x2 in 0..=self.m2 {
                let mut v = -shift * self.values[self.index(x1, x2)];
                if x1 > 0 {
                    v += x1 as f64 * c1 * self.values[self.index(x1 - 1, x2)];
                }
                if x2 > 0 {
                    v += x2 as f64 * c2 * self.values[self.index(x1, x2 - 1)];
                }
                out[self.index(x1, x2)] = v / norm;
            }
        }
        Self { m1: self.m1, m2: self.m2, values: out }
    }
}

impl LatticeFunction for Charlier2Grid {
    fn eval(&self, p: LatticePoint) -> Result<Complex64> {
        self.get(p).map(Complex64::from).ok_or(Error::OutOfWindow {
            x1: p.x1,
            x2: p.x2,
            m1: self.m1,
            m2: self.m2,
        })
    }
}

/// `C_n` on the whole window `[0..=m1] x [0..=m2]` by the ladder route.
pub fn charlier2_grid(n: ModeIndex, m1: usize, m2: usize, params: &ModelParams) -> Charlier2Grid {
    let mut grid = Charlier2Grid::ones(m1, m2);
    for k in 1..=n.n1 {
        grid = grid.raised(1, params, k);
    }
    for k in 1..=n.n2 {
        grid = grid.raised(2, params, k);
    }
    grid
}

/// `C_{n1,n2}(x1,x2)` by repeated raising from `C_{0,0} = 1`.
pub fn charlier2_ladder(n: ModeIndex, p: LatticePoint, params: &ModelParams) -> f64 {
    let grid = charlier2_grid(n, p.x1, p.x2, params);
    grid.values[grid.index(p.x1, p.x2)]
}

/// Every `C_{n1,n2}` with `n1 + n2 <= max_total` on a common window.
#[derive(Debug, Clone)]
pub struct Charlier2Table {
    max_total: u32,
    grids: Vec<Charlier2Grid>,
}

impl Charlier2Table {
    pub fn new(max_total: u32, m1: usize, m2: usize, params: &ModelParams) -> Self {
        let mut grids = Vec::new();
        let mut first = Charlier2Grid::ones(m1, m2);
        for n1 in 0..=max_total {
            if n1 > 0 {
                first = first.raised(1, params, n1);
            }
            let mut g = first.clone();
            grids.push(g.clone());
            for n2 in 1..=(max_total - n1) {
                g = g.raised(2, params, n2);
                grids.push(g.clone());
            }
        }
        Self { max_total, grids }
    }

    pub fn max_total(&self) -> u32 {
        self.max_total
    }

    fn slot(&self, n: ModeIndex) -> usize {
        // Rows n1 = 0..n.n1 hold (max_total - n1 + 1) entries each.
        let k = self.max_total as usize + 1;
        let n1 = n.n1 as usize;
        n1 * k - n1 * n1.saturating_sub(1) / 2 + n.n2 as usize
    }

    pub fn grid(&self, n: ModeIndex) -> Option<&Charlier2Grid> {
        (n.total() <= self.max_total).then(|| &self.grids[self.slot(n)])
    }

    pub fn value(&self, n: ModeIndex, p: LatticePoint) -> Option<f64> {
        self.grid(n)?.get(p)
    }
}

fn pochhammer_neg(n: u64, k: u64) -> f64 {
    // (-n)_k, zero once k > n
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| i as f64 - n as f64).product()
}

/// `C_{n1,n2}(x1,x2)` from the explicit terminating four-index sum.
///
/// Fails with [`Error::SingularParameters`] when any `u_ij` denominator is
/// below [`SINGULAR_DENOMINATOR`] in magnitude.
pub fn charlier2_explicit(n: ModeIndex, p: LatticePoint, params: &ModelParams) -> Result<f64> {
    let den = params.explicit_denominators();
    if let Some(d) = den.iter().find(|d| d.abs() < SINGULAR_DENOMINATOR) {
        return Err(Error::SingularParameters(format!(
            "explicit sum denominator {d:e} vanishes for alpha={}, beta={}, theta={}",
            params.alpha, params.beta, params.theta
        )));
    }
    let (c, s) = params.cos_sin();
    let u11 = -c / den[0];
    let u12 = -s / den[1];
    let u21 = -s / den[2];
    let u22 = -c / den[3];

    let (n1, n2) = (u64::from(n.n1), u64::from(n.n2));
    let (x1, x2) = (p.x1 as u64, p.x2 as u64);
    let inv_fact = |k: u64| (-log_factorial(k)).exp();

    let mut sum = 0.0;
    for rho in 0..=n1.min(x1) {
        for mu in 0..=(n1 - rho).min(x2) {
            let a = pochhammer_neg(n1, rho + mu) * u11.powi(rho as i32) * u21.powi(mu as i32)
                * inv_fact(rho)
                * inv_fact(mu);
            for sigma in 0..=n2.min(x1 - rho) {
                for nu in 0..=(n2 - sigma).min(x2 - mu) {
                    sum += a
                        * pochhammer_neg(n2, sigma + nu)
                        * pochhammer_neg(x1, rho + sigma)
                        * pochhammer_neg(x2, mu + nu)
                        * u12.powi(sigma as i32)
                        * u22.powi(nu as i32)
                        * inv_fact(sigma)
                        * inv_fact(nu);
                }
            }
        }
    }
    let sign = if (n1 + n2) % 2 == 0 { 1.0 } else { -1.0 };
    let norm = (-(log_factorial(n1) + log_factorial(n2)) / 2.0).exp();
    Ok(sign * norm * params.omega().powi(n.n1 as i32) * params.zeta().powi(n.n2 as i32) * sum)
}

/// `Ĉ_{n1}(x1; α) Ĉ_{n2}(x2; β)`, the separated form that `C_{n1,n2}`
/// reduces to at `θ = 0` (with unit constant).
pub fn separable_product(n: ModeIndex, p: LatticePoint, alpha: f64, beta: f64) -> Result<f64> {
    Ok(univariate::charlier_orthonormal(n.n1, p.x1 as u64, alpha)?
        * univariate::charlier_orthonormal(n.n2, p.x2 as u64, beta)?)
}

/// `|G(z1, z2; x) − Σ_{n1+n2 <= degree_cap} C_{n1,n2}(x) z1^{n1} z2^{n2} / sqrt(n1! n2!)|`
/// where `G` is the closed-form generating function.
pub fn generating_check(
    params: &ModelParams,
    z1: f64,
    z2: f64,
    p: LatticePoint,
    degree_cap: u32,
) -> f64 {
    let (c, s) = params.cos_sin();
    let (a, b) = (params.alpha, params.beta);
    let closed = (-z1 * params.omega() - z2 * params.zeta()).exp()
        * (1.0 + z1 / a * c + z2 / a * s).powi(p.x1 as i32)
        * (1.0 - z1 / b * s + z2 / b * c).powi(p.x2 as i32);

    let table = Charlier2Table::new(degree_cap, p.x1, p.x2, params);
    let mut series = 0.0;
    for n1 in 0..=degree_cap {
        for n2 in 0..=(degree_cap - n1) {
            let n = ModeIndex::new(n1, n2);
            let lf = (log_factorial(u64::from(n1)) + log_factorial(u64::from(n2))) / 2.0;
            let zpow = z1.powi(n1 as i32) * z2.powi(n2 as i32);
            if zpow != 0.0 {
                series += table.value(n, p).unwrap() * zpow / lf.exp();
            }
        }
    }
    (closed - series).abs()
}

/// `|Σ_{x in window} w(x) C_n(x) C_m(x) − δ_{nm}|`.
pub fn orthogonality_check(
    params: &ModelParams,
    n: ModeIndex,
    m: ModeIndex,
    trunc: &TruncationSpec,
) -> f64 {
    let cn = charlier2_grid(n, trunc.m1, trunc.m2, params);
    let cm = charlier2_grid(m, trunc.m1, trunc.m2, params);
    let mut sum = 0.0;
    for x1 in 0..=trunc.m1 {
        for x2 in 0..=trunc.m2 {
            let p = LatticePoint::new(x1, x2);
            sum += weight(p, params) * cn.get(p).unwrap() * cm.get(p).unwrap();
        }
    }
    let delta = if n == m { 1.0 } else { 0.0 };
    (sum - delta).abs()
}
