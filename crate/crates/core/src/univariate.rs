//! One-variable Charlier polynomials, their ladder structure, and the
//! physicists' Hermite polynomials used as continuum targets.
//!
//! `C_n(x, a)` is the terminating `2F0(-n, -x; ; -1/a)` and
//! `Ĉ_n(x) = (-a)^n / sqrt(n!) * C_n(x, a^2)` is its orthonormal version
//! with respect to the Poisson weight `e^{-a^2} a^{2x} / x!`.
//!
//! Valid ranges for double precision: `n <= 30`, `x <= 200`, `a <= 10`.

use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::report::Residual;

/// Strictly positive Charlier parameter `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniCharlierParam(f64);

impl UniCharlierParam {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 0.0 {
            Ok(Self(a))
        } else {
            Err(Error::Domain(format!("Charlier parameter must be positive, got {a}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Standard Charlier polynomial `C_n(x, a)`.
///
/// The series terminates after `min(n, x) + 1` terms, so the value is exact
/// up to rounding.
pub fn charlier_standard(n: u32, x: u64, a: f64) -> Result<f64> {
    let a = UniCharlierParam::new(a)?.get();
    let mut term = 1.0;
    let mut sum = 1.0;
    let kmax = u64::from(n).min(x);
    for k in 0..kmax {
        let k = k as f64;
        // (-n)_{k+1}(-x)_{k+1}/(k+1)! from the k-th term
        term *= (k - f64::from(n)) * (k - x as f64) / (k + 1.0) * (-1.0 / a);
        sum += term;
    }
    Ok(sum)
}

/// Orthonormal Charlier polynomial `Ĉ_n(x)` with parameter `a`.
pub fn charlier_orthonormal(n: u32, x: u64, a: f64) -> Result<f64> {
    let a = UniCharlierParam::new(a)?.get();
    let prefactor = (-a).powi(n as i32) / (ln_factorial(u64::from(n)) * 0.5).exp();
    Ok(prefactor * charlier_standard(n, x, a * a)?)
}

/// `Ĉ_0(x), ..., Ĉ_{n_max}(x)` at a single point via the raising recursion.
///
/// Cheaper than repeated calls when every degree is needed; agrees with
/// [`charlier_orthonormal`] to rounding.
pub fn charlier_orthonormal_column(n_max: u32, x: u64, a: f64) -> Result<Vec<f64>> {
    let a = UniCharlierParam::new(a)?.get();
    // Row k holds Ĉ_k on 0..=x; raising only reads x-1.
    let width = x as usize + 1;
    let mut row = vec![1.0; width];
    let mut out = vec![1.0];
    for k in 0..n_max {
        let mut next = vec![0.0; width];
        for (xi, slot) in next.iter_mut().enumerate() {
            let down = if xi == 0 { 0.0 } else { xi as f64 / a * row[xi - 1] };
            *slot = (down - a * row[xi]) / f64::from(k + 1).sqrt();
        }
        out.push(next[width - 1]);
        row = next;
    }
    Ok(out)
}

/// `ln(x!)`.
pub fn log_factorial(x: u64) -> f64 {
    ln_factorial(x)
}

/// Poisson probability `e^{-a^2} a^{2x} / x!`, evaluated in log space.
pub fn poisson_weight(x: u64, a: f64) -> f64 {
    log_poisson_weight(x, a).exp()
}

pub fn log_poisson_weight(x: u64, a: f64) -> f64 {
    -a * a + 2.0 * x as f64 * a.ln() - ln_factorial(x)
}

/// Which measure an orthogonality sum is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniMeasure {
    /// `e^{-a^2} a^{2x} / x!`, a probability distribution.
    Poisson,
    /// `a^{2x} / x!` without the normalising exponential.
    Unnormalized,
}

/// Smallest cutoff `X` past the Poisson mode at which both the weight and the
/// largest summand `w(x) Ĉ_n(x)^2` (`n <= max_degree`) have dropped below
/// `1e-18` and `1e-16` respectively.
pub fn poisson_cutoff(a: f64, max_degree: u32) -> Result<u64> {
    let a = UniCharlierParam::new(a)?.get();
    let mut x = (a * a).ceil() as u64;
    loop {
        let w = poisson_weight(x, a);
        if w < 1e-18 {
            let col = charlier_orthonormal_column(max_degree, x, a)?;
            let worst = col.iter().map(|c| c * c * w).fold(0.0, f64::max);
            if worst < 1e-16 {
                return Ok(x);
            }
        }
        x += 1;
    }
}

/// `Σ_{x <= cutoff} μ(x) Ĉ_n(x) Ĉ_m(x)`.
pub fn orthonormality_sum(n: u32, m: u32, a: f64, measure: UniMeasure, cutoff: u64) -> Result<f64> {
    let mut sum = 0.0;
    for x in 0..=cutoff {
        let mut w = poisson_weight(x, a);
        if measure == UniMeasure::Unnormalized {
            w *= (a * a).exp();
        }
        sum += w * charlier_orthonormal(n, x, a)? * charlier_orthonormal(m, x, a)?;
    }
    Ok(sum)
}

/// `|e^{-az}(1+z/a)^x - Σ_{n<=n_terms} Ĉ_n(x) z^n / sqrt(n!)|`.
pub fn generating_residual(x: u64, z: f64, a: f64, n_terms: u32) -> Result<f64> {
    let a = UniCharlierParam::new(a)?.get();
    let closed = (-a * z).exp() * (1.0 + z / a).powi(x as i32);
    let col = charlier_orthonormal_column(n_terms, x, a)?;
    let mut series = 0.0;
    let mut zpow = 1.0;
    for (n, c) in col.iter().enumerate() {
        series += c * zpow / (ln_factorial(n as u64) * 0.5).exp();
        zpow *= z;
    }
    Ok((closed - series).abs())
}

/// Lowering operator `A_- = a(T^+ - 1)` applied to `f` at `x`.
pub fn lower_at(f: impl Fn(u64) -> f64, x: u64, a: f64) -> f64 {
    a * (f(x + 1) - f(x))
}

/// Raising operator `A_+ = -a + (x/a) T^-` applied to `f` at `x`.
/// The shifted read is skipped at `x = 0`, where its coefficient vanishes.
pub fn raise_at(f: impl Fn(u64) -> f64, x: u64, a: f64) -> f64 {
    let down = if x == 0 { 0.0 } else { x as f64 / a * f(x - 1) };
    down - a * f(x)
}

/// `Y = A_+ A_-` applied to `f` at `x`, built by composing the two actions.
pub fn difference_composed_at(f: impl Fn(u64) -> f64 + Copy, x: u64, a: f64) -> f64 {
    raise_at(|y| lower_at(f, y, a), x, a)
}

/// The three-point form as it appears in print: `-a^2 T^+ + (x^2 + a^2) - x T^-`.
pub fn difference_printed_at(f: impl Fn(u64) -> f64, x: u64, a: f64) -> f64 {
    let xf = x as f64;
    let down = if x == 0 { 0.0 } else { xf * f(x - 1) };
    -a * a * f(x + 1) + (xf * xf + a * a) * f(x) - down
}

/// The expansion of `A_+ A_-`: `-a^2 T^+ + (x + a^2) - x T^-`.
pub fn difference_expanded_at(f: impl Fn(u64) -> f64, x: u64, a: f64) -> f64 {
    let xf = x as f64;
    let down = if x == 0 { 0.0 } else { xf * f(x - 1) };
    -a * a * f(x + 1) + (xf + a * a) * f(x) - down
}

#[derive(Debug, Clone, Copy)]
pub struct LadderCheck {
    /// `A_- Ĉ_n - sqrt(n) Ĉ_{n-1}` over the grid, located at `(n, x)`.
    pub lowering: Residual<(u32, u64)>,
    /// `A_+ Ĉ_n - sqrt(n+1) Ĉ_{n+1}`.
    pub raising: Residual<(u32, u64)>,
}

/// Checks both ladder actions for all `n <= n_max`, `x <= x_max`.
pub fn univariate_ladder_check(n_max: u32, x_max: u64, a: f64) -> Result<LadderCheck> {
    UniCharlierParam::new(a)?;
    let c = |n: u32, x: u64| charlier_orthonormal(n, x, a).unwrap();
    let mut lowering = Residual::zero();
    let mut raising = Residual::zero();
    for n in 0..=n_max {
        for x in 0..=x_max {
            let lhs = lower_at(|y| c(n, y), x, a);
            let rhs = if n == 0 { 0.0 } else { f64::from(n).sqrt() * c(n - 1, x) };
            lowering.observe((lhs - rhs).abs(), (n, x));

            let lhs = raise_at(|y| c(n, y), x, a);
            let rhs = f64::from(n + 1).sqrt() * c(n + 1, x);
            raising.observe((lhs - rhs).abs(), (n, x));
        }
    }
    Ok(LadderCheck { lowering, raising })
}

#[derive(Debug, Clone, Copy)]
pub struct DifferenceCheck {
    /// `A_+A_- Ĉ_n - n Ĉ_n` with `Y` built by composition.
    pub eigen: Residual<(u32, u64)>,
    /// `A_+A_- Ĉ_n - n Ĉ_{n+1}`, the literal printed reading of the eigen-equation.
    pub shifted_reading: Residual<(u32, u64)>,
    /// Difference between the printed three-point form and the composition
    /// when both act on `Ĉ_n`.
    pub printed_form: Residual<(u32, u64)>,
    /// Difference between the expanded three-point form and the composition.
    pub expanded_form: Residual<(u32, u64)>,
}

impl DifferenceCheck {
    /// Whether the printed three-point form reproduces the composition.
    pub fn printed_form_matches(&self, tol: f64) -> bool {
        self.printed_form.below(tol)
    }
}

pub fn univariate_difference_check(n_max: u32, x_max: u64, a: f64) -> Result<DifferenceCheck> {
    UniCharlierParam::new(a)?;
    let c = |n: u32, x: u64| charlier_orthonormal(n, x, a).unwrap();
    let mut check = DifferenceCheck {
        eigen: Residual::zero(),
        shifted_reading: Residual::zero(),
        printed_form: Residual::zero(),
        expanded_form: Residual::zero(),
    };
    for n in 0..=n_max {
        for x in 0..=x_max {
            let f = |y: u64| c(n, y);
            let composed = difference_composed_at(f, x, a);
            let at = (n, x);
            check.eigen.observe((composed - f64::from(n) * c(n, x)).abs(), at);
            check
                .shifted_reading
                .observe((composed - f64::from(n) * c(n + 1, x)).abs(), at);
            check
                .printed_form
                .observe((difference_printed_at(f, x, a) - composed).abs(), at);
            check
                .expanded_form
                .observe((difference_expanded_at(f, x, a) - composed).abs(), at);
        }
    }
    Ok(check)
}

/// Physicists' Hermite polynomial `H_n(x)` by three-term recurrence.
/// Stays finite for `n <= 60` at moderate `|x|`.
pub fn hermite(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}
