//! Continuum limit. With `x_i = sqrt(2) a_i x̃_i + a_i²` and `a_i → ∞`,
//! the scaled lattice functions approach the 2D Hermite oscillator in
//! rotated coordinates.
//!
//! Errors are sup-norms over lattice points whose scaled image lies in
//! `[-window, window]²`; they shrink with the scale but are never zero.

use crate::bivariate::{charlier2_grid, log_weight, LatticePoint, ModelParams};
use crate::error::{Error, Result};
use crate::lattice_ops::{gauge_transform, GridFunction, Ladder, LatticeFunction, Mode};
use crate::report::Residual;
use crate::spectra::EnergyLabel;
use crate::univariate::{hermite, log_factorial, poisson_weight};

/// Affine map between lattice coordinates and continuum coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingMap {
    alpha: f64,
    beta: f64,
}

impl ScalingMap {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha > 0.0 && beta > 0.0) {
            return Err(Error::Domain(format!("scales must be positive, got {alpha}, {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn to_continuum(&self, p: LatticePoint) -> (f64, f64) {
        let s = std::f64::consts::SQRT_2;
        (
            (p.x1 as f64 - self.alpha * self.alpha) / (s * self.alpha),
            (p.x2 as f64 - self.beta * self.beta) / (s * self.beta),
        )
    }

    pub fn to_lattice(&self, xt1: f64, xt2: f64) -> (f64, f64) {
        let s = std::f64::consts::SQRT_2;
        (s * self.alpha * xt1 + self.alpha * self.alpha, s * self.beta * xt2 + self.beta * self.beta)
    }

    /// Jacobian factor `sqrt(sqrt(2) a · sqrt(2) b)` relating ℓ² and L² norms.
    pub fn density_factor(&self) -> f64 {
        (2.0 * self.alpha * self.beta).sqrt()
    }

    /// Lattice points whose image lies in `[-window, window]²`.
    pub fn points_within(&self, window: f64) -> Vec<LatticePoint> {
        let range = |a: f64| {
            let s = std::f64::consts::SQRT_2 * a;
            let lo = (a * a - window * s - 1e-9).ceil().max(0.0) as usize;
            let hi = (a * a + window * s + 1e-9).floor().max(0.0) as usize;
            lo..=hi
        };
        let mut out = Vec::new();
        for x1 in range(self.alpha) {
            for x2 in range(self.beta) {
                out.push(LatticePoint::new(x1, x2));
            }
        }
        out
    }
}

/// Normalized Hermite function `ψ_n(x)`.
pub fn oscillator_1d(n: u32, x: f64) -> f64 {
    let ln_norm = 0.5 * (std::f64::consts::PI.ln() * 0.5 + f64::from(n) * 2f64.ln() + log_factorial(u64::from(n)));
    hermite(n, x) * (-0.5 * x * x - ln_norm).exp()
}

/// `dψ_n/dx = sqrt(n/2) ψ_{n−1} − sqrt((n+1)/2) ψ_{n+1}`.
pub fn oscillator_1d_derivative(n: u32, x: f64) -> f64 {
    let n_f = f64::from(n);
    let down = if n > 0 { (n_f / 2.0).sqrt() * oscillator_1d(n - 1, x) } else { 0.0 };
    down - ((n_f + 1.0) / 2.0).sqrt() * oscillator_1d(n + 1, x)
}

/// `(x̂1, x̂2) = (c x̃1 − s x̃2, s x̃1 + c x̃2)`.
pub fn rotate(theta: f64, xt1: f64, xt2: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (c * xt1 - s * xt2, s * xt1 + c * xt2)
}

/// `φ_{N,n}(x̂) = ψ_n(x̂1) ψ_{N−n}(x̂2)` at already rotated coordinates.
pub fn oscillator_wavefunction(label: EnergyLabel, xh1: f64, xh2: f64) -> f64 {
    let m = label.mode();
    oscillator_1d(m.n1, xh1) * oscillator_1d(m.n2, xh2)
}

/// Rotated continuum ladder applied to `φ_{N,n}(x̂(x̃))`, evaluated at `x̃`
/// through derivatives in the unrotated coordinates.
pub fn continuum_ladder(which: Ladder, label: EnergyLabel, theta: f64, xt1: f64, xt2: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let (xh1, xh2) = rotate(theta, xt1, xt2);
    let m = label.mode();
    let f = oscillator_1d(m.n1, xh1) * oscillator_1d(m.n2, xh2);
    let dh1 = oscillator_1d_derivative(m.n1, xh1) * oscillator_1d(m.n2, xh2);
    let dh2 = oscillator_1d(m.n1, xh1) * oscillator_1d_derivative(m.n2, xh2);
    let d1 = c * dh1 + s * dh2;
    let d2 = -s * dh1 + c * dh2;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let create = [r * (xt1 * f - d1), r * (xt2 * f - d2)];
    let annihilate = [r * (xt1 * f + d1), r * (xt2 * f + d2)];
    let mix = |v: [f64; 2], mode: Mode| match mode {
        Mode::One => c * v[0] - s * v[1],
        Mode::Two => s * v[0] + c * v[1],
    };
    match which {
        Ladder::Raise(mode) => mix(create, mode),
        Ladder::Lower(mode) => mix(annihilate, mode),
    }
}

/// Scaled `Υ_{N,n}` on the window `[0..=m]²`.
fn scaled_upsilon(label: EnergyLabel, m: usize, params: &ModelParams) -> GridFunction {
    let grid = charlier2_grid(label.mode(), m, m, params);
    GridFunction::from_fn(m, m, |p| ((0.5 * log_weight(p, params)).exp() * grid.get(p).unwrap()).into())
}

fn setup(scale: f64, theta: f64, window: f64) -> Result<(ModelParams, ScalingMap, Vec<LatticePoint>)> {
    if !(window.is_finite() && window >= 0.0) {
        return Err(Error::Domain(format!("window must be non-negative, got {window}")));
    }
    let params = ModelParams::new(scale, scale, theta)?;
    let map = ScalingMap::new(scale, scale)?;
    let points = map.points_within(window);
    Ok((params, map, points))
}

/// `sup |sqrt(2) a · P(x; a) − e^{−x̃²}/sqrt(π)|` over the 1D window.
pub fn weight_limit_error(scale: f64, window: f64) -> Result<Residual<f64>> {
    let map = ScalingMap::new(scale, scale)?;
    let s = std::f64::consts::SQRT_2 * scale;
    let mut res = Residual::zero();
    let mut seen = std::collections::BTreeSet::new();
    for p in map.points_within(window) {
        if !seen.insert(p.x1) {
            continue;
        }
        let (xt, _) = map.to_continuum(p);
        let lhs = s * poisson_weight(p.x1 as u64, scale);
        let rhs = (-xt * xt).exp() / std::f64::consts::PI.sqrt();
        res.observe((lhs - rhs).abs(), xt);
    }
    Ok(res)
}

/// `sup |density · Υ_{N,n}(x) − φ_{N,n}(x̂(x̃))|` with `α = β = scale`.
pub fn wavefunction_limit_error(
    label: EnergyLabel,
    scale: f64,
    theta: f64,
    window: f64,
) -> Result<Residual<(f64, f64)>> {
    let (params, map, points) = setup(scale, theta, window)?;
    let m = points.iter().map(|p| p.x1.max(p.x2)).max().unwrap_or(0);
    let ups = scaled_upsilon(label, m, &params);
    let d = map.density_factor();
    let mut res = Residual::zero();
    for p in points {
        let (xt1, xt2) = map.to_continuum(p);
        let (xh1, xh2) = rotate(theta, xt1, xt2);
        let lhs = d * ups.eval(p)?.re;
        res.observe((lhs - oscillator_wavefunction(label, xh1, xh2)).abs(), (xt1, xt2));
    }
    Ok(res)
}

/// `sup |density · (Ā Υ_{N,n})(x) − (A φ_{N,n})(x̃)|` for one gauged
/// ladder operator and its rotated continuum counterpart.
pub fn ladder_limit_error(
    which: Ladder,
    label: EnergyLabel,
    scale: f64,
    theta: f64,
    window: f64,
) -> Result<Residual<(f64, f64)>> {
    let (params, map, points) = setup(scale, theta, window)?;
    let m = points.iter().map(|p| p.x1.max(p.x2)).max().unwrap_or(0) + 1;
    let ups = scaled_upsilon(label, m, &params);
    let op = gauge_transform(&which.operator(&params), &params);
    let image = op.apply(&ups);
    let d = map.density_factor();
    let mut res = Residual::zero();
    for p in points {
        let (xt1, xt2) = map.to_continuum(p);
        let lhs = d * image.eval(p)?.re;
        res.observe((lhs - continuum_ladder(which, label, theta, xt1, xt2)).abs(), (xt1, xt2));
    }
    Ok(res)
}

/// Which quantity a convergence row measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Weight,
    Wavefunction,
    Ladder(Ladder),
}

impl LimitKind {
    pub fn name(self) -> &'static str {
        match self {
            LimitKind::Weight => "weight",
            LimitKind::Wavefunction => "wavefunction",
            LimitKind::Ladder(l) => l.name(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub kind: LimitKind,
    pub scale: f64,
    pub label: EnergyLabel,
    pub theta: f64,
    pub window: f64,
    pub sup_error: f64,
}

/// One row per scale, in the order given.
pub fn convergence_table(
    kind: LimitKind,
    label: EnergyLabel,
    theta: f64,
    scales: &[f64],
    window: f64,
) -> Result<Vec<ConvergenceRow>> {
    scales
        .iter()
        .map(|&scale| {
            let sup_error = match kind {
                LimitKind::Weight => weight_limit_error(scale, window)?.max_abs,
                LimitKind::Wavefunction => wavefunction_limit_error(label, scale, theta, window)?.max_abs,
                LimitKind::Ladder(l) => ladder_limit_error(l, label, scale, theta, window)?.max_abs,
            };
            Ok(ConvergenceRow { kind, scale, label, theta, window, sup_error })
        })
        .collect()
}

/// `∫∫ φ_{N,n}²` over `[-half_width, half_width]²` by the trapezoid rule
/// with `steps` intervals per axis.
pub fn trapezoid_norm(label: EnergyLabel, theta: f64, half_width: f64, steps: usize) -> f64 {
    let h = 2.0 * half_width / steps as f64;
    let w = |i: usize| if i == 0 || i == steps { 0.5 } else { 1.0 };
    let mut acc = 0.0;
    for i in 0..=steps {
        let xt1 = -half_width + i as f64 * h;
        for j in 0..=steps {
            let xt2 = -half_width + j as f64 * h;
            let (xh1, xh2) = rotate(theta, xt1, xt2);
            let v = oscillator_wavefunction(label, xh1, xh2);
            acc += w(i) * w(j) * v * v;
        }
    }
    acc * h * h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(big_n: u32, n: u32) -> EnergyLabel {
        EnergyLabel::new(big_n, n).unwrap()
    }

    #[test]
    fn ground_state_value() {
        let v = oscillator_wavefunction(label(0, 0), 0.0, 0.0);
        assert!((v - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hermite_function_closed_forms() {
        let pi4 = std::f64::consts::PI.powf(0.25);
        for x in [-1.3, 0.0, 0.4, 2.2] {
            let e = (-x * x / 2.0f64).exp();
            assert!((oscillator_1d(0, x) - e / pi4).abs() < 1e-14);
            assert!((oscillator_1d(1, x) - std::f64::consts::SQRT_2 * x * e / pi4).abs() < 1e-14);
            let want2 = (2.0 * x * x - 1.0) * e / (pi4 * std::f64::consts::SQRT_2);
            assert!((oscillator_1d(2, x) - want2).abs() < 1e-14);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-5;
        for n in 0..6 {
            for x in [-1.7, -0.2, 0.9, 2.5] {
                let fd = (oscillator_1d(n, x + h) - oscillator_1d(n, x - h)) / (2.0 * h);
                assert!((fd - oscillator_1d_derivative(n, x)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn scaling_map_round_trip() {
        let m = ScalingMap::new(3.0, 2.0).unwrap();
        let p = LatticePoint::new(11, 2);
        let (a, b) = m.to_continuum(p);
        let (x1, x2) = m.to_lattice(a, b);
        assert!((x1 - 11.0).abs() < 1e-12 && (x2 - 2.0).abs() < 1e-12);
        for q in m.points_within(1.0) {
            let (a, b) = m.to_continuum(q);
            assert!(a.abs() <= 1.0 + 1e-9 && b.abs() <= 1.0 + 1e-9);
        }
        assert!(ScalingMap::new(0.0, 1.0).is_err());
    }

    #[test]
    fn wavefunctions_are_normalized() {
        for (l, theta) in [(label(0, 0), 0.0), (label(2, 1), 0.4), (label(3, 0), 1.1)] {
            let v = trapezoid_norm(l, theta, 8.0, 320);
            assert!((v - 1.0).abs() < 1e-8, "{l:?} {v}");
        }
    }

    #[test]
    fn continuum_ladder_acts_as_expected() {
        // rotated ladders shift the rotated-frame quantum numbers
        let theta = 0.4;
        let l = label(3, 1);
        for (xt1, xt2) in [(0.3, -0.8), (1.1, 0.5)] {
            let (xh1, xh2) = rotate(theta, xt1, xt2);
            let got = continuum_ladder(Ladder::Raise(Mode::One), l, theta, xt1, xt2);
            let want = 2f64.sqrt() * oscillator_wavefunction(label(4, 2), xh1, xh2);
            assert!((got - want).abs() < 1e-12);
            let got = continuum_ladder(Ladder::Lower(Mode::Two), l, theta, xt1, xt2);
            let want = 2f64.sqrt() * oscillator_wavefunction(label(2, 1), xh1, xh2);
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn number_operator_by_finite_differences() {
        // a1† a1 φ_{N,n} = n φ_{N,n} at θ = 0, with a1† applied numerically
        let l = label(3, 2);
        let h = 1e-4;
        let lower = |x1: f64, x2: f64| continuum_ladder(Ladder::Lower(Mode::One), l, 0.0, x1, x2);
        for (x1, x2) in [(0.2, 0.7), (-1.0, 0.3)] {
            let d = (lower(x1 + h, x2) - lower(x1 - h, x2)) / (2.0 * h);
            let got = (x1 * lower(x1, x2) - d) / 2f64.sqrt();
            let want = 2.0 * oscillator_wavefunction(l, x1, x2);
            assert!((got - want).abs() < 1e-7, "{got} vs {want}");
        }
    }

    #[test]
    fn weight_converges() {
        let errs: Vec<f64> = [2.0, 4.0, 8.0, 16.0].iter().map(|&s| weight_limit_error(s, 2.0).unwrap().max_abs).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        assert!(errs[3] < 0.01);
    }

    #[test]
    fn ground_state_limit() {
        let errs: Vec<f64> = [2.0, 4.0, 8.0]
            .iter()
            .map(|&s| wavefunction_limit_error(label(0, 0), s, 0.4, 2.0).unwrap().max_abs)
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        assert!(errs[2] < 0.03, "{errs:?}");
    }
}
