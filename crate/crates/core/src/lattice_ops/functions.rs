use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LatticeFunction;
use crate::bivariate::LatticePoint;
use crate::error::{Error, Result};

/// Probe functions are supported on `[0..=PROBE_SUPPORT]^2`.
pub const PROBE_SUPPORT: usize = 12;

/// Function given by a closure.
pub struct FromFn<F>(pub F);

impl<F> LatticeFunction for FromFn<F>
where
    F: Fn(LatticePoint) -> Result<Complex64> + Sync,
{
    fn eval(&self, p: LatticePoint) -> Result<Complex64> {
        (self.0)(p)
    }
}

/// Indicator of a single lattice point.
#[derive(Debug, Clone, Copy)]
pub struct Delta(pub LatticePoint);

impl LatticeFunction for Delta {
    fn eval(&self, p: LatticePoint) -> Result<Complex64> {
        Ok(if p == self.0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }
}

/// Values on a finite window; reading outside it is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    m1: usize,
    m2: usize,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn from_fn(m1: usize, m2: usize, f: impl Fn(LatticePoint) -> Complex64) -> Self {
        let mut values = Vec::with_capacity((m1 + 1) * (m2 + 1));
        for x1 in 0..=m1 {
            for x2 in 0..=m2 {
                values.push(f(LatticePoint::new(x1, x2)));
            }
        }
        Self { m1, m2, values }
    }

    /// Materialise any lattice function on the window.
    pub fn tabulate(f: &dyn LatticeFunction, m1: usize, m2: usize) -> Result<Self> {
        let mut values = Vec::with_capacity((m1 + 1) * (m2 + 1));
        for x1 in 0..=m1 {
            for x2 in 0..=m2 {
                values.push(f.eval(LatticePoint::new(x1, x2))?);
            }
        }
        Ok(Self { m1, m2, values })
    }

    pub fn window(&self) -> (usize, usize) {
        (self.m1, self.m2)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

impl LatticeFunction for GridFunction {
    fn eval(&self, p: LatticePoint) -> Result<Complex64> {
        if p.x1 <= self.m1 && p.x2 <= self.m2 {
            Ok(self.values[p.x1 * (self.m2 + 1) + p.x2])
        } else {
            Err(Error::OutOfWindow { x1: p.x1, x2: p.x2, m1: self.m1, m2: self.m2 })
        }
    }
}

/// Finitely supported function, zero outside `[0..=support]^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeFunction {
    support: usize,
    values: Vec<Complex64>,
}

impl ProbeFunction {
    /// Coefficients with real and imaginary parts uniform in `[-1, 1)`.
    pub fn random(rng: &mut impl Rng, support: usize) -> Self {
        let n = (support + 1) * (support + 1);
        let values = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Self { support, values }
    }

    pub fn support(&self) -> usize {
        self.support
    }
}

impl LatticeFunction for ProbeFunction {
    fn eval(&self, p: LatticePoint) -> Result<Complex64> {
        if p.x1 <= self.support && p.x2 <= self.support {
            Ok(self.values[p.x1 * (self.support + 1) + p.x2])
        } else {
            Ok(Complex64::new(0.0, 0.0))
        }
    }
}

/// `count` reproducible probe functions for a given seed.
pub fn probe_functions(seed: u64, count: usize) -> Vec<ProbeFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| ProbeFunction::random(&mut rng, PROBE_SUPPORT)).collect()
}

/// `count` reproducible points in `[0..=max]^2`.
pub fn probe_points(seed: u64, count: usize, max: usize) -> Vec<LatticePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..count)
        .map(|_| LatticePoint::new(rng.random_range(0..=max), rng.random_range(0..=max)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probes_are_reproducible() {
        assert_eq!(probe_functions(7, 3), probe_functions(7, 3));
        assert_ne!(probe_functions(7, 1), probe_functions(8, 1));
        assert_eq!(probe_points(1, 5, 10), probe_points(1, 5, 10));
    }

    #[test]
    fn probe_vanishes_outside_support() {
        let f = &probe_functions(1, 1)[0];
        assert_eq!(f.eval(LatticePoint::new(13, 0)).unwrap(), Complex64::new(0.0, 0.0));
        assert_ne!(f.eval(LatticePoint::new(12, 12)).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn grid_reports_out_of_window() {
        let g = GridFunction::from_fn(2, 3, |p| Complex64::new(p.x1 as f64, p.x2 as f64));
        assert_eq!(g.eval(LatticePoint::new(2, 3)).unwrap(), Complex64::new(2.0, 3.0));
        assert!(matches!(g.eval(LatticePoint::new(3, 0)), Err(Error::OutOfWindow { .. })));
    }
}
