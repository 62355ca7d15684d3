//! Difference operators on complex functions over the lattice `N x N`.
//!
//! A [`LatticeOperator`] is a tree of stencils (`Σ c_k(x) T^{d_k}`), linear
//! combinations and compositions. Compositions are applied lazily: nothing
//! is expanded symbolically and no matrix is formed, so operator identities
//! hold on the infinite lattice and only the probing window is finite.
//!
//! Boundary convention: a stencil term that would read below the lattice is
//! skipped when its coefficient vanishes at the evaluation point (every
//! `T^-` term of the model carries a factor `x_i` or `sqrt(x_i)`), and is an
//! [`Error::OutOfDomain`] otherwise.

mod functions;
mod gauge;
mod model;

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bivariate::LatticePoint;
use crate::error::{Error, Result};
use crate::report::Residual;

pub use functions::{probe_functions, probe_points, Delta, FromFn, GridFunction, ProbeFunction, PROBE_SUPPORT};
pub use gauge::{gauge_transform, half_weight_ratio};
pub use model::{
    anisotropic_hamiltonian, cross_ops, eigen_op, hamiltonian, hamiltonian_composed, lowering,
    printed_gauged_ladder, raising, shift, Axis, Direction, Ladder, Mode, OperatorForms,
    Su2Generators,
};

/// A complex-valued function on (part of) the lattice.
pub trait LatticeFunction: Sync {
    fn eval(&self, p: LatticePoint) -> Result<Complex64>;
}

impl<T: LatticeFunction + ?Sized> LatticeFunction for &T {
    fn eval(&self, p: LatticePoint) -> Result<Complex64> {
        (**self).eval(p)
    }
}

pub type Coefficient = Arc<dyn Fn(LatticePoint) -> Complex64 + Send + Sync>;

/// One term `c(x) T_{x1}^{d1} T_{x2}^{d2}` of a stencil.
#[derive(Clone)]
pub struct StencilTerm {
    pub offset: (i32, i32),
    pub coef: Coefficient,
}

impl StencilTerm {
    pub fn new(offset: (i32, i32), coef: impl Fn(LatticePoint) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { offset, coef: Arc::new(coef) }
    }

    /// Term with a real coefficient given as a function of `(x1, x2)`.
    pub fn real(offset: (i32, i32), coef: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(offset, move |p| Complex64::from(coef(p.x1 as f64, p.x2 as f64)))
    }
}

#[derive(Clone)]
enum Node {
    Stencil(Vec<StencilTerm>),
    Sum(Vec<(Complex64, LatticeOperator)>),
    /// `outer ∘ inner`
    Compose(LatticeOperator, LatticeOperator),
}

/// Immutable, cheaply clonable linear operator on lattice functions.
#[derive(Clone)]
pub struct LatticeOperator(Arc<Node>);

impl std::fmt::Debug for LatticeOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &*self.0 {
            Node::Stencil(terms) => {
                let offsets: Vec<_> = terms.iter().map(|t| t.offset).collect();
                write!(f, "Stencil{offsets:?}")
            }
            Node::Sum(parts) => f.debug_list().entries(parts.iter().map(|(_, op)| op)).finish(),
            Node::Compose(a, b) => write!(f, "({a:?} ∘ {b:?})"),
        }
    }
}

impl LatticeOperator {
    pub fn stencil(terms: Vec<StencilTerm>) -> Self {
        Self(Arc::new(Node::Stencil(terms)))
    }

    pub fn identity() -> Self {
        Self::stencil(vec![StencilTerm::real((0, 0), |_, _| 1.0)])
    }

    pub fn zero() -> Self {
        Self::stencil(Vec::new())
    }

    /// Multiplication by a function of the lattice point.
    pub fn multiply(f: impl Fn(LatticePoint) -> Complex64 + Send + Sync + 'static) -> Self {
        Self::stencil(vec![StencilTerm::new((0, 0), f)])
    }

    /// `Σ c_i op_i`
    pub fn linear_combination(parts: Vec<(Complex64, LatticeOperator)>) -> Self {
        Self(Arc::new(Node::Sum(parts)))
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &LatticeOperator) -> Self {
        Self(Arc::new(Node::Compose(self.clone(), inner.clone())))
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        Self::linear_combination(vec![(c.into(), self.clone())])
    }

    /// The stencil terms, if this operator is a plain stencil.
    pub fn terms(&self) -> Option<&[StencilTerm]> {
        match &*self.0 {
            Node::Stencil(t) => Some(t),
            _ => None,
        }
    }

    /// Upper bound on how far (per axis) the operator reads from the
    /// evaluation point.
    pub fn stencil_radius(&self) -> usize {
        match &*self.0 {
            Node::Stencil(terms) => terms
                .iter()
                .map(|t| t.offset.0.unsigned_abs().max(t.offset.1.unsigned_abs()) as usize)
                .max()
                .unwrap_or(0),
            Node::Sum(parts) => parts.iter().map(|(_, op)| op.stencil_radius()).max().unwrap_or(0),
            Node::Compose(a, b) => a.stencil_radius() + b.stencil_radius(),
        }
    }

    /// `(self f)(p)`
    pub fn eval_at(&self, f: &dyn LatticeFunction, p: LatticePoint) -> Result<Complex64> {
        match &*self.0 {
            Node::Stencil(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for term in terms {
                    let c = (term.coef)(p);
                    if c == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let (d1, d2) = term.offset;
                    let target = p.offset(d1, d2).ok_or(Error::OutOfDomain {
                        x1: p.x1 as i64 + i64::from(d1),
                        x2: p.x2 as i64 + i64::from(d2),
                    })?;
                    acc += c * f.eval(target)?;
                }
                Ok(acc)
            }
            Node::Sum(parts) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, op) in parts {
                    acc += c * op.eval_at(f, p)?;
                }
                Ok(acc)
            }
            Node::Compose(outer, inner) => outer.eval_at(&Applied { op: inner, f }, p),
        }
    }

    /// Lazily evaluated `self f`.
    pub fn apply<'a>(&'a self, f: &'a dyn LatticeFunction) -> Applied<'a> {
        Applied { op: self, f }
    }

    /// Coefficients of the equivalent stencil at `p`, found by acting on
    /// delta functions around `p + d` for every offset within the radius.
    /// Offsets that fall below the lattice are omitted.
    pub fn local_stencil(&self, p: LatticePoint) -> Result<Vec<((i32, i32), Complex64)>> {
        let r = self.stencil_radius() as i32;
        let mut out = Vec::new();
        for d1 in -r..=r {
            for d2 in -r..=r {
                if let Some(q) = p.offset(d1, d2) {
                    let v = self.eval_at(&Delta(q), p)?;
                    if v != Complex64::new(0.0, 0.0) {
                        out.push(((d1, d2), v));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `op f`, evaluated on demand.
pub struct Applied<'a> {
    op: &'a LatticeOperator,
    f: &'a dyn LatticeFunction,
}

impl LatticeFunction for Applied<'_> {
    fn eval(&self, p: LatticePoint) -> Result<Complex64> {
        self.op.eval_at(self.f, p)
    }
}

/// `[a, b] = a∘b − b∘a`
pub fn commutator(a: &LatticeOperator, b: &LatticeOperator) -> LatticeOperator {
    a.compose(b) - b.compose(a)
}

impl Add for LatticeOperator {
    type Output = LatticeOperator;
    fn add(self, rhs: Self) -> Self {
        LatticeOperator::linear_combination(vec![(1.0.into(), self), (1.0.into(), rhs)])
    }
}

impl Sub for LatticeOperator {
    type Output = LatticeOperator;
    fn sub(self, rhs: Self) -> Self {
        LatticeOperator::linear_combination(vec![(1.0.into(), self), ((-1.0).into(), rhs)])
    }
}

impl Neg for LatticeOperator {
    type Output = LatticeOperator;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// Composition: `a * b = a ∘ b`.
impl Mul for LatticeOperator {
    type Output = LatticeOperator;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

impl Mul<LatticeOperator> for Complex64 {
    type Output = LatticeOperator;
    fn mul(self, rhs: LatticeOperator) -> LatticeOperator {
        rhs.scale(self)
    }
}

impl Mul<LatticeOperator> for f64 {
    type Output = LatticeOperator;
    fn mul(self, rhs: LatticeOperator) -> LatticeOperator {
        rhs.scale(self)
    }
}

/// Every point of `[0..=m1] x [0..=m2]`, row-major.
pub fn window_points(m1: usize, m2: usize) -> Vec<LatticePoint> {
    (0..=m1).flat_map(|x1| (0..=m2).map(move |x2| LatticePoint::new(x1, x2))).collect()
}

/// `max_p |lhs(p) − rhs(p)|` over `points`. Evaluation is parallel; the
/// reduction is sequential so the reported location is deterministic.
pub fn max_residual(
    lhs: &dyn LatticeFunction,
    rhs: &dyn LatticeFunction,
    points: &[LatticePoint],
) -> Result<Residual<LatticePoint>> {
    let diffs: Vec<Result<f64>> = points
        .par_iter()
        .map(|&p| Ok((lhs.eval(p)? - rhs.eval(p)?).norm()))
        .collect();
    let mut res = Residual::zero();
    for (p, d) in points.iter().zip(diffs) {
        res.observe(d?, *p);
    }
    Ok(res)
}

/// `max_p |(op f)(p) − λ g(p)|`.
pub fn eigen_residual(
    op: &LatticeOperator,
    f: &dyn LatticeFunction,
    lambda: impl Into<Complex64>,
    g: &dyn LatticeFunction,
    points: &[LatticePoint],
) -> Result<Residual<LatticePoint>> {
    let lambda = lambda.into();
    let scaled = FromFn(move |p| g.eval(p).map(|v| lambda * v));
    max_residual(&op.apply(f), &scaled, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_examples() {
        let one = FromFn(|_| Ok(c(1.0, 0.0)));
        let up = shift(Axis::One, Direction::Up);
        for p in window_points(4, 4) {
            assert_eq!(up.eval_at(&one, p).unwrap(), c(1.0, 0.0));
        }

        let f = FromFn(|p: LatticePoint| Ok(c(p.x1 as f64 * 10.0 + p.x2 as f64, 0.0)));
        let down = shift(Axis::One, Direction::Down);
        assert_eq!(down.eval_at(&f, LatticePoint::new(3, 2)).unwrap(), c(22.0, 0.0));

        // raw T^- below the lattice is an error
        let err = down.eval_at(&f, LatticePoint::new(0, 2)).unwrap_err();
        assert_eq!(err, Error::OutOfDomain { x1: -1, x2: 2 });

        // x1 T^- is fine at the boundary
        let guarded = LatticeOperator::stencil(vec![StencilTerm::real((-1, 0), |x1, _| x1)]);
        assert_eq!(guarded.eval_at(&f, LatticePoint::new(0, 5)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn radius_bounds_reads() {
        let params = crate::ModelParams::new(1.3, 0.8, 0.7).unwrap();
        let g = Su2Generators::new(&params);
        for op in [g.casimir(), hamiltonian(&params), g.jy.clone()] {
            let r = op.stencil_radius();
            let center = LatticePoint::new(6, 6);
            // a function that refuses reads farther than r from the center
            let fenced = FromFn(move |p: LatticePoint| {
                let d = (p.x1 as i64 - 6).abs().max((p.x2 as i64 - 6).abs()) as usize;
                if d > r {
                    Err(Error::OutOfWindow { x1: p.x1, x2: p.x2, m1: 0, m2: 0 })
                } else {
                    Ok(c(1.0 + p.x1 as f64, p.x2 as f64))
                }
            });
            op.eval_at(&fenced, center).unwrap();
        }
    }

    #[test]
    fn commutator_with_itself_vanishes() {
        let params = crate::ModelParams::new(1.1, 1.7, -0.3).unwrap();
        let ops = [raising(Mode::One, &params), hamiltonian(&params), Su2Generators::new(&params).jy];
        let points = window_points(14, 14);
        for op in &ops {
            let comm = commutator(op, op);
            for f in probe_functions(3, 3) {
                let zero = FromFn(|_| Ok(Complex64::new(0.0, 0.0)));
                let r = max_residual(&comm.apply(&f), &zero, &points).unwrap();
                assert!(r.max_abs == 0.0, "{r}");
            }
        }
    }

    #[test]
    fn local_stencil_of_hamiltonian() {
        let params = crate::ModelParams::new(1.5, 0.5, 0.2).unwrap();
        let h = hamiltonian(&params);
        let s = h.local_stencil(LatticePoint::new(2, 0)).unwrap();
        let get = |d| s.iter().find(|(o, _)| *o == d).map(|(_, v)| v.re);
        assert_eq!(get((-1, 0)), Some(-2.0));
        assert_eq!(get((1, 0)), Some(-2.25));
        assert_eq!(get((0, 1)), Some(-0.25));
        assert_eq!(get((0, -1)), None);
        assert!((get((0, 0)).unwrap() - (2.0 + 2.25 + 0.25)).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn operators_are_linear(
            seed in 0u64..1000,
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
            alpha in 0.5f64..2.5,
            beta in 0.5f64..2.5,
            theta in -3.0f64..3.0,
        ) {
            let params = crate::ModelParams::new(alpha, beta, theta).unwrap();
            let gens = Su2Generators::new(&params);
            let ops = [
                raising(Mode::Two, &params),
                lowering(Mode::One, &params),
                eigen_op(Mode::One, &params).composed,
                hamiltonian(&params),
                gens.jy.clone(),
                gauge_transform(&gens.jx, &params),
            ];
            let fs = probe_functions(seed, 2);
            let (f, g) = (&fs[0], &fs[1]);
            let scalar = c(re, im);
            let combo = FromFn(|p| Ok(scalar * f.eval(p)? + g.eval(p)?));
            let points = window_points(13, 13);
            for op in &ops {
                let lhs = op.apply(&combo);
                let rf = op.apply(f);
                let rg = op.apply(g);
                let rhs = FromFn(|p| Ok(scalar * rf.eval(p)? + rg.eval(p)?));
                let r = max_residual(&lhs, &rhs, &points).unwrap();
                prop_assert!(r.max_abs < 1e-12, "{:?}: {}", op, r);
            }
        }
    }
}
