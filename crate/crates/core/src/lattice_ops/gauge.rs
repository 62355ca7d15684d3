use std::sync::Arc;

use num_complex::Complex64;

use super::{LatticeOperator, Node, StencilTerm};
use crate::bivariate::{LatticePoint, ModelParams};

/// `sqrt(w(p) / w(p + d))` from the closed-form ratio of Poisson weights,
/// e.g. `w(p + e1) / w(p) = α² / (x1 + 1)`. `None` if `p + d` is off the
/// lattice.
pub fn half_weight_ratio(p: LatticePoint, d: (i32, i32), params: &ModelParams) -> Option<f64> {
    p.offset(d.0, d.1)?;
    let axis = |x: usize, step: i32, a2: f64| -> f64 {
        let x = x as f64;
        if step >= 0 {
            (1..=step).map(|j| (x + f64::from(j)) / a2).product()
        } else {
            (0..-step).map(|j| a2 / (x - f64::from(j))).product()
        }
    };
    let a2 = params.alpha() * params.alpha();
    let b2 = params.beta() * params.beta();
    Some((axis(p.x1, d.0, a2) * axis(p.x2, d.1, b2)).sqrt())
}

/// `w^{1/2} ∘ op ∘ w^{-1/2}`.
///
/// Conjugation distributes over sums and compositions, so only stencil
/// coefficients are rescaled. A term whose target leaves the lattice keeps
/// its coefficient unchanged: if it is zero the term stays inert, otherwise
/// evaluation still reports the out-of-domain read.
pub fn gauge_transform(op: &LatticeOperator, params: &ModelParams) -> LatticeOperator {
    match &*op.0 {
        Node::Stencil(terms) => LatticeOperator::stencil(
            terms
                .iter()
                .map(|t| {
                    let coef = Arc::clone(&t.coef);
                    let offset = t.offset;
                    let params = *params;
                    StencilTerm::new(offset, move |p| {
                        let c = coef(p);
                        if c == Complex64::new(0.0, 0.0) {
                            return c;
                        }
                        match half_weight_ratio(p, offset, &params) {
                            Some(r) => c * r,
                            None => c,
                        }
                    })
                })
                .collect(),
        ),
        Node::Sum(parts) => LatticeOperator::linear_combination(
            parts.iter().map(|(c, o)| (*c, gauge_transform(o, params))).collect(),
        ),
        Node::Compose(a, b) => gauge_transform(a, params).compose(&gauge_transform(b, params)),
    }
}
