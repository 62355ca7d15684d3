//! The operators of the discrete oscillator: ladders, `Y_i`, cross
//! products, the Hamiltonian, su(2) generators and the anisotropic variant.
//!
//! Composite operators come in two forms. `composed` is built from the
//! ladder operators by composition; `explicit` is the closed-form stencil.
//! Agreement between the two is one of the checked identities.

use num_complex::Complex64;

use super::{LatticeOperator, StencilTerm};
use crate::bivariate::ModelParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

/// Which of the two oscillator modes a ladder operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    Raise(Mode),
    Lower(Mode),
}

impl Ladder {
    pub const ALL: [Ladder; 4] = [
        Ladder::Raise(Mode::One),
        Ladder::Raise(Mode::Two),
        Ladder::Lower(Mode::One),
        Ladder::Lower(Mode::Two),
    ];

    pub fn operator(self, params: &ModelParams) -> LatticeOperator {
        match self {
            Ladder::Raise(m) => raising(m, params),
            Ladder::Lower(m) => lowering(m, params),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ladder::Raise(Mode::One) => "raise1",
            Ladder::Raise(Mode::Two) => "raise2",
            Ladder::Lower(Mode::One) => "lower1",
            Ladder::Lower(Mode::Two) => "lower2",
        }
    }
}

impl std::str::FromStr for Ladder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ladder::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown ladder operator {s:?}")))
    }
}

/// Raw shift `T_{x_i}^{±}`.
pub fn shift(axis: Axis, direction: Direction) -> LatticeOperator {
    let d = match direction {
        Direction::Up => 1,
        Direction::Down => -1,
    };
    let offset = match axis {
        Axis::One => (d, 0),
        Axis::Two => (0, d),
    };
    LatticeOperator::stencil(vec![StencilTerm::real(offset, |_, _| 1.0)])
}

/// `A_+^{(i)}`
pub fn raising(mode: Mode, params: &ModelParams) -> LatticeOperator {
    let (c, s) = params.cos_sin();
    let (a, b) = (params.alpha(), params.beta());
    let (k1, k2, shift) = match mode {
        Mode::One => (c / a, -s / b, params.omega()),
        Mode::Two => (s / a, c / b, params.zeta()),
    };
    LatticeOperator::stencil(vec![
        StencilTerm::real((-1, 0), move |x1, _| k1 * x1),
        StencilTerm::real((0, -1), move |_, x2| k2 * x2),
        StencilTerm::real((0, 0), move |_, _| -shift),
    ])
}

/// `A_-^{(i)}`
pub fn lowering(mode: Mode, params: &ModelParams) -> LatticeOperator {
    let (c, s) = params.cos_sin();
    let (a, b) = (params.alpha(), params.beta());
    let (k1, k2, shift) = match mode {
        Mode::One => (a * c, -b * s, params.omega()),
        Mode::Two => (a * s, b * c, params.zeta()),
    };
    LatticeOperator::stencil(vec![
        StencilTerm::real((1, 0), move |_, _| k1),
        StencilTerm::real((0, 1), move |_, _| k2),
        StencilTerm::real((0, 0), move |_, _| -shift),
    ])
}

/// An operator built by composition together with its closed-form stencil.
#[derive(Clone, Debug)]
pub struct OperatorForms {
    pub composed: LatticeOperator,
    pub explicit: LatticeOperator,
}

/// `Y_i = A_+^{(i)} A_-^{(i)}`
pub fn eigen_op(mode: Mode, params: &ModelParams) -> OperatorForms {
    let composed = raising(mode, params).compose(&lowering(mode, params));
    let (c, s) = params.cos_sin();
    let (a, b) = (params.alpha(), params.beta());
    let (w, z) = (params.omega(), params.zeta());
    let cs = c * s;
    let explicit = match mode {
        Mode::One => LatticeOperator::stencil(vec![
            StencilTerm::real((-1, 1), move |x1, _| -x1 * b / a * cs),
            StencilTerm::real((1, -1), move |_, x2| -x2 * a / b * cs),
            StencilTerm::real((-1, 0), move |x1, _| -w * c * x1 / a),
            StencilTerm::real((1, 0), move |_, _| -w * c * a),
            StencilTerm::real((0, -1), move |_, x2| w * s * x2 / b),
            StencilTerm::real((0, 1), move |_, _| w * s * b),
            StencilTerm::real((0, 0), move |x1, x2| x1 * c * c + x2 * s * s + w * w),
        ]),
        Mode::Two => LatticeOperator::stencil(vec![
            StencilTerm::real((-1, 1), move |x1, _| x1 * b / a * cs),
            StencilTerm::real((1, -1), move |_, x2| x2 * a / b * cs),
            StencilTerm::real((-1, 0), move |x1, _| -z * s * x1 / a),
            StencilTerm::real((1, 0), move |_, _| -z * s * a),
            StencilTerm::real((0, -1), move |_, x2| -z * c * x2 / b),
            StencilTerm::real((0, 1), move |_, _| -z * c * b),
            StencilTerm::real((0, 0), move |x1, x2| x1 * s * s + x2 * c * c + z * z),
        ]),
    };
    OperatorForms { composed, explicit }
}

/// `(A_+^{(1)} A_-^{(2)}, A_+^{(2)} A_-^{(1)})`
pub fn cross_ops(params: &ModelParams) -> (OperatorForms, OperatorForms) {
    let (c, s) = params.cos_sin();
    let (a, b) = (params.alpha(), params.beta());
    let (w, z) = (params.omega(), params.zeta());
    let cs = c * s;

    let p = OperatorForms {
        composed: raising(Mode::One, params).compose(&lowering(Mode::Two, params)),
        explicit: LatticeOperator::stencil(vec![
            StencilTerm::real((-1, 1), move |x1, _| x1 * b / a * c * c),
            StencilTerm::real((1, -1), move |_, x2| -x2 * a / b * s * s),
            StencilTerm::real((-1, 0), move |x1, _| -x1 * z / a * c),
            StencilTerm::real((1, 0), move |_, _| -a * w * s),
            StencilTerm::real((0, -1), move |_, x2| x2 * z / b * s),
            StencilTerm::real((0, 1), move |_, _| -b * w * c),
            StencilTerm::real((0, 0), move |x1, x2| (x1 - x2) * cs + w * z),
        ]),
    };
    let q = OperatorForms {
        composed: raising(Mode::Two, params).compose(&lowering(Mode::One, params)),
        explicit: LatticeOperator::stencil(vec![
            StencilTerm::real((-1, 1), move |x1, _| -x1 * b / a * s * s),
            StencilTerm::real((1, -1), move |_, x2| x2 * a / b * c * c),
            StencilTerm::real((-1, 0), move |x1, _| -x1 * w / a * s),
            StencilTerm::real((1, 0), move |_, _| -a * z * c),
            StencilTerm::real((0, -1), move |_, x2| -x2 * w / b * c),
            StencilTerm::real((0, 1), move |_, _| b * z * s),
            StencilTerm::real((0, 0), move |x1, x2| (x1 - x2) * cs + w * z),
        ]),
    };
    (p, q)
}

/// Five-point Hamiltonian
/// `H = −x1 T1⁻ − α² T1⁺ − x2 T2⁻ − β² T2⁺ + x1 + x2 + α² + β²`.
///
/// Only `α` and `β` are read; the stencil carries no `θ` dependence.
pub fn hamiltonian(params: &ModelParams) -> LatticeOperator {
    let a2 = params.alpha() * params.alpha();
    let b2 = params.beta() * params.beta();
    LatticeOperator::stencil(vec![
        StencilTerm::real((-1, 0), |x1, _| -x1),
        StencilTerm::real((1, 0), move |_, _| -a2),
        StencilTerm::real((0, -1), |_, x2| -x2),
        StencilTerm::real((0, 1), move |_, _| -b2),
        StencilTerm::real((0, 0), move |x1, x2| x1 + x2 + a2 + b2),
    ])
}

/// `Y_1 + Y_2` with both built by composition.
pub fn hamiltonian_composed(params: &ModelParams) -> LatticeOperator {
    eigen_op(Mode::One, params).composed + eigen_op(Mode::Two, params).composed
}

/// `k1 Y_1 + k2 Y_2`, spectrum `k1 n1 + k2 n2`.
pub fn anisotropic_hamiltonian(k1: f64, k2: f64, params: &ModelParams) -> Result<OperatorForms> {
    if !(k1.is_finite() && k1 > 0.0 && k2.is_finite() && k2 > 0.0) {
        return Err(Error::Domain(format!("frequencies must be positive, got k1={k1}, k2={k2}")));
    }
    let composed = k1 * eigen_op(Mode::One, params).composed + k2 * eigen_op(Mode::Two, params).composed;

    let (c, s) = params.cos_sin();
    let (a, b) = (params.alpha(), params.beta());
    let (w, z) = (params.omega(), params.zeta());
    let cross = (k2 - k1) * c * s;
    let first = -(k1 * w * c + k2 * z * s);
    let second = k1 * w * s - k2 * z * c;
    let explicit = LatticeOperator::stencil(vec![
        StencilTerm::real((-1, 1), move |x1, _| cross * x1 * b / a),
        StencilTerm::real((1, -1), move |_, x2| cross * x2 * a / b),
        StencilTerm::real((-1, 0), move |x1, _| first * x1 / a),
        StencilTerm::real((1, 0), move |_, _| first * a),
        StencilTerm::real((0, -1), move |_, x2| second * x2 / b),
        StencilTerm::real((0, 1), move |_, _| second * b),
        StencilTerm::real((0, 0), move |x1, x2| {
            k1 * (x1 * c * c + x2 * s * s + w * w) + k2 * (x1 * s * s + x2 * c * c + z * z)
        }),
    ]);
    Ok(OperatorForms { composed, explicit })
}

/// `J_X`, `J_Y`, `J_Z` in the Schwinger-type realization by ladder operators.
#[derive(Clone, Debug)]
pub struct Su2Generators {
    pub jx: LatticeOperator,
    pub jy: LatticeOperator,
    pub jz: LatticeOperator,
}

impl Su2Generators {
    pub fn new(params: &ModelParams) -> Self {
        let (p, q) = cross_ops(params);
        let (p, q) = (p.composed, q.composed);
        let y1 = eigen_op(Mode::One, params).composed;
        let y2 = eigen_op(Mode::Two, params).composed;
        let half = Complex64::new(0.5, 0.0);
        // 1/(2i) = -i/2
        let minus_half_i = Complex64::new(0.0, -0.5);
        Self {
            jx: half * (p.clone() + q.clone()),
            jy: minus_half_i * (p - q),
            jz: half * (y1 - y2),
        }
    }

    /// `J_+ = J_X + i J_Y`
    pub fn j_plus(&self) -> LatticeOperator {
        self.jx.clone() + Complex64::i() * self.jy.clone()
    }

    /// `J_- = J_X − i J_Y`
    pub fn j_minus(&self) -> LatticeOperator {
        self.jx.clone() - Complex64::i() * self.jy.clone()
    }

    /// `J_X² + J_Y² + J_Z²`
    pub fn casimir(&self) -> LatticeOperator {
        self.jx.compose(&self.jx) + self.jy.compose(&self.jy) + self.jz.compose(&self.jz)
    }

    /// `(H/2)(H/2 + 1)` for a given Hamiltonian.
    pub fn casimir_from_hamiltonian(h: &LatticeOperator) -> LatticeOperator {
        let half_h = 0.5 * h.clone();
        half_h.compose(&(half_h.clone() + LatticeOperator::identity()))
    }
}

/// Closed-form gauged ladder operators exactly as printed, including the
/// `T⁻` shifts in the second lowering operator. Compare against
/// [`super::gauge_transform`] of [`Ladder::operator`], which is the ground
/// truth.
pub fn printed_gauged_ladder(which: Ladder, params: &ModelParams) -> LatticeOperator {
    let (c, s) = params.cos_sin();
    let (w, z) = (params.omega(), params.zeta());
    let terms = match which {
        Ladder::Raise(Mode::One) => vec![
            StencilTerm::real((-1, 0), move |x1, _| c * x1.sqrt()),
            StencilTerm::real((0, -1), move |_, x2| -s * x2.sqrt()),
            StencilTerm::real((0, 0), move |_, _| -w),
        ],
        Ladder::Raise(Mode::Two) => vec![
            StencilTerm::real((-1, 0), move |x1, _| s * x1.sqrt()),
            StencilTerm::real((0, -1), move |_, x2| c * x2.sqrt()),
            StencilTerm::real((0, 0), move |_, _| -z),
        ],
        Ladder::Lower(Mode::One) => vec![
            StencilTerm::real((1, 0), move |x1, _| c * (x1 + 1.0).sqrt()),
            StencilTerm::real((0, 1), move |_, x2| -s * (x2 + 1.0).sqrt()),
            StencilTerm::real((0, 0), move |_, _| -w),
        ],
        Ladder::Lower(Mode::Two) => vec![
            StencilTerm::real((-1, 0), move |x1, _| s * (x1 + 1.0).sqrt()),
            StencilTerm::real((0, -1), move |_, x2| c * (x2 + 1.0).sqrt()),
            StencilTerm::real((0, 0), move |_, _| -z),
        ],
    };
    LatticeOperator::stencil(terms)
}
