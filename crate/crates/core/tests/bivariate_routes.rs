use charlier_lattice::bivariate::{
    charlier2_explicit, charlier2_ladder, generating_check, orthogonality_check, params_generic, separable_product,
};
use charlier_lattice::{LatticePoint, ModeIndex, ModelParams, TruncationSpec};
use proptest::prelude::*;

fn generic_params() -> impl Strategy<Value = ModelParams> {
    (0.6f64..2.5, 0.6f64..2.5, -3.0f64..3.0)
        .prop_map(|(a, b, t)| ModelParams::new(a, b, t).unwrap())
        .prop_filter("away from the singular angles", |p| p.omega().abs() > 0.05 && p.zeta().abs() > 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn explicit_sum_matches_recursion(p in generic_params(), n1 in 0u32..5, n2 in 0u32..5, x1 in 0usize..9, x2 in 0usize..9) {
        prop_assume!(params_generic(&p));
        let n = ModeIndex::new(n1, n2);
        let x = LatticePoint::new(x1, x2);
        let r = charlier2_ladder(n, x, &p);
        let e = charlier2_explicit(n, x, &p).unwrap();
        prop_assert!((r - e).abs() < 1e-8 * (1.0 + r.abs()), "{r} vs {e}");
    }

    #[test]
    fn zero_angle_separates(a in 0.6f64..2.5, b in 0.6f64..2.5, n1 in 0u32..6, n2 in 0u32..6, x1 in 0usize..10, x2 in 0usize..10) {
        let p = ModelParams::new(a, b, 0.0).unwrap();
        let n = ModeIndex::new(n1, n2);
        let x = LatticePoint::new(x1, x2);
        let sep = separable_product(n, x, a, b).unwrap();
        prop_assert!((charlier2_ladder(n, x, &p) - sep).abs() < 1e-9 * (1.0 + sep.abs()));
    }

    #[test]
    fn generating_function_series(p in generic_params(), z1 in -0.3f64..0.3, z2 in -0.3f64..0.3, x1 in 0usize..6, x2 in 0usize..6) {
        prop_assert!(generating_check(&p, z1, z2, LatticePoint::new(x1, x2), 30) < 1e-10);
    }
}

#[test]
fn low_degree_orthonormality() {
    let p = ModelParams::new(1.1, 0.9, 0.5).unwrap();
    let trunc = TruncationSpec::for_params(&p, 4);
    let modes: Vec<ModeIndex> = (0..=3).flat_map(|t| (0..=t).map(move |n1| ModeIndex::new(n1, t - n1))).collect();
    for &n in &modes {
        for &m in &modes {
            assert!(orthogonality_check(&p, n, m, &trunc) < 1e-10, "{n} {m}");
        }
    }
}
