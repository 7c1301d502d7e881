use arlab::monodromy::{all_roots, Polynomial};
use arlab::radical::{eval_initial, BranchAssignment};
use arlab::solvers::{
    cubic_formula_expr, cubic_pairs, depress_cubic, max_residual, multiset_distance,
    quadratic_formula_expr, quartic_formula_expr, solve_cubic, solve_quadratic, solve_quartic,
};
use arlab::C64;
use proptest::prelude::*;

fn c64() -> impl Strategy<Value = C64> {
    (-4.0..4.0f64, -4.0..4.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn bound(coeffs: &[C64]) -> f64 {
    let m = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    1e-8 * (1.0 + m).powi(coeffs.len() as i32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn residuals_are_small(c in prop::collection::vec(c64(), 4)) {
        prop_assert!(max_residual(&c[..2], &solve_quadratic(c[1], c[0])) <= bound(&c[..2]));
        prop_assert!(max_residual(&c[..3], &solve_cubic(c[2], c[1], c[0])) <= bound(&c[..3]));
        prop_assert!(max_residual(&c, &solve_quartic(c[3], c[2], c[1], c[0])) <= bound(&c));
    }

    #[test]
    fn closed_forms_match_numeric_roots(c in prop::collection::vec(c64(), 4)) {
        let oracle = all_roots(&Polynomial::new(c.clone()).unwrap(), 1e-12).unwrap();
        prop_assert!(multiset_distance(&solve_quartic(c[3], c[2], c[1], c[0]), &oracle) < 1e-8);
        let oracle3 = all_roots(&Polynomial::new(c[..3].to_vec()).unwrap(), 1e-12).unwrap();
        prop_assert!(multiset_distance(&solve_cubic(c[2], c[1], c[0]), &oracle3) < 1e-8);
    }

    #[test]
    fn cubic_pairs_satisfy_vw_plus_p(c in prop::collection::vec(c64(), 3)) {
        let d = depress_cubic(c[2], c[1], c[0]);
        let pairs = cubic_pairs(c[2], c[1], c[0]);
        for (v, w) in pairs {
            prop_assert!((v * w + d.p).norm() <= 1e-8 * (1.0 + d.p.norm()));
        }
        // the three v are one cube root times the cube roots of unity
        let omega = C64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        if pairs[0].0.norm() > 1e-6 {
            for (l, (v, _)) in pairs.iter().enumerate() {
                let expected = pairs[0].0 * omega.powu(l as u32);
                prop_assert!((v - expected).norm() <= 1e-9 * (1.0 + v.norm()));
            }
        }
    }

    #[test]
    fn quadratic_roots_are_the_two_square_root_branches(c in prop::collection::vec(c64(), 2)) {
        let [a, b] = solve_quadratic(c[1], c[0]);
        let s = (c[1] * c[1] - 4.0 * c[0]).sqrt();
        let plus = (-c[1] + s) / 2.0;
        let minus = (-c[1] - s) / 2.0;
        prop_assert!(multiset_distance(&[a, b], &[plus, minus]) < 1e-9);
    }
}

#[test]
fn formula_depths() {
    assert_eq!(quadratic_formula_expr().depth(), 1);
    assert_eq!(cubic_formula_expr().depth(), 2);
    assert_eq!(quartic_formula_expr().depth(), 3);
}

#[test]
fn formula_expressions_give_roots() {
    let c = [
        C64::new(0.3, -0.2),
        C64::new(-1.1, 0.4),
        C64::new(0.7, 0.9),
        C64::new(-0.5, 0.1),
    ];
    let quad = eval_initial(
        &quadratic_formula_expr(),
        &c[..2],
        &BranchAssignment::zeros(&quadratic_formula_expr()),
    )
    .unwrap();
    assert!(max_residual(&c[..2], &[quad]) < 1e-12);
    let e3 = cubic_formula_expr();
    let cubic = eval_initial(&e3, &c[..3], &BranchAssignment(vec![0, 0, 0, 0])).unwrap();
    assert!(max_residual(&c[..3], &[cubic]) < 1e-12);
    let e4 = quartic_formula_expr();
    let quartic = eval_initial(&e4, &c, &BranchAssignment::zeros(&e4)).unwrap();
    assert!(max_residual(&c, &[quartic]) < 1e-10);
}

#[test]
fn triple_root() {
    let r = solve_cubic(C64::new(3.0, 0.0), C64::new(3.0, 0.0), C64::new(1.0, 0.0));
    for z in r {
        assert!((z + 1.0).norm() < 1e-12);
    }
}
