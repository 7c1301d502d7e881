use arlab::monodromy::coefficients_from_roots;
use arlab::paths::PathBundle;
use arlab::perm::Permutation;
use arlab::radical::{
    coeff, continue_expr, int, random_expr, root, BranchAssignment, GeneratorLimits,
    IngredientClass, RadicalExpr,
};
use arlab::witness::{realize_permutation, StageGeometry};
use arlab::{Tolerances, C64};
use proptest::prelude::*;

fn unity(n: usize) -> Vec<C64> {
    (0..n)
        .map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
        .collect()
}

fn swap_loop(n: usize, text: &str) -> PathBundle {
    let tol = Tolerances::default();
    let p = Permutation::parse(text, n).unwrap();
    realize_permutation(&p, &unity(n), &StageGeometry::default(), &tol)
        .unwrap()
        .coefficient_loop(tol.closure)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn depth_zero_expressions_always_return(seed in any::<u64>(), n in 2usize..=5, which in 0usize..3) {
        let loops = ["(1 2)", "(1 2 3)", "(1 3)(2 4)"];
        let text = loops[which % if n >= 4 { 3 } else if n == 3 { 2 } else { 1 }];
        let lp = swap_loop(n, text);
        let tol = Tolerances::default();
        if let Ok(e) = random_expr(0, n, &GeneratorLimits::default(), seed, &lp.starts()) {
            if let Ok(c) = continue_expr(&e, &lp, &BranchAssignment(vec![]), &tol) {
                prop_assert!(c.returns_to_start, "{} error {}", e, c.relative_error);
            }
        }
    }

    #[test]
    fn verdicts_survive_grid_doubling(seed in any::<u64>(), depth in 0usize..=2) {
        let lp = swap_loop(3, "(1 2 3)");
        let tol = Tolerances::default();
        if let Ok(e) = random_expr(depth, 3, &GeneratorLimits::default(), seed, &lp.starts()) {
            let b = BranchAssignment::zeros(&e);
            if let (Ok(a), Ok(r)) = (continue_expr(&e, &lp, &b, &tol), continue_expr(&e, &lp.refine(), &b, &tol)) {
                prop_assert_eq!(a.returns_to_start, r.returns_to_start);
            }
        }
    }

    #[test]
    fn branches_cover_the_circle(re in -5.0..5.0f64, im in -5.0..5.0f64, k in 2u32..=7) {
        let x = C64::new(re, im);
        prop_assume!(x.norm() > 1e-3);
        let e = root(k, coeff(0));
        let mut vals: Vec<C64> = (0..k)
            .map(|l| e.eval(&[x], &BranchAssignment(vec![l]), 1e-12).unwrap())
            .collect();
        let r = x.norm().powf(1.0 / f64::from(k));
        for v in &vals {
            prop_assert!((v.norm() - r).abs() < 1e-12 * (1.0 + r));
            prop_assert!((v.powu(k) - x).norm() < 1e-10 * (1.0 + x.norm()));
        }
        vals.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        for w in vals.windows(2) {
            let step = w[1].arg() - w[0].arg();
            prop_assert!((step - std::f64::consts::TAU / f64::from(k)).abs() < 1e-9);
        }
    }

    #[test]
    fn text_form_round_trips(seed in any::<u64>(), depth in 0usize..=3) {
        let start = coefficients_from_roots(&unity(5)).coefficients().to_vec();
        if let Ok(e) = random_expr(depth, 5, &GeneratorLimits::default(), seed, &start) {
            let back = RadicalExpr::parse(&e.to_string()).unwrap();
            prop_assert_eq!(&back, &e);
            let json = serde_json::to_string(&e).unwrap();
            prop_assert_eq!(serde_json::from_str::<RadicalExpr>(&json).unwrap(), e);
        }
    }
}

#[test]
fn class_is_maximum_nesting() {
    let g = root(2, coeff(0));
    let h = root(3, coeff(1) + g.clone());
    assert_eq!((coeff(0) * int(2)).class(), IngredientClass::F);
    assert_eq!(g.class(), IngredientClass::G);
    assert_eq!(h.class(), IngredientClass::H);
    assert_eq!((h.clone() + g).class(), IngredientClass::H);
    assert_eq!(root(2, h).class(), IngredientClass::Deeper(3));
}

#[test]
fn square_root_of_discriminant_moves_under_a_swap() {
    let lp = swap_loop(2, "(1 2)");
    let e = root(2, coeff(1) * coeff(1) - int(4) * coeff(0));
    for b in BranchAssignment::all(&e) {
        let c = continue_expr(&e, &lp, &b, &Tolerances::default()).unwrap();
        assert!(!c.returns_to_start);
        assert!((c.values.end() + c.values.start()).norm() < 1e-9);
    }
}

#[test]
fn continuation_needs_a_closed_loop() {
    let tol = Tolerances::default();
    let p = Permutation::parse("(1 2)", 2).unwrap();
    let r = realize_permutation(&p, &unity(2), &StageGeometry::default(), &tol).unwrap();
    let roots = r.root_paths(tol.closure).unwrap();
    assert!(continue_expr(&coeff(0), &roots, &BranchAssignment(vec![]), &tol).is_err());
}
