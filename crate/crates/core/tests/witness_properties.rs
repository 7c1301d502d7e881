use arlab::perm::Permutation;
use arlab::witness::{
    quadratic_control, run_witness, Construction, FailureKind, WitnessConfig, WitnessReport,
};
use proptest::prelude::*;

fn run(degree: usize, depth: usize, exprs: usize, seed: u64) -> WitnessReport {
    let mut c = WitnessConfig::new(degree, depth);
    c.expr_count = exprs;
    c.seed = seed;
    run_witness(&c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn closure_law_and_fidelity(seed in any::<u64>(), degree in 5usize..=6, depth in 0usize..=2) {
        let r = run(degree, depth, 8, seed);
        prop_assert_eq!(&r.induced, &r.word_permutation);
        prop_assert_eq!(r.induced.to_string(), "(1 2 3)");
        prop_assert!(r.verdicts.closure_law);
        prop_assert!(r.verdicts.witness_holds);
        prop_assert_eq!(r.stage_count, 2 * 4usize.pow(depth as u32));
    }
}

#[test]
fn deeper_word_closes_what_shallower_closes() {
    let mut a = WitnessConfig::new(5, 1);
    a.expr_count = 40;
    a.expr_max_depth = 2;
    a.seed = 9;
    let mut b = a.clone();
    b.depth = 2;
    let ra = run_witness(&a).unwrap();
    let rb = run_witness(&b).unwrap();
    for (x, y) in ra.expressions.iter().zip(&rb.expressions) {
        assert_eq!(x.text, y.text);
        assert!(!x.returns_to_start || y.returns_to_start);
    }
    // one level is not enough for the deepest expressions
    assert!(ra
        .expressions
        .iter()
        .any(|e| e.depth == 2 && !e.returns_to_start));
    assert!(rb.expressions.iter().all(|e| e.returns_to_start));
}

#[test]
fn table_rows() {
    let r2 = run(2, 0, 10, 1);
    assert_eq!(r2.induced.to_string(), "(1 2)");
    assert!(r2.verdicts.witness_holds);

    let mut c3 = WitnessConfig::new(3, 1);
    c3.expr_count = 10;
    c3.expr_max_depth = 2;
    let r3 = run_witness(&c3).unwrap();
    assert_eq!(r3.construction, Construction::TranspositionCommutator);
    assert_eq!(r3.induced.to_string(), "(1 2 3)");
    assert!(r3.verdicts.witness_holds);

    let mut c4 = WitnessConfig::new(4, 2);
    c4.expr_count = 10;
    let r4 = run_witness(&c4).unwrap();
    assert_eq!(r4.construction, Construction::DoubleCommutator);
    assert_eq!(r4.word, "[[(1 2),(2 3)],[(2 3),(3 4)]]");
    assert_eq!(r4.induced.to_string(), "(1 4)(2 3)");
    assert!(r4.verdicts.witness_holds);
}

#[test]
fn wrong_target_is_reported_not_hidden() {
    let mut c = WitnessConfig::new(5, 1);
    c.expr_count = 2;
    c.target = Some(Permutation::parse("(1 2 4)", 5).unwrap());
    let r = run_witness(&c).unwrap();
    assert!(r.verdicts.induced_matches_target);
    assert_eq!(r.induced.to_string(), "(1 2 4)");

    let mut c = WitnessConfig::new(4, 1);
    c.construction = Construction::TranspositionCommutator;
    c.target = Some(Permutation::parse("(1 3 2)", 4).unwrap());
    c.expr_count = 2;
    let r = run_witness(&c).unwrap();
    assert!(!r.verdicts.induced_matches_target);
    assert!(!r.verdicts.witness_holds);
    assert!(r.verdicts.induced_matches_word);
}

#[test]
fn input_errors_name_their_stage() {
    let e = run_witness(&WitnessConfig::new(4, 3)).unwrap_err();
    assert_eq!((e.stage, e.kind), ("config", FailureKind::Input));
    let mut c = WitnessConfig::new(5, 0);
    c.start_coefficients = Some(vec![Default::default(); 4]);
    assert_eq!(run_witness(&c).unwrap_err().kind, FailureKind::Input);
}

#[test]
fn report_is_deterministic_and_versioned() {
    let a = run(5, 1, 6, 11).to_json().unwrap();
    let b = run(5, 1, 6, 11).to_json().unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"schema\": \"witness-v1\""));
    assert!(!a.contains("wall"));
}

#[test]
fn quadratic_control_moves() {
    let c = quadratic_control(10, 3).unwrap();
    assert!(c.formula_moved && c.shallow_closed);
    assert_eq!(c.landings.len(), 2);
}
