//! Every oracle suite at its default configuration, plus proptest-driven
//! invariants that tie the stages together.

use proptest::prelude::*;

use patalg::compiler::{check_tree, compile_case, FreshSupply};
use patalg::normalize::{nnf, to_ndnf, Nnf};
use patalg::oracle::{
    differential_compile_check, enumerate_values, gen_case, gen_pattern, run_suite, universe, universe_types,
    Constraints, SuiteConfig,
};
use patalg::overlap::decide;
use patalg::pattern::{fv_even, match_pos, pattern_equiv_bounded, Pattern};
use patalg::syntax::parse_pattern;
use patalg::typing::Type;
use patalg::wellformed::{linear_pos, wf_expr};

fn assert_suite(name: &str) {
    let report = run_suite(name, &SuiteConfig::default()).expect("suite runs");
    assert!(report.passed(), "{report}");
}

#[test]
fn algebra_suite() {
    assert_suite("algebra");
}

#[test]
fn linearity_suite() {
    assert_suite("linearity");
}

#[test]
fn semantics_suite() {
    assert_suite("semantics");
}

#[test]
fn normalize_suite() {
    assert_suite("normalize");
}

#[test]
fn compile_suite() {
    assert_suite("compile");
}

#[test]
fn overlap_suite() {
    assert_suite("overlap");
}

#[test]
fn exhaustive_suite() {
    assert_suite("exhaustive");
}

#[test]
fn suites_are_reproducible() {
    let cfg = SuiteConfig { cases: 20, ..SuiteConfig::default() };
    let a = run_suite("linearity", &cfg).unwrap().to_string();
    let b = run_suite("linearity", &cfg).unwrap().to_string();
    assert_eq!(a, b);
}

fn any_type() -> impl Strategy<Value = Type> {
    prop::sample::select(universe_types())
}

fn is_nnf(n: &Nnf) -> bool {
    // Negation sits only on variables and constructor heads, which the
    // type rules out elsewhere; the printed form must re-parse.
    parse_pattern(&n.to_string()).is_ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_patterns_parse_back(tau in any_type(), size in 0usize..6, seed: u64) {
        let p = gen_pattern(&universe(), &tau, size, seed, Constraints::default()).unwrap();
        prop_assert_eq!(parse_pattern(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn negation_normal_form_is_equivalent_for_linear_patterns(tau in any_type(), size in 0usize..5, seed: u64) {
        let decls = universe();
        let linear = Constraints { require_linear: true, require_det: false };
        let p = gen_pattern(&decls, &tau, size, seed, linear).unwrap();
        let n = nnf(&p);
        prop_assert!(is_nnf(&n));
        prop_assert!(linear_pos(&n.to_pattern()));
        let values = enumerate_values(&decls, &tau, 3).unwrap();
        prop_assert!(pattern_equiv_bounded(&p, &n.to_pattern(), &values), "{} vs {}", p, n);
    }

    #[test]
    fn normal_forms_match_the_same_values(tau in any_type(), size in 0usize..5, seed: u64) {
        let decls = universe();
        let linear = Constraints { require_linear: true, require_det: false };
        let p = gen_pattern(&decls, &tau, size, seed, linear).unwrap();
        let q = to_ndnf(&p).to_pattern();
        for v in enumerate_values(&decls, &tau, 3).unwrap() {
            prop_assert_eq!(match_pos(&p, &v).is_empty(), match_pos(&q, &v).is_empty(), "{} on {}", p, v);
        }
    }

    #[test]
    fn overlap_is_symmetric_and_sound(tau in any_type(), seeds: (u64, u64)) {
        let decls = universe();
        let p = gen_pattern(&decls, &tau, 3, seeds.0, Constraints::default()).unwrap();
        let q = gen_pattern(&decls, &tau, 3, seeds.1, Constraints::default()).unwrap();
        let (a, b) = (to_ndnf(&p), to_ndnf(&q));
        let ab = decide(&a, &b, None).unwrap();
        prop_assert_eq!(ab, decide(&b, &a, None).unwrap());
        if !ab {
            for v in enumerate_values(&decls, &tau, 3).unwrap() {
                prop_assert!(match_pos(&p, &v).is_empty() || match_pos(&q, &v).is_empty(), "{} and {} on {}", p, q, v);
            }
        }
    }

    #[test]
    fn generated_cases_compile_to_agreeing_trees(tau in any_type(), size in 1usize..5, seed: u64) {
        let decls = universe();
        let case = gen_case(&decls, &tau, size, seed).unwrap();
        prop_assert!(wf_expr(&patalg::semantics::Expression::Case(Box::new(case.clone()))).ok);
        let tree = compile_case(&case, &mut FreshSupply::new()).unwrap();
        prop_assert!(check_tree(&tree).is_ok());
        let outcome = differential_compile_check(&case, &decls, &tau, 3).unwrap();
        prop_assert!(outcome.agrees(), "{}", outcome);
    }

    #[test]
    fn linear_matches_bind_exactly_the_even_variables(tau in any_type(), size in 0usize..5, seed: u64) {
        let decls = universe();
        let linear = Constraints { require_linear: true, require_det: false };
        let p: Pattern = gen_pattern(&decls, &tau, size, seed, linear).unwrap();
        for v in enumerate_values(&decls, &tau, 2).unwrap() {
            for s in match_pos(&p, &v).iter() {
                prop_assert!(s.is_proper());
                prop_assert_eq!(s.domain(), fv_even(&p));
            }
        }
    }
}
