//! LTL normal forms and the automaton pipeline checked against the direct
//! lasso evaluator.

mod common;

use common::{formula, rng, word};
use eve_core::automata::{dpw_accepts_lasso, ltl_to_dpw, ltl_to_nbw, nbw_to_dpw, Alphabet, Nbw, NbwEdge};
use eve_core::ltl::{eval_lasso, parse_ltl, LtlFormula};
use proptest::prelude::*;

const ATOMS: [&str; 3] = ["p", "q", "r"];

#[test]
fn nnf_preserves_semantics() {
    let mut r = rng(1);
    for _ in 0..300 {
        let ops = rand::Rng::gen_range(&mut r, 0..=6);
        let f = formula(&mut r, ops, &ATOMS);
        let g = f.to_nnf();
        assert!(g.is_nnf(), "{g}");
        for _ in 0..10 {
            let w = word(&mut r, 8, &ATOMS);
            assert_eq!(eval_lasso(&f, &w), eval_lasso(&g, &w), "{f} vs {g} on {w}");
        }
    }
}

#[test]
fn negated_until_is_release_on_random_lassos() {
    let f = parse_ltl("~(p U q)").unwrap();
    let g = f.to_nnf();
    let mut r = rng(2);
    for _ in 0..100 {
        let w = word(&mut r, 8, &ATOMS);
        assert_eq!(eval_lasso(&f, &w), eval_lasso(&g, &w));
    }
}

#[test]
fn core_expansion_preserves_semantics() {
    let mut r = rng(3);
    for _ in 0..300 {
        let f = formula(&mut r, 5, &ATOMS);
        let w = word(&mut r, 8, &ATOMS);
        assert_eq!(eval_lasso(&f, &w), eval_lasso(&f.to_core(), &w), "{f}");
    }
    let p = LtlFormula::atom("p");
    for _ in 0..100 {
        let w = word(&mut r, 8, &ATOMS);
        assert_eq!(
            eval_lasso(&LtlFormula::eventually(p.clone()), &w),
            eval_lasso(&LtlFormula::until(LtlFormula::True, p.clone()), &w)
        );
    }
}

#[test]
fn evaluation_ignores_lasso_representation() {
    let mut r = rng(4);
    for _ in 0..300 {
        let f = formula(&mut r, 6, &ATOMS);
        let w = word(&mut r, 8, &ATOMS);
        assert_eq!(eval_lasso(&f, &w), eval_lasso(&f, &w.unroll_once()), "{f} on {w}");
    }
}

#[test]
fn nbw_matches_evaluator() {
    let mut r = rng(5);
    for _ in 0..200 {
        let ops = rand::Rng::gen_range(&mut r, 0..=6);
        let f = formula(&mut r, ops, &ATOMS);
        let a = ltl_to_nbw(&f);
        for _ in 0..5 {
            let w = word(&mut r, 8, &ATOMS);
            assert_eq!(a.accepts_lasso(&w), eval_lasso(&f, &w), "{f} on {w}");
        }
    }
}

#[test]
fn eventually_nbw_agrees_on_500_lassos() {
    let f = parse_ltl("F p").unwrap();
    let a = ltl_to_nbw(&f);
    assert_eq!(a.num_states(), 2);
    let mut r = rng(6);
    for _ in 0..500 {
        let w = word(&mut r, 8, &ATOMS);
        assert_eq!(a.accepts_lasso(&w), eval_lasso(&f, &w));
    }
}

#[test]
fn dpw_matches_nbw_membership() {
    let mut r = rng(7);
    let f = parse_ltl("F p").unwrap();
    let a = ltl_to_nbw(&f);
    let d = nbw_to_dpw(&a).unwrap();
    for _ in 0..500 {
        let w = word(&mut r, 8, &ATOMS);
        assert_eq!(dpw_accepts_lasso(&d, &w), a.accepts_lasso(&w));
    }
}

#[test]
fn deterministic_input_keeps_its_language() {
    // alternation checker: p must hold exactly at even positions
    let alphabet = Alphabet::new(["p".to_string()]);
    let nbw = Nbw {
        alphabet,
        initial: vec![0],
        edges: vec![
            vec![NbwEdge { pos: 1, neg: 0, target: 1 }],
            vec![NbwEdge { pos: 0, neg: 1, target: 0 }],
        ],
        accepting: vec![true, false],
    };
    let d = nbw_to_dpw(&nbw).unwrap();
    let mut r = rng(8);
    for _ in 0..500 {
        let w = word(&mut r, 8, &["p"]);
        assert_eq!(d.accepts_lasso(&w), nbw.accepts_lasso(&w), "{w}");
    }
}

#[test]
fn unsatisfiable_formula_gives_rejecting_dpw() {
    let d = ltl_to_dpw(&LtlFormula::ff()).unwrap();
    let mut r = rng(9);
    for _ in 0..100 {
        assert!(!d.accepts_lasso(&word(&mut r, 8, &ATOMS)));
    }
}

#[test]
fn recurrence_dpw_on_500_lassos() {
    let f = parse_ltl("G F p").unwrap();
    let d = ltl_to_dpw(&f).unwrap();
    let mut r = rng(10);
    for _ in 0..500 {
        let w = word(&mut r, 8, &ATOMS);
        assert_eq!(d.accepts_lasso(&w), eval_lasso(&f, &w), "{w}");
    }
}

#[test]
fn dpw_is_complete_and_deterministic() {
    let mut r = rng(11);
    for _ in 0..50 {
        let f = formula(&mut r, 5, &ATOMS);
        let d = ltl_to_dpw(&f).unwrap();
        for q in 0..d.num_states() {
            for a in 0..d.alphabet.size() {
                assert!(d.step(q, a) < d.num_states());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dpw_matches_evaluator(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ops = rand::Rng::gen_range(&mut r, 0..=6);
        let f = formula(&mut r, ops, &ATOMS);
        let d = ltl_to_dpw(&f).unwrap();
        for _ in 0..5 {
            let w = word(&mut r, 8, &ATOMS);
            prop_assert_eq!(d.accepts_lasso(&w), eval_lasso(&f, &w), "{} on {}", f, w);
        }
    }

    #[test]
    fn printed_formulas_reparse(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = formula(&mut r, 6, &ATOMS);
        prop_assert_eq!(parse_ltl(&f.to_string()).unwrap(), f);
    }
}
