//! Reduction and derivation-level invariants over generated samples.

use jex_core::logic::{check_logical, elaborate_j, erase, LogicalDerivation};
use jex_core::reduce::{
    eta_expand, is_canonical_at, let_substitutee, normalize, replay_step, step, step_detailed, DEFAULT_FUEL,
};
use jex_core::subst::uses_only_let_clauses;
use jex_core::syntax::{fresh, JudgmentKind, Name, Prop};
use jex_core::typing::{check_against, infer};
use proptest::prelude::*;

mod common;
use common::*;

use JudgmentKind::{Irrelevant, Relevant};

/// Applies `f` to the hypothesis list of every node.
fn map_hyps(d: &LogicalDerivation, f: &impl Fn(&[Prop]) -> Vec<Prop>) -> LogicalDerivation {
    let mut out = d.clone();
    out.conclusion.hyps = f(&d.conclusion.hyps);
    out.premises = d.premises.iter().map(|p| map_hyps(p, f)).collect();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn step_is_deterministic_and_replayable(kind in arb_kind(), seed in any::<u64>()) {
        let s = sample(seed, kind);
        let mut e = s.expr;
        while let Some(st) = step_detailed(&e) {
            prop_assert_eq!(step(&e), step(&e));
            let replayed = replay_step(&e, &st.rules);
            prop_assert_eq!(replayed.as_ref(), Some(&st.result));
            e = st.result;
        }
    }

    #[test]
    fn relevant_reduction_preserves_types(s in arb_sample(Relevant)) {
        for st in normalize(&s.expr, DEFAULT_FUEL).unwrap().trace {
            prop_assert_eq!(check_against(&s.ctx, &st.result, Relevant, &s.prop).map(|_| ()), Ok(()));
        }
    }

    #[test]
    fn irrelevant_reduction_preserves_types_until_a_literal_clause(s in arb_sample(Irrelevant)) {
        // Contractions that substitute through clauses 4-6 of the
        // expression substitution are the known exception.
        let mut e = s.expr.clone();
        for st in normalize(&s.expr, DEFAULT_FUEL).unwrap().trace {
            if let_substitutee(&e, &st.rules).is_some_and(|sub| !uses_only_let_clauses(sub)) {
                break;
            }
            prop_assert_eq!(check_against(&s.ctx, &st.result, Irrelevant, &s.prop).map(|_| ()), Ok(()));
            e = st.result;
        }
    }

    #[test]
    fn closed_relevant_samples_reach_canonical_forms(s in arb_sample(Relevant)) {
        let n = normalize(&s.expr, DEFAULT_FUEL).unwrap();
        if s.ctx.is_empty() {
            prop_assert!(is_canonical_at(&n.value, &s.prop), "{} normalized to {}", s.expr, n.value);
        }
    }

    #[test]
    fn samples_normalize_within_fuel(kind in arb_kind(), seed in any::<u64>()) {
        prop_assert!(normalize(&sample(seed, kind).expr, DEFAULT_FUEL).is_ok());
    }

    #[test]
    fn eta_expansion_keeps_the_type(kind in arb_kind(), seed in any::<u64>()) {
        let s = sample(seed, kind);
        match eta_expand(&s.ctx, &s.expr, &s.prop, kind) {
            Ok(expanded) => {
                prop_assert_eq!(check_against(&s.ctx, &expanded, kind, &s.prop).map(|_| ()), Ok(()));
            }
            Err(_) => prop_assert!(matches!(s.prop, Prop::Atom(_))),
        }
    }

    #[test]
    fn erasure_is_sound(kind in arb_kind(), seed in any::<u64>()) {
        let s = sample(seed, kind);
        let (_, d) = infer(&s.ctx, &s.expr, kind).unwrap();
        prop_assert_eq!(check_logical(&erase(&d)), Ok(()));
    }

    #[test]
    fn elaboration_is_sound(s in arb_sample(Irrelevant)) {
        let (_, d) = infer(&s.ctx, &s.expr, Irrelevant).unwrap();
        let logical = erase(&d);
        let elaborated = elaborate_j(&logical);
        prop_assert_eq!(check_logical(&elaborated), Ok(()));
        prop_assert_eq!(&elaborated.conclusion, &logical.conclusion);
        prop_assert!(elaborated.rules().iter().all(|r| !r.is_j_rule()));
    }

    #[test]
    fn erasure_commutes_with_weakening(kind in arb_kind(), seed in any::<u64>(), extra in arb_prop()) {
        let s = sample(seed, kind);
        let (_, d) = infer(&s.ctx, &s.expr, kind).unwrap();
        let mut avoid = s.ctx.names();
        avoid.extend(s.expr.all_names());
        let y = fresh(&avoid, &Name::from("weak"));
        let (_, wide) = infer(&s.ctx.extended(y, extra.clone()).unwrap(), &s.expr, kind).unwrap();
        let at = s.ctx.len();
        let inserted = map_hyps(&erase(&d), &|h| {
            let mut h = h.to_vec();
            h.insert(at, extra.clone());
            h
        });
        prop_assert_eq!(erase(&wide), inserted);
    }

    #[test]
    fn erasure_commutes_with_exchange(kind in arb_kind(), seed in any::<u64>()) {
        let s = sample(seed, kind);
        let (_, d) = infer(&s.ctx, &s.expr, kind).unwrap();
        for i in 0..s.ctx.len().saturating_sub(1) {
            let (_, swapped) = infer(&s.ctx.swapped(i), &s.expr, kind).unwrap();
            let expected = map_hyps(&erase(&d), &|h| {
                let mut h = h.to_vec();
                h.swap(i, i + 1);
                h
            });
            prop_assert_eq!(erase(&swapped), expected);
        }
    }
}
