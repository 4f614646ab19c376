//! Strategies shared by the property suites.
#![allow(dead_code)]

use jex_core::gen::{GenConfig, Generator, Sample};
use jex_core::lax::LaxProp;
use jex_core::syntax::{Expr, JudgmentKind, Prop};
use proptest::prelude::*;

pub fn arb_prop() -> impl Strategy<Value = Prop> {
    let atom = prop_oneof![Just(Prop::atom("p")), Just(Prop::atom("q"))];
    atom.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Prop::arrow(a, b)),
            inner.prop_map(Prop::exists),
        ]
    })
}

/// Untyped expressions over a small name pool, so that shadowing and
/// capture situations are frequent.
pub fn arb_expr() -> impl Strategy<Value = Expr> {
    let name = prop_oneof![Just("x"), Just("y"), Just("z")];
    let leaf = name.clone().prop_map(Expr::var);
    leaf.prop_recursive(5, 40, 2, move |inner| {
        prop_oneof![
            (name.clone(), arb_prop(), inner.clone()).prop_map(|(x, p, b)| Expr::lam(x, p, b)),
            (name.clone(), arb_prop(), inner.clone()).prop_map(|(x, p, b)| Expr::lam_j(x, p, b)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Expr::ap(f, a)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Expr::ap_j(f, a)),
            inner.clone().prop_map(Expr::boxed),
            inner.clone().prop_map(Expr::boxed_j),
            (name.clone(), inner.clone(), inner.clone()).prop_map(|(x, s, b)| Expr::let_box(x, s, b)),
            (name.clone(), inner.clone(), inner.clone()).prop_map(|(x, s, b)| Expr::let_box_j(x, s, b)),
        ]
    })
}

pub fn arb_term() -> impl Strategy<Value = Expr> {
    arb_expr().prop_filter("a term", Expr::is_term)
}

pub fn arb_lax() -> impl Strategy<Value = LaxProp> {
    let atom = prop_oneof![Just(LaxProp::atom("p")), Just(LaxProp::atom("q"))];
    atom.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LaxProp::implies(a, b)),
            inner.prop_map(LaxProp::circle),
        ]
    })
}

/// The first generated sample for a seed.
pub fn sample(seed: u64, kind: JudgmentKind) -> Sample {
    Generator::new(GenConfig::with_seed(seed)).sample(kind)
}

pub fn arb_sample(kind: JudgmentKind) -> impl Strategy<Value = Sample> {
    any::<u64>().prop_map(move |seed| sample(seed, kind))
}

pub fn arb_kind() -> impl Strategy<Value = JudgmentKind> {
    prop_oneof![Just(JudgmentKind::Relevant), Just(JudgmentKind::Irrelevant)]
}
