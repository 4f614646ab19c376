//! The first samples of fixed seeds, recorded once and frozen.

use std::fmt::Write;
use std::path::Path;

use jex_core::gen::{generate_well_typed, GenConfig};
use jex_core::print::{context_to_string, expr_to_string_in, prop_to_string, Style};
use jex_core::syntax::JudgmentKind;

fn render(cfg: GenConfig, kind: JudgmentKind, n: usize) -> String {
    let mut out = String::new();
    for s in generate_well_typed(cfg, kind).take(n) {
        let e = expr_to_string_in(&s.expr, &s.ctx.names(), Style::ASCII);
        let sym = if kind == JudgmentKind::Relevant { ":" } else { "::" };
        writeln!(out, "{} |- {e} {sym} {}", context_to_string(&s.ctx, Style::ASCII), prop_to_string(&s.prop, Style::ASCII)).unwrap();
    }
    out
}

fn check_golden(name: &str, got: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("JEX_BLESS").is_some() {
        std::fs::write(&path, got).unwrap();
    }
    assert_eq!(got, std::fs::read_to_string(&path).unwrap());
}

#[test]
fn seed_one_depth_one_relevant() {
    let cfg = GenConfig { max_depth: 1, ..GenConfig::with_seed(1) };
    let got = render(cfg, JudgmentKind::Relevant, 5);
    let first = got.lines().next().unwrap();
    let expr = first.split(" |- ").nth(1).unwrap();
    assert!(expr.starts_with('\\') || expr.chars().next().unwrap().is_alphabetic(), "{first}");
    check_golden("seed1_depth1_relevant.txt", &got);
}

#[test]
fn seed_one_depth_four_irrelevant() {
    let cfg = GenConfig { max_depth: 4, ..GenConfig::with_seed(1) };
    check_golden("seed1_depth4_irrelevant.txt", &render(cfg, JudgmentKind::Irrelevant, 5));
}
