//! Acceptance criteria, one line each. Runs without the test harness so the
//! report is always printed; exits nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use jex::session::{Session, Status};
use jex_core::derived::{proposition_witness, trunc_elim_tree, LaxAxiom, Witness};
use jex_core::gen::{GenConfig, Generator, Sample, Weights};
use jex_core::lax::{from_lax, to_lax};
use jex_core::logic::{check_logical, elaborate_j, erase, LogicalDerivation};
use jex_core::parse::{parse_expr, parse_file, DeclKind};
use jex_core::print::Style;
use jex_core::reduce::{
    eta_expand, is_canonical_at, let_substitutee, normalize, replay_step, step_detailed, Step, StepKind,
};
use jex_core::subst::{subst_expr, subst_term, uses_only_let_clauses};
use jex_core::syntax::{fresh, Context, Expr, JudgmentKind, Name, Prop};
use jex_core::typing::{check_against, infer, replay};

mod support;

use JudgmentKind::{Irrelevant, Relevant};

const CORPUS: u64 = 10_000;
const MAX_DEPTH: usize = 12;
const FUEL: usize = 100_000;
const TREE_LIMIT: Duration = Duration::from_secs(1);
const SUBJECT_REDUCTION_LIMIT: Duration = Duration::from_secs(60);
const ELABORATIONS: usize = 1_000;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

struct Entry {
    sample: Sample,
    trace: Vec<Step>,
    exhausted: bool,
}

fn corpus(kind: JudgmentKind) -> Vec<Entry> {
    (0..CORPUS)
        .map(|seed| {
            let sample = Generator::new(GenConfig { max_depth: MAX_DEPTH, ..GenConfig::with_seed(seed) }).sample(kind);
            let (trace, exhausted) = match normalize(&sample.expr, FUEL) {
                Ok(n) => (n.trace, false),
                Err(f) => (f.trace, true),
            };
            Entry { sample, trace, exhausted }
        })
        .collect()
}

/// Whether any of the first `upto + 1` steps contracts a let through a
/// substitution clause other than the let clauses.
fn literal_clause_step(start: &Expr, trace: &[Step], upto: usize) -> bool {
    let mut e = start;
    for st in &trace[..=upto.min(trace.len().saturating_sub(1))] {
        if let_substitutee(e, &st.rules).is_some_and(|sub| !uses_only_let_clauses(sub)) {
            return true;
        }
        e = &st.result;
    }
    false
}

fn fixtures() -> Verdict {
    let dir = support::workspace_root().join("fixtures");
    let required = [
        "prop1", "prop2", "prop3", "prop4", "prop5", "prop6", "lolli", "truncation", "lax", "elaboration",
    ];
    let started = Instant::now();
    let mut trees = 0;
    let mut problems = Vec::new();
    for name in required {
        let path = dir.join(format!("{name}.jex"));
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => {
                problems.push(format!("{name}: {e}"));
                continue;
            }
        };
        let file = match parse_file(&text) {
            Ok(f) => f,
            Err(e) => {
                problems.push(format!("{name}: {e}"));
                continue;
            }
        };
        let mut proofs: BTreeMap<String, LogicalDerivation> = BTreeMap::new();
        let mut order = Vec::new();
        let mut session = Session::new(Style::ASCII, FUEL);
        for decl in &file.decls {
            match &decl.kind {
                DeclKind::Proof(x, d) => {
                    trees += 1;
                    if let Err(e) = check_logical(d) {
                        problems.push(format!("{name} {x}: {e}"));
                    }
                    proofs.insert(x.to_string(), d.clone());
                    order.push(x.to_string());
                }
                DeclKind::Typing(x, d) => {
                    trees += 1;
                    if let Err(e) = replay(d) {
                        problems.push(format!("{name} {x}: {e}"));
                    }
                }
                _ => {}
            }
            let out = session.run(decl);
            if out.status != Status::Ok {
                problems.push(format!("{name} {}: {}", decl.pos, out.message.unwrap_or_default()));
            }
        }
        // Each transcription must also agree with the builder that produces it.
        let (p, q) = (Prop::atom("p"), Prop::atom("q"));
        let expected: Vec<(String, LogicalDerivation)> = match name {
            "lax" => vec![
                ("unit".into(), LaxAxiom::Unit(p.clone()).tree(&[])),
                ("join".into(), LaxAxiom::Join(p.clone()).tree(&[])),
                ("map".into(), LaxAxiom::Map(p.clone(), q.clone()).tree(&[])),
            ],
            "truncation" => vec![("elim".into(), trunc_elim_tree(&[], &p, &q))],
            "elaboration" | "lolli" => Vec::new(),
            _ => {
                let n = &name[4..];
                let ws: Vec<Witness> = Witness::ALL.into_iter().filter(|w| w.label().starts_with(n)).collect();
                order.iter().cloned().zip(ws.into_iter().map(|w| proposition_witness(w, &[], &p, &q))).collect()
            }
        };
        for (x, tree) in expected {
            if proofs.get(&x) != Some(&tree) {
                problems.push(format!("{name} {x}: differs from its builder"));
            }
        }
        if name == "elaboration" {
            for (x, d) in &proofs {
                if let Some(expanded) = proofs.get(&format!("{x}_expanded")) {
                    if &elaborate_j(d) != expanded {
                        problems.push(format!("{name} {x}: expansion differs from elaborate_j"));
                    }
                }
            }
        }
        if name == "lolli" {
            for (x, d) in &proofs {
                if let Some(derived) = proofs.get(&format!("derived_{x}")) {
                    let same_premises = derived.open_premises() == d.open_premises();
                    let same_conclusion = derived.conclusion.hyps == d.conclusion.hyps
                        && derived.conclusion.kind == d.conclusion.kind
                        && derived.conclusion.prop == d.conclusion.prop;
                    if !(same_premises && same_conclusion) {
                        problems.push(format!("{name} {x}: derived form has a different shape"));
                    }
                }
            }
        }
    }
    let took = started.elapsed();
    let pass = problems.is_empty() && took < TREE_LIMIT && trees > 0;
    let mut detail = format!(
        "{trees} trees in {} fixture files checked in {} ms (limit {} ms)",
        required.len(),
        took.as_millis(),
        TREE_LIMIT.as_millis()
    );
    for p in problems.iter().take(5) {
        detail.push_str(&format!("; {p}"));
    }
    verdict(pass, detail)
}

/// `reducing` is the time spent generating and normalizing the corpus.
fn subject_reduction(corpora: &[(JudgmentKind, Vec<Entry>)], reducing: Duration) -> Verdict {
    let started = Instant::now();
    let mut parts = Vec::new();
    let mut total = 0;
    for (kind, entries) in corpora {
        let mut failures = 0;
        let mut literal = 0;
        for en in entries {
            let s = &en.sample;
            let bad = en.trace.iter().position(|st| check_against(&s.ctx, &st.result, *kind, &s.prop).is_err());
            if let Some(i) = bad {
                failures += 1;
                if literal_clause_step(&s.expr, &en.trace, i) {
                    literal += 1;
                }
            }
        }
        total += failures;
        parts.push(format!(
            "{kind}: {failures}/{} samples lose their type ({literal} after a let contraction through a literal clause)",
            entries.len()
        ));
    }
    let took = started.elapsed() + reducing;
    let detail = format!(
        "{}; {:.1} s (limit {} s, zero failures allowed)",
        parts.join(", "),
        took.as_secs_f64(),
        SUBJECT_REDUCTION_LIMIT.as_secs()
    );
    verdict(total == 0 && took < SUBJECT_REDUCTION_LIMIT, detail)
}

fn normalization(corpora: &[(JudgmentKind, Vec<Entry>)]) -> Verdict {
    let mut parts = Vec::new();
    let mut pass = true;
    for (kind, entries) in corpora {
        let exhausted = entries.iter().filter(|e| e.exhausted).count();
        let closed: Vec<&Entry> = entries.iter().filter(|e| e.sample.ctx.is_empty() && !e.exhausted).collect();
        let stuck: Vec<&&Entry> = closed
            .iter()
            .filter(|e| {
                let value = e.trace.last().map_or(&e.sample.expr, |s| &s.result);
                !is_canonical_at(value, &e.sample.prop)
            })
            .collect();
        let literal = stuck.iter().filter(|e| literal_clause_step(&e.sample.expr, &e.trace, e.trace.len())).count();
        pass &= exhausted == 0 && stuck.is_empty();
        parts.push(format!(
            "{kind}: {exhausted} fuel exhaustions, {}/{} closed samples not canonical ({literal} after a literal clause)",
            stuck.len(),
            closed.len()
        ));
    }
    verdict(pass, format!("{} (fuel {FUEL})", parts.join(", ")))
}

fn determinism(corpora: &[(JudgmentKind, Vec<Entry>)]) -> Verdict {
    let mut checked = 0;
    let mut bad = 0;
    for (_, entries) in corpora {
        for en in entries {
            let mut e = en.sample.expr.clone();
            for recorded in &en.trace {
                checked += 1;
                let (a, b) = (step_detailed(&e), step_detailed(&e));
                if a != b || a.as_ref() != Some(recorded) || replay_step(&e, &recorded.rules).as_ref() != Some(&recorded.result) {
                    bad += 1;
                }
                e = recorded.result.clone();
            }
            if step_detailed(&e).is_some() != en.exhausted {
                bad += 1;
            }
        }
    }
    verdict(bad == 0, format!("{checked} steps recomputed and replayed, {bad} mismatches"))
}

/// A target `Γ, x:φ ⊢ e' ∴ γ`, with `x` fresh for `Γ` and `avoid`.
fn target_over(ctx: &Context, avoid: &Expr, phi: &Prop, seed: u64) -> (Expr, Name, Prop) {
    let mut names = ctx.names();
    names.extend(avoid.all_names());
    let x = fresh(&names, &Name::from("sub"));
    let wider = ctx.extended(x.clone(), phi.clone()).unwrap();
    let mut g = Generator::new(GenConfig::with_seed(seed ^ 0x5eed));
    let gamma = g.goal(&wider);
    let target = g.expr_for(&wider, &gamma, Irrelevant).expect("goal is reachable");
    (target, x, gamma)
}

fn substitution() -> Verdict {
    let mut term_failures = 0;
    let mut expr_failures = 0;
    for seed in 0..CORPUS {
        let s = Generator::new(GenConfig::with_seed(seed)).sample(Relevant);
        let (target, x, gamma) = target_over(&s.ctx, &s.expr, &s.prop, seed);
        let ok = subst_term(&s.expr, &x, &target).is_ok_and(|out| check_against(&s.ctx, &out, Irrelevant, &gamma).is_ok());
        term_failures += usize::from(!ok);

        let cfg = GenConfig { weights: Weights::TERMS_AND_LETS, ..GenConfig::with_seed(seed) };
        let s = Generator::new(cfg).sample(Irrelevant);
        let (target, x, gamma) = target_over(&s.ctx, &s.expr, &s.prop, seed);
        let out = subst_expr(&s.expr, &x, &target);
        expr_failures += usize::from(check_against(&s.ctx, &out, Irrelevant, &gamma).is_err());
    }
    // The remaining clauses, by their literal output.
    let e = |s: &str| parse_expr(s).unwrap();
    let literal = [
        ("[a]j", "\\(z:q). z", "[\\(z:q). z]"),
        ("\\j(y:p). y", "f x", "\\j(y:p). f y"),
        ("g @j b", "x", "g @j b"),
        ("g @j b", "\\(z:q). z", "(\\(z:q). z) @j b"),
    ];
    let literal_ok = literal
        .iter()
        .filter(|(sub, target, want)| subst_expr(&e(sub), &Name::from("x"), &e(target)).alpha_eq(&e(want)))
        .count();
    let pass = term_failures == 0 && expr_failures == 0 && literal_ok == literal.len();
    verdict(
        pass,
        format!(
            "term substitution {term_failures}/{CORPUS} failures, let-only expression substitution {expr_failures}/{CORPUS} failures, literal clause outputs {literal_ok}/{}",
            literal.len()
        ),
    )
}

/// One reduction and one expansion per connective and kind.
fn local_soundness() -> Verdict {
    let e = |s: &str| parse_expr(s).unwrap();
    let (p, q) = (Prop::atom("p"), Prop::atom("q"));
    let ctx = Context::from_pairs([
        (Name::from("a"), p.clone()),
        (Name::from("f"), Prop::arrow(p.clone(), q.clone())),
        (Name::from("b"), Prop::exists(p.clone())),
    ])
    .unwrap();
    let typed = |x: &Expr, kind: JudgmentKind, prop: &Prop| check_against(&ctx, x, kind, prop).is_ok();
    let mut results = Vec::new();

    // Reductions: an introduction met by its elimination contracts in one step.
    let reductions = [
        ("-> true reduction", "(\\(x:p). [x]) a", "[a]", Relevant, Prop::exists(p.clone()), StepKind::BetaArrow),
        ("-> just reduction", "(\\j(x:p). [x]j) @j a", "[a]j", Irrelevant, Prop::exists(p.clone()), StepKind::BetaArrowJ),
        ("Ex true reduction", "let [x] = [a] in f x", "f a", Irrelevant, q.clone(), StepKind::BetaExists),
        ("Ex just reduction", "let [x]j = [a]j in f x", "f a", Irrelevant, q.clone(), StepKind::BetaExistsJ),
    ];
    for (name, redex, contractum, kind, prop, rule) in reductions {
        let (redex, contractum) = (e(redex), e(contractum));
        let st = step_detailed(&redex);
        let ok = typed(&redex, kind, &prop)
            && st.as_ref().is_some_and(|s| s.rules == [rule] && s.result.alpha_eq(&contractum))
            && typed(&contractum, kind, &prop);
        results.push((name, ok));
    }

    // Expansions: the expanded form keeps the type, and contracting it
    // against an introduction gives back what the original gives.
    let arrow = Prop::arrow(p.clone(), q.clone());
    for (name, kind, apply) in [
        ("-> true expansion", Relevant, Expr::ap as fn(Expr, Expr) -> Expr),
        ("-> just expansion", Irrelevant, Expr::ap_j as fn(Expr, Expr) -> Expr),
    ] {
        let f = e("f");
        let ok = eta_expand(&ctx, &f, &arrow, kind).is_ok_and(|x| {
            let expanded_applied = normalize(&apply(x.clone(), e("a")), 10).map(|n| n.value);
            typed(&x, kind, &arrow) && expanded_applied.is_ok_and(|v| v.alpha_eq(&apply(f.clone(), e("a"))))
        });
        results.push((name, ok));
    }
    let ex = Prop::exists(p.clone());
    for (name, kind, intro) in [("Ex true expansion", Relevant, "[a]"), ("Ex just expansion", Irrelevant, "[a]j")] {
        let intro = e(intro);
        let ok = typed(&e("b"), kind, &ex)
            && eta_expand(&ctx, &e("b"), &ex, kind).is_ok_and(|x| typed(&x, kind, &ex))
            && eta_expand(&ctx, &intro, &ex, kind).is_ok_and(|x| {
                // ⟨let ⟨x⟩ be ⟨a⟩ in x⟩ contracts inside the box back to ⟨a⟩.
                let (Expr::Box(inner) | Expr::BoxJ(inner)) = &x else { return false };
                let contracted = step_detailed(inner).map(|s| s.result);
                let rebuilt = contracted.map(|c| if matches!(x, Expr::Box(_)) { Expr::boxed(c) } else { Expr::boxed_j(c) });
                typed(&x, kind, &ex) && rebuilt.is_some_and(|r| r.alpha_eq(&intro))
            });
        results.push((name, ok));
    }
    let passed = results.iter().filter(|(_, ok)| *ok).count();
    let failed: Vec<&str> = results.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    let mut detail = format!("{passed}/{} diagrams", results.len());
    if !failed.is_empty() {
        detail.push_str(&format!("; failing: {}", failed.join(", ")));
    }
    verdict(passed == 8 && results.len() == 8, detail)
}

fn lax_bridge() -> Verdict {
    let bad = (0..CORPUS)
        .filter(|&seed| {
            let p = Generator::new(GenConfig::with_seed(seed)).prop(1 + (seed % 4) as usize);
            from_lax(&to_lax(&p)) != p
        })
        .count();
    verdict(bad == 0, format!("{bad}/{CORPUS} propositions change under the round trip"))
}

fn elaboration() -> Verdict {
    let mut seen = 0;
    let mut bad = 0;
    let mut seed = 0;
    while seen < ELABORATIONS {
        let s = Generator::new(GenConfig::with_seed(seed)).sample(Irrelevant);
        seed += 1;
        let (_, d) = infer(&s.ctx, &s.expr, Irrelevant).unwrap();
        let logical = erase(&d);
        if !logical.rules().iter().any(|r| r.is_j_rule()) {
            continue;
        }
        seen += 1;
        let out = elaborate_j(&logical);
        let ok = check_logical(&out).is_ok()
            && out.conclusion == logical.conclusion
            && !out.rules().iter().any(|r| r.is_j_rule());
        bad += usize::from(!ok);
    }
    verdict(bad == 0, format!("{bad}/{seen} elaborated derivations rejected (drawn from the first {seed} seeds)"))
}

fn erasure(corpora: &[(JudgmentKind, Vec<Entry>)]) -> Verdict {
    let mut checked = 0;
    let mut bad = 0;
    for (kind, entries) in corpora {
        for en in entries {
            checked += 1;
            let s = &en.sample;
            let ok = infer(&s.ctx, &s.expr, *kind).is_ok_and(|(_, d)| check_logical(&erase(&d)).is_ok());
            bad += usize::from(!ok);
        }
    }
    verdict(bad == 0, format!("{bad}/{checked} erased derivations rejected"))
}

fn golden() -> Verdict {
    let bad = support::golden_mismatches();
    let names: Vec<&str> = bad.iter().map(|(n, _, _)| *n).collect();
    let mut detail = format!("{}/{} invocations match", support::CASES.len() - bad.len(), support::CASES.len());
    if !names.is_empty() {
        detail.push_str(&format!("; differing: {}", names.join(", ")));
    }
    verdict(bad.is_empty() && support::CASES.len() == 25, detail)
}

fn main() {
    let started = Instant::now();
    let corpora: Vec<(JudgmentKind, Vec<Entry>)> = JudgmentKind::BOTH.iter().map(|&k| (k, corpus(k))).collect();
    let reducing = started.elapsed();
    let criteria: [(&str, &dyn Fn() -> Verdict); 10] = [
        ("proof trees", &fixtures),
        ("subject reduction", &|| subject_reduction(&corpora, reducing)),
        ("normalization", &|| normalization(&corpora)),
        ("determinism", &|| determinism(&corpora)),
        ("substitution", &substitution),
        ("local soundness", &local_soundness),
        ("lax bridge", &lax_bridge),
        ("elaboration", &elaboration),
        ("erasure", &|| erasure(&corpora)),
        ("cli golden suite", &golden),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        failed += usize::from(!v.pass);
        println!("{} {:>2} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
