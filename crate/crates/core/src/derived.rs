//! Derived constructions: truncation introduction and elimination, the three
//! lax-modality axioms, and proof trees for the basic facts relating `→`,
//! `∃` and `just`.

use std::fmt;
use std::str::FromStr;

use crate::logic::{LogicRule, LogicalDerivation, LogicalJudgment};
use crate::syntax::{fresh, Context, Expr, JudgmentKind, Name, Prop};
use crate::typing::{infer_irrelevant, infer_relevant, Derivation, TypeError};

use JudgmentKind::{Irrelevant, Relevant};

/// `⟨t⟩ : ∃φ` from `t : φ`, by `just` then `∃I`.
pub fn trunc_intro(ctx: &Context, t: &Expr) -> Result<(Expr, Derivation), TypeError> {
    if !t.is_term() {
        return Err(TypeError::NotATerm(t.clone()));
    }
    let e = Expr::boxed(t.clone());
    let (_, d) = infer_relevant(ctx, &e)?;
    Ok((e, d))
}

/// `λⱼ(y:∃φ). let ⟨x⟩ be y in apⱼ(f, x)  ∴ ∃φ → ψ` from `f ∴ φ → ψ`.
pub fn trunc_elim(ctx: &Context, f: &Expr) -> Result<(Expr, Derivation), TypeError> {
    let (fp, _) = infer_irrelevant(ctx, f)?;
    let (dom, _) = fp.as_arrow().ok_or_else(|| TypeError::ArrowExpected { found: fp.clone() })?;
    let mut avoid = ctx.names();
    avoid.extend(f.free_vars());
    let y = fresh(&avoid, &Name::from("y"));
    avoid.insert(y.clone());
    let x = fresh(&avoid, &Name::from("x"));
    let body = Expr::let_box(x.clone(), Expr::Var(y.clone()), Expr::ap_j(f.clone(), Expr::Var(x)));
    let g = Expr::lam_j(y, Prop::exists(dom.clone()), body);
    let (_, d) = infer_irrelevant(ctx, &g)?;
    Ok((g, d))
}

/// The axioms making `∃` a lax modality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LaxAxiom {
    /// `φ → ∃φ`
    Unit(Prop),
    /// `∃∃φ → ∃φ`
    Join(Prop),
    /// `(φ → ψ) → ∃φ → ∃ψ`
    Map(Prop, Prop),
}

impl LaxAxiom {
    pub fn statement(&self) -> Prop {
        match self {
            LaxAxiom::Unit(a) => Prop::arrow(a.clone(), Prop::exists(a.clone())),
            LaxAxiom::Join(a) => Prop::arrow(Prop::exists(Prop::exists(a.clone())), Prop::exists(a.clone())),
            LaxAxiom::Map(a, b) => Prop::arrow(
                Prop::arrow(a.clone(), b.clone()),
                Prop::arrow(Prop::exists(a.clone()), Prop::exists(b.clone())),
            ),
        }
    }

    /// A closed term of type [`LaxAxiom::statement`].
    pub fn witness(&self) -> Expr {
        let var = Expr::var;
        match self {
            LaxAxiom::Unit(a) => Expr::lam("x", a.clone(), Expr::boxed(var("x"))),
            LaxAxiom::Join(a) => {
                let inner = Expr::let_box("x", var("z"), var("x"));
                Expr::lam(
                    "y",
                    Prop::exists(Prop::exists(a.clone())),
                    Expr::boxed(Expr::let_box("z", var("y"), inner)),
                )
            }
            LaxAxiom::Map(a, b) => {
                let body = Expr::let_box("x", var("y"), Expr::ap(var("f"), var("x")));
                Expr::lam(
                    "f",
                    Prop::arrow(a.clone(), b.clone()),
                    Expr::lam("y", Prop::exists(a.clone()), Expr::boxed(body)),
                )
            }
        }
    }

    /// The logical proof tree of the axiom over hypotheses `gamma`.
    pub fn tree(&self, gamma: &[Prop]) -> LogicalDerivation {
        match self {
            LaxAxiom::Unit(a) => unit_tree(gamma, a),
            LaxAxiom::Join(a) => prop6(gamma, a),
            LaxAxiom::Map(a, b) => map_tree(gamma, a, b),
        }
    }
}

pub fn lax_axiom(which: &LaxAxiom) -> (Expr, Derivation) {
    let e = which.witness();
    let (_, d) = infer_relevant(&Context::new(), &e).expect("lax axiom witnesses are well typed");
    (e, d)
}

/// Basic facts about `→`, `∃` and `just`, each as a proof tree from an
/// open premise (except the last, which is closed):
///
/// * `1L`: `φ ⊸ ψ true` gives `φ → ψ just`; `1R` the converse
/// * `2L`: `φ → ∃ψ true` gives `∃φ → ∃ψ true`; `2R` the converse
/// * `3L`: `φ ⊸ ψ true` gives `∃φ → ψ just`; `3R` the converse
/// * `4L`: `φ → ψ just` gives `∃φ → ψ just` (composing 1R and 3L); `4R` the converse
/// * `5`: `∃(φ → ψ) true` gives `∃φ → ∃ψ true`
/// * `6`: `∃∃φ → ∃φ true`
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Witness {
    Prop1Left,
    Prop1Right,
    Prop2Left,
    Prop2Right,
    Prop3Left,
    Prop3Right,
    Prop4Left,
    Prop4Right,
    Prop5,
    Prop6,
}

impl Witness {
    pub const ALL: [Witness; 10] = [
        Witness::Prop1Left,
        Witness::Prop1Right,
        Witness::Prop2Left,
        Witness::Prop2Right,
        Witness::Prop3Left,
        Witness::Prop3Right,
        Witness::Prop4Left,
        Witness::Prop4Right,
        Witness::Prop5,
        Witness::Prop6,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Witness::Prop1Left => "1L",
            Witness::Prop1Right => "1R",
            Witness::Prop2Left => "2L",
            Witness::Prop2Right => "2R",
            Witness::Prop3Left => "3L",
            Witness::Prop3Right => "3R",
            Witness::Prop4Left => "4L",
            Witness::Prop4Right => "4R",
            Witness::Prop5 => "5",
            Witness::Prop6 => "6",
        }
    }

    /// Whether the statement mentions a second proposition.
    pub fn needs_codomain(self) -> bool {
        self != Witness::Prop6
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Witness {
    type Err = String;

    fn from_str(s: &str) -> Result<Witness, String> {
        Witness::ALL
            .into_iter()
            .find(|w| w.label() == s)
            .ok_or_else(|| format!("unknown proposition `{s}` (expected one of 1L..4R, 5, 6)"))
    }
}

/// The proof tree for `which` at `φ`, `ψ` over hypotheses `gamma`. `ψ` is
/// ignored by [`Witness::Prop6`].
pub fn proposition_witness(which: Witness, gamma: &[Prop], phi: &Prop, psi: &Prop) -> LogicalDerivation {
    match which {
        Witness::Prop1Left => prop1_left(gamma, phi, psi),
        Witness::Prop1Right => prop1_right(gamma, phi, psi),
        Witness::Prop2Left => prop2_left(gamma, phi, psi),
        Witness::Prop2Right => prop2_right(gamma, phi, psi),
        Witness::Prop3Left => prop3_left(gamma, phi, psi),
        Witness::Prop3Right => prop3_right(gamma, phi, psi),
        Witness::Prop4Left => prop3_left(gamma, phi, psi).plug(&prop1_right(gamma, phi, psi)),
        Witness::Prop4Right => prop1_left(gamma, phi, psi).plug(&prop3_right(gamma, phi, psi)),
        Witness::Prop5 => prop5(gamma, phi, psi),
        Witness::Prop6 => prop6(gamma, phi),
    }
}

/// The logical shape of [`trunc_elim`]: `∃φ → ψ just` from an open premise
/// `φ → ψ just`, with explicit weakening and exchange.
pub fn trunc_elim_tree(gamma: &[Prop], phi: &Prop, psi: &Prop) -> LogicalDerivation {
    let ex = Prop::exists(phi.clone());
    let f = premise(ctx(gamma, &[]), Prop::arrow(phi.clone(), psi.clone()), Irrelevant);
    let applied = arrow_e(weaken(f, ctx(gamma, &[phi])), hyp(ctx(gamma, &[phi]), phi));
    let moved = exchange(weaken(applied, ctx(gamma, &[phi, &ex])), ctx(gamma, &[&ex, phi]));
    let unpacked = exists_e(hyp(ctx(gamma, &[&ex]), &ex), moved);
    arrow_i(unpacked, Irrelevant)
}

/// `φ → ψ true` gives `φ ⊸ ψ true`, without a converse.
pub fn arrow_to_lolli_tree(gamma: &[Prop], phi: &Prop, psi: &Prop) -> LogicalDerivation {
    let f = premise(ctx(gamma, &[]), Prop::arrow(phi.clone(), psi.clone()), Relevant);
    let applied = arrow_e(weaken(f, ctx(gamma, &[phi])), hyp(ctx(gamma, &[phi]), phi));
    arrow_i(exists_i(just(applied), Relevant), Relevant)
}

fn ctx(gamma: &[Prop], extra: &[&Prop]) -> Vec<Prop> {
    let mut v = gamma.to_vec();
    v.extend(extra.iter().map(|p| (*p).clone()));
    v
}

fn node(hyps: Vec<Prop>, prop: Prop, kind: JudgmentKind, rule: LogicRule, premises: Vec<LogicalDerivation>) -> LogicalDerivation {
    LogicalDerivation::new(LogicalJudgment::new(hyps, prop, kind), rule, premises)
}

fn premise(hyps: Vec<Prop>, prop: Prop, kind: JudgmentKind) -> LogicalDerivation {
    LogicalDerivation::premise(LogicalJudgment::new(hyps, prop, kind))
}

fn hyp(hyps: Vec<Prop>, prop: &Prop) -> LogicalDerivation {
    node(hyps, prop.clone(), Relevant, LogicRule::Hyp, vec![])
}

fn just(d: LogicalDerivation) -> LogicalDerivation {
    let c = d.conclusion.clone();
    node(c.hyps, c.prop, Irrelevant, LogicRule::Just, vec![d])
}

fn weaken(d: LogicalDerivation, hyps: Vec<Prop>) -> LogicalDerivation {
    let c = d.conclusion.clone();
    node(hyps, c.prop, c.kind, LogicRule::Weaken, vec![d])
}

fn exchange(d: LogicalDerivation, hyps: Vec<Prop>) -> LogicalDerivation {
    let c = d.conclusion.clone();
    node(hyps, c.prop, c.kind, LogicRule::Exchange, vec![d])
}

fn arrow_i(d: LogicalDerivation, kind: JudgmentKind) -> LogicalDerivation {
    let mut hyps = d.conclusion.hyps.clone();
    let dom = hyps.pop().expect("→I discharges a hypothesis");
    let prop = Prop::arrow(dom, d.conclusion.prop.clone());
    let rule = if kind == Relevant { LogicRule::ArrowI } else { LogicRule::ArrowIJ };
    node(hyps, prop, kind, rule, vec![d])
}

fn arrow_e(f: LogicalDerivation, a: LogicalDerivation) -> LogicalDerivation {
    let c = f.conclusion.clone();
    let (_, cod) = c.prop.as_arrow().expect("→E needs an implication");
    let rule = if c.kind == Relevant { LogicRule::ArrowE } else { LogicRule::ArrowEJ };
    node(c.hyps.clone(), cod.clone(), c.kind, rule, vec![f, a])
}

fn exists_i(d: LogicalDerivation, kind: JudgmentKind) -> LogicalDerivation {
    let c = d.conclusion.clone();
    let rule = if kind == Relevant { LogicRule::ExistsI } else { LogicRule::ExistsIJ };
    node(c.hyps, Prop::exists(c.prop), kind, rule, vec![d])
}

fn exists_e(s: LogicalDerivation, body: LogicalDerivation) -> LogicalDerivation {
    let c = s.conclusion.clone();
    let rule = if c.kind == Relevant { LogicRule::ExistsE } else { LogicRule::ExistsEJ };
    node(c.hyps, body.conclusion.prop.clone(), Irrelevant, rule, vec![s, body])
}

fn lolli_i(d: LogicalDerivation, kind: JudgmentKind) -> LogicalDerivation {
    let mut hyps = d.conclusion.hyps.clone();
    let dom = hyps.pop().expect("⊸I discharges a hypothesis");
    let prop = Prop::lolli(dom, d.conclusion.prop.clone());
    let rule = if kind == Relevant { LogicRule::LolliI } else { LogicRule::LolliIJ };
    node(hyps, prop, kind, rule, vec![d])
}

fn lolli_e(f: LogicalDerivation, a: LogicalDerivation) -> LogicalDerivation {
    let c = f.conclusion.clone();
    let (_, cod) = c.prop.as_arrow().expect("⊸E needs φ ⊸ ψ");
    let cod = cod.as_exists().expect("⊸E needs φ ⊸ ψ").clone();
    let rule = if c.kind == Relevant { LogicRule::LolliE } else { LogicRule::LolliEJ };
    node(c.hyps.clone(), cod, Irrelevant, rule, vec![f, a])
}

fn prop1_left(g: &[Prop], phi: &Prop, psi: &Prop) -> LogicalDerivation {
    let f = premise(ctx(g, &[]), Prop::lolli(phi.clone(), psi.clone()), Relevant);
    let applied = lolli_e(weaken(f, ctx(g, &[phi])), hyp(ctx(g, &[phi]), phi));
    arrow_i(applied, Irrelevant)
}

fn prop1_right(g: &[Prop], phi: &Prop, psi: &Prop) -> LogicalDerivation {
    let f = premise(ctx(g, &[]), Prop::arrow(phi.clone(), psi.clone()), Irrelevant);
    let applied = arrow_e(weaken(f, ctx(g, &[phi])), hyp(ctx(g, &[phi]), phi));
    lolli_i(applied, Relevant)
}

fn prop2_left(g: &[Prop], phi: &Prop, psi: &Prop) -> LogicalDerivation {
    let ex_phi = Prop::exists(phi.clone());
    let f = premise(ctx(g, &[]), Prop::lolli(phi.clone(), psi.clone()), Relevant);
    let applied = arrow_e(weaken(f, ctx(g, &[phi])), hyp(ctx(g, &[phi]), phi));
    let found = just(exchange(weaken(hyp(ctx(g, &[psi]), psi), ctx(g, &[psi, phi])), ctx(g, &[phi, psi])));
    let inner = exists_e(applied, found);
    let moved = exchange(weaken(inner, ctx(g, &[phi, &ex_phi])), ctx(g, &[&ex_phi, phi]));
    let outer = exists_e(hyp(ctx(g, &[&ex_phi]), &ex_phi), moved);
    arrow_i(exists_i(outer, Relevant), Relevant)
}

fn prop2_right(g: &[Prop], phi: &Prop, psi: &Prop) -> LogicalDerivation {
    let ex_phi = Prop::exists(phi.clone());
    let f = premise(ctx(g, &[]), Prop::arrow(ex_phi, Prop::exists(psi.clone())), Relevant);
    let boxed = exists_i(just(hyp(ctx(g, &[phi]), phi)), Relevant);
    arrow_i(arrow_e(weaken(f, ctx(g, &[phi])), boxed), Relevant)
}

fn prop3_left(g: &[Prop], phi: &Prop, psi: &Prop) -> LogicalDerivation {
    let ex_phi = Prop::exists(phi.clone());
    let f = premise(ctx(g, &[]), Prop::lolli(phi.clone(), psi.clone()), Relevant);
    let applied = lolli_e(weaken(f, ctx(g, &[phi])), hyp(ctx(g, &[phi]), phi));
    let moved = exchange(weaken(applied, ctx(g, &[phi, &ex_phi])), ctx(g, &[&ex_phi, phi]));
    let unpacked = exists_e(hyp(ctx(g, &[&ex_phi]), &ex_phi), moved);
    arrow_i(unpacked, Irrelevant)
}

fn prop3_right(g: &[Prop], phi: &Prop, psi: &Prop) -> LogicalDerivation {
    let ex_phi = Prop::exists(phi.clone());
    let f = premise(ctx(g, &[]), Prop::arrow(ex_phi, psi.clone()), Irrelevant);
    let boxed = exists_i(just(hyp(ctx(g, &[phi]), phi)), Relevant);
    lolli_i(arrow_e(weaken(f, ctx(g, &[phi])), boxed), Relevant)
}

fn prop5(g: &[Prop], phi: &Prop, psi: &Prop) -> LogicalDerivation {
    let ex_phi = Prop::exists(phi.clone());
    let fun = Prop::arrow(phi.clone(), psi.clone());
    let boxed_fun = premise(ctx(g, &[]), Prop::exists(fun.clone()), Relevant);
    let f = exchange(weaken(hyp(ctx(g, &[&fun]), &fun), ctx(g, &[&fun, phi])), ctx(g, &[phi, &fun]));
    let a = weaken(hyp(ctx(g, &[phi]), phi), ctx(g, &[phi, &fun]));
    let applied = just(arrow_e(f, a));
    let inner = exists_e(weaken(boxed_fun, ctx(g, &[phi])), applied);
    let moved = exchange(weaken(inner, ctx(g, &[phi, &ex_phi])), ctx(g, &[&ex_phi, phi]));
    let outer = exists_e(hyp(ctx(g, &[&ex_phi]), &ex_phi), moved);
    arrow_i(exists_i(outer, Relevant), Relevant)
}

fn prop6(g: &[Prop], phi: &Prop) -> LogicalDerivation {
    let ex = Prop::exists(phi.clone());
    let exex = Prop::exists(ex.clone());
    let found = exchange(weaken(just(hyp(ctx(g, &[phi]), phi)), ctx(g, &[phi, &ex])), ctx(g, &[&ex, phi]));
    let inner = exists_e(hyp(ctx(g, &[&ex]), &ex), found);
    let moved = exchange(weaken(inner, ctx(g, &[&ex, &exex])), ctx(g, &[&exex, &ex]));
    let outer = exists_e(hyp(ctx(g, &[&exex]), &exex), moved);
    arrow_i(exists_i(outer, Relevant), Relevant)
}

fn unit_tree(g: &[Prop], phi: &Prop) -> LogicalDerivation {
    arrow_i(exists_i(just(hyp(ctx(g, &[phi]), phi)), Relevant), Relevant)
}

fn map_tree(g: &[Prop], phi: &Prop, psi: &Prop) -> LogicalDerivation {
    let ex_phi = Prop::exists(phi.clone());
    let fun = Prop::arrow(phi.clone(), psi.clone());
    let scrutinee = weaken(hyp(ctx(g, &[&ex_phi]), &ex_phi), ctx(g, &[&ex_phi, &fun]));
    let f = weaken(hyp(ctx(g, &[&fun]), &fun), ctx(g, &[&fun, phi]));
    let a = exchange(weaken(hyp(ctx(g, &[phi]), phi), ctx(g, &[phi, &fun])), ctx(g, &[&fun, phi]));
    let applied = just(arrow_e(f, a));
    let moved = exchange(weaken(applied, ctx(g, &[&fun, phi, &ex_phi])), ctx(g, &[&ex_phi, &fun, phi]));
    let unpacked = exists_i(exists_e(scrutinee, moved), Relevant);
    let reordered = exchange(unpacked, ctx(g, &[&fun, &ex_phi]));
    arrow_i(arrow_i(reordered, Relevant), Relevant)
}
