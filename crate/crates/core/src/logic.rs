//! The purely logical system: judgments `Γ ⊢ φ true` and `Γ ⊢ φ just true`
//! over anonymous hypotheses, with explicit structural, substitution and `R`
//! rules.
//!
//! Trees may contain `premise` leaves: open judgments taken as given, as in
//! derivations that start from a schematic assumption.

use std::fmt;

use crate::syntax::{JudgmentKind, Prop};
use crate::typing::{Derivation, Rule};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum LogicRule {
    Hyp,
    Just,
    ArrowI,
    ArrowE,
    ArrowIJ,
    ArrowEJ,
    ExistsI,
    ExistsE,
    ExistsIJ,
    ExistsEJ,
    LolliI,
    LolliE,
    LolliIJ,
    LolliEJ,
    Sub1,
    Sub2,
    Weaken,
    Exchange,
    Contract,
    R,
    Premise,
}

impl LogicRule {
    pub const ALL: [LogicRule; 21] = [
        LogicRule::Hyp,
        LogicRule::Just,
        LogicRule::ArrowI,
        LogicRule::ArrowE,
        LogicRule::ArrowIJ,
        LogicRule::ArrowEJ,
        LogicRule::ExistsI,
        LogicRule::ExistsE,
        LogicRule::ExistsIJ,
        LogicRule::ExistsEJ,
        LogicRule::LolliI,
        LogicRule::LolliE,
        LogicRule::LolliIJ,
        LogicRule::LolliEJ,
        LogicRule::Sub1,
        LogicRule::Sub2,
        LogicRule::Weaken,
        LogicRule::Exchange,
        LogicRule::Contract,
        LogicRule::R,
        LogicRule::Premise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LogicRule::Hyp => "hyp",
            LogicRule::Just => "just",
            LogicRule::ArrowI => "->I",
            LogicRule::ArrowE => "->E",
            LogicRule::ArrowIJ => "->Ij",
            LogicRule::ArrowEJ => "->Ej",
            LogicRule::ExistsI => "ExI",
            LogicRule::ExistsE => "ExE",
            LogicRule::ExistsIJ => "ExIj",
            LogicRule::ExistsEJ => "ExEj",
            LogicRule::LolliI => "-oI",
            LogicRule::LolliE => "-oE",
            LogicRule::LolliIJ => "-oIj",
            LogicRule::LolliEJ => "-oEj",
            LogicRule::Sub1 => "sub1",
            LogicRule::Sub2 => "sub2",
            LogicRule::Weaken => "weaken",
            LogicRule::Exchange => "exchange",
            LogicRule::Contract => "contract",
            LogicRule::R => "R",
            LogicRule::Premise => "premise",
        }
    }

    pub fn from_name(s: &str) -> Option<LogicRule> {
        LogicRule::ALL.into_iter().find(|r| r.name() == s)
    }

    /// The proof-irrelevant variants of the connective rules.
    pub fn is_j_rule(self) -> bool {
        matches!(
            self,
            LogicRule::ArrowIJ
                | LogicRule::ArrowEJ
                | LogicRule::ExistsIJ
                | LogicRule::ExistsEJ
                | LogicRule::LolliIJ
                | LogicRule::LolliEJ
        )
    }

    /// The kind that all starred positions of the rule take, for the
    /// connective rules.
    fn star(self) -> Option<JudgmentKind> {
        use JudgmentKind::{Irrelevant, Relevant};
        match self {
            LogicRule::ArrowI | LogicRule::ArrowE | LogicRule::ExistsI | LogicRule::ExistsE => Some(Relevant),
            LogicRule::LolliI | LogicRule::LolliE => Some(Relevant),
            LogicRule::ArrowIJ | LogicRule::ArrowEJ | LogicRule::ExistsIJ | LogicRule::ExistsEJ => Some(Irrelevant),
            LogicRule::LolliIJ | LogicRule::LolliEJ => Some(Irrelevant),
            _ => None,
        }
    }
}

impl fmt::Display for LogicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl From<Rule> for LogicRule {
    fn from(r: Rule) -> LogicRule {
        match r {
            Rule::Hyp => LogicRule::Hyp,
            Rule::Just => LogicRule::Just,
            Rule::ArrowI => LogicRule::ArrowI,
            Rule::ArrowE => LogicRule::ArrowE,
            Rule::ArrowIJ => LogicRule::ArrowIJ,
            Rule::ArrowEJ => LogicRule::ArrowEJ,
            Rule::ExistsI => LogicRule::ExistsI,
            Rule::ExistsE => LogicRule::ExistsE,
            Rule::ExistsIJ => LogicRule::ExistsIJ,
            Rule::ExistsEJ => LogicRule::ExistsEJ,
        }
    }
}

/// `φ1 true, ..., φn true ⊢ φ kind`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LogicalJudgment {
    pub hyps: Vec<Prop>,
    pub prop: Prop,
    pub kind: JudgmentKind,
}

impl LogicalJudgment {
    pub fn new(hyps: Vec<Prop>, prop: Prop, kind: JudgmentKind) -> LogicalJudgment {
        LogicalJudgment { hyps, prop, kind }
    }

    fn with_hyp(&self, p: Prop) -> Vec<Prop> {
        let mut hyps = self.hyps.clone();
        hyps.push(p);
        hyps
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LogicalDerivation {
    pub conclusion: LogicalJudgment,
    pub rule: LogicRule,
    pub premises: Vec<LogicalDerivation>,
}

impl LogicalDerivation {
    pub fn new(conclusion: LogicalJudgment, rule: LogicRule, premises: Vec<LogicalDerivation>) -> Self {
        LogicalDerivation { conclusion, rule, premises }
    }

    pub fn premise(j: LogicalJudgment) -> Self {
        LogicalDerivation::new(j, LogicRule::Premise, vec![])
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(LogicalDerivation::size).sum::<usize>()
    }

    pub fn rules(&self) -> Vec<LogicRule> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    /// The judgments assumed by `premise` leaves, left to right.
    pub fn open_premises(&self) -> Vec<&LogicalJudgment> {
        let mut out = Vec::new();
        self.collect_open(&mut out);
        out
    }

    fn collect_open<'a>(&'a self, out: &mut Vec<&'a LogicalJudgment>) {
        if self.rule == LogicRule::Premise {
            out.push(&self.conclusion);
        }
        for p in &self.premises {
            p.collect_open(out);
        }
    }

    /// Replaces every `premise` leaf whose judgment equals the conclusion of
    /// `proof` with `proof`.
    pub fn plug(&self, proof: &LogicalDerivation) -> LogicalDerivation {
        if self.rule == LogicRule::Premise && self.conclusion == proof.conclusion {
            return proof.clone();
        }
        LogicalDerivation {
            conclusion: self.conclusion.clone(),
            rule: self.rule,
            premises: self.premises.iter().map(|p| p.plug(proof)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rule {rule} at node {path:?}: {reason}")]
pub struct LogicError {
    pub path: Vec<usize>,
    pub rule: LogicRule,
    pub reason: String,
}

pub fn check_logical(d: &LogicalDerivation) -> Result<(), LogicError> {
    check_at(d, &mut Vec::new())
}

pub fn is_valid(d: &LogicalDerivation) -> bool {
    check_logical(d).is_ok()
}

fn check_at(d: &LogicalDerivation, path: &mut Vec<usize>) -> Result<(), LogicError> {
    check_node(d).map_err(|reason| LogicError { path: path.clone(), rule: d.rule, reason })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_at(p, path)?;
        path.pop();
    }
    Ok(())
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(j: &LogicalJudgment) -> String {
    crate::print::logical_judgment_to_string(j, crate::print::Style::ASCII)
}

/// Checks that `actual` is `hyps ⊢ prop kind`.
fn judgment_is(actual: &LogicalJudgment, hyps: &[Prop], prop: &Prop, kind: JudgmentKind) -> Result<(), String> {
    let expected = LogicalJudgment::new(hyps.to_vec(), prop.clone(), kind);
    expect(*actual == expected, || {
        format!("expected premise {}, found {}", show(&expected), show(actual))
    })
}

fn without(hyps: &[Prop], i: usize) -> Vec<Prop> {
    let mut v = hyps.to_vec();
    v.remove(i);
    v
}

fn is_permutation(a: &[Prop], b: &[Prop]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort();
    b.sort();
    a == b
}

fn check_node(d: &LogicalDerivation) -> Result<(), String> {
    use JudgmentKind::{Irrelevant, Relevant};
    let c = &d.conclusion;
    let n = d.premises.len();
    let expected_arity = match d.rule {
        LogicRule::Hyp | LogicRule::Premise => 0,
        LogicRule::ArrowE
        | LogicRule::ArrowEJ
        | LogicRule::ExistsE
        | LogicRule::ExistsEJ
        | LogicRule::LolliE
        | LogicRule::LolliEJ
        | LogicRule::Sub1
        | LogicRule::Sub2 => 2,
        _ => 1,
    };
    expect(n == expected_arity, || format!("expected {expected_arity} premise(s), found {n}"))?;
    let prem = |i: usize| &d.premises[i].conclusion;
    match d.rule {
        LogicRule::Premise => Ok(()),
        LogicRule::Hyp => {
            expect(c.kind == Relevant, || "hyp concludes a true judgment".into())?;
            expect(c.hyps.contains(&c.prop), || format!("`{}` is not a hypothesis", c.prop))
        }
        LogicRule::Just => {
            expect(c.kind == Irrelevant, || "just concludes a just-true judgment".into())?;
            judgment_is(prem(0), &c.hyps, &c.prop, Relevant)
        }
        LogicRule::ArrowI | LogicRule::ArrowIJ => {
            let star = d.rule.star().unwrap();
            expect(c.kind == star, || format!("conclusion must be {star}"))?;
            let (dom, cod) = c.prop.as_arrow().ok_or("conclusion must be an implication")?;
            judgment_is(prem(0), &c.with_hyp(dom.clone()), cod, star)
        }
        LogicRule::ArrowE | LogicRule::ArrowEJ => {
            let star = d.rule.star().unwrap();
            expect(c.kind == star, || format!("conclusion must be {star}"))?;
            let arg = &prem(1).prop;
            judgment_is(prem(0), &c.hyps, &Prop::arrow(arg.clone(), c.prop.clone()), star)?;
            judgment_is(prem(1), &c.hyps, arg, Relevant)
        }
        LogicRule::ExistsI | LogicRule::ExistsIJ => {
            let star = d.rule.star().unwrap();
            expect(c.kind == star, || format!("conclusion must be {star}"))?;
            let inner = c.prop.as_exists().ok_or("conclusion must be ∃φ")?;
            judgment_is(prem(0), &c.hyps, inner, Irrelevant)
        }
        LogicRule::ExistsE | LogicRule::ExistsEJ => {
            let star = d.rule.star().unwrap();
            expect(c.kind == Irrelevant, || "conclusion must be just true".into())?;
            let scrutinee = &prem(0).prop;
            let inner = scrutinee.as_exists().ok_or("first premise must be ∃φ")?;
            judgment_is(prem(0), &c.hyps, scrutinee, star)?;
            judgment_is(prem(1), &c.with_hyp(inner.clone()), &c.prop, Irrelevant)
        }
        LogicRule::LolliI | LogicRule::LolliIJ => {
            let star = d.rule.star().unwrap();
            expect(c.kind == star, || format!("conclusion must be {star}"))?;
            let (dom, cod) = c.prop.as_arrow().ok_or("conclusion must be φ ⊸ ψ")?;
            let cod = cod.as_exists().ok_or("conclusion must be φ ⊸ ψ")?;
            judgment_is(prem(0), &c.with_hyp(dom.clone()), cod, Irrelevant)
        }
        LogicRule::LolliE | LogicRule::LolliEJ => {
            let star = d.rule.star().unwrap();
            expect(c.kind == Irrelevant, || "conclusion must be just true".into())?;
            let arg = &prem(1).prop;
            judgment_is(prem(0), &c.hyps, &Prop::lolli(arg.clone(), c.prop.clone()), star)?;
            judgment_is(prem(1), &c.hyps, arg, Relevant)
        }
        LogicRule::Sub1 | LogicRule::Sub2 => {
            let cut = prem(0).prop.clone();
            let cut_kind = if d.rule == LogicRule::Sub1 { c.kind } else { Relevant };
            if d.rule == LogicRule::Sub2 {
                expect(c.kind == Irrelevant, || "sub2 concludes a just-true judgment".into())?;
            }
            judgment_is(prem(0), &c.hyps, &cut, cut_kind)?;
            judgment_is(prem(1), &c.with_hyp(cut), &c.prop, c.kind)
        }
        LogicRule::Weaken => {
            let p = prem(0);
            expect(p.prop == c.prop && p.kind == c.kind, || "weakening keeps the conclusion".into())?;
            expect(p.hyps.len() + 1 == c.hyps.len(), || "weakening adds exactly one hypothesis".into())?;
            expect((0..c.hyps.len()).any(|i| without(&c.hyps, i) == p.hyps), || {
                "premise hypotheses are not the conclusion's with one removed".into()
            })
        }
        LogicRule::Exchange => {
            let p = prem(0);
            expect(p.prop == c.prop && p.kind == c.kind, || "exchange keeps the conclusion".into())?;
            expect(is_permutation(&p.hyps, &c.hyps), || "hypotheses must be a permutation".into())
        }
        LogicRule::Contract => {
            let p = prem(0);
            expect(p.prop == c.prop && p.kind == c.kind, || "contraction keeps the conclusion".into())?;
            expect(p.hyps.len() == c.hyps.len() + 1, || "contraction removes exactly one hypothesis".into())?;
            expect(
                (0..p.hyps.len()).any(|i| without(&p.hyps, i) == c.hyps && c.hyps.contains(&p.hyps[i])),
                || "premise hypotheses must be the conclusion's with one duplicated".into(),
            )
        }
        LogicRule::R => {
            expect(c.kind == Irrelevant, || "R concludes a just-true judgment".into())?;
            let (dom, cod) = c.prop.as_arrow().ok_or("conclusion must be an implication")?;
            judgment_is(prem(0), &c.hyps, &Prop::lolli(dom.clone(), cod.clone()), Relevant)
        }
    }
}

/// Forgets the proof expressions of a computational derivation.
pub fn erase(d: &Derivation) -> LogicalDerivation {
    let c = &d.conclusion;
    LogicalDerivation {
        conclusion: LogicalJudgment::new(c.ctx.props(), c.prop.clone(), c.kind),
        rule: d.rule.into(),
        premises: d.premises.iter().map(erase).collect(),
    }
}

fn node(hyps: &[Prop], prop: Prop, kind: JudgmentKind, rule: LogicRule, premises: Vec<LogicalDerivation>) -> LogicalDerivation {
    LogicalDerivation::new(LogicalJudgment::new(hyps.to_vec(), prop, kind), rule, premises)
}

/// Rewrites every j-rule (and every `⊸` rule) into true-variant rules,
/// structural rules and `R`. The conclusion is unchanged.
pub fn elaborate_j(d: &LogicalDerivation) -> LogicalDerivation {
    use JudgmentKind::{Irrelevant, Relevant};
    let premises: Vec<LogicalDerivation> = d.premises.iter().map(elaborate_j).collect();
    let c = &d.conclusion;
    let hyps = &c.hyps;
    match d.rule {
        // φ ⊸ ψ ⋆ from Γ, φ ⊢ ψ just: ∃I⋆ then →I⋆.
        LogicRule::LolliI | LogicRule::LolliIJ => {
            let star = d.rule.star().unwrap();
            let (_, cod) = c.prop.as_arrow().expect("checked");
            let [body] = <[_; 1]>::try_from(premises).expect("checked");
            let inner = body.conclusion.hyps.clone();
            let intro = if star == Relevant { LogicRule::ExistsI } else { LogicRule::ExistsIJ };
            let boxed = node(&inner, cod.clone(), star, intro, vec![body]);
            let lam = if star == Relevant { LogicRule::ArrowI } else { LogicRule::ArrowIJ };
            elaborate_j(&node(hyps, c.prop.clone(), star, lam, vec![boxed]))
        }
        // ψ just from φ ⊸ ψ ⋆ and φ true: →E⋆, then ∃E⋆ against Γ, ψ ⊢ ψ just.
        LogicRule::LolliE | LogicRule::LolliEJ => {
            let star = d.rule.star().unwrap();
            let [f, a] = <[_; 2]>::try_from(premises).expect("checked");
            let cod = Prop::exists(c.prop.clone());
            let ap = if star == Relevant { LogicRule::ArrowE } else { LogicRule::ArrowEJ };
            let applied = node(hyps, cod, star, ap, vec![f, a]);
            let mut inner = hyps.clone();
            inner.push(c.prop.clone());
            let unpacked = node(
                &inner,
                c.prop.clone(),
                Irrelevant,
                LogicRule::Just,
                vec![node(&inner, c.prop.clone(), Relevant, LogicRule::Hyp, vec![])],
            );
            let elim = if star == Relevant { LogicRule::ExistsE } else { LogicRule::ExistsEJ };
            elaborate_j(&node(hyps, c.prop.clone(), Irrelevant, elim, vec![applied, unpacked]))
        }
        // R(→I(∃I(D))).
        LogicRule::ArrowIJ => {
            let [body] = <[_; 1]>::try_from(premises).expect("checked");
            let (dom, cod) = c.prop.as_arrow().expect("checked");
            let inner = body.conclusion.hyps.clone();
            let boxed = node(&inner, Prop::exists(cod.clone()), Relevant, LogicRule::ExistsI, vec![body]);
            let lam = node(hyps, Prop::lolli(dom.clone(), cod.clone()), Relevant, LogicRule::ArrowI, vec![boxed]);
            node(hyps, c.prop.clone(), Irrelevant, LogicRule::R, vec![lam])
        }
        // ∃E(∃I(D1) : ∃(φ→ψ), just(→E(hyp, weaken(D2)))).
        LogicRule::ArrowEJ => {
            let [f, a] = <[_; 2]>::try_from(premises).expect("checked");
            let fun = f.conclusion.prop.clone();
            let arg = a.conclusion.prop.clone();
            let boxed = node(hyps, Prop::exists(fun.clone()), Relevant, LogicRule::ExistsI, vec![f]);
            let mut inner = hyps.clone();
            inner.push(fun.clone());
            let hyp = node(&inner, fun, Relevant, LogicRule::Hyp, vec![]);
            let weakened = node(&inner, arg, Relevant, LogicRule::Weaken, vec![a]);
            let applied = node(&inner, c.prop.clone(), Relevant, LogicRule::ArrowE, vec![hyp, weakened]);
            let just = node(&inner, c.prop.clone(), Irrelevant, LogicRule::Just, vec![applied]);
            node(hyps, c.prop.clone(), Irrelevant, LogicRule::ExistsE, vec![boxed, just])
        }
        // just(∃I(D)).
        LogicRule::ExistsIJ => {
            let boxed = node(hyps, c.prop.clone(), Relevant, LogicRule::ExistsI, premises);
            node(hyps, c.prop.clone(), Irrelevant, LogicRule::Just, vec![boxed])
        }
        // ∃E(∃I(D1) : ∃∃φ, ∃E(hyp : ∃φ, exchange(weaken(D2)))).
        LogicRule::ExistsEJ => {
            let [s, body] = <[_; 2]>::try_from(premises).expect("checked");
            let ex = s.conclusion.prop.clone();
            let inner_p = ex.as_exists().expect("checked").clone();
            let boxed = node(hyps, Prop::exists(ex.clone()), Relevant, LogicRule::ExistsI, vec![s]);
            let mut with_ex = hyps.clone();
            with_ex.push(ex.clone());
            let hyp = node(&with_ex, ex.clone(), Relevant, LogicRule::Hyp, vec![]);
            let mut weakened_hyps = hyps.clone();
            weakened_hyps.push(inner_p.clone());
            weakened_hyps.push(ex);
            let weakened = node(&weakened_hyps, c.prop.clone(), Irrelevant, LogicRule::Weaken, vec![body]);
            let mut exchanged_hyps = with_ex.clone();
            exchanged_hyps.push(inner_p);
            let exchanged = node(&exchanged_hyps, c.prop.clone(), Irrelevant, LogicRule::Exchange, vec![weakened]);
            let unpacked = node(&with_ex, c.prop.clone(), Irrelevant, LogicRule::ExistsE, vec![hyp, exchanged]);
            node(hyps, c.prop.clone(), Irrelevant, LogicRule::ExistsE, vec![boxed, unpacked])
        }
        rule => LogicalDerivation::new(c.clone(), rule, premises),
    }
}
