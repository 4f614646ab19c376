//! Runs the declarations of a source file in order.

use std::collections::{BTreeMap, BTreeSet};

use jex_core::derived::{lax_axiom, proposition_witness, trunc_elim, trunc_intro};
use jex_core::lax::to_lax;
use jex_core::logic::check_logical;
use jex_core::parse::{Decl, DeclKind, DeriveRequest, Pos};
use jex_core::print::{
    derivation_to_string, expr_to_string, expr_to_string_in, judgment_to_string, kind_to_string,
    logical_judgment_to_string, logical_to_string, prop_to_string, Style,
};
use jex_core::reduce::{normalize, Step};
use jex_core::subst::replace;
use jex_core::syntax::{Context, Expr, JudgmentKind, Name, Prop};
use jex_core::typing::{check_against, replay};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Ok,
    Failed,
    FuelExhausted,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Failed => "failed",
            Status::FuelExhausted => "fuel-exhausted",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub pos: Pos,
    pub command: &'static str,
    pub status: Status,
    pub summary: String,
    /// Further output lines: trace steps, derivation trees.
    pub detail: Vec<String>,
    pub judgment: Option<String>,
    pub steps: Option<usize>,
    pub message: Option<String>,
}

impl Outcome {
    fn new(pos: Pos, command: &'static str, summary: String) -> Outcome {
        Outcome {
            pos,
            command,
            status: Status::Ok,
            summary,
            detail: Vec::new(),
            judgment: None,
            steps: None,
            message: None,
        }
    }

    fn fail(mut self, message: impl Into<String>) -> Outcome {
        self.status = Status::Failed;
        self.message = Some(message.into());
        self
    }

    pub fn render(&self) -> Vec<String> {
        let tag = match self.status {
            Status::Ok => "ok",
            Status::Failed => "FAIL",
            Status::FuelExhausted => "FUEL",
        };
        let mut lines = vec![format!("{tag:<5}{:<7}{}", self.pos.to_string(), self.summary)];
        if let Some(m) = &self.message {
            lines.push(format!("     {m}"));
        }
        lines.extend(self.detail.iter().map(|l| format!("     {l}")));
        lines
    }
}

pub struct Session {
    style: Style,
    fuel: usize,
    defs: BTreeMap<Name, Expr>,
    ctx: Context,
    trees: BTreeSet<Name>,
}

impl Session {
    pub fn new(style: Style, fuel: usize) -> Session {
        Session { style, fuel, defs: BTreeMap::new(), ctx: Context::new(), trees: BTreeSet::new() }
    }

    fn show(&self, e: &Expr) -> String {
        expr_to_string_in(e, &self.ctx.names(), self.style)
    }

    fn taken(&self, x: &Name) -> bool {
        self.defs.contains_key(x) || self.ctx.contains(x)
    }

    /// Inlines definitions. Every free name must be defined or assumed.
    fn expand(&self, e: &Expr) -> Result<Expr, String> {
        let mut out = e.clone();
        for x in e.free_vars() {
            match self.defs.get(&x) {
                Some(body) => out = replace(body, &x, &out),
                None if self.ctx.contains(&x) => {}
                None => return Err(format!("unknown name `{x}`")),
            }
        }
        Ok(out.freshen_binders(&self.ctx.names()))
    }

    pub fn run(&mut self, decl: &Decl) -> Outcome {
        let pos = decl.pos;
        let style = self.style;
        match &decl.kind {
            DeclKind::Def(x, e) => {
                let out = Outcome::new(pos, "def", format!("def {x} = {}", self.show(e)));
                if self.taken(x) {
                    return out.fail(format!("`{x}` is already defined"));
                }
                match self.expand(e) {
                    Ok(body) => {
                        self.defs.insert(x.clone(), body);
                        out
                    }
                    Err(m) => out.fail(m),
                }
            }
            DeclKind::Assume(x, p) => {
                let out = Outcome::new(pos, "assume", format!("assume {x} : {}", prop_to_string(p, style)));
                if self.taken(x) {
                    return out.fail(format!("`{x}` is already defined"));
                }
                self.ctx = self.ctx.extended(x.clone(), p.clone()).expect("name checked above");
                out
            }
            DeclKind::Check(e, kind, p) => {
                let summary =
                    format!("check {} {} {}", self.show(e), kind_to_string(*kind, style), prop_to_string(p, style));
                let mut out = Outcome::new(pos, "check", summary);
                let e = match self.expand(e) {
                    Ok(e) => e,
                    Err(m) => return out.fail(m),
                };
                match check_against(&self.ctx, &e, *kind, p) {
                    Ok(d) => {
                        out.judgment = Some(judgment_to_string(&d.conclusion, style));
                        out
                    }
                    Err(err) => out.fail(err.to_string()),
                }
            }
            DeclKind::Normalize(e) | DeclKind::Trace(e) => {
                let tracing = matches!(decl.kind, DeclKind::Trace(_));
                let command = if tracing { "trace" } else { "normalize" };
                let mut out = Outcome::new(pos, command, format!("{command} {}", self.show(e)));
                let e = match self.expand(e) {
                    Ok(e) => e,
                    Err(m) => return out.fail(m),
                };
                let (value, trace, exhausted) = match normalize(&e, self.fuel) {
                    Ok(n) => (n.value, n.trace, false),
                    Err(f) => {
                        let last = f.trace.last().map_or_else(|| e.clone(), |s| s.result.clone());
                        (last, f.trace, true)
                    }
                };
                out.steps = Some(trace.len());
                if tracing {
                    out.detail = trace_lines(&e, &trace, &self.ctx.names(), style);
                } else {
                    out.summary = format!("{} ==> {} ({})", out.summary, self.show(&value), plural(trace.len(), "step"));
                }
                if exhausted {
                    out.status = Status::FuelExhausted;
                    out.message = Some(format!("fuel exhausted after {}", plural(trace.len(), "step")));
                }
                out
            }
            DeclKind::Translate(p) => Outcome::new(
                pos,
                "translate",
                format!("translate {} ==> {}", prop_to_string(p, style), to_lax(p)),
            ),
            DeclKind::Derive(req) => {
                let mut out = Outcome::new(pos, "derive", format!("derive {}", describe(req, style)));
                let req = match self.expand_request(req) {
                    Ok(r) => r,
                    Err(m) => return out.fail(m),
                };
                match derive_lines(&req, &self.ctx, style) {
                    Ok(lines) => {
                        out.detail = lines;
                        out
                    }
                    Err(m) => out.fail(m),
                }
            }
            DeclKind::Proof(name, d) => {
                let mut out = Outcome::new(pos, "proof", format!("proof {name}"));
                if !self.trees.insert(name.clone()) {
                    return out.fail(format!("`{name}` is already defined"));
                }
                out.judgment = Some(logical_judgment_to_string(&d.conclusion, style));
                out.summary = format!("proof {name}: {}", out.judgment.as_deref().unwrap_or_default());
                let open = d.open_premises().len();
                if open > 0 {
                    out.summary.push_str(&format!(" ({})", plural(open, "open premise")));
                }
                match check_logical(d) {
                    Ok(()) => out,
                    Err(err) => out.fail(err.to_string()),
                }
            }
            DeclKind::Typing(name, d) => {
                let mut out = Outcome::new(pos, "typing", format!("typing {name}"));
                if !self.trees.insert(name.clone()) {
                    return out.fail(format!("`{name}` is already defined"));
                }
                out.judgment = Some(judgment_to_string(&d.conclusion, style));
                out.summary = format!("typing {name}: {}", out.judgment.as_deref().unwrap_or_default());
                match replay(d) {
                    Ok(()) => out,
                    Err(err) => out.fail(err.to_string()),
                }
            }
        }
    }

    fn expand_request(&self, req: &DeriveRequest) -> Result<DeriveRequest, String> {
        Ok(match req {
            DeriveRequest::TruncIntro(e) => DeriveRequest::TruncIntro(self.expand(e)?),
            DeriveRequest::TruncElim(e) => DeriveRequest::TruncElim(self.expand(e)?),
            other => other.clone(),
        })
    }
}

pub fn plural(n: usize, what: &str) -> String {
    if n == 1 {
        format!("1 {what}")
    } else {
        format!("{n} {what}s")
    }
}

/// The starting expression, then one line per step with its rule chain.
pub fn trace_lines(start: &Expr, trace: &[Step], scope: &BTreeSet<Name>, style: Style) -> Vec<String> {
    let mut lines = vec![format!("{:>3}  {}", 0, expr_to_string_in(start, scope, style))];
    for (i, s) in trace.iter().enumerate() {
        let tags: Vec<&str> = s.rules.iter().map(|r| r.tag()).collect();
        lines.push(format!("{:>3}  {}  [{}]", i + 1, expr_to_string_in(&s.result, scope, style), tags.join(" ")));
    }
    lines
}

fn describe(req: &DeriveRequest, style: Style) -> String {
    let p = |x: &Prop| match x {
        Prop::Atom(_) => prop_to_string(x, style),
        _ => format!("({})", prop_to_string(x, style)),
    };
    match req {
        DeriveRequest::TruncIntro(e) => format!("trunc-intro {}", expr_to_string(e, style)),
        DeriveRequest::TruncElim(e) => format!("trunc-elim {}", expr_to_string(e, style)),
        DeriveRequest::Lax(ax) => format!("lax axiom {}", prop_to_string(&ax.statement(), style)),
        DeriveRequest::Witness(w, a, b) if w.needs_codomain() => format!("prop-{w} {} {}", p(a), p(b)),
        DeriveRequest::Witness(w, a, _) => format!("prop-{w} {}", p(a)),
    }
}

/// Output of a builder: the witness, its type and its derivation.
pub fn derive_lines(req: &DeriveRequest, ctx: &Context, style: Style) -> Result<Vec<String>, String> {
    let mut lines = Vec::new();
    let mut computational = |e: &Expr, d: &jex_core::typing::Derivation| {
        lines.push(format!("term   {}", expr_to_string_in(e, &ctx.names(), style)));
        lines.push(format!("type   {} {}", prop_to_string(d.prop(), style), d.conclusion.kind));
        lines.extend(derivation_to_string(d, style).lines().map(String::from));
    };
    match req {
        DeriveRequest::TruncIntro(t) => {
            let (e, d) = trunc_intro(ctx, t).map_err(|e| e.to_string())?;
            computational(&e, &d);
        }
        DeriveRequest::TruncElim(f) => {
            let (e, d) = trunc_elim(ctx, f).map_err(|e| e.to_string())?;
            computational(&e, &d);
        }
        DeriveRequest::Lax(ax) => {
            let (e, d) = lax_axiom(ax);
            computational(&e, &d);
            lines.push("-- as a logical derivation".into());
            lines.extend(logical_to_string(&ax.tree(&[]), style).lines().map(String::from));
        }
        DeriveRequest::Witness(w, a, b) => {
            let d = proposition_witness(*w, &[], a, b);
            lines.extend(logical_to_string(&d, style).lines().map(String::from));
            for j in d.open_premises() {
                lines.push(format!("-- open premise: {}", logical_judgment_to_string(j, style)));
            }
        }
    }
    Ok(lines)
}

/// Kind keyword of a check line, used in counterexample programs.
pub fn kind_symbol(kind: JudgmentKind) -> &'static str {
    kind_to_string(kind, Style::ASCII)
}
