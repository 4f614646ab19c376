//! Random well-typed expressions.
//!
//! Generation is type-directed: pick a goal proposition, then build an
//! expression for it by running the typing rules backwards. A goal is only
//! ever requested when it is reachable within the remaining depth budget,
//! so generation never backtracks.

use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{fresh, Context, Expr, ExprShape, JudgmentKind, Name, Prop};

/// Relative weight of each expression constructor.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Weights {
    pub var: u32,
    pub lam: u32,
    pub ap: u32,
    pub boxed: u32,
    pub let_box: u32,
    pub lam_j: u32,
    pub ap_j: u32,
    pub box_j: u32,
    pub let_box_j: u32,
}

impl Weights {
    pub const UNIFORM: Weights = Weights {
        var: 1,
        lam: 1,
        ap: 1,
        boxed: 1,
        let_box: 1,
        lam_j: 1,
        ap_j: 1,
        box_j: 1,
        let_box_j: 1,
    };

    /// Only terms and let-forms: no `\j`, `@j` or `[_]j`.
    pub const TERMS_AND_LETS: Weights = Weights { lam_j: 0, ap_j: 0, box_j: 0, ..Weights::UNIFORM };

    fn of(&self, shape: ExprShape) -> u32 {
        match shape {
            ExprShape::Var => self.var,
            ExprShape::Lam => self.lam,
            ExprShape::Ap => self.ap,
            ExprShape::Box => self.boxed,
            ExprShape::LetBox => self.let_box,
            ExprShape::LamJ => self.lam_j,
            ExprShape::ApJ => self.ap_j,
            ExprShape::BoxJ => self.box_j,
            ExprShape::LetBoxJ => self.let_box_j,
        }
    }
}

impl Default for Weights {
    fn default() -> Weights {
        Weights::UNIFORM
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenConfig {
    /// Upper bound on [`Expr::depth`] of every generated expression.
    pub max_depth: usize,
    pub seed: u64,
    pub weights: Weights,
    pub atom_pool: Vec<Name>,
    /// Depth bound for goal propositions and hypothesis types.
    pub max_prop_depth: usize,
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> GenConfig {
        GenConfig { seed, ..GenConfig::default() }
    }
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            max_depth: 12,
            seed: 0,
            weights: Weights::UNIFORM,
            atom_pool: ["p", "q", "r"].into_iter().map(Name::from).collect(),
            max_prop_depth: 3,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sample {
    pub ctx: Context,
    pub expr: Expr,
    pub kind: JudgmentKind,
    pub prop: Prop,
}

/// Smallest expression depth at which `goal` can be built from `hyps` by
/// hypotheses and introductions alone, if it can be built that way at all.
pub fn min_depth(hyps: &[Prop], goal: &Prop) -> Option<usize> {
    if hyps.contains(goal) {
        return Some(1);
    }
    match goal {
        Prop::Atom(_) => None,
        Prop::Arrow(dom, cod) => {
            let mut extended = hyps.to_vec();
            extended.push((**dom).clone());
            min_depth(&extended, cod).map(|d| d + 1)
        }
        Prop::Exists(body) => min_depth(hyps, body).map(|d| d + 1),
    }
}

fn fits(hyps: &[Prop], goal: &Prop, budget: usize) -> bool {
    min_depth(hyps, goal).is_some_and(|d| d <= budget)
}

fn with_hyp(hyps: &[Prop], p: &Prop) -> Vec<Prop> {
    let mut v = hyps.to_vec();
    v.push(p.clone());
    v
}

pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

/// Context plus the names already taken anywhere in the sample.
struct Scope {
    ctx: Vec<(Name, Prop)>,
    used: BTreeSet<Name>,
}

impl Scope {
    fn hyps(&self) -> Vec<Prop> {
        self.ctx.iter().map(|(_, p)| p.clone()).collect()
    }

    fn bind(&mut self, hint: &str, p: &Prop) -> Name {
        let x = fresh(&self.used, &Name::from(hint));
        self.used.insert(x.clone());
        self.ctx.push((x.clone(), p.clone()));
        x
    }

    fn unbind(&mut self) {
        self.ctx.pop();
    }
}

/// A chosen constructor together with the proposition it needs to pick in
/// advance (the domain of an application or the body of a let scrutinee).
enum Plan {
    Var(Vec<Name>),
    Lam,
    Box,
    Ap(Prop),
    LamJ,
    BoxJ,
    ApJ(Prop),
    LetBox(Prop),
    LetBoxJ(Prop),
}

impl Plan {
    fn shape(&self) -> ExprShape {
        match self {
            Plan::Var(_) => ExprShape::Var,
            Plan::Lam => ExprShape::Lam,
            Plan::Box => ExprShape::Box,
            Plan::Ap(_) => ExprShape::Ap,
            Plan::LamJ => ExprShape::LamJ,
            Plan::BoxJ => ExprShape::BoxJ,
            Plan::ApJ(_) => ExprShape::ApJ,
            Plan::LetBox(_) => ExprShape::LetBox,
            Plan::LetBoxJ(_) => ExprShape::LetBoxJ,
        }
    }
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Generator {
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Generator { cfg, rng }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    pub fn prop(&mut self, depth: usize) -> Prop {
        if depth <= 1 || self.rng.gen_bool(0.35) {
            let i = self.rng.gen_range(0..self.cfg.atom_pool.len());
            return Prop::Atom(self.cfg.atom_pool[i].clone());
        }
        if self.rng.gen_bool(0.6) {
            let dom = self.prop(depth - 1);
            Prop::arrow(dom, self.prop(depth - 1))
        } else {
            Prop::exists(self.prop(depth - 1))
        }
    }

    /// The next sample: half of them closed, the rest under one to three
    /// hypotheses.
    pub fn sample(&mut self, kind: JudgmentKind) -> Sample {
        let mut scope = Scope { ctx: Vec::new(), used: BTreeSet::new() };
        if self.rng.gen_bool(0.5) {
            let n = self.rng.gen_range(1..=3);
            for hint in ["u", "v", "w"].into_iter().take(n) {
                let p = self.prop(self.cfg.max_prop_depth.min(2));
                scope.bind(hint, &p);
            }
        }
        let goal = self.goal_for(&scope.hyps());
        let budget = self.cfg.max_depth.max(2);
        let expr = self.build(&mut scope, &goal, kind, budget);
        let ctx = Context::from_pairs(scope.ctx).expect("generator binds distinct names");
        Sample { ctx, expr, kind, prop: goal }
    }

    /// A random goal reachable from `ctx` within `max_depth`, or `a -> a`
    /// when the search gives up (which needs depth two).
    pub fn goal(&mut self, ctx: &Context) -> Prop {
        self.goal_for(&ctx.props())
    }

    fn goal_for(&mut self, hyps: &[Prop]) -> Prop {
        let budget = self.cfg.max_depth;
        for _ in 0..64 {
            let g = self.prop(self.cfg.max_prop_depth);
            if fits(hyps, &g, budget) {
                return g;
            }
        }
        let a = self.prop(1);
        Prop::arrow(a.clone(), a)
    }

    /// An expression with `ctx ⊢ e : goal` (or `∴`), if `goal` is reachable
    /// within `max_depth`. Fresh binders avoid every name in `ctx`.
    pub fn expr_for(&mut self, ctx: &Context, goal: &Prop, kind: JudgmentKind) -> Option<Expr> {
        let mut scope = Scope { ctx: ctx.iter().cloned().collect(), used: ctx.names() };
        if !fits(&scope.hyps(), goal, self.cfg.max_depth) {
            return None;
        }
        Some(self.build(&mut scope, goal, kind, self.cfg.max_depth))
    }

    /// Picks an auxiliary proposition `a` for which `ok(a)` holds, trying
    /// hypothesis-derived candidates first half of the time.
    fn pick_aux(&mut self, from_hyps: Vec<Prop>, ok: impl Fn(&Prop) -> bool) -> Option<Prop> {
        let from_hyps: Vec<Prop> = from_hyps.into_iter().filter(|a| ok(a)).collect();
        if !from_hyps.is_empty() && self.rng.gen_bool(0.5) {
            let i = self.rng.gen_range(0..from_hyps.len());
            return Some(from_hyps[i].clone());
        }
        for _ in 0..4 {
            let a = self.prop(self.cfg.max_prop_depth.min(2));
            if ok(&a) {
                return Some(a);
            }
        }
        None
    }

    fn plans(&mut self, scope: &Scope, goal: &Prop, kind: JudgmentKind, budget: usize) -> Vec<Plan> {
        let hyps = scope.hyps();
        let inner = budget.saturating_sub(1);
        let mut plans = Vec::new();

        let vars: Vec<Name> = scope.ctx.iter().filter(|(_, p)| p == goal).map(|(x, _)| x.clone()).collect();
        if !vars.is_empty() {
            plans.push(Plan::Var(vars));
        }
        if budget < 2 {
            return plans;
        }
        let irrelevant = kind == JudgmentKind::Irrelevant;
        match goal {
            Prop::Arrow(dom, cod) if fits(&with_hyp(&hyps, dom), cod, inner) => {
                plans.push(Plan::Lam);
                if irrelevant {
                    plans.push(Plan::LamJ);
                }
            }
            Prop::Exists(body) if fits(&hyps, body, inner) => {
                plans.push(Plan::Box);
                if irrelevant {
                    plans.push(Plan::BoxJ);
                }
            }
            _ => {}
        }

        // Application: a head of `a -> goal` and an argument of `a`.
        let heads: Vec<Prop> = hyps
            .iter()
            .filter_map(|h| h.as_arrow().filter(|(_, c)| *c == goal).map(|(d, _)| d.clone()))
            .collect();
        let applicable = |a: &Prop| fits(&hyps, a, inner) && fits(&hyps, &Prop::arrow(a.clone(), goal.clone()), inner);
        if let Some(a) = self.pick_aux(heads.clone(), applicable) {
            plans.push(Plan::Ap(a));
        }
        if irrelevant {
            if let Some(a) = self.pick_aux(heads, applicable) {
                plans.push(Plan::ApJ(a));
            }
            // Let: a scrutinee of `Ex a` and a body of `goal` under `a`.
            let bodies: Vec<Prop> = hyps.iter().filter_map(|h| h.as_exists().cloned()).collect();
            let openable =
                |a: &Prop| fits(&hyps, &Prop::exists(a.clone()), inner) && fits(&with_hyp(&hyps, a), goal, inner);
            if let Some(a) = self.pick_aux(bodies.clone(), openable) {
                plans.push(Plan::LetBox(a));
            }
            if let Some(a) = self.pick_aux(bodies, openable) {
                plans.push(Plan::LetBoxJ(a));
            }
        }
        plans
    }

    fn choose(&mut self, plans: Vec<Plan>) -> Plan {
        let mut weights: Vec<u32> = plans.iter().map(|p| self.cfg.weights.of(p.shape())).collect();
        if weights.iter().all(|&w| w == 0) {
            weights = vec![1; plans.len()];
        }
        let dist = WeightedIndex::new(&weights).expect("at least one positive weight");
        plans.into_iter().nth(dist.sample(&mut self.rng)).expect("index in range")
    }

    fn build(&mut self, scope: &mut Scope, goal: &Prop, kind: JudgmentKind, budget: usize) -> Expr {
        use JudgmentKind::{Irrelevant, Relevant};
        let plans = self.plans(scope, goal, kind, budget);
        assert!(!plans.is_empty(), "goal `{goal}` requested beyond its depth budget");
        let inner = budget - 1;
        let flavour = |j: bool| if j { Irrelevant } else { Relevant };
        match self.choose(plans) {
            Plan::Var(xs) => {
                let i = self.rng.gen_range(0..xs.len());
                Expr::Var(xs[i].clone())
            }
            plan @ (Plan::Lam | Plan::LamJ) => {
                let j = matches!(plan, Plan::LamJ);
                let (dom, cod) = goal.as_arrow().expect("arrow goal");
                let (dom, cod) = (dom.clone(), cod.clone());
                let x = scope.bind(if j { "y" } else { "x" }, &dom);
                let body = self.build(scope, &cod, flavour(j), inner);
                scope.unbind();
                if j {
                    Expr::lam_j(x, dom, body)
                } else {
                    Expr::lam(x, dom, body)
                }
            }
            plan @ (Plan::Box | Plan::BoxJ) => {
                let body_prop = goal.as_exists().expect("exists goal").clone();
                let body = self.build(scope, &body_prop, Irrelevant, inner);
                if matches!(plan, Plan::BoxJ) {
                    Expr::boxed_j(body)
                } else {
                    Expr::boxed(body)
                }
            }
            plan @ (Plan::Ap(_) | Plan::ApJ(_)) => {
                let j = matches!(plan, Plan::ApJ(_));
                let (Plan::Ap(a) | Plan::ApJ(a)) = plan else { unreachable!() };
                let head = self.build(scope, &Prop::arrow(a.clone(), goal.clone()), flavour(j), inner);
                let arg = self.build(scope, &a, Relevant, inner);
                if j {
                    Expr::ap_j(head, arg)
                } else {
                    Expr::ap(head, arg)
                }
            }
            plan @ (Plan::LetBox(_) | Plan::LetBoxJ(_)) => {
                let j = matches!(plan, Plan::LetBoxJ(_));
                let (Plan::LetBox(a) | Plan::LetBoxJ(a)) = plan else { unreachable!() };
                let scrutinee = self.build(scope, &Prop::exists(a.clone()), flavour(j), inner);
                let x = scope.bind("z", &a);
                let body = self.build(scope, goal, Irrelevant, inner);
                scope.unbind();
                if j {
                    Expr::let_box_j(x, scrutinee, body)
                } else {
                    Expr::let_box(x, scrutinee, body)
                }
            }
        }
    }
}

/// The stream of samples for one configuration.
pub fn generate_well_typed(cfg: GenConfig, kind: JudgmentKind) -> impl Iterator<Item = Sample> {
    let mut g = Generator::new(cfg);
    std::iter::repeat_with(move || g.sample(kind))
}
