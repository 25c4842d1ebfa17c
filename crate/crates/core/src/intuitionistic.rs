//! Intuitionistic provability.
//!
//! Proof search runs in a contraction-free single-succedent calculus in the
//! style of G4ip, with the left implication rule split by the shape of the
//! antecedent. Propositional sequents are decided outright; when the search
//! fails, a Kripke countermodel is read off the subformula-restricted canonical
//! model. Quantifier rules that may repeat (`∀L`, `∃R` and the left rule for
//! `(∀x A) → B`, which keeps its principal formula) each spend one unit of a
//! per-branch budget, and the budget is deepened iteratively up to `bound`.
//!
//! Antecedents are sets. Axioms are accepted for any formula, not only atoms.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::formula::Formula::{self, *};
use crate::formula::{fresh_name, Term};
use crate::kripke::{self, KripkeModel, WorldId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Formula,
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ante: Vec<String> = self.antecedent.iter().map(|a| a.to_string()).collect();
        write!(f, "{} => {}", ante.join(", "), self.succedent)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IlRule {
    Id,
    BotL,
    AndR,
    OrR1,
    OrR2,
    ImpR,
    ForallR,
    ExistsR,
    AndL,
    OrL,
    ExistsL,
    ForallL,
    /// `Γ, A, A → B ⇒ G` from `Γ, A, B ⇒ G`.
    ImpMp,
    /// `Γ, ⊥ → B ⇒ G` from `Γ ⇒ G`.
    ImpBotL,
    ImpAndL,
    ImpOrL,
    ImpImpL,
    ImpExistsL,
    /// Keeps `(∀x A) → B` in the left premise.
    ImpForallL,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub sequent: Sequent,
    pub rule: IlRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<Formula>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<Term>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IntuitionisticOutcome {
    Proved { derivation: Derivation },
    Refuted { model: KripkeModel, world: WorldId },
    Unknown { bound: u32 },
}

impl IntuitionisticOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, IntuitionisticOutcome::Proved { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, IntuitionisticOutcome::Unknown { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            IntuitionisticOutcome::Proved { .. } => "Proved",
            IntuitionisticOutcome::Refuted { .. } => "Refuted",
            IntuitionisticOutcome::Unknown { .. } => "Unknown",
        }
    }
}

type Ctx = BTreeSet<Formula>;

enum Memo {
    Proved(Arc<Derivation>, u32),
    Failed(u32),
}

#[derive(Default)]
struct Search {
    memo: HashMap<(Ctx, Formula), Memo>,
    /// Set when some branch of the current subtree was cut by the budget.
    cut: bool,
}

fn sequent_of(ctx: &Ctx, goal: &Formula) -> Sequent {
    Sequent { antecedent: ctx.iter().cloned().collect(), succedent: goal.clone() }
}

fn names_of(ctx: &Ctx, goal: &Formula) -> BTreeSet<String> {
    let mut names = BTreeSet::new();
    for f in ctx.iter().chain(std::iter::once(goal)) {
        f.all_names(&mut names);
    }
    names
}

fn fresh_constant(ctx: &Ctx, goal: &Formula) -> Term {
    Term::Const(fresh_name("c", &names_of(ctx, goal)))
}

/// Ground terms of the sequent in first-occurrence order, or one fresh
/// constant when there are none.
fn instantiation_terms(ctx: &Ctx, goal: &Formula) -> Vec<Term> {
    let mut out = Vec::new();
    for f in ctx.iter().chain(std::iter::once(goal)) {
        f.collect_ground_terms(&mut Vec::new(), &mut out);
    }
    if out.is_empty() {
        out.push(fresh_constant(ctx, goal));
    }
    out
}

fn without(ctx: &Ctx, p: &Formula) -> Ctx {
    let mut c = ctx.clone();
    c.remove(p);
    c
}

fn with(mut ctx: Ctx, extra: impl IntoIterator<Item = Formula>) -> Ctx {
    ctx.extend(extra);
    ctx
}

/// `(∃x C) → B` becomes `∀y (C[y/x] → B)` with `y` not free in `B`.
fn exists_imp_to_forall(x: &str, c: &Formula, b: &Formula) -> Formula {
    if !b.free_vars().contains(x) {
        return Formula::forall(x, Formula::imp(c.clone(), b.clone()));
    }
    let mut taken = BTreeSet::new();
    c.all_names(&mut taken);
    b.all_names(&mut taken);
    let y = fresh_name(x, &taken);
    Formula::forall(y.clone(), Formula::imp(c.subst(x, &Term::Var(y)), b.clone()))
}

struct Step {
    rule: IlRule,
    principal: Option<Formula>,
    term: Option<Term>,
    premises: Vec<(Ctx, Formula)>,
}

impl Step {
    fn new(rule: IlRule, principal: &Formula, premises: Vec<(Ctx, Formula)>) -> Step {
        Step { rule, principal: Some(principal.clone()), term: None, premises }
    }
}

/// The first applicable invertible rule, if any.
fn invertible_step(ctx: &Ctx, goal: &Formula) -> Option<Step> {
    for p in ctx {
        let step = match p {
            And(a, b) => Step::new(IlRule::AndL, p, vec![(with(without(ctx, p), [(**a).clone(), (**b).clone()]), goal.clone())]),
            Imp(a, _) if **a == Bottom => Step::new(IlRule::ImpBotL, p, vec![(without(ctx, p), goal.clone())]),
            Imp(a, b) if ctx.contains(a) => {
                Step::new(IlRule::ImpMp, p, vec![(with(without(ctx, p), [(**b).clone()]), goal.clone())])
            }
            Imp(a, b) => match &**a {
                And(c, d) => {
                    let curried = Formula::imp((**c).clone(), Formula::imp((**d).clone(), (**b).clone()));
                    Step::new(IlRule::ImpAndL, p, vec![(with(without(ctx, p), [curried]), goal.clone())])
                }
                Or(c, d) => {
                    let split = [Formula::imp((**c).clone(), (**b).clone()), Formula::imp((**d).clone(), (**b).clone())];
                    Step::new(IlRule::ImpOrL, p, vec![(with(without(ctx, p), split), goal.clone())])
                }
                Exists(x, c) => {
                    let f = exists_imp_to_forall(x, c, b);
                    Step::new(IlRule::ImpExistsL, p, vec![(with(without(ctx, p), [f]), goal.clone())])
                }
                _ => continue,
            },
            Exists(x, a) => {
                let c = fresh_constant(ctx, goal);
                let inst = a.subst(x, &c);
                let mut step = Step::new(IlRule::ExistsL, p, vec![(with(without(ctx, p), [inst]), goal.clone())]);
                step.term = Some(c);
                step
            }
            _ => continue,
        };
        return Some(step);
    }
    match goal {
        Imp(a, b) => {
            return Some(Step::new(IlRule::ImpR, goal, vec![(with(ctx.clone(), [(**a).clone()]), (**b).clone())]));
        }
        Forall(x, a) => {
            let c = fresh_constant(ctx, goal);
            let mut step = Step::new(IlRule::ForallR, goal, vec![(ctx.clone(), a.subst(x, &c))]);
            step.term = Some(c);
            return Some(step);
        }
        _ => {}
    }
    for p in ctx {
        if let Or(a, b) = p {
            let rest = without(ctx, p);
            return Some(Step::new(
                IlRule::OrL,
                p,
                vec![(with(rest.clone(), [(**a).clone()]), goal.clone()), (with(rest, [(**b).clone()]), goal.clone())],
            ));
        }
    }
    if let And(a, b) = goal {
        return Some(Step::new(IlRule::AndR, goal, vec![(ctx.clone(), (**a).clone()), (ctx.clone(), (**b).clone())]));
    }
    None
}

fn has_budgeted_rule(ctx: &Ctx, goal: &Formula) -> bool {
    matches!(goal, Exists(..))
        || ctx.iter().any(|p| match p {
            Forall(..) => true,
            Imp(a, _) => matches!(**a, Forall(..)),
            _ => false,
        })
}

fn all_quantifier_free(ctx: &Ctx, goal: &Formula) -> bool {
    goal.is_quantifier_free() && ctx.iter().all(Formula::is_quantifier_free)
}

impl Search {
    fn prove(&mut self, ctx: &Ctx, goal: &Formula, budget: u32) -> Option<(Arc<Derivation>, u32)> {
        let key = (ctx.clone(), goal.clone());
        match self.memo.get(&key) {
            Some(Memo::Proved(d, cost)) if *cost <= budget => return Some((d.clone(), *cost)),
            Some(Memo::Failed(b)) if *b >= budget => {
                self.cut |= *b != u32::MAX;
                return None;
            }
            _ => {}
        }
        let outer_cut = std::mem::replace(&mut self.cut, false);
        let result = self.search(ctx, goal, budget);
        let cut_here = self.cut;
        self.cut = outer_cut || cut_here;
        // A failure no budget cut contributed to is final.
        let entry = match &result {
            Some((d, cost)) => Memo::Proved(d.clone(), *cost),
            None if !cut_here => Memo::Failed(u32::MAX),
            None => Memo::Failed(budget),
        };
        self.memo.insert(key, entry);
        result
    }

    fn leaf(ctx: &Ctx, goal: &Formula, rule: IlRule, principal: Formula) -> Option<(Arc<Derivation>, u32)> {
        let d = Derivation { sequent: sequent_of(ctx, goal), rule, principal: Some(principal), term: None, premises: vec![] };
        Some((Arc::new(d), 0))
    }

    /// Proves every premise; `costs[i]` is what premise `i` is charged on top of its own cost.
    fn apply(&mut self, ctx: &Ctx, goal: &Formula, step: Step, budget: u32, costs: &[u32]) -> Option<(Arc<Derivation>, u32)> {
        let mut premises = Vec::with_capacity(step.premises.len());
        let mut total = 0;
        for (i, (pctx, pgoal)) in step.premises.iter().enumerate() {
            let charge = costs.get(i).copied().unwrap_or(0);
            let Some(remaining) = budget.checked_sub(charge) else {
                self.cut = true;
                return None;
            };
            let (d, cost) = self.prove(pctx, pgoal, remaining)?;
            total = total.max(cost + charge);
            premises.push((*d).clone());
        }
        let d = Derivation { sequent: sequent_of(ctx, goal), rule: step.rule, principal: step.principal, term: step.term, premises };
        Some((Arc::new(d), total))
    }

    fn search(&mut self, ctx: &Ctx, goal: &Formula, budget: u32) -> Option<(Arc<Derivation>, u32)> {
        if ctx.contains(&Bottom) {
            return Self::leaf(ctx, goal, IlRule::BotL, Bottom);
        }
        if ctx.contains(goal) {
            return Self::leaf(ctx, goal, IlRule::Id, goal.clone());
        }
        if let Some(step) = invertible_step(ctx, goal) {
            return self.apply(ctx, goal, step, budget, &[]);
        }
        if let Or(a, b) = goal {
            for (rule, side) in [(IlRule::OrR1, a), (IlRule::OrR2, b)] {
                let step = Step::new(rule, goal, vec![(ctx.clone(), (**side).clone())]);
                if let Some(found) = self.apply(ctx, goal, step, budget, &[]) {
                    return Some(found);
                }
            }
        }
        for p in ctx {
            if let Imp(ante, b) = p {
                if let Imp(c, d) = &**ante {
                    let rest = without(ctx, p);
                    let left = (with(rest.clone(), [Formula::imp((**d).clone(), (**b).clone())]), (**ante).clone());
                    let right = (with(rest, [(**b).clone()]), goal.clone());
                    let _ = c;
                    let step = Step::new(IlRule::ImpImpL, p, vec![left, right]);
                    if let Some(found) = self.apply(ctx, goal, step, budget, &[]) {
                        return Some(found);
                    }
                }
            }
        }
        if budget == 0 {
            self.cut |= has_budgeted_rule(ctx, goal);
            return None;
        }
        let terms = instantiation_terms(ctx, goal);
        if let Exists(x, a) = goal {
            for t in &terms {
                let mut step = Step::new(IlRule::ExistsR, goal, vec![(ctx.clone(), a.subst(x, t))]);
                step.term = Some(t.clone());
                if let Some(found) = self.apply(ctx, goal, step, budget, &[1]) {
                    return Some(found);
                }
            }
        }
        for p in ctx {
            if let Forall(x, a) = p {
                for t in &terms {
                    let inst = a.subst(x, t);
                    if ctx.contains(&inst) {
                        continue;
                    }
                    let mut step = Step::new(IlRule::ForallL, p, vec![(with(ctx.clone(), [inst]), goal.clone())]);
                    step.term = Some(t.clone());
                    if let Some(found) = self.apply(ctx, goal, step, budget, &[1]) {
                        return Some(found);
                    }
                }
            }
        }
        for p in ctx {
            if let Imp(ante, b) = p {
                if let Forall(..) = &**ante {
                    let left = (ctx.clone(), (**ante).clone());
                    let right = (with(without(ctx, p), [(**b).clone()]), goal.clone());
                    let step = Step::new(IlRule::ImpForallL, p, vec![left, right]);
                    if let Some(found) = self.apply(ctx, goal, step, budget, &[1, 0]) {
                        return Some(found);
                    }
                }
            }
        }
        None
    }

    fn provable(&mut self, ctx: &Ctx, goal: &Formula) -> bool {
        self.prove(ctx, goal, 0).is_some()
    }
}

fn disjunction(items: &[Formula]) -> Formula {
    let mut it = items.iter().cloned();
    match it.next() {
        None => Bottom,
        Some(first) => it.fold(first, Formula::or),
    }
}

/// Extends `theory` to a theory that is closed under provability within
/// `universe`, prime, and proves none of `avoid`. Requires `theory ⊬ ⋁avoid`.
fn prime_extension(search: &mut Search, universe: &[Formula], theory: Ctx, avoid: Vec<Formula>) -> Ctx {
    let mut theory = theory;
    let mut avoid = avoid;
    for phi in universe {
        if theory.contains(phi) || avoid.contains(phi) {
            continue;
        }
        let extended = with(theory.clone(), [phi.clone()]);
        if search.provable(&extended, &disjunction(&avoid)) {
            avoid.push(phi.clone());
        } else {
            theory = extended;
        }
    }
    theory
}

/// Countermodel for an unprovable quantifier-free sequent: worlds are prime
/// theories over the subformulas, ordered by inclusion.
fn canonical_countermodel(search: &mut Search, gamma: &[Formula], goal: &Formula) -> (KripkeModel, WorldId) {
    let mut universe = Vec::new();
    for f in gamma.iter().chain(std::iter::once(goal)) {
        for s in f.subformulas() {
            if !universe.contains(&s) {
                universe.push(s);
            }
        }
    }
    let implications: Vec<(Formula, Formula, Formula)> = universe
        .iter()
        .filter_map(|f| match f {
            Imp(a, b) => Some((f.clone(), (**a).clone(), (**b).clone())),
            _ => None,
        })
        .collect();
    let root = prime_extension(search, &universe, gamma.iter().cloned().collect(), vec![goal.clone()]);
    let mut worlds = vec![root.clone()];
    let mut queue = VecDeque::from([root]);
    while let Some(theory) = queue.pop_front() {
        for (imp, a, b) in &implications {
            if theory.contains(imp) {
                continue;
            }
            let next = prime_extension(search, &universe, with(theory.clone(), [a.clone()]), vec![b.clone()]);
            if !worlds.contains(&next) {
                worlds.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    let mut names = BTreeSet::new();
    for f in &universe {
        names.extend(f.ground_terms().iter().map(|t| t.name().to_string()));
    }
    let mut model = KripkeModel::default();
    for (i, t) in worlds.iter().enumerate() {
        model.worlds.push(i);
        model.domain.insert(i, names.clone());
        for (j, u) in worlds.iter().enumerate() {
            if t.is_subset(u) {
                model.order.insert((i, j));
            }
        }
        for f in t {
            if let Atom(p, args) = f {
                let inst = kripke::AtomInstance::new(p.clone(), args.iter().map(|a| a.name().to_string()).collect());
                model.valuation.insert((i, inst));
            }
        }
    }
    (model, 0)
}

/// Small frames are tried first so the common countermodels stay minimal.
const SMALL_SEARCH_WORLDS: usize = 3;
const SMALL_SEARCH_MAX_ATOMS: usize = 6;

fn refute(search: &mut Search, gamma: &[Formula], goal: &Formula) -> (KripkeModel, WorldId) {
    let mut atoms = BTreeSet::new();
    for f in gamma.iter().chain(std::iter::once(goal)) {
        collect_atom_formulas(f, &mut atoms);
    }
    if atoms.len() <= SMALL_SEARCH_MAX_ATOMS {
        if let Ok(Some(found)) = kripke::find_sequent_countermodel(gamma, goal, SMALL_SEARCH_WORLDS) {
            return found;
        }
    }
    canonical_countermodel(search, gamma, goal)
}

fn collect_atom_formulas(f: &Formula, out: &mut BTreeSet<Formula>) {
    match f {
        Bottom => {}
        Atom(..) => {
            out.insert(f.clone());
        }
        And(a, b) | Or(a, b) | Imp(a, b) => {
            collect_atom_formulas(a, out);
            collect_atom_formulas(b, out);
        }
        Forall(_, a) | Exists(_, a) => collect_atom_formulas(a, out),
    }
}

/// `Γ ⊢ a` in intuitionistic logic. Quantifier-free sequents get an exact
/// answer with a derivation or a countermodel; otherwise the answer is a
/// derivation found within `bound`, or `Unknown`.
pub fn prove_il(gamma: &[Formula], a: &Formula, bound: u32) -> IntuitionisticOutcome {
    let ctx: Ctx = gamma.iter().cloned().collect();
    let mut search = Search::default();
    if all_quantifier_free(&ctx, a) {
        return match search.prove(&ctx, a, 0) {
            Some((d, _)) => IntuitionisticOutcome::Proved { derivation: (*d).clone() },
            None => {
                let (model, world) = refute(&mut search, gamma, a);
                IntuitionisticOutcome::Refuted { model, world }
            }
        };
    }
    for budget in 0..=bound {
        search.cut = false;
        if let Some((d, _)) = search.prove(&ctx, a, budget) {
            return IntuitionisticOutcome::Proved { derivation: (*d).clone() };
        }
        if !search.cut {
            // Deeper levels would explore the same space.
            break;
        }
    }
    IntuitionisticOutcome::Unknown { bound }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `a → b` fails.
    LeftToRight,
    /// `b → a` fails.
    RightToLeft,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EquivOutcome {
    Equivalent { forward: Derivation, backward: Derivation },
    NotEquivalent {
        direction: Direction,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        countermodel: Option<(KripkeModel, WorldId)>,
    },
    Unknown { bound: u32 },
}

impl EquivOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            EquivOutcome::Equivalent { .. } => "Equivalent",
            EquivOutcome::NotEquivalent { .. } => "NotEquivalent",
            EquivOutcome::Unknown { .. } => "Unknown",
        }
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivOutcome::Equivalent { .. })
    }
}

/// Both implications, each as a closed goal with no hypotheses.
pub fn il_equiv(a: &Formula, b: &Formula, bound: u32) -> EquivOutcome {
    let forward = prove_il(&[], &Formula::imp(a.clone(), b.clone()), bound);
    let backward = prove_il(&[], &Formula::imp(b.clone(), a.clone()), bound);
    match (forward, backward) {
        (IntuitionisticOutcome::Proved { derivation: f }, IntuitionisticOutcome::Proved { derivation: g }) => {
            EquivOutcome::Equivalent { forward: f, backward: g }
        }
        (IntuitionisticOutcome::Refuted { model, world }, _) => {
            EquivOutcome::NotEquivalent { direction: Direction::LeftToRight, countermodel: Some((model, world)) }
        }
        (_, IntuitionisticOutcome::Refuted { model, world }) => {
            EquivOutcome::NotEquivalent { direction: Direction::RightToLeft, countermodel: Some((model, world)) }
        }
        _ => EquivOutcome::Unknown { bound },
    }
}

type NormCtx = BTreeSet<Formula>;

fn norm_ctx(items: &[Formula]) -> NormCtx {
    items.iter().map(Formula::alpha_normal).collect()
}

/// Checks every node of `d` against its rule, independently of the search.
pub fn check_derivation(d: &Derivation) -> bool {
    let ctx = norm_ctx(&d.sequent.antecedent);
    let goal = d.sequent.succedent.alpha_normal();
    let Some(expected) = expected_premises(d, &ctx, &goal) else { return false };
    if expected.len() != d.premises.len() {
        return false;
    }
    expected.iter().zip(&d.premises).all(|((pctx, pgoal), prem)| {
        norm_ctx(&prem.sequent.antecedent) == *pctx
            && prem.sequent.succedent.alpha_normal() == *pgoal
            && check_derivation(prem)
    })
}

fn expected_premises(d: &Derivation, ctx: &NormCtx, goal: &Formula) -> Option<Vec<(NormCtx, Formula)>> {
    let principal = d.principal.as_ref().map(Formula::alpha_normal);
    let n = |f: &Formula| f.alpha_normal();
    let left = |p: &Option<Formula>| -> Option<Formula> { p.clone().filter(|p| ctx.contains(p)) };
    let right = |p: &Option<Formula>| -> Option<Formula> { p.clone().filter(|p| p == goal) };
    let minus = |p: &Formula| without(ctx, p);
    let fresh_eigen = |t: &Option<Term>| -> Option<Term> {
        let Some(Term::Const(c)) = t else { return None };
        (!names_of(ctx, goal).contains(c)).then(|| Term::Const(c.clone()))
    };
    Some(match d.rule {
        IlRule::Id => {
            right(&principal)?;
            if !ctx.contains(goal) {
                return None;
            }
            vec![]
        }
        IlRule::BotL => {
            if principal.as_ref() != Some(&Bottom) || !ctx.contains(&Bottom) {
                return None;
            }
            vec![]
        }
        IlRule::AndR => match &right(&principal)? {
            And(a, b) => vec![(ctx.clone(), n(a)), (ctx.clone(), n(b))],
            _ => return None,
        },
        IlRule::OrR1 | IlRule::OrR2 => match &right(&principal)? {
            Or(a, b) => vec![(ctx.clone(), n(if d.rule == IlRule::OrR1 { a } else { b }))],
            _ => return None,
        },
        IlRule::ImpR => match &right(&principal)? {
            Imp(a, b) => vec![(with(ctx.clone(), [n(a)]), n(b))],
            _ => return None,
        },
        IlRule::ForallR => match &right(&principal)? {
            Forall(x, a) => vec![(ctx.clone(), n(&a.subst(x, &fresh_eigen(&d.term)?)))],
            _ => return None,
        },
        IlRule::ExistsR => match &right(&principal)? {
            Exists(x, a) => vec![(ctx.clone(), n(&a.subst(x, d.term.as_ref()?)))],
            _ => return None,
        },
        IlRule::AndL => match &left(&principal)? {
            p @ And(a, b) => vec![(with(minus(p), [n(a), n(b)]), goal.clone())],
            _ => return None,
        },
        IlRule::OrL => match &left(&principal)? {
            p @ Or(a, b) => vec![(with(minus(p), [n(a)]), goal.clone()), (with(minus(p), [n(b)]), goal.clone())],
            _ => return None,
        },
        IlRule::ExistsL => match &left(&principal)? {
            p @ Exists(x, a) => vec![(with(minus(p), [n(&a.subst(x, &fresh_eigen(&d.term)?))]), goal.clone())],
            _ => return None,
        },
        IlRule::ForallL => match &left(&principal)? {
            Forall(x, a) => vec![(with(ctx.clone(), [n(&a.subst(x, d.term.as_ref()?))]), goal.clone())],
            _ => return None,
        },
        IlRule::ImpMp => match &left(&principal)? {
            p @ Imp(a, b) if ctx.contains(&**a) => vec![(with(minus(p), [n(b)]), goal.clone())],
            _ => return None,
        },
        IlRule::ImpBotL => match &left(&principal)? {
            p @ Imp(a, _) if **a == Bottom => vec![(minus(p), goal.clone())],
            _ => return None,
        },
        IlRule::ImpAndL => match &left(&principal)? {
            p @ Imp(ante, b) => match &**ante {
                And(c, e) => {
                    let curried = Formula::imp((**c).clone(), Formula::imp((**e).clone(), (**b).clone()));
                    vec![(with(minus(p), [n(&curried)]), goal.clone())]
                }
                _ => return None,
            },
            _ => return None,
        },
        IlRule::ImpOrL => match &left(&principal)? {
            p @ Imp(ante, b) => match &**ante {
                Or(c, e) => {
                    let parts = [n(&Formula::imp((**c).clone(), (**b).clone())), n(&Formula::imp((**e).clone(), (**b).clone()))];
                    vec![(with(minus(p), parts), goal.clone())]
                }
                _ => return None,
            },
            _ => return None,
        },
        IlRule::ImpImpL => match &left(&principal)? {
            p @ Imp(ante, b) => match &**ante {
                Imp(_, e) => vec![
                    (with(minus(p), [n(&Formula::imp((**e).clone(), (**b).clone()))]), n(ante)),
                    (with(minus(p), [n(b)]), goal.clone()),
                ],
                _ => return None,
            },
            _ => return None,
        },
        IlRule::ImpExistsL => match &left(&principal)? {
            p @ Imp(ante, b) => match &**ante {
                Exists(x, c) => vec![(with(minus(p), [n(&exists_imp_to_forall(x, c, b))]), goal.clone())],
                _ => return None,
            },
            _ => return None,
        },
        IlRule::ImpForallL => match &left(&principal)? {
            p @ Imp(ante, b) => match &**ante {
                Forall(..) => vec![(ctx.clone(), n(ante)), (with(minus(p), [n(b)]), goal.clone())],
                _ => return None,
            },
            _ => return None,
        },
    })
}

/// Re-checks an outcome's certificate: derivations by rule, countermodels by
/// validation plus forcing.
pub fn check_outcome(gamma: &[Formula], goal: &Formula, outcome: &IntuitionisticOutcome) -> bool {
    match outcome {
        IntuitionisticOutcome::Proved { derivation } => {
            norm_ctx(&derivation.sequent.antecedent) == norm_ctx(gamma)
                && derivation.sequent.succedent.alpha_eq(goal)
                && check_derivation(derivation)
        }
        IntuitionisticOutcome::Refuted { model, world } => kripke::refutes(model, *world, gamma, goal),
        IntuitionisticOutcome::Unknown { .. } => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::default_f;
    use crate::kripke::force_closed;
    use crate::syntax::parse;
    use crate::translate::kolmogorov;

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    fn proved(text: &str) -> Derivation {
        match prove_il(&[], &f(text), 4) {
            IntuitionisticOutcome::Proved { derivation } => derivation,
            other => panic!("{text}: expected Proved, got {}", other.label()),
        }
    }

    #[test]
    fn excluded_middle_is_refuted_by_two_chain() {
        let goal = f("P \\/ ~P");
        let IntuitionisticOutcome::Refuted { model, world } = prove_il(&[], &goal, 1) else {
            panic!("LEM must be refuted")
        };
        assert_eq!(model.worlds.len(), 2);
        assert_eq!(model.hasse_edges(), vec![(0, 1)]);
        assert!(!force_closed(&model, world, &goal).unwrap());
    }

    #[test]
    fn double_negated_excluded_middle_is_proved() {
        let d = proved("~~(P \\/ ~P)");
        assert!(check_derivation(&d));
    }

    #[test]
    fn kolmogorov_peirce_is_proved() {
        let k = kolmogorov(&f("((P -> Q) -> P) -> P"));
        let IntuitionisticOutcome::Proved { derivation } = prove_il(&[], &k, 1) else { panic!() };
        assert!(check_derivation(&derivation));
    }

    #[test]
    fn negated_f_is_unknown_at_bound_ten() {
        let not_f = Formula::not(default_f());
        assert_eq!(prove_il(&[], &not_f, 10), IntuitionisticOutcome::Unknown { bound: 10 });
    }

    #[test]
    fn swapped_premises_are_rejected() {
        let mut d = proved("((P -> Q) -> R) -> (Q -> R)");
        assert!(check_derivation(&d));
        fn swap(node: &mut Derivation) -> bool {
            if node.rule == IlRule::ImpImpL {
                node.premises.swap(0, 1);
                return true;
            }
            node.premises.iter_mut().any(swap)
        }
        assert!(swap(&mut d), "derivation uses imp_imp_l");
        assert!(!check_derivation(&d));
    }

    #[test]
    fn eigenvariable_violation_is_rejected() {
        // P('c) => forall x. P(x) is not derivable; a forall_r with eigenconstant 'c would "prove" it.
        let d = Derivation {
            sequent: Sequent { antecedent: vec![f("P('c)")], succedent: f("forall x. P(x)") },
            rule: IlRule::ForallR,
            principal: Some(f("forall x. P(x)")),
            term: Some(Term::Const("c".into())),
            premises: vec![Derivation {
                sequent: Sequent { antecedent: vec![f("P('c)")], succedent: f("P('c)") },
                rule: IlRule::Id,
                principal: Some(f("P('c)")),
                term: None,
                premises: vec![],
            }],
        };
        assert!(!check_derivation(&d));
        let mut fresh = d.clone();
        fresh.term = Some(Term::Const("d".into()));
        assert!(!check_derivation(&fresh), "premise no longer matches the instance");
    }

    #[test]
    fn equivalence_examples() {
        let a = f("P /\\ Q -> R");
        assert!(il_equiv(&a, &a, 1).is_equivalent());
        match il_equiv(&f("P \\/ ~P"), &f("~~(P \\/ ~P)"), 1) {
            EquivOutcome::NotEquivalent { direction, countermodel: Some((m, w)) } => {
                assert_eq!(direction, Direction::RightToLeft);
                assert!(!force_closed(&m, w, &f("~~(P \\/ ~P) -> P \\/ ~P")).unwrap());
            }
            other => panic!("expected NotEquivalent, got {}", other.label()),
        }
    }

    #[test]
    fn m_bot_witness_is_equivalent_to_negated_f() {
        let fx = default_f();
        let witness = Formula::imp(Formula::or(Formula::not_not(Bottom), fx.clone()), Formula::not_not(Bottom));
        let EquivOutcome::Equivalent { forward, backward } = il_equiv(&witness, &Formula::not(fx), 10) else {
            panic!("reduction should be provable")
        };
        assert!(check_derivation(&forward) && check_derivation(&backward));
    }

    #[test]
    fn first_order_theorems() {
        for text in [
            "forall x. P(x) -> exists x. P(x)",
            "(exists x. P(x) -> Q) -> forall x. (P(x) -> Q)",
            "~~forall x. ~~P(x) -> forall x. ~~P(x)",
            "exists x. ~P(x) -> ~forall x. P(x)",
            "forall x. (P(x) /\\ Q(x)) -> forall x. P(x) /\\ forall x. Q(x)",
            "~exists x. P(x) <-> forall x. ~P(x)",
        ] {
            let d = proved(text);
            assert!(check_derivation(&d), "{text}");
            assert!(check_outcome(&[], &f(text), &IntuitionisticOutcome::Proved { derivation: d }));
        }
    }

    #[test]
    fn first_order_non_theorems_stay_unknown() {
        for text in ["~forall x. P(x) -> exists x. ~P(x)", "forall x. ~~P(x) -> ~~forall x. P(x)"] {
            assert!(prove_il(&[], &f(text), 5).is_unknown(), "{text}");
        }
    }

    #[test]
    fn hypotheses_are_antecedents() {
        let out = prove_il(&[f("P"), f("P -> Q")], &f("Q"), 1);
        assert!(check_outcome(&[f("P"), f("P -> Q")], &f("Q"), &out));
        assert!(out.is_proved());
        let refuted = prove_il(&[f("P -> Q")], &f("Q"), 1);
        assert!(matches!(refuted, IntuitionisticOutcome::Refuted { .. }));
        assert!(check_outcome(&[f("P -> Q")], &f("Q"), &refuted));
    }

    #[test]
    fn canonical_countermodel_handles_larger_formulas() {
        let goal = f("(A -> B \\/ C) -> (A -> B) \\/ (A -> C) \\/ (D \\/ ~D) \\/ (E \\/ ~E)");
        let mut search = Search::default();
        assert!(!search.provable(&Ctx::new(), &goal));
        let (m, w) = canonical_countermodel(&mut search, &[], &goal);
        assert!(kripke::refutes(&m, w, &[], &goal));
    }

    #[test]
    fn derivation_json_round_trip() {
        let d = proved("exists x. ~P(x) -> ~forall x. P(x)");
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<Derivation>(&json).unwrap(), d);
    }
}
