//! Classical provability by signed ground tableaux.
//!
//! Propositional input always terminates with a closed tableau or a saturated
//! open branch. With quantifiers, γ-instantiations are drawn fairly, oldest
//! first, in rounds: an instantiation made possible by a round-`k` step (a new
//! γ-formula or a new constant) belongs to round `k + 1`, and `bound` caps the
//! round. Fresh constants are numbered sequentially, so the search is
//! deterministic.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::formula::Formula::{self, *};
use crate::formula::{fresh_name, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    T,
    F,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signed {
    pub sign: Sign,
    pub formula: Formula,
}

impl Signed {
    pub fn t(formula: Formula) -> Self {
        Signed { sign: Sign::T, formula }
    }

    pub fn f(formula: Formula) -> Self {
        Signed { sign: Sign::F, formula }
    }

    fn normal(&self) -> (Sign, Formula) {
        (self.sign, self.formula.alpha_normal())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableauRule {
    /// `T⊥`, or `T A` together with `F A`.
    Close,
    AndT,
    OrF,
    ImpF,
    AndF,
    OrT,
    ImpT,
    ExistsT,
    ForallF,
    ForallT,
    ExistsF,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauNode {
    pub rule: TableauRule,
    pub principal: Signed,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<Term>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TableauNode>,
}

impl TableauNode {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(TableauNode::size).sum::<usize>()
    }
}

/// A closed tableau rooted at `F root`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauCert {
    pub root: Formula,
    pub tree: TableauNode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ClassicalOutcome {
    Proved { certificate: TableauCert },
    /// Propositional only: a valuation falsifying the formula, keyed by printed atom.
    Refuted { valuation: BTreeMap<String, bool> },
    Unknown { bound: u32 },
}

impl ClassicalOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, ClassicalOutcome::Proved { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ClassicalOutcome::Proved { .. } => "Proved",
            ClassicalOutcome::Refuted { .. } => "Refuted",
            ClassicalOutcome::Unknown { .. } => "Unknown",
        }
    }
}

enum Kind {
    Literal,
    Ignore,
    Alpha(TableauRule, Vec<Signed>),
    Beta(TableauRule, Signed, Signed),
    Delta(TableauRule, String, Formula),
    Gamma(TableauRule, String, Formula),
}

fn classify(s: &Signed) -> Kind {
    use Sign::*;
    match (s.sign, &s.formula) {
        (_, Atom(..)) | (T, Bottom) => Kind::Literal,
        (F, Bottom) => Kind::Ignore,
        (T, And(a, b)) => Kind::Alpha(TableauRule::AndT, vec![Signed::t((**a).clone()), Signed::t((**b).clone())]),
        (F, Or(a, b)) => Kind::Alpha(TableauRule::OrF, vec![Signed::f((**a).clone()), Signed::f((**b).clone())]),
        (F, Imp(a, b)) => Kind::Alpha(TableauRule::ImpF, vec![Signed::t((**a).clone()), Signed::f((**b).clone())]),
        (F, And(a, b)) => Kind::Beta(TableauRule::AndF, Signed::f((**a).clone()), Signed::f((**b).clone())),
        (T, Or(a, b)) => Kind::Beta(TableauRule::OrT, Signed::t((**a).clone()), Signed::t((**b).clone())),
        (T, Imp(a, b)) => Kind::Beta(TableauRule::ImpT, Signed::f((**a).clone()), Signed::t((**b).clone())),
        (T, Exists(x, a)) => Kind::Delta(TableauRule::ExistsT, x.clone(), (**a).clone()),
        (F, Forall(x, a)) => Kind::Delta(TableauRule::ForallF, x.clone(), (**a).clone()),
        (T, Forall(x, a)) => Kind::Gamma(TableauRule::ForallT, x.clone(), (**a).clone()),
        (F, Exists(x, a)) => Kind::Gamma(TableauRule::ExistsF, x.clone(), (**a).clone()),
    }
}

fn with_sign(sign: Sign, formula: Formula) -> Signed {
    Signed { sign, formula }
}

#[derive(Clone)]
struct Branch {
    seen: HashSet<(Sign, Formula)>,
    alphas: VecDeque<Signed>,
    betas: VecDeque<Signed>,
    gammas: Vec<Signed>,
    terms: Vec<Term>,
    /// `(gamma, term, round)`; rounds never decrease along the queue.
    gamma_queue: VecDeque<(usize, usize, u32)>,
    round: u32,
    names: BTreeSet<String>,
}

enum Open {
    Saturated(BTreeSet<Formula>),
    Exhausted,
}

impl Branch {
    fn new(root: &Formula) -> Self {
        let mut names = BTreeSet::new();
        root.all_names(&mut names);
        Branch {
            seen: HashSet::new(),
            alphas: VecDeque::new(),
            betas: VecDeque::new(),
            gammas: Vec::new(),
            terms: root.ground_terms(),
            gamma_queue: VecDeque::new(),
            round: 0,
            names,
        }
    }

    /// Adds a formula; returns the closing node if it closes the branch.
    fn add(&mut self, s: Signed) -> Option<TableauNode> {
        if s.sign == Sign::T && s.formula == Bottom {
            return Some(TableauNode { rule: TableauRule::Close, principal: s, term: None, children: vec![] });
        }
        let (sign, norm) = s.normal();
        let other = if sign == Sign::T { Sign::F } else { Sign::T };
        if self.seen.contains(&(other, norm.clone())) {
            let principal = if sign == Sign::T { s } else { Signed::t(s.formula) };
            return Some(TableauNode { rule: TableauRule::Close, principal, term: None, children: vec![] });
        }
        if !self.seen.insert((sign, norm)) {
            return None;
        }
        match classify(&s) {
            Kind::Literal | Kind::Ignore => {}
            Kind::Alpha(..) | Kind::Delta(..) => self.alphas.push_back(s),
            Kind::Beta(..) => self.betas.push_back(s),
            Kind::Gamma(..) => {
                let g = self.gammas.len();
                self.gammas.push(s);
                for t in 0..self.terms.len() {
                    self.gamma_queue.push_back((g, t, self.round + 1));
                }
            }
        }
        None
    }

    fn add_term(&mut self, term: Term) {
        if self.terms.contains(&term) {
            return;
        }
        self.names.insert(term.name().to_string());
        let t = self.terms.len();
        self.terms.push(term);
        for g in 0..self.gammas.len() {
            self.gamma_queue.push_back((g, t, self.round + 1));
        }
    }

    fn closes(&self, s: &Signed) -> bool {
        let (sign, norm) = s.normal();
        let other = if sign == Sign::T { Sign::F } else { Sign::T };
        (sign == Sign::T && norm == Bottom) || self.seen.contains(&(other, norm))
    }

    fn beta_half_closes(&self, s: &Signed) -> bool {
        match classify(s) {
            Kind::Beta(_, left, right) => self.closes(&left) || self.closes(&right),
            _ => false,
        }
    }

    fn fresh_constant(&mut self) -> Term {
        let name = fresh_name("c", &self.names);
        self.names.insert(name.clone());
        Term::Const(name)
    }

    fn true_atoms(&self) -> BTreeSet<Formula> {
        self.seen
            .iter()
            .filter(|(s, f)| *s == Sign::T && f.is_atomic())
            .map(|(_, f)| f.clone())
            .collect()
    }
}

/// Tableau nodes per call; past this the answer is `Unknown`.
const NODE_LIMIT: usize = 250_000;

struct Limits {
    bound: u32,
    nodes: usize,
}

fn continue_with(mut branch: Branch, additions: Vec<Signed>, lim: &mut Limits) -> Result<TableauNode, Open> {
    for s in additions {
        if let Some(close) = branch.add(s) {
            return Ok(close);
        }
    }
    expand(branch, lim)
}

/// Single-child steps are collected in a loop and wrapped afterwards, so the
/// call depth grows with β-splits only.
fn expand(mut branch: Branch, lim: &mut Limits) -> Result<TableauNode, Open> {
    let mut chain: Vec<(TableauRule, Signed, Option<Term>)> = Vec::new();
    let end = 'step: loop {
        lim.nodes += 1;
        if lim.nodes > NODE_LIMIT {
            return Err(Open::Exhausted);
        }
        let (rule, principal, term, additions) = if let Some(s) = branch.alphas.pop_front() {
            match classify(&s) {
                Kind::Alpha(rule, parts) => (rule, s, None, parts),
                Kind::Delta(rule, x, body) => {
                    let c = branch.fresh_constant();
                    branch.add_term(c.clone());
                    let inst = with_sign(s.sign, body.subst(&x, &c));
                    (rule, s, Some(c), vec![inst])
                }
                _ => unreachable!("only alpha and delta formulas are queued as alphas"),
            }
        } else {
            // A β whose one side closes at once is taken first; it does not really branch.
            if let Some(i) = branch.betas.iter().position(|s| branch.beta_half_closes(s)) {
                let s = branch.betas.remove(i).expect("index in range");
                branch.betas.push_front(s);
            }
            while let Some(s) = branch.betas.pop_front() {
                let Kind::Beta(rule, left, right) = classify(&s) else {
                    unreachable!("only beta formulas are queued as betas")
                };
                // Already satisfied on this branch: splitting cannot help close it.
                if branch.seen.contains(&left.normal()) || branch.seen.contains(&right.normal()) {
                    continue;
                }
                let left_node = continue_with(branch.clone(), vec![left], lim)?;
                let right_node = continue_with(branch, vec![right], lim)?;
                break 'step TableauNode { rule, principal: s, term: None, children: vec![left_node, right_node] };
            }
            if !branch.gammas.is_empty() && branch.terms.is_empty() {
                let c = branch.fresh_constant();
                branch.add_term(c);
            }
            let Some((g, t, round)) = branch.gamma_queue.pop_front() else {
                return Err(Open::Saturated(branch.true_atoms()));
            };
            if round > lim.bound {
                return Err(Open::Exhausted);
            }
            branch.round = round;
            let s = branch.gammas[g].clone();
            let term = branch.terms[t].clone();
            let Kind::Gamma(rule, x, body) = classify(&s) else {
                unreachable!("only gamma formulas are queued as gammas")
            };
            let inst = with_sign(s.sign, body.subst(&x, &term));
            (rule, s, Some(term), vec![inst])
        };
        chain.push((rule, principal, term));
        for a in additions {
            if let Some(close) = branch.add(a) {
                break 'step close;
            }
        }
    };
    Ok(chain
        .into_iter()
        .rev()
        .fold(end, |child, (rule, principal, term)| TableauNode { rule, principal, term, children: vec![child] }))
}

fn atoms_of(a: &Formula, out: &mut BTreeSet<Formula>) {
    match a {
        Bottom => {}
        Atom(..) => {
            out.insert(a.clone());
        }
        And(x, y) | Or(x, y) | Imp(x, y) => {
            atoms_of(x, out);
            atoms_of(y, out);
        }
        Forall(_, x) | Exists(_, x) => atoms_of(x, out),
    }
}

/// Decides propositional input exactly; semi-decides first-order input up to
/// `bound` rounds of γ-instantiation.
pub fn prove_classical(a: &Formula, bound: u32) -> ClassicalOutcome {
    let mut branch = Branch::new(a);
    let root = Signed::f(a.clone());
    let result = match branch.add(root) {
        Some(close) => Ok(close),
        None => expand(branch, &mut Limits { bound, nodes: 0 }),
    };
    match result {
        Ok(tree) => ClassicalOutcome::Proved { certificate: TableauCert { root: a.clone(), tree } },
        Err(Open::Saturated(true_atoms)) if a.is_quantifier_free() => {
            let mut atoms = BTreeSet::new();
            atoms_of(a, &mut atoms);
            let valuation = atoms
                .into_iter()
                .map(|atom| {
                    let value = true_atoms.contains(&atom);
                    (atom.to_string(), value)
                })
                .collect();
            ClassicalOutcome::Refuted { valuation }
        }
        Err(_) => ClassicalOutcome::Unknown { bound },
    }
}

/// `γ₁ → (γ₂ → … → a)`.
pub fn fold_hypotheses(gamma: &[Formula], a: &Formula) -> Formula {
    gamma.iter().rev().fold(a.clone(), |acc, g| Formula::imp(g.clone(), acc))
}

pub fn prove_classical_hyp(gamma: &[Formula], a: &Formula, bound: u32) -> ClassicalOutcome {
    prove_classical(&fold_hypotheses(gamma, a), bound)
}

/// Replays the tableau from `F a`; every step must be a correct rule instance
/// on a formula present on its branch, and every leaf must close.
pub fn check_classical_cert(a: &Formula, cert: &TableauCert) -> bool {
    if !cert.root.alpha_eq(a) {
        return false;
    }
    let mut branch = Vec::new();
    let mut names = BTreeSet::new();
    a.all_names(&mut names);
    branch.push(Signed::f(a.clone()).normal());
    check_node(&cert.tree, &mut branch, &names)
}

fn check_node(node: &TableauNode, branch: &mut Vec<(Sign, Formula)>, names: &BTreeSet<String>) -> bool {
    let principal = node.principal.normal();
    if !branch.contains(&principal) {
        return false;
    }
    if node.rule == TableauRule::Close {
        if !node.children.is_empty() || principal.0 != Sign::T {
            return false;
        }
        return principal.1 == Bottom || branch.contains(&(Sign::F, principal.1));
    }
    let extend = |branch: &mut Vec<(Sign, Formula)>, names: &BTreeSet<String>, child: &TableauNode, adds: Vec<Signed>| {
        let before = branch.len();
        let mut names = names.clone();
        for s in &adds {
            s.formula.all_names(&mut names);
            branch.push(s.normal());
        }
        let ok = check_node(child, branch, &names);
        branch.truncate(before);
        ok
    };
    match classify(&node.principal) {
        Kind::Alpha(rule, parts) => {
            rule == node.rule
                && node.term.is_none()
                && node.children.len() == 1
                && extend(branch, names, &node.children[0], parts)
        }
        Kind::Beta(rule, left, right) => {
            rule == node.rule
                && node.term.is_none()
                && node.children.len() == 2
                && extend(branch, names, &node.children[0], vec![left])
                && extend(branch, names, &node.children[1], vec![right])
        }
        Kind::Delta(rule, x, body) => {
            let Some(Term::Const(c)) = &node.term else { return false };
            rule == node.rule
                && !names.contains(c)
                && node.children.len() == 1
                && extend(branch, names, &node.children[0], vec![with_sign(node.principal.sign, body.subst(&x, &Term::Const(c.clone())))])
        }
        Kind::Gamma(rule, x, body) => {
            let Some(t) = &node.term else { return false };
            rule == node.rule
                && node.children.len() == 1
                && extend(branch, names, &node.children[0], vec![with_sign(node.principal.sign, body.subst(&x, t))])
        }
        Kind::Literal | Kind::Ignore => false,
    }
}

/// Classical truth value under a valuation of atoms (missing atoms are false).
pub fn eval_propositional(a: &Formula, valuation: &BTreeMap<String, bool>) -> Option<bool> {
    Some(match a {
        Bottom => false,
        Atom(..) => valuation.get(&a.to_string()).copied().unwrap_or(false),
        And(x, y) => eval_propositional(x, valuation)? && eval_propositional(y, valuation)?,
        Or(x, y) => eval_propositional(x, valuation)? || eval_propositional(y, valuation)?,
        Imp(x, y) => !eval_propositional(x, valuation)? || eval_propositional(y, valuation)?,
        Forall(..) | Exists(..) => return None,
    })
}
