//! First-order formulas over a relational signature.
//!
//! Negation is not a constructor: `¬A` is `A → ⊥`. Terms are variables or
//! constants; there are no function symbols.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::FormulaError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bottom,
    Atom(String, Vec<Term>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Forall(String, Arc<Formula>),
    Exists(String, Arc<Formula>),
}

use Formula::*;

impl Formula {
    /// Nullary atom.
    pub fn prop(name: impl Into<String>) -> Formula {
        Atom(name.into(), Vec::new())
    }

    pub fn atom(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Atom(name.into(), args)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Imp(Arc::new(a), Arc::new(b))
    }

    /// `¬a`, i.e. `a → ⊥`.
    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Bottom)
    }

    pub fn not_not(a: Formula) -> Formula {
        Formula::not(Formula::not(a))
    }

    /// `(a → b) ∧ (b → a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Forall(var.into(), Arc::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Exists(var.into(), Arc::new(body))
    }

    /// `⊥ → ⊥`, the formula used for truth where one is needed.
    pub fn top() -> Formula {
        Formula::not(Bottom)
    }

    /// Returns the operand if this formula is `A → ⊥`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Imp(a, b) if **b == Bottom => Some(a),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Atom(..))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Bottom | Atom(..) => 1,
            And(a, b) | Or(a, b) | Imp(a, b) => 1 + a.size() + b.size(),
            Forall(_, a) | Exists(_, a) => 1 + a.size(),
        }
    }

    /// True iff the formula has no quantifier.
    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Bottom | Atom(..) => true,
            And(a, b) | Or(a, b) | Imp(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Forall(..) | Exists(..) => false,
        }
    }

    pub fn contains_bottom(&self) -> bool {
        match self {
            Bottom => true,
            Atom(..) => false,
            And(a, b) | Or(a, b) | Imp(a, b) => a.contains_bottom() || b.contains_bottom(),
            Forall(_, a) | Exists(_, a) => a.contains_bottom(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Bottom => {}
            Atom(_, args) => {
                for t in args {
                    if let Term::Var(v) = t {
                        if !bound.contains(&v.as_str()) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
            And(a, b) | Or(a, b) | Imp(a, b) => {
                a.collect_free_vars(bound, out);
                b.collect_free_vars(bound, out);
            }
            Forall(x, a) | Exists(x, a) => {
                bound.push(x);
                a.collect_free_vars(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Constants and free variables, in order of first occurrence.
    pub fn ground_terms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        self.collect_ground_terms(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn collect_ground_terms<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut Vec<Term>) {
        match self {
            Bottom => {}
            Atom(_, args) => {
                for t in args {
                    let ground = match t {
                        Term::Var(v) => !bound.contains(&v.as_str()),
                        Term::Const(_) => true,
                    };
                    if ground && !out.contains(t) {
                        out.push(t.clone());
                    }
                }
            }
            And(a, b) | Or(a, b) | Imp(a, b) => {
                a.collect_ground_terms(bound, out);
                b.collect_ground_terms(bound, out);
            }
            Forall(x, a) | Exists(x, a) => {
                bound.push(x);
                a.collect_ground_terms(bound, out);
                bound.pop();
            }
        }
    }

    /// Every constant name and variable name occurring anywhere, bound or not.
    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Bottom => {}
            Atom(_, args) => out.extend(args.iter().map(|t| t.name().to_string())),
            And(a, b) | Or(a, b) | Imp(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Forall(x, a) | Exists(x, a) => {
                out.insert(x.clone());
                a.all_names(out);
            }
        }
    }

    /// Predicate symbols as (name, arity).
    pub fn predicates(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.collect_predicates(&mut out);
        out
    }

    fn collect_predicates(&self, out: &mut BTreeSet<(String, usize)>) {
        match self {
            Bottom => {}
            Atom(p, args) => {
                out.insert((p.clone(), args.len()));
            }
            And(a, b) | Or(a, b) | Imp(a, b) => {
                a.collect_predicates(out);
                b.collect_predicates(out);
            }
            Forall(_, a) | Exists(_, a) => a.collect_predicates(out),
        }
    }

    /// All subformulas, each listed once, children before parents.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut Vec<Formula>) {
        match self {
            Bottom | Atom(..) => {}
            And(a, b) | Or(a, b) | Imp(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
            Forall(_, a) | Exists(_, a) => a.collect_subformulas(out),
        }
        if !out.contains(self) {
            out.push(self.clone());
        }
    }

    /// Capture-avoiding substitution of `term` for the free occurrences of `var`.
    pub fn subst(&self, var: &str, term: &Term) -> Formula {
        match self {
            Bottom => Bottom,
            Atom(p, args) => Atom(
                p.clone(),
                args.iter()
                    .map(|t| match t {
                        Term::Var(v) if v == var => term.clone(),
                        other => other.clone(),
                    })
                    .collect(),
            ),
            And(a, b) => And(Arc::new(a.subst(var, term)), Arc::new(b.subst(var, term))),
            Or(a, b) => Or(Arc::new(a.subst(var, term)), Arc::new(b.subst(var, term))),
            Imp(a, b) => Imp(Arc::new(a.subst(var, term)), Arc::new(b.subst(var, term))),
            Forall(x, body) | Exists(x, body) => {
                if x == var || !body.free_vars().contains(var) {
                    return self.clone();
                }
                let (x, body) = match term {
                    Term::Var(y) if y == x => {
                        let mut taken = BTreeSet::new();
                        body.all_names(&mut taken);
                        taken.insert(y.clone());
                        let fresh = fresh_name(x, &taken);
                        let renamed = body.subst(x, &Term::Var(fresh.clone()));
                        (fresh, Arc::new(renamed))
                    }
                    _ => (x.clone(), body.clone()),
                };
                let body = Arc::new(body.subst(var, term));
                match self {
                    Forall(..) => Forall(x, body),
                    _ => Exists(x, body),
                }
            }
        }
    }

    /// Replaces every `⊥` leaf by `f`. `f` must be closed.
    pub fn substitute_bottom(&self, f: &Formula) -> Result<Formula, FormulaError> {
        let open = f.free_vars();
        if !open.is_empty() {
            return Err(FormulaError::OpenParameter(open.into_iter().collect()));
        }
        Ok(self.replace_bottom(f))
    }

    fn replace_bottom(&self, f: &Formula) -> Formula {
        match self {
            Bottom => f.clone(),
            Atom(..) => self.clone(),
            And(a, b) => Formula::and(a.replace_bottom(f), b.replace_bottom(f)),
            Or(a, b) => Formula::or(a.replace_bottom(f), b.replace_bottom(f)),
            Imp(a, b) => Formula::imp(a.replace_bottom(f), b.replace_bottom(f)),
            Forall(x, a) => Formula::forall(x.clone(), a.replace_bottom(f)),
            Exists(x, a) => Formula::exists(x.clone(), a.replace_bottom(f)),
        }
    }

    /// Representative of the alpha-equivalence class: bound variables are
    /// renamed by binder depth to names no parsed identifier can take.
    pub fn alpha_normal(&self) -> Formula {
        self.normalize(&mut BTreeMap::new(), 0)
    }

    fn normalize(&self, env: &mut BTreeMap<String, Vec<String>>, depth: usize) -> Formula {
        match self {
            Bottom => Bottom,
            Atom(p, args) => Atom(
                p.clone(),
                args.iter()
                    .map(|t| match t {
                        Term::Var(v) => match env.get(v).and_then(|s| s.last()) {
                            Some(canon) => Term::Var(canon.clone()),
                            None => t.clone(),
                        },
                        Term::Const(_) => t.clone(),
                    })
                    .collect(),
            ),
            And(a, b) => Formula::and(a.normalize(env, depth), b.normalize(env, depth)),
            Or(a, b) => Formula::or(a.normalize(env, depth), b.normalize(env, depth)),
            Imp(a, b) => Formula::imp(a.normalize(env, depth), b.normalize(env, depth)),
            Forall(x, a) | Exists(x, a) => {
                let canon = format!("%{depth}");
                env.entry(x.clone()).or_default().push(canon.clone());
                let body = a.normalize(env, depth + 1);
                if let Some(stack) = env.get_mut(x) {
                    stack.pop();
                }
                match self {
                    Forall(..) => Formula::forall(canon, body),
                    _ => Formula::exists(canon, body),
                }
            }
        }
    }

    /// Identity up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self == other || self.alpha_normal() == other.alpha_normal()
    }

    /// Membership in the negative fragment. Lenient: no `∨` and no `∃`.
    /// Strict: additionally every atom other than `⊥` sits directly under `¬¬`.
    pub fn in_negative_fragment(&self, strict: bool) -> bool {
        if strict {
            self.strict_nf()
        } else {
            self.lenient_nf()
        }
    }

    fn lenient_nf(&self) -> bool {
        match self {
            Bottom | Atom(..) => true,
            And(a, b) | Imp(a, b) => a.lenient_nf() && b.lenient_nf(),
            Forall(_, a) => a.lenient_nf(),
            Or(..) | Exists(..) => false,
        }
    }

    fn strict_nf(&self) -> bool {
        if let Some(inner) = self.as_negation().and_then(Formula::as_negation) {
            if inner.is_atomic() {
                return true;
            }
        }
        match self {
            Bottom => true,
            Atom(..) => false,
            And(a, b) | Imp(a, b) => a.strict_nf() && b.strict_nf(),
            Forall(_, a) => a.strict_nf(),
            Or(..) | Exists(..) => false,
        }
    }
}

/// `base`, or `base` with a numeric suffix, avoiding `taken`.
pub fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded suffix search")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "'{c}"),
        }
    }
}

/// The sentence `F` must satisfy: closed, classically refutable and not
/// intuitionistically refutable. The default is `¬(∀x ¬¬P(x) → ∀x P(x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremInstanceF {
    formula: Formula,
}

impl TheoremInstanceF {
    pub fn new(formula: Formula) -> Result<Self, FormulaError> {
        let open = formula.free_vars();
        if !open.is_empty() {
            return Err(FormulaError::OpenParameter(open.into_iter().collect()));
        }
        Ok(TheoremInstanceF { formula })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }
}

impl Default for TheoremInstanceF {
    fn default() -> Self {
        TheoremInstanceF { formula: default_f() }
    }
}

/// `¬(∀x ¬¬P(x) → ∀x P(x))`: the negated double-negation shift instance.
pub fn default_f() -> Formula {
    let px = Formula::atom("P", vec![Term::var("x")]);
    let shift = Formula::imp(
        Formula::forall("x", Formula::not_not(px.clone())),
        Formula::forall("x", px),
    );
    Formula::not(shift)
}
