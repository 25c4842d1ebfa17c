//! Finite Kripke models for intuitionistic logic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::KripkeError;
use crate::formula::Formula::{self, *};
use crate::formula::Term;

pub type WorldId = usize;

/// Largest frame the exhaustive search enumerates.
pub const MAX_ENUMERATED_WORLDS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AtomInstance {
    pub pred: String,
    pub args: Vec<String>,
}

impl AtomInstance {
    pub fn new(pred: impl Into<String>, args: Vec<String>) -> Self {
        AtomInstance { pred: pred.into(), args }
    }

    pub fn prop(pred: impl Into<String>) -> Self {
        AtomInstance::new(pred, Vec::new())
    }
}

impl fmt::Display for AtomInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            write!(f, "({})", self.args.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    pub worlds: Vec<WorldId>,
    /// Pairs `(w, v)` with `w ≤ v`, reflexive pairs included.
    pub order: BTreeSet<(WorldId, WorldId)>,
    /// Serialized as `[world, constants]` pairs so it survives tagged enums.
    #[serde(with = "domain_pairs")]
    pub domain: BTreeMap<WorldId, BTreeSet<String>>,
    pub valuation: BTreeSet<(WorldId, AtomInstance)>,
}

mod domain_pairs {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &BTreeMap<WorldId, BTreeSet<String>>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(d.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<WorldId, BTreeSet<String>>, D::Error> {
        Ok(Vec::<(WorldId, BTreeSet<String>)>::deserialize(d)?.into_iter().collect())
    }
}

impl KripkeModel {
    pub fn leq(&self, w: WorldId, v: WorldId) -> bool {
        self.order.contains(&(w, v))
    }

    pub fn successors(&self, w: WorldId) -> impl Iterator<Item = WorldId> + '_ {
        self.worlds.iter().copied().filter(move |&v| self.leq(w, v))
    }

    pub fn holds(&self, w: WorldId, atom: &AtomInstance) -> bool {
        self.valuation.contains(&(w, atom.clone()))
    }

    fn domain_of(&self, w: WorldId) -> &BTreeSet<String> {
        static EMPTY: BTreeSet<String> = BTreeSet::new();
        self.domain.get(&w).unwrap_or(&EMPTY)
    }

    /// Atoms true at `w`.
    pub fn atoms_at(&self, w: WorldId) -> Vec<&AtomInstance> {
        self.valuation.iter().filter(|(v, _)| *v == w).map(|(_, a)| a).collect()
    }

    /// Pairs `w < v` with nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(WorldId, WorldId)> {
        let strict = |a: WorldId, b: WorldId| a != b && self.leq(a, b);
        let mut edges = Vec::new();
        for &w in &self.worlds {
            for &v in &self.worlds {
                if strict(w, v) && !self.worlds.iter().any(|&u| strict(w, u) && strict(u, v)) {
                    edges.push((w, v));
                }
            }
        }
        edges
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    UnknownWorld(WorldId),
    NotReflexive(WorldId),
    NotTransitive(WorldId, WorldId, WorldId),
    NotAntisymmetric(WorldId, WorldId),
    DomainNotMonotone { from: WorldId, to: WorldId, constant: String },
    NotPersistent { from: WorldId, to: WorldId, atom: AtomInstance },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownWorld(w) => write!(f, "order violation: unknown world {w}"),
            Violation::NotReflexive(w) => write!(f, "order violation: ({w}, {w}) missing"),
            Violation::NotTransitive(a, b, c) => {
                write!(f, "order violation: {a} <= {b} <= {c} but not {a} <= {c}")
            }
            Violation::NotAntisymmetric(a, b) => {
                write!(f, "order violation: {a} <= {b} and {b} <= {a}")
            }
            Violation::DomainNotMonotone { from, to, constant } => {
                write!(f, "domain violation at (w{to}, {constant}) above w{from}")
            }
            Violation::NotPersistent { from, to, atom } => {
                write!(f, "persistence violation at (w{to}, {atom}) above w{from}")
            }
        }
    }
}

/// Empty iff the order is a partial order, domains grow along it and the
/// valuation is persistent.
pub fn validate_model(m: &KripkeModel) -> Vec<Violation> {
    let mut out = Vec::new();
    let known: BTreeSet<_> = m.worlds.iter().copied().collect();
    for &(a, b) in &m.order {
        for w in [a, b] {
            if !known.contains(&w) {
                out.push(Violation::UnknownWorld(w));
            }
        }
    }
    for (w, _) in &m.valuation {
        if !known.contains(w) {
            out.push(Violation::UnknownWorld(*w));
        }
    }
    for &w in &m.worlds {
        if !m.leq(w, w) {
            out.push(Violation::NotReflexive(w));
        }
    }
    for &(a, b) in &m.order {
        if a < b && m.leq(b, a) {
            out.push(Violation::NotAntisymmetric(a, b));
        }
        for &(b2, c) in &m.order {
            if b2 == b && !m.leq(a, c) {
                out.push(Violation::NotTransitive(a, b, c));
            }
        }
    }
    for &(w, v) in &m.order {
        if w == v {
            continue;
        }
        for c in m.domain_of(w) {
            if !m.domain_of(v).contains(c) {
                out.push(Violation::DomainNotMonotone { from: w, to: v, constant: c.clone() });
            }
        }
        for atom in m.atoms_at(w) {
            if !m.holds(v, atom) {
                out.push(Violation::NotPersistent { from: w, to: v, atom: atom.clone() });
            }
        }
    }
    out
}

pub type Env = BTreeMap<String, String>;

/// Intuitionistic forcing `m, w ⊩ a` under `env` for the free variables.
pub fn force(m: &KripkeModel, w: WorldId, a: &Formula, env: &Env) -> Result<bool, KripkeError> {
    if !m.worlds.contains(&w) {
        return Err(KripkeError::UnknownWorld(w));
    }
    force_at(m, w, a, env)
}

fn force_at(m: &KripkeModel, w: WorldId, a: &Formula, env: &Env) -> Result<bool, KripkeError> {
    Ok(match a {
        Bottom => false,
        Atom(p, args) => {
            let mut names = Vec::with_capacity(args.len());
            for t in args {
                let name = match t {
                    Term::Var(v) => env.get(v).ok_or_else(|| KripkeError::MissingVariable(v.clone()))?,
                    Term::Const(c) => c,
                };
                if !m.domain_of(w).contains(name) {
                    return Err(KripkeError::OutsideDomain { constant: name.clone(), world: w });
                }
                names.push(name.clone());
            }
            m.holds(w, &AtomInstance::new(p.clone(), names))
        }
        And(x, y) => force_at(m, w, x, env)? && force_at(m, w, y, env)?,
        Or(x, y) => force_at(m, w, x, env)? || force_at(m, w, y, env)?,
        Imp(x, y) => {
            for v in m.successors(w) {
                if force_at(m, v, x, env)? && !force_at(m, v, y, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Forall(x, body) => {
            for v in m.successors(w) {
                for d in m.domain_of(v) {
                    let mut inner = env.clone();
                    inner.insert(x.clone(), d.clone());
                    if !force_at(m, v, body, &inner)? {
                        return Ok(false);
                    }
                }
            }
            true
        }
        Exists(x, body) => {
            for d in m.domain_of(w) {
                let mut inner = env.clone();
                inner.insert(x.clone(), d.clone());
                if force_at(m, w, body, &inner)? {
                    return Ok(true);
                }
            }
            false
        }
    })
}

/// Forcing with every free variable read as the element of the same name.
pub fn force_closed(m: &KripkeModel, w: WorldId, a: &Formula) -> Result<bool, KripkeError> {
    let env = a.free_vars().into_iter().map(|v| (v.clone(), v)).collect();
    force(m, w, a, &env)
}

/// True iff `w` forces every hypothesis and does not force `goal`.
pub fn refutes(m: &KripkeModel, w: WorldId, gamma: &[Formula], goal: &Formula) -> bool {
    validate_model(m).is_empty()
        && gamma.iter().all(|g| force_closed(m, w, g) == Ok(true))
        && force_closed(m, w, goal) == Ok(false)
}

/// A rooted, naturally labelled finite poset: world 0 is the root and
/// `i ≤ j` implies `i ≤ j` as numbers. `up[i]` is the bitmask of worlds above `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedPoset {
    pub size: usize,
    pub up: Vec<u64>,
    pub code: u64,
    pub upsets: Vec<u64>,
}

fn order_code(size: usize, up: &[u64], perm: &[usize]) -> u64 {
    let mut code = 0u64;
    for i in 0..size {
        for j in 0..size {
            code <<= 1;
            if up[perm[i]] >> perm[j] & 1 == 1 {
                code |= 1;
            }
        }
    }
    code
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

fn enumerate_rooted(size: usize) -> Vec<RootedPoset> {
    let pairs: Vec<(usize, usize)> =
        (1..size).flat_map(|i| (i + 1..size).map(move |j| (i, j))).collect();
    let mut perms = Vec::new();
    let mut rest: Vec<usize> = (1..size).collect();
    permutations(&mut rest, 0, &mut perms);
    let perms: Vec<Vec<usize>> = perms
        .into_iter()
        .map(|p| std::iter::once(0).chain(p).collect())
        .collect();
    let mut seen = BTreeMap::new();
    for bits in 0u64..(1 << pairs.len()) {
        let mut up: Vec<u64> = (0..size).map(|i| 1u64 << i).collect();
        up[0] = (1u64 << size) - 1;
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if bits >> k & 1 == 1 {
                up[i] |= 1 << j;
            }
        }
        let transitive = (0..size).all(|i| {
            (0..size).filter(|&j| up[i] >> j & 1 == 1).all(|j| up[j] & !up[i] == 0)
        });
        if !transitive {
            continue;
        }
        let code = perms.iter().map(|p| order_code(size, &up, p)).min().unwrap_or(0);
        seen.entry(code).or_insert(up);
    }
    seen.into_iter()
        .map(|(code, up)| {
            let upsets = (0u64..(1 << size))
                .filter(|&s| (0..size).filter(|&i| s >> i & 1 == 1).all(|i| up[i] & !s == 0))
                .collect();
            RootedPoset { size, up, code, upsets }
        })
        .collect()
}

/// Rooted posets of `size` worlds, one per isomorphism class, sorted by
/// canonical order-matrix code.
pub fn rooted_posets(size: usize) -> &'static [RootedPoset] {
    static CACHE: [OnceLock<Vec<RootedPoset>>; MAX_ENUMERATED_WORLDS + 1] =
        [const { OnceLock::new() }; MAX_ENUMERATED_WORLDS + 1];
    assert!((1..=MAX_ENUMERATED_WORLDS).contains(&size), "poset size {size} out of range");
    CACHE[size].get_or_init(|| enumerate_rooted(size))
}

fn atom_instance(a: &Formula) -> AtomInstance {
    match a {
        Atom(p, args) => AtomInstance::new(p.clone(), args.iter().map(|t| t.name().to_string()).collect()),
        _ => unreachable!("atom expected"),
    }
}

fn collect_atoms(a: &Formula, out: &mut Vec<AtomInstance>) {
    match a {
        Bottom => {}
        Atom(..) => {
            let inst = atom_instance(a);
            if !out.contains(&inst) {
                out.push(inst);
            }
        }
        And(x, y) | Or(x, y) | Imp(x, y) => {
            collect_atoms(x, out);
            collect_atoms(y, out);
        }
        Forall(_, x) | Exists(_, x) => collect_atoms(x, out),
    }
}

/// Worlds forcing `a`, as a bitmask, for quantifier-free `a`.
fn forcing_mask(a: &Formula, poset: &RootedPoset, atoms: &[AtomInstance], val: &[u64]) -> u64 {
    let all = (1u64 << poset.size) - 1;
    match a {
        Bottom => 0,
        Atom(..) => {
            let inst = atom_instance(a);
            let idx = atoms.iter().position(|x| *x == inst).expect("atom collected");
            val[idx]
        }
        And(x, y) => forcing_mask(x, poset, atoms, val) & forcing_mask(y, poset, atoms, val),
        Or(x, y) => forcing_mask(x, poset, atoms, val) | forcing_mask(y, poset, atoms, val),
        Imp(x, y) => {
            let ante = forcing_mask(x, poset, atoms, val);
            let cons = forcing_mask(y, poset, atoms, val);
            (0..poset.size)
                .filter(|&w| poset.up[w] & ante & !cons == 0)
                .fold(0, |m, w| m | 1 << w)
                & all
        }
        Forall(..) | Exists(..) => unreachable!("quantifier-free input"),
    }
}

fn build_model(poset: &RootedPoset, atoms: &[AtomInstance], val: &[u64], names: &BTreeSet<String>) -> KripkeModel {
    let worlds: Vec<WorldId> = (0..poset.size).collect();
    let mut order = BTreeSet::new();
    for w in 0..poset.size {
        for v in 0..poset.size {
            if poset.up[w] >> v & 1 == 1 {
                order.insert((w, v));
            }
        }
    }
    let domain = worlds.iter().map(|&w| (w, names.clone())).collect();
    let mut valuation = BTreeSet::new();
    for (atom, &mask) in atoms.iter().zip(val) {
        for w in 0..poset.size {
            if mask >> w & 1 == 1 {
                valuation.insert((w, atom.clone()));
            }
        }
    }
    KripkeModel { worlds, order, domain, valuation }
}

/// Exhaustive search for a rooted model of at most `max_worlds` worlds whose
/// root forces every hypothesis but not `goal`.
pub fn find_sequent_countermodel(
    gamma: &[Formula],
    goal: &Formula,
    max_worlds: usize,
) -> Result<Option<(KripkeModel, WorldId)>, KripkeError> {
    if !goal.is_quantifier_free() || gamma.iter().any(|g| !g.is_quantifier_free()) {
        return Err(KripkeError::Quantified);
    }
    if max_worlds > MAX_ENUMERATED_WORLDS {
        return Err(KripkeError::TooManyWorlds { asked: max_worlds, max: MAX_ENUMERATED_WORLDS });
    }
    let mut atoms = Vec::new();
    let mut names = BTreeSet::new();
    for f in gamma.iter().chain(std::iter::once(goal)) {
        collect_atoms(f, &mut atoms);
        names.extend(f.ground_terms().iter().map(|t| t.name().to_string()));
    }
    for size in 1..=max_worlds {
        for poset in rooted_posets(size) {
            let choices = poset.upsets.len();
            let mut digits = vec![0usize; atoms.len()];
            loop {
                let val: Vec<u64> = digits.iter().map(|&d| poset.upsets[d]).collect();
                let root_forces = |f: &Formula| forcing_mask(f, poset, &atoms, &val) & 1 == 1;
                if !root_forces(goal) && gamma.iter().all(root_forces) {
                    return Ok(Some((build_model(poset, &atoms, &val, &names), 0)));
                }
                let mut k = 0;
                while k < digits.len() {
                    digits[k] += 1;
                    if digits[k] < choices {
                        break;
                    }
                    digits[k] = 0;
                    k += 1;
                }
                if k == digits.len() {
                    break;
                }
            }
        }
    }
    Ok(None)
}

/// A model and world not forcing `a`, over frames of at most `max_worlds` worlds,
/// or `None` if no such model exists at that size.
pub fn find_countermodel(a: &Formula, max_worlds: usize) -> Result<Option<(KripkeModel, WorldId)>, KripkeError> {
    find_sequent_countermodel(&[], a, max_worlds)
}

/// Graphviz rendering: one node per world labelled with its true atoms,
/// Hasse edges pointing upward.
pub fn to_dot(m: &KripkeModel, root: Option<WorldId>) -> String {
    let mut out = String::from("digraph kripke {\n  rankdir=BT;\n  node [shape=box];\n");
    for &w in &m.worlds {
        let atoms: Vec<String> = m.atoms_at(w).iter().map(|a| a.to_string()).collect();
        let label = if atoms.is_empty() { format!("w{w}") } else { format!("w{w}\\n{}", atoms.join(", ")) };
        let style = if root == Some(w) { ", peripheries=2" } else { "" };
        out.push_str(&format!("  w{w} [label=\"{label}\"{style}];\n"));
    }
    for (w, v) in m.hasse_edges() {
        out.push_str(&format!("  w{w} -> w{v};\n"));
    }
    out.push_str("}\n");
    out
}
