#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use copylab::corpus::{load_corpus, CorpusEntry};
use copylab::{Formula, Term};
use proptest::prelude::*;

pub fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/corpus.jsonl")
}

pub fn shipped_corpus() -> Vec<CorpusEntry> {
    load_corpus(corpus_path()).expect("shipped corpus loads")
}

pub fn propositional(corpus: &[CorpusEntry]) -> Vec<CorpusEntry> {
    corpus.iter().filter(|e| e.formula.is_quantifier_free()).cloned().collect()
}

pub fn first_order(corpus: &[CorpusEntry]) -> Vec<CorpusEntry> {
    corpus.iter().filter(|e| !e.formula.is_quantifier_free()).cloned().collect()
}

const ATOMS: [&str; 6] = ["P", "Q", "R", "S", "T", "U"];

/// Propositional formulas over the first `atoms` letters.
pub fn arb_prop(atoms: usize, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Bottom),
        6 => (0..atoms).prop_map(|i| Formula::prop(ATOMS[i])),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

fn arb_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::var),
        prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
    ]
}

/// First-order formulas with unary and binary predicates; may be open.
pub fn arb_fo(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Bottom),
        2 => prop::sample::select(vec!["P", "Q"]).prop_map(Formula::prop),
        3 => (prop::sample::select(vec!["P", "Q"]), arb_term()).prop_map(|(p, t)| Formula::atom(p, vec![t])),
        2 => (arb_term(), arb_term()).prop_map(|(s, t)| Formula::atom("R", vec![s, t])),
    ];
    leaf.prop_recursive(depth, 96, 2, |inner| {
        let var = prop::sample::select(vec!["x", "y", "z"]);
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (var.clone(), inner.clone()).prop_map(|(v, a)| Formula::forall(v, a)),
            (var, inner).prop_map(|(v, a)| Formula::exists(v, a)),
        ]
    })
}

/// Closes a formula by universally quantifying its free variables.
pub fn close(f: Formula) -> Formula {
    f.free_vars().into_iter().rev().fold(f, |acc, v| Formula::forall(v, acc))
}

pub fn atom_names(f: &Formula) -> BTreeSet<String> {
    f.predicates().into_iter().map(|(p, _)| p).collect()
}

/// Truth value under a valuation, computed directly from the definition.
pub fn truth(f: &Formula, v: &BTreeMap<String, bool>) -> bool {
    match f {
        Formula::Bottom => false,
        Formula::Atom(p, _) => v[p],
        Formula::And(a, b) => truth(a, v) && truth(b, v),
        Formula::Or(a, b) => truth(a, v) || truth(b, v),
        Formula::Imp(a, b) => !truth(a, v) || truth(b, v),
        Formula::Forall(..) | Formula::Exists(..) => panic!("propositional only"),
    }
}

/// Brute-force tautology check over every valuation.
pub fn tautology(f: &Formula) -> bool {
    let atoms: Vec<String> = atom_names(f).into_iter().collect();
    (0u32..1 << atoms.len()).all(|bits| {
        let v = atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits >> i & 1 == 1)).collect();
        truth(f, &v)
    })
}

pub fn quantifier_count(f: &Formula) -> usize {
    match f {
        Formula::Bottom | Formula::Atom(..) => 0,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => quantifier_count(a) + quantifier_count(b),
        Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + quantifier_count(a),
    }
}

/// Closed formulas with at most two quantifiers, where ground tableaux stay small.
pub fn arb_closed_fo_small() -> impl Strategy<Value = Formula> {
    arb_fo(3).prop_map(close).prop_filter("at most two quantifiers", |f| quantifier_count(f) <= 2)
}

/// Worlds `0..n` as bitmasks: `up[i]` holds every `j ≥ i`.
#[derive(Clone, Debug)]
pub struct SmallFrame {
    pub up: Vec<u64>,
    pub val: BTreeMap<String, u64>,
}

impl SmallFrame {
    pub fn size(&self) -> usize {
        self.up.len()
    }
}

/// A random partial order on at most `max_worlds` worlds with upward closed
/// valuations of P, Q and R.
pub fn arb_frame(max_worlds: usize) -> impl Strategy<Value = SmallFrame> {
    (1..=max_worlds)
        .prop_flat_map(|n| {
            let edges = prop::collection::vec(any::<bool>(), n * n);
            let vals = prop::collection::vec(0u64..(1 << n), 3);
            (Just(n), edges, vals)
        })
        .prop_map(|(n, edges, vals)| {
            // Only edges i < j, so the closure stays antisymmetric.
            let mut up: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
            for i in 0..n {
                for j in i + 1..n {
                    if edges[i * n + j] {
                        up[i] |= 1 << j;
                    }
                }
            }
            for i in (0..n).rev() {
                let mut acc = up[i];
                for j in i + 1..n {
                    if up[i] >> j & 1 == 1 {
                        acc |= up[j];
                    }
                }
                up[i] = acc;
            }
            let close_up = |s: u64| (0..n).filter(|&i| s >> i & 1 == 1).fold(0, |acc, i| acc | up[i]);
            let val = ["P", "Q", "R"].iter().zip(vals).map(|(p, s)| (p.to_string(), close_up(s))).collect();
            SmallFrame { up, val }
        })
}

/// Worlds forcing a propositional formula, computed directly from the clauses.
pub fn forcing_set(frame: &SmallFrame, f: &Formula) -> u64 {
    let n = frame.size();
    let all = (1u64 << n) - 1;
    match f {
        Formula::Bottom => 0,
        Formula::Atom(p, _) => frame.val.get(p).copied().unwrap_or(0),
        Formula::And(a, b) => forcing_set(frame, a) & forcing_set(frame, b),
        Formula::Or(a, b) => forcing_set(frame, a) | forcing_set(frame, b),
        Formula::Imp(a, b) => {
            let bad = forcing_set(frame, a) & !forcing_set(frame, b) & all;
            (0..n).filter(|&i| frame.up[i] & bad == 0).fold(0, |acc, i| acc | 1 << i)
        }
        Formula::Forall(..) | Formula::Exists(..) => panic!("propositional only"),
    }
}

/// Validates a library model against the plain forcing clauses above.
pub fn oracle_refutes(m: &copylab::kripke::KripkeModel, w: usize, goal: &Formula) -> bool {
    let index: BTreeMap<usize, usize> = m.worlds.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = m.worlds.len();
    if n > 63 || !index.contains_key(&w) {
        return false;
    }
    let mut up = vec![0u64; n];
    for &(a, b) in &m.order {
        up[index[&a]] |= 1 << index[&b];
    }
    let mut val = BTreeMap::new();
    for (v, atom) in &m.valuation {
        *val.entry(atom.pred.clone()).or_insert(0) |= 1u64 << index[v];
    }
    let frame = SmallFrame { up, val };
    forcing_set(&frame, goal) >> index[&w] & 1 == 0
}
