//! Checks that a translation is a negative translation on a finite corpus,
//! pointwise comparison of copies, and the distinctness suite for the
//! `ᴷ`, `ᴹ` and `ᴺ` copies.
//!
//! Independent prover calls run on the rayon pool; results keep input order.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{check_classical_cert, eval_propositional, prove_classical, prove_classical_hyp, ClassicalOutcome};
use crate::corpus::CorpusEntry;
use crate::error::LabError;
use crate::formula::Formula::{self, Atom};
use crate::formula::{fresh_name, TheoremInstanceF};
use crate::intuitionistic::{check_derivation, check_outcome, il_equiv, prove_il, EquivOutcome, IntuitionisticOutcome};
use crate::kripke::{self, force_closed};
use crate::translate::{distinctness_witnesses, kolmogorov, TranslationKind, TranslationSpec};

/// Whether the certificate attached to `outcome` re-checks for `a`.
pub fn classical_certified(a: &Formula, outcome: &ClassicalOutcome) -> bool {
    match outcome {
        ClassicalOutcome::Proved { certificate } => check_classical_cert(a, certificate),
        ClassicalOutcome::Refuted { valuation } => eval_propositional(a, valuation) == Some(false),
        ClassicalOutcome::Unknown { .. } => true,
    }
}

/// Both directions re-check, or the countermodel is valid and refutes the failing direction.
pub fn equiv_certified(a: &Formula, b: &Formula, outcome: &EquivOutcome) -> bool {
    use crate::intuitionistic::Direction;
    match outcome {
        EquivOutcome::Equivalent { forward, backward } => {
            let ab = Formula::imp(a.clone(), b.clone());
            let ba = Formula::imp(b.clone(), a.clone());
            forward.sequent.antecedent.is_empty()
                && forward.sequent.succedent.alpha_eq(&ab)
                && backward.sequent.antecedent.is_empty()
                && backward.sequent.succedent.alpha_eq(&ba)
                && check_derivation(forward)
                && check_derivation(backward)
        }
        EquivOutcome::NotEquivalent { direction, countermodel } => match countermodel {
            Some((m, w)) => {
                let goal = match direction {
                    Direction::LeftToRight => Formula::imp(a.clone(), b.clone()),
                    Direction::RightToLeft => Formula::imp(b.clone(), a.clone()),
                };
                kripke::refutes(m, *w, &[], &goal)
            }
            None => false,
        },
        EquivOutcome::Unknown { .. } => true,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    pub vacuous: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaithfulnessItem {
    pub name: String,
    /// `A ↔ Aᵀ`.
    pub formula: Formula,
    pub outcome: ClassicalOutcome,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RespectItem {
    pub name: String,
    pub gamma: Vec<Formula>,
    pub goal: Formula,
    /// The untranslated pair is not classically provable within the bound,
    /// so there is nothing to respect and no outcome.
    pub vacuous: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<IntuitionisticOutcome>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationReport {
    pub spec: TranslationSpec,
    pub bound: u32,
    pub faithfulness: Vec<FaithfulnessItem>,
    pub respect: Vec<RespectItem>,
    pub summary: Summary,
}

impl TranslationReport {
    fn new(spec: &TranslationSpec, bound: u32) -> Self {
        TranslationReport { spec: spec.clone(), bound, faithfulness: vec![], respect: vec![], summary: Summary::default() }
    }

    fn resummarize(&mut self) {
        let mut s = Summary::default();
        for item in &self.faithfulness {
            match &item.outcome {
                ClassicalOutcome::Proved { .. } if item.certified => s.pass += 1,
                ClassicalOutcome::Unknown { .. } => s.unknown += 1,
                _ => s.fail += 1,
            }
        }
        for item in &self.respect {
            match &item.outcome {
                None => s.vacuous += 1,
                Some(IntuitionisticOutcome::Proved { .. }) if item.certified => s.pass += 1,
                Some(IntuitionisticOutcome::Unknown { .. }) => s.unknown += 1,
                Some(_) => s.fail += 1,
            }
        }
        self.summary = s;
    }

    /// Merges the items of `other`, which must be for the same spec.
    pub fn merge(mut self, other: TranslationReport) -> Self {
        self.faithfulness.extend(other.faithfulness);
        self.respect.extend(other.respect);
        self.resummarize();
        self
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0 && self.summary.unknown == 0
    }
}

/// Checks `CL ⊢ ¬F` for the parameterised translations.
fn confirm_hypothesis(spec: &TranslationSpec, bound: u32) -> Result<(), LabError> {
    let Some(f) = spec.param_f() else { return Ok(()) };
    let not_f = Formula::not(f.clone());
    match prove_classical(&not_f, bound) {
        ClassicalOutcome::Proved { certificate } if check_classical_cert(&not_f, &certificate) => Ok(()),
        other => Err(LabError::HypothesisUnconfirmed(format!("{not_f}: {}", other.label()))),
    }
}

/// `CL ⊢ A ↔ Aᵀ` for every corpus formula.
pub fn faithfulness_check(spec: &TranslationSpec, corpus: &[CorpusEntry], bound: u32) -> Result<TranslationReport, LabError> {
    confirm_hypothesis(spec, bound)?;
    let mut report = TranslationReport::new(spec, bound);
    report.faithfulness = corpus
        .par_iter()
        .map(|entry| {
            let formula = Formula::iff(entry.formula.clone(), spec.apply(&entry.formula));
            let outcome = prove_classical(&formula, bound);
            let certified = classical_certified(&formula, &outcome);
            FaithfulnessItem { name: entry.name.clone(), formula, outcome, certified }
        })
        .collect();
    report.resummarize();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisPair {
    pub name: String,
    pub gamma: Vec<Formula>,
    pub goal: Formula,
}

impl HypothesisPair {
    pub fn new(name: impl Into<String>, gamma: Vec<Formula>, goal: Formula) -> Self {
        HypothesisPair { name: name.into(), gamma, goal }
    }
}

/// `IL + Γᵀ ⊢ Aᵀ` for each pair; pairs without `CL + Γ ⊢ A` are flagged vacuous.
pub fn respect_check(spec: &TranslationSpec, pairs: &[HypothesisPair], bound: u32) -> TranslationReport {
    let mut report = TranslationReport::new(spec, bound);
    report.respect = pairs
        .par_iter()
        .map(|pair| {
            let vacuous = !prove_classical_hyp(&pair.gamma, &pair.goal, bound).is_proved();
            let gamma: Vec<Formula> = pair.gamma.iter().map(|g| spec.apply(g)).collect();
            let goal = spec.apply(&pair.goal);
            let outcome = (!vacuous).then(|| prove_il(&gamma, &goal, bound));
            let certified = outcome.as_ref().is_none_or(|o| check_outcome(&gamma, &goal, o));
            RespectItem { name: pair.name.clone(), gamma, goal, vacuous, outcome, certified }
        })
        .collect();
    report.resummarize();
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivItem {
    pub name: String,
    pub left: Formula,
    pub right: Formula,
    pub outcome: EquivOutcome,
    pub certified: bool,
}

fn equiv_item(name: &str, left: Formula, right: Formula, bound: u32) -> EquivItem {
    let outcome = il_equiv(&left, &right, bound);
    let certified = equiv_certified(&left, &right, &outcome);
    EquivItem { name: name.to_string(), left, right, outcome, certified }
}

/// `Aˢ¹ ⊣⊢ Aˢ²` in IL for each corpus formula.
pub fn pointwise_equiv_check(s1: &TranslationSpec, s2: &TranslationSpec, corpus: &[CorpusEntry], bound: u32) -> Vec<EquivItem> {
    corpus
        .par_iter()
        .map(|e| equiv_item(&e.name, s1.apply(&e.formula), s2.apply(&e.formula), bound))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorItem {
    pub name: String,
    pub classical: ClassicalOutcome,
    pub intuitionistic: IntuitionisticOutcome,
    pub agree: bool,
    pub certified: bool,
}

/// `CL ⊢ A` against `IL ⊢ T(A)`; with `T = ᴷ` on propositional input both sides are exact.
pub fn mirror_check(formulas: &[(String, Formula)], translation: impl Fn(&Formula) -> Formula + Sync, bound: u32) -> Vec<MirrorItem> {
    formulas
        .par_iter()
        .map(|(name, a)| {
            let classical = prove_classical(a, bound);
            let image = translation(a);
            let intuitionistic = prove_il(&[], &image, bound);
            let agree = classical.is_proved() == intuitionistic.is_proved()
                && !matches!(classical, ClassicalOutcome::Unknown { .. })
                && !intuitionistic.is_unknown();
            let certified = classical_certified(a, &classical) && check_outcome(&[], &image, &intuitionistic);
            MirrorItem { name: name.clone(), classical, intuitionistic, agree, certified }
        })
        .collect()
}

pub fn kolmogorov_mirror(corpus: &[CorpusEntry], bound: u32) -> Vec<MirrorItem> {
    let items: Vec<(String, Formula)> = corpus.iter().map(|e| (e.name.clone(), e.formula.clone())).collect();
    mirror_check(&items, kolmogorov, bound)
}

/// Glivenko: `CL ⊢ A` iff `IL ⊢ ¬¬A` for propositional `A`.
pub fn glivenko_check(formulas: &[Formula]) -> Vec<MirrorItem> {
    let items: Vec<(String, Formula)> = formulas.iter().enumerate().map(|(i, f)| (format!("g{i}"), f.clone())).collect();
    mirror_check(&items, |a| Formula::not_not(a.clone()), 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessItem {
    pub name: String,
    pub formula: Formula,
    pub outcome: IntuitionisticOutcome,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctnessReport {
    pub f: Formula,
    pub witness_atom: Formula,
    pub bound: u32,
    /// `CL ⊢ ¬F`.
    pub cl_side: ClassicalOutcome,
    pub cl_certified: bool,
    /// `¬F` followed by the three witnesses.
    pub witnesses: Vec<WitnessItem>,
    pub equivalence_facts: Vec<EquivItem>,
    /// `CL ⊢ ¬F` holds and no witness was proved.
    pub suitable: bool,
    pub note: String,
}

impl DistinctnessReport {
    /// Suitable, every witness exhausted its search, both reductions proved.
    pub fn passes(&self) -> bool {
        self.suitable
            && self.cl_certified
            && self.witnesses.iter().all(|w| w.outcome.is_unknown())
            && self.equivalence_facts.iter().all(|e| e.outcome.is_equivalent() && e.certified)
    }
}

const EXHAUSTION_NOTE: &str = "IL non-provability is reported as exhaustion of the bounded search (Unknown). \
No certificate is possible here: every finite Kripke frame forces the double negation of the \
double-negation shift, so no finite countermodel exists for the negation of the default F.";

/// The nullary witness atom: `P` unless `F` already uses a nullary `P`.
pub fn default_witness_atom(f: &Formula) -> Formula {
    let used: BTreeSet<String> = f.predicates().into_iter().filter(|(_, arity)| *arity == 0).map(|(p, _)| p).collect();
    if !used.contains("P") {
        return Formula::prop("P");
    }
    let mut taken = used;
    taken.insert("P".into());
    Formula::prop(fresh_name("P", &taken))
}

pub fn distinctness_suite(f: &TheoremInstanceF, bound: u32) -> DistinctnessReport {
    let p = default_witness_atom(f.formula());
    distinctness_suite_with_atom(f, &p, bound).expect("default witness atom is fresh")
}

pub fn distinctness_suite_with_atom(f: &TheoremInstanceF, p: &Formula, bound: u32) -> Result<DistinctnessReport, LabError> {
    let fx = f.formula();
    match p {
        Atom(name, args) if args.is_empty() && !fx.predicates().contains(&(name.clone(), 0)) => {}
        _ => return Err(LabError::BadWitnessAtom(p.to_string())),
    }
    let bound = bound.max(1);
    let not_f = Formula::not(fx.clone());
    let mut named = vec![("not_f", not_f.clone())];
    named.extend(distinctness_witnesses(fx, p));
    let reductions = [(named[1].1.clone(), "m_bot_implies_k_bot_iff_not_f"), (named[2].1.clone(), "n_bot_implies_k_bot_iff_not_f")];

    let ((cl_side, witnesses), equivalence_facts) = rayon::join(
        || {
            rayon::join(
                || prove_classical(&not_f, bound),
                || {
                    named
                        .par_iter()
                        .map(|(name, formula)| {
                            let outcome = prove_il(&[], formula, bound);
                            let certified = check_outcome(&[], formula, &outcome);
                            WitnessItem { name: name.to_string(), formula: formula.clone(), outcome, certified }
                        })
                        .collect::<Vec<_>>()
                },
            )
        },
        || {
            reductions
                .par_iter()
                .map(|(w, name)| equiv_item(name, w.clone(), not_f.clone(), bound))
                .collect::<Vec<_>>()
        },
    );
    let cl_certified = classical_certified(&not_f, &cl_side);
    let suitable = cl_side.is_proved() && cl_certified && !witnesses.iter().any(|w| w.outcome.is_proved());
    let note = if suitable {
        EXHAUSTION_NOTE.to_string()
    } else if !cl_side.is_proved() {
        format!("F is unsuitable: CL |- {not_f} was not confirmed ({})", cl_side.label())
    } else {
        let proved: Vec<&str> = witnesses.iter().filter(|w| w.outcome.is_proved()).map(|w| w.name.as_str()).collect();
        format!("F is unsuitable: IL proves {}", proved.join(", "))
    };
    Ok(DistinctnessReport { f: fx.clone(), witness_atom: p.clone(), bound, cl_side, cl_certified, witnesses, equivalence_facts, suitable, note })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictnessItem {
    pub name: String,
    pub formula: Formula,
    pub classical: ClassicalOutcome,
    pub countermodel: Option<(kripke::KripkeModel, kripke::WorldId)>,
    pub verified: bool,
}

/// Classical theorems refuted by small Kripke models.
pub fn strictness_check(formulas: &[(String, Formula)], max_worlds: usize) -> Vec<StrictnessItem> {
    formulas
        .par_iter()
        .map(|(name, a)| {
            let classical = prove_classical(a, 1);
            let countermodel = kripke::find_countermodel(a, max_worlds).ok().flatten();
            let verified = classical.is_proved()
                && countermodel.as_ref().is_some_and(|(m, w)| {
                    kripke::validate_model(m).is_empty() && force_closed(m, *w, a) == Ok(false)
                });
            StrictnessItem { name: name.clone(), formula: a.clone(), classical, countermodel, verified }
        })
        .collect()
}

/// Translations compared against Kolmogorov by `copy-check`.
pub fn classical_kind(kind: TranslationKind) -> bool {
    TranslationKind::CLASSICAL_FOUR.contains(&kind)
}

/// Hypothesis pairs exercised by `copy-check` besides the corpus theorems.
pub fn standard_hypothesis_pairs() -> Vec<HypothesisPair> {
    let f = |t: &str| crate::syntax::parse(t).expect("built-in formula parses");
    vec![
        HypothesisPair::new("modus_ponens", vec![f("P"), f("P -> Q")], f("Q")),
        HypothesisPair::new("double_negation_elim", vec![f("~~P")], f("P")),
        HypothesisPair::new("case_split", vec![f("P -> Q"), f("~P -> Q")], f("Q")),
        HypothesisPair::new("universal_instance", vec![f("forall x. P(x)")], f("P('a)")),
        HypothesisPair::new("existential_witness", vec![f("P('a)")], f("exists x. P(x)")),
        HypothesisPair::new("double_negation_shift", vec![f("forall x. ~~P(x)")], f("forall x. P(x)")),
        HypothesisPair::new("unrelated", vec![f("P")], f("Q")),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectationItem {
    pub name: String,
    pub logic: String,
    pub expected: bool,
    pub outcome: String,
    /// `Unknown` counts as consistent with an expected non-theorem.
    pub consistent: bool,
}

/// Compares the corpus `expected_cl` / `expected_il` annotations with the provers.
pub fn expectation_check(corpus: &[CorpusEntry], bound: u32) -> Vec<ExpectationItem> {
    let jobs: Vec<(&CorpusEntry, &str, bool)> = corpus
        .iter()
        .flat_map(|e| {
            let cl = e.expected_cl.map(|x| (e, "cl", x));
            let il = e.expected_il.map(|x| (e, "il", x));
            cl.into_iter().chain(il)
        })
        .collect();
    jobs.par_iter()
        .map(|(e, logic, expected)| {
            let (proved, unknown, label) = if *logic == "cl" {
                let o = prove_classical(&e.formula, bound);
                (o.is_proved(), matches!(o, ClassicalOutcome::Unknown { .. }), o.label())
            } else {
                let o = prove_il(&[], &e.formula, bound);
                (o.is_proved(), o.is_unknown(), o.label())
            };
            let consistent = proved == *expected || (unknown && !*expected);
            ExpectationItem { name: e.name.clone(), logic: logic.to_string(), expected: *expected, outcome: label.to_string(), consistent }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeItem {
    pub name: String,
    pub image: Formula,
    pub shape_ok: bool,
}

pub fn shape_check(spec: &TranslationSpec, corpus: &[CorpusEntry]) -> Vec<ShapeItem> {
    corpus
        .iter()
        .map(|e| {
            let image = spec.apply(&e.formula);
            let shape_ok = crate::translate::image_shape_check(spec, &image);
            ShapeItem { name: e.name.clone(), image, shape_ok }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointwiseGroup {
    pub against: TranslationKind,
    pub items: Vec<EquivItem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyCheckReport {
    pub translation: TranslationReport,
    pub pointwise: Vec<PointwiseGroup>,
    pub expectations: Vec<ExpectationItem>,
    pub shapes: Vec<ShapeItem>,
    pub passed: bool,
}

/// Faithfulness and respect for `spec`, pointwise comparison with the other
/// classical translations (or with Kolmogorov for the parameterised ones),
/// corpus expectations and image shapes.
///
/// Passing requires every faithfulness item proved and certified, no refuted
/// respect item, consistent expectations, no `NotEquivalent` among the
/// classical four, and the strict shape for Gödel–Gentzen. The shapes of
/// `VeeF` and `SubstF` images are reported but do not gate: their `Aᴷ` part
/// keeps `∨` and `∃`, so it lies in the negative fragment only modulo IL.
pub fn copy_check(spec: &TranslationSpec, corpus: &[CorpusEntry], bound: u32) -> Result<CopyCheckReport, LabError> {
    let faith = faithfulness_check(spec, corpus, bound)?;
    let mut pairs: Vec<HypothesisPair> =
        corpus.iter().map(|e| HypothesisPair::new(e.name.clone(), vec![], e.formula.clone())).collect();
    pairs.extend(standard_hypothesis_pairs().into_iter().map(|mut p| {
        p.name = format!("hyp:{}", p.name);
        p
    }));
    let translation = faith.merge(respect_check(spec, &pairs, bound));
    let kind = spec.kind();
    let others: Vec<TranslationKind> = if classical_kind(kind) {
        TranslationKind::CLASSICAL_FOUR.into_iter().filter(|k| *k != kind).collect()
    } else {
        vec![TranslationKind::Kolmogorov]
    };
    let pointwise: Vec<PointwiseGroup> = others
        .into_iter()
        .map(|against| PointwiseGroup { against, items: pointwise_equiv_check(spec, &TranslationSpec::plain(against), corpus, bound) })
        .collect();
    let expectations = expectation_check(corpus, bound);
    let shapes = shape_check(spec, corpus);
    let pointwise_ok = !classical_kind(kind)
        || pointwise.iter().flat_map(|g| &g.items).all(|i| i.certified && !matches!(i.outcome, EquivOutcome::NotEquivalent { .. }));
    let shapes_ok = kind != TranslationKind::GoedelGentzen || shapes.iter().all(|s| s.shape_ok);
    let respect_ok = translation.respect.iter().all(|r| r.certified && !matches!(r.outcome, Some(IntuitionisticOutcome::Refuted { .. })));
    let faith_ok = translation.faithfulness.iter().all(|f| f.certified && f.outcome.is_proved());
    let passed = faith_ok && respect_ok && pointwise_ok && shapes_ok && expectations.iter().all(|e| e.consistent);
    Ok(CopyCheckReport { translation, pointwise, expectations, shapes, passed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlivenkoReport {
    pub seed: u64,
    pub max_connectives: usize,
    pub atoms: usize,
    pub items: Vec<MirrorItem>,
    pub agreement: usize,
    pub classical_theorems: usize,
}

impl GlivenkoReport {
    pub fn passed(&self) -> bool {
        self.agreement == self.items.len() && self.items.iter().all(|i| i.certified)
    }
}

pub fn glivenko_suite(seed: u64, count: usize, max_connectives: usize, atoms: usize) -> GlivenkoReport {
    let formulas = crate::random::sample(seed, count, max_connectives, atoms);
    let items = glivenko_check(&formulas);
    let agreement = items.iter().filter(|i| i.agree).count();
    let classical_theorems = items.iter().filter(|i| i.classical.is_proved()).count();
    GlivenkoReport { seed, max_connectives, atoms, items, agreement, classical_theorems }
}
