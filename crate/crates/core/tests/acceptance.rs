//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use copylab::classical::{check_classical_cert, prove_classical, ClassicalOutcome};
use copylab::intuitionistic::{check_derivation, il_equiv, EquivOutcome, IntuitionisticOutcome};
use copylab::kripke::{force_closed, validate_model, KripkeModel};
use copylab::lab::{distinctness_suite, glivenko_suite, kolmogorov_mirror, pointwise_equiv_check, strictness_check, DistinctnessReport};
use copylab::random::DEFAULT_SEED;
use copylab::translate::{goedel_gentzen, image_shape_check, invert_bottom_substitution, TranslationKind, TranslationSpec};
use copylab::{default_f, parse, Formula, TheoremInstanceF};
use common::{first_order, oracle_refutes, propositional, shipped_corpus, tautology, truth};

/// Independent re-checks of every certificate seen during the run.
#[derive(Default)]
struct Tally {
    proved: usize,
    proved_ok: usize,
    refuted: usize,
    refuted_ok: usize,
    failures: Vec<String>,
}

impl Tally {
    fn classical(&mut self, what: &str, a: &Formula, o: &ClassicalOutcome) {
        match o {
            ClassicalOutcome::Proved { certificate } => {
                self.proved += 1;
                self.note(check_classical_cert(a, certificate), true, what);
            }
            ClassicalOutcome::Refuted { valuation } => {
                self.refuted += 1;
                let ok = a.is_quantifier_free()
                    && common::atom_names(a).iter().all(|p| valuation.contains_key(p))
                    && !truth(a, valuation);
                self.note(ok, false, what);
            }
            ClassicalOutcome::Unknown { .. } => {}
        }
    }

    fn refutation(&mut self, what: &str, m: &KripkeModel, w: usize, gamma: &[Formula], goal: &Formula) {
        self.refuted += 1;
        let mut ok = validate_model(m).is_empty()
            && gamma.iter().all(|g| force_closed(m, w, g) == Ok(true))
            && force_closed(m, w, goal) == Ok(false);
        if gamma.is_empty() && goal.is_quantifier_free() {
            ok &= oracle_refutes(m, w, goal);
        }
        self.note(ok, false, what);
    }

    fn intuitionistic(&mut self, what: &str, gamma: &[Formula], a: &Formula, o: &IntuitionisticOutcome) {
        match o {
            IntuitionisticOutcome::Proved { derivation } => {
                self.proved += 1;
                let root = &derivation.sequent;
                let ok = root.succedent.alpha_eq(a)
                    && root.antecedent.iter().all(|h| gamma.iter().any(|g| g.alpha_eq(h)))
                    && check_derivation(derivation);
                self.note(ok, true, what);
            }
            IntuitionisticOutcome::Refuted { model, world } => self.refutation(what, model, *world, gamma, a),
            IntuitionisticOutcome::Unknown { .. } => {}
        }
    }

    fn equiv(&mut self, what: &str, a: &Formula, b: &Formula, o: &EquivOutcome) {
        match o {
            EquivOutcome::Equivalent { forward, backward } => {
                for (d, goal) in [(forward, Formula::imp(a.clone(), b.clone())), (backward, Formula::imp(b.clone(), a.clone()))] {
                    self.intuitionistic(what, &[], &goal, &IntuitionisticOutcome::Proved { derivation: d.clone() });
                }
            }
            EquivOutcome::NotEquivalent { direction, countermodel } => {
                let goal = match direction {
                    copylab::intuitionistic::Direction::LeftToRight => Formula::imp(a.clone(), b.clone()),
                    copylab::intuitionistic::Direction::RightToLeft => Formula::imp(b.clone(), a.clone()),
                };
                match countermodel {
                    Some((m, w)) => self.refutation(what, m, *w, &[], &goal),
                    None if !goal.is_quantifier_free() => {}
                    None => {
                        self.refuted += 1;
                        self.note(false, false, what);
                    }
                }
            }
            EquivOutcome::Unknown { .. } => {}
        }
    }

    fn note(&mut self, ok: bool, proved: bool, what: &str) {
        if ok {
            if proved {
                self.proved_ok += 1;
            } else {
                self.refuted_ok += 1;
            }
        } else {
            self.failures.push(what.to_string());
        }
    }
}

struct Line {
    id: &'static str,
    pass: bool,
    detail: String,
    sub: Vec<Line>,
}

fn line(id: &'static str, pass: bool, detail: String) -> Line {
    Line { id, pass, detail, sub: Vec::new() }
}

fn spec(kind: TranslationKind) -> TranslationSpec {
    TranslationSpec::new(kind, kind.needs_parameter().then(default_f)).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// No `∨`, no `∃`, and every atom other than `⊥` under a double negation.
fn strict_nf(f: &Formula) -> bool {
    if let Some(Formula::Atom(..)) = f.as_negation().and_then(Formula::as_negation) {
        return true;
    }
    match f {
        Formula::Bottom => true,
        Formula::Atom(..) | Formula::Or(..) | Formula::Exists(..) => false,
        Formula::And(a, b) | Formula::Imp(a, b) => strict_nf(a) && strict_nf(b),
        Formula::Forall(_, a) => strict_nf(a),
    }
}

fn faithfulness(tally: &mut Tally) -> Line {
    let corpus = shipped_corpus();
    let (np, nf) = (propositional(&corpus).len(), first_order(&corpus).len());
    let mut bad = Vec::new();
    let (mut worst_prop, mut worst_fo) = (Duration::ZERO, Duration::ZERO);
    for kind in TranslationKind::ALL {
        let s = spec(kind);
        for e in &corpus {
            let iff = Formula::iff(e.formula.clone(), s.apply(&e.formula));
            let start = Instant::now();
            let o = prove_classical(&iff, 8);
            let took = start.elapsed();
            tally.classical(&format!("1 {kind} {}", e.name), &iff, &o);
            let limit = if e.formula.is_quantifier_free() {
                worst_prop = worst_prop.max(took);
                Duration::from_secs(1)
            } else {
                worst_fo = worst_fo.max(took);
                Duration::from_secs(10)
            };
            if !o.is_proved() || took >= limit {
                bad.push(format!("{kind}/{} {} in {}", e.name, o.label(), secs(took)));
            }
        }
    }
    let sized = corpus.len() >= 30 && np >= 20 && nf >= 10;
    line(
        "1",
        sized && bad.is_empty(),
        format!(
            "faithfulness: {} formulas ({np} propositional, {nf} first-order) x 6 translations at bound 8, {} not proved in time; slowest propositional {}, first-order {}{}",
            corpus.len(),
            bad.len(),
            secs(worst_prop),
            secs(worst_fo),
            if bad.is_empty() { String::new() } else { format!(" [{}]", bad.join(", ")) }
        ),
    )
}

fn copy_equivalence(tally: &mut Tally) -> Line {
    let corpus = propositional(&shipped_corpus());
    let items = kolmogorov_mirror(&corpus, 10);
    let mut agree = 0;
    for (e, item) in corpus.iter().zip(&items) {
        tally.classical(&format!("2 {}", e.name), &e.formula, &item.classical);
        tally.intuitionistic(&format!("2 {}", e.name), &[], &copylab::translate::kolmogorov(&e.formula), &item.intuitionistic);
        let exact = !item.intuitionistic.is_unknown() && !matches!(item.classical, ClassicalOutcome::Unknown { .. });
        if exact && item.classical.is_proved() == item.intuitionistic.is_proved() && item.classical.is_proved() == tautology(&e.formula) {
            agree += 1;
        }
    }
    line("2", agree == corpus.len(), format!("copy equivalence: CL |- A iff IL |- K(A) on {agree}/{} propositional formulas", corpus.len()))
}

fn glivenko(tally: &mut Tally) -> Line {
    let start = Instant::now();
    let report = glivenko_suite(DEFAULT_SEED, 200, 12, 6);
    let took = start.elapsed();
    let formulas = copylab::random::sample(DEFAULT_SEED, 200, 12, 6);
    let mut agree = 0;
    for (i, (a, item)) in formulas.iter().zip(&report.items).enumerate() {
        tally.classical(&format!("3 g{i}"), a, &item.classical);
        tally.intuitionistic(&format!("3 g{i}"), &[], &Formula::not_not(a.clone()), &item.intuitionistic);
        let within = copylab::random::connective_count(a) <= 12 && common::atom_names(a).len() <= 6;
        if within && item.classical.is_proved() == item.intuitionistic.is_proved() && item.classical.is_proved() == tautology(a) {
            agree += 1;
        }
    }
    line(
        "3",
        agree == 200 && report.items.len() == 200 && took < Duration::from_secs(60),
        format!(
            "glivenko: {agree}/200 agree (seed {DEFAULT_SEED}, {} classical theorems) in {}",
            report.classical_theorems,
            secs(took)
        ),
    )
}

fn same_copy(tally: &mut Tally) -> Line {
    let corpus = shipped_corpus();
    let (prop, fo) = (propositional(&corpus), first_order(&corpus));
    let four = TranslationKind::CLASSICAL_FOUR;
    let mut counts: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    let mut total: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, &k1) in four.iter().enumerate() {
        for &k2 in &four[i + 1..] {
            for (part, entries) in [("prop", &prop), ("fo", &fo)] {
                let items = pointwise_equiv_check(&spec(k1), &spec(k2), entries, 8);
                for item in &items {
                    tally.equiv(&format!("4 {k1}/{k2} {}", item.name), &item.left, &item.right, &item.outcome);
                    *counts.entry((part, item.outcome.label())).or_default() += 1;
                }
                *total.entry(part).or_default() += items.len();
            }
        }
    }
    let get = |part, label| counts.get(&(part, label)).copied().unwrap_or(0);
    let (pe, pt) = (get("prop", "Equivalent"), total["prop"]);
    let (fe, fu, fn_, ft) = (get("fo", "Equivalent"), get("fo", "Unknown"), get("fo", "NotEquivalent"), total["fo"]);
    let pass = pe == pt && fn_ == 0 && fe + fu == ft && fe as f64 >= 0.95 * ft as f64;
    line(
        "4",
        pass,
        format!("same copy: propositional {pe}/{pt} Equivalent; first-order {fe}/{ft} Equivalent, {fu} Unknown, {fn_} NotEquivalent"),
    )
}

fn theorem(tally: &mut Tally) -> Line {
    let start = Instant::now();
    let not_f = Formula::not(default_f());
    let cl = prove_classical(&not_f, 10);
    let cl_time = start.elapsed();
    tally.classical("5 not_f", &not_f, &cl);
    let cl_ok = matches!(&cl, ClassicalOutcome::Proved { certificate } if check_classical_cert(&not_f, certificate));

    let report = distinctness_suite(&TheoremInstanceF::default(), 10);
    let names: Vec<&str> = report.witnesses.iter().map(|w| w.name.as_str()).collect();
    let all_unknown = names == ["not_f", "m_bot_implies_k_bot", "n_bot_implies_k_bot", "n_p_implies_m_p"]
        && report.witnesses.iter().all(|w| w.outcome == IntuitionisticOutcome::Unknown { bound: 10 });
    let equivalent = report.equivalence_facts.len() == 2
        && report.equivalence_facts.iter().all(|e| e.outcome.is_equivalent() && e.right.alpha_eq(&not_f));
    for e in &report.equivalence_facts {
        tally.equiv(&format!("5 {}", e.name), &e.left, &e.right, &e.outcome);
    }
    tally.classical("5 report cl_side", &not_f, &report.cl_side);

    let cli = Command::new(env!("CARGO_BIN_EXE_copylab")).args(["theorem", "--bound", "10", "--format", "json"]).output().unwrap();
    let via_cli: Option<DistinctnessReport> = serde_json::from_slice(&cli.stdout).ok();
    let cli_ok = cli.status.code() == Some(0) && via_cli.as_ref() == Some(&report) && report.note.contains("no finite countermodel");
    let took = start.elapsed();
    line(
        "5",
        cl_ok && cl_time < Duration::from_secs(5) && all_unknown && equivalent && cli_ok && took < Duration::from_secs(120),
        format!(
            "theorem: CL |- ~F {} in {}; IL witnesses {}; reductions {}; `theorem --bound 10` exit {}; total {}",
            if cl_ok { "Proved, certificate checked" } else { "NOT certified" },
            secs(cl_time),
            report.witnesses.iter().map(|w| w.outcome.label()).collect::<Vec<_>>().join("/"),
            report.equivalence_facts.iter().map(|e| e.outcome.label()).collect::<Vec<_>>().join("/"),
            cli.status.code().unwrap_or(-1),
            secs(took)
        ),
    )
}

fn image_shapes(tally: &mut Tally) -> Line {
    let corpus = shipped_corpus();
    let f = default_f();
    let (gg, vee, subst) = (spec(TranslationKind::GoedelGentzen), spec(TranslationKind::VeeF), spec(TranslationKind::SubstF));
    let n = corpus.len();
    let (mut a, mut b, mut c, mut agree_lib) = (0, 0, 0, true);
    let (mut b_bad, mut c_bad) = (Vec::new(), Vec::new());
    let (mut modulo, mut modulo_unknown, mut modulo_bad) = (0, 0, 0);
    for e in &corpus {
        let g = gg.apply(&e.formula);
        let ok_a = strict_nf(&g);
        let ok_b = match vee.apply(&e.formula) {
            Formula::Or(x, tail) => tail.alpha_eq(&f) && strict_nf(&x),
            _ => false,
        };
        let inverted = invert_bottom_substitution(&subst.apply(&e.formula), &f);
        let ok_c = strict_nf(&inverted);
        agree_lib &= image_shape_check(&gg, &g) == ok_a
            && image_shape_check(&vee, &vee.apply(&e.formula)) == ok_b
            && image_shape_check(&subst, &subst.apply(&e.formula)) == ok_c;
        a += ok_a as usize;
        b += ok_b as usize;
        c += ok_c as usize;
        if !ok_b {
            b_bad.push(e.name.as_str());
        }
        if !ok_c {
            c_bad.push(e.name.as_str());
        }
        // Modulo IL: the C part and the inverted image each match the strict-NF image of the same A.
        let Formula::Or(x, _) = vee.apply(&e.formula) else { unreachable!() };
        let target = goedel_gentzen(&e.formula);
        let outcomes = [il_equiv(&x, &target, 8), il_equiv(&inverted, &target, 8)];
        for (left, o) in [&*x, &inverted].into_iter().zip(&outcomes) {
            tally.equiv(&format!("7 {}", e.name), left, &target, o);
        }
        if outcomes.iter().all(EquivOutcome::is_equivalent) {
            modulo += 1;
        } else if outcomes.iter().any(|o| matches!(o, EquivOutcome::NotEquivalent { .. })) {
            modulo_bad += 1;
        } else {
            modulo_unknown += 1;
        }
    }
    let list = |v: &[&str]| if v.is_empty() { String::new() } else { format!(" (fails: {})", v.join(", ")) };
    let mut out = line(
        "7",
        a == n && b == n && c == n,
        format!("image shapes: GG {a}/{n}, VeeF {b}/{n}, SubstF {c}/{n} strict negative fragment"),
    );
    out.sub = vec![
        line("7a", a == n, format!("Goedel-Gentzen image in strict NF: {a}/{n}")),
        line("7b", b == n, format!("VeeF image is C \\/ F with C in strict NF: {b}/{n}{}", list(&b_bad))),
        line("7c", c == n, format!("SubstF image inverts to strict NF: {c}/{n}{}", list(&c_bad))),
        line(
            "7+",
            modulo_bad == 0 && agree_lib,
            format!(
                "modulo IL: C and inverted SubstF image IL-equivalent to the GG image for {modulo}/{n} ({modulo_unknown} Unknown, {modulo_bad} NotEquivalent); library shape check agrees: {agree_lib}"
            ),
        ),
    ];
    out
}

fn strictness(tally: &mut Tally) -> Line {
    let formulas: Vec<(String, Formula)> = [("lem", "P \\/ ~P"), ("dne", "~~P -> P"), ("peirce", "((P -> Q) -> P) -> P")]
        .iter()
        .map(|(n, t)| (n.to_string(), parse(t).unwrap()))
        .collect();
    let mut parts = Vec::new();
    let mut pass = true;
    for pair in &formulas {
        let start = Instant::now();
        let item = strictness_check(std::slice::from_ref(pair), 2).remove(0);
        let took = start.elapsed();
        tally.classical(&format!("8 {}", pair.0), &pair.1, &item.classical);
        let worlds = match &item.countermodel {
            Some((m, w)) => {
                tally.refutation(&format!("8 {}", pair.0), m, *w, &[], &pair.1);
                m.worlds.len()
            }
            None => 0,
        };
        let ok = item.verified && (1..=2).contains(&worlds) && item.classical.is_proved() && took < Duration::from_secs(1);
        pass &= ok;
        parts.push(format!("{} {worlds} worlds in {}", pair.0, secs(took)));
    }
    line("8", pass, format!("strictness: {}", parts.join(", ")))
}

fn main() {
    let start = Instant::now();
    let mut tally = Tally::default();
    let mut lines = vec![
        faithfulness(&mut tally),
        copy_equivalence(&mut tally),
        glivenko(&mut tally),
        same_copy(&mut tally),
        theorem(&mut tally),
    ];
    let shapes = image_shapes(&mut tally);
    let strict = strictness(&mut tally);
    let sound = tally.failures.is_empty() && tally.proved == tally.proved_ok && tally.refuted == tally.refuted_ok;
    lines.push(line(
        "6",
        sound,
        format!(
            "certificates: {}/{} proofs and {}/{} refutations re-checked{}",
            tally.proved_ok,
            tally.proved,
            tally.refuted_ok,
            tally.refuted,
            if tally.failures.is_empty() { String::new() } else { format!(" [rejected: {}]", tally.failures.join(", ")) }
        ),
    ));
    lines.push(shapes);
    lines.push(strict);
    let took = start.elapsed();
    lines.push(line("9", took < Duration::from_secs(300), format!("wall clock: acceptance run {} (limit 300s)", secs(took))));
    lines.sort_by_key(|l| l.id.parse::<u32>().unwrap_or(0));

    let mut failed = 0;
    for l in &lines {
        println!("{} criterion {}: {}", if l.pass { "PASS" } else { "FAIL" }, l.id, l.detail);
        for s in &l.sub {
            println!("    {} {}: {}", if s.pass { "PASS" } else { "FAIL" }, s.id, s.detail);
        }
        failed += !l.pass as usize;
    }
    println!("{} of {} criteria passed", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
