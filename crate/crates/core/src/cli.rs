//! Command-line front end. `run` does all the work and returns the rendered
//! output, so the binary is a thin wrapper.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::classical::{prove_classical_hyp, ClassicalOutcome, TableauNode};
use crate::corpus::load_corpus;
use crate::formula::{Formula, TheoremInstanceF};
use crate::intuitionistic::{check_outcome, prove_il, Derivation, EquivOutcome, IntuitionisticOutcome};
use crate::kripke::{self, KripkeModel, WorldId};
use crate::lab::{self, CopyCheckReport, DistinctnessReport, EquivItem, GlivenkoReport};
use crate::random::DEFAULT_SEED;
use crate::syntax::parse;
use crate::translate::{TranslationKind, TranslationSpec};
use crate::classical::fold_hypotheses;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "copylab", version, about = "Negative translations, provers and Kripke countermodels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Logic {
    Cl,
    Il,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Bound for first-order search
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub bound: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the translation of a formula
    Translate {
        formula: String,
        #[arg(long, value_enum, default_value_t = TranslationKind::Kolmogorov)]
        kind: TranslationKind,
        /// Parameter F for vee-f and subst-f (default: the negated double-negation shift)
        #[arg(long)]
        f_formula: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Prove a formula classically or intuitionistically
    Prove {
        formula: String,
        #[arg(long, value_enum, default_value_t = Logic::Il)]
        logic: Logic,
        /// Hypothesis (repeatable)
        #[arg(long = "hyp")]
        hyps: Vec<String>,
        /// Print the derivation, tableau or countermodel
        #[arg(long)]
        emit_cert: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Search for a Kripke countermodel to a propositional formula
    Countermodel {
        formula: String,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=kripke::MAX_ENUMERATED_WORLDS as u64))]
        max_worlds: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check a translation against a corpus
    CopyCheck {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum, default_value_t = TranslationKind::Kolmogorov)]
        kind: TranslationKind,
        #[arg(long)]
        f_formula: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduce the distinctness of the K, M and N copies
    Theorem {
        #[arg(long)]
        f_formula: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Glivenko's theorem on random propositional formulas
    Glivenko {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn suite(passed: bool, stdout: String) -> Self {
        Output { code: if passed { EXIT_OK } else { EXIT_FAILURE }, stdout, stderr: String::new() }
    }

    fn usage(message: impl std::fmt::Display) -> Self {
        let mut stderr = format!("error: {message}\n");
        stderr.push_str("hint: run `copylab --help` for usage\n");
        Output { code: EXIT_USAGE, stdout: String::new(), stderr }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let rendered = e.render().to_string();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Output::ok(rendered),
                _ => Output { code: EXIT_USAGE, stdout: String::new(), stderr: rendered },
            }
        }
    }
}

fn formula_arg(text: &str) -> Result<Formula, Output> {
    parse(text).map_err(|e| Output::usage(format!("in `{text}`: {e}")))
}

fn f_arg(text: Option<&str>) -> Result<TheoremInstanceF, Output> {
    match text {
        None => Ok(TheoremInstanceF::default()),
        Some(t) => TheoremInstanceF::new(formula_arg(t)?).map_err(Output::usage),
    }
}

fn spec_arg(kind: TranslationKind, f: Option<&str>) -> Result<TranslationSpec, Output> {
    if f.is_some() && !kind.needs_parameter() {
        return Err(Output::usage(format!("--f-formula only applies to vee-f and subst-f, not {kind}")));
    }
    if !kind.needs_parameter() {
        return Ok(TranslationSpec::plain(kind));
    }
    let f = f_arg(f)?;
    TranslationSpec::with_f(kind, f.formula()).map_err(Output::usage)
}

fn no_dot(format: Format, command: &str) -> Result<(), Output> {
    if format == Format::Dot {
        return Err(Output::usage(format!("--format dot is not available for `{command}`")));
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn execute(command: Command) -> Output {
    match command_output(command) {
        Ok(out) | Err(out) => out,
    }
}

fn command_output(command: Command) -> Result<Output, Output> {
    Ok(match command {
        Command::Translate { formula, kind, f_formula, format } => {
            no_dot(format, "translate")?;
            let spec = spec_arg(kind, f_formula.as_deref())?;
            let a = formula_arg(&formula)?;
            let image = spec.apply(&a);
            match format {
                Format::Json => Output::ok(json(&TranslateReport { spec, input: a, output: image })),
                _ => Output::ok(format!("{image}\n")),
            }
        }
        Command::Prove { formula, logic, hyps, emit_cert, common } => {
            let a = formula_arg(&formula)?;
            let gamma = hyps.iter().map(|h| formula_arg(h)).collect::<Result<Vec<_>, _>>()?;
            prove_command(logic, gamma, a, emit_cert, &common)?
        }
        Command::Countermodel { formula, max_worlds, format } => {
            let a = formula_arg(&formula)?;
            let found = kripke::find_countermodel(&a, max_worlds as usize).map_err(Output::usage)?;
            let report = CountermodelReport { formula: a, max_worlds: max_worlds as usize, countermodel: found };
            match (format, &report.countermodel) {
                (Format::Json, _) => Output::ok(json(&report)),
                (Format::Dot, Some((m, w))) => Output::ok(kripke::to_dot(m, Some(*w))),
                (_, None) => Output::ok(format!("none up to {max_worlds} worlds\n")),
                (Format::Text, Some((m, w))) => Output::ok(render_model(m, *w)),
            }
        }
        Command::CopyCheck { corpus, kind, f_formula, common } => {
            no_dot(common.format, "copy-check")?;
            let spec = spec_arg(kind, f_formula.as_deref())?;
            let entries = load_corpus(&corpus).map_err(Output::usage)?;
            let report = lab::copy_check(&spec, &entries, common.bound).map_err(|e| Output {
                code: EXIT_FAILURE,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            })?;
            let text = match common.format {
                Format::Json => json(&report),
                _ => render_copy_check(&report),
            };
            Output::suite(report.passed, text)
        }
        Command::Theorem { f_formula, common } => {
            no_dot(common.format, "theorem")?;
            let f = f_arg(f_formula.as_deref())?;
            let report = lab::distinctness_suite(&f, common.bound);
            let text = match common.format {
                Format::Json => json(&report),
                _ => render_theorem(&report),
            };
            Output::suite(report.passes(), text)
        }
        Command::Glivenko { seed, count, format } => {
            no_dot(format, "glivenko")?;
            let report = lab::glivenko_suite(seed, count, 12, 6);
            let text = match format {
                Format::Json => json(&report),
                _ => render_glivenko(&report),
            };
            Output::suite(report.passed(), text)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslateReport {
    pub spec: TranslationSpec,
    pub input: Formula,
    pub output: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountermodelReport {
    pub formula: Formula,
    pub max_worlds: usize,
    pub countermodel: Option<(KripkeModel, WorldId)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProveOutcome {
    Classical(ClassicalOutcome),
    Intuitionistic(IntuitionisticOutcome),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProveReport {
    pub logic: Logic,
    pub hypotheses: Vec<Formula>,
    pub formula: Formula,
    pub bound: u32,
    pub verdict: String,
    pub certified: bool,
    /// Only with `--emit-cert`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ProveOutcome>,
}

fn prove_command(logic: Logic, gamma: Vec<Formula>, a: Formula, emit_cert: bool, common: &Common) -> Result<Output, Output> {
    let bound = common.bound;
    let (outcome, certified) = match logic {
        Logic::Cl => {
            let o = prove_classical_hyp(&gamma, &a, bound);
            let ok = lab::classical_certified(&fold_hypotheses(&gamma, &a), &o);
            (ProveOutcome::Classical(o), ok)
        }
        Logic::Il => {
            let o = prove_il(&gamma, &a, bound);
            let ok = check_outcome(&gamma, &a, &o);
            (ProveOutcome::Intuitionistic(o), ok)
        }
    };
    let verdict = match &outcome {
        ProveOutcome::Classical(o) => o.label(),
        ProveOutcome::Intuitionistic(o) => o.label(),
    };
    if common.format == Format::Dot {
        return match &outcome {
            ProveOutcome::Intuitionistic(IntuitionisticOutcome::Refuted { model, world }) => {
                Ok(Output::ok(kripke::to_dot(model, Some(*world))))
            }
            _ => Err(Output::usage(format!("--format dot needs an intuitionistic countermodel; the outcome was {verdict}"))),
        };
    }
    let report = ProveReport {
        logic,
        hypotheses: gamma,
        formula: a,
        bound,
        verdict: verdict.to_string(),
        certified,
        certificate: emit_cert.then(|| outcome.clone()),
    };
    if common.format == Format::Json {
        return Ok(Output::ok(json(&report)));
    }
    let mut out = String::new();
    let hyps: Vec<String> = report.hypotheses.iter().map(Formula::to_string).collect();
    let turnstile = if hyps.is_empty() { String::new() } else { format!("{} ", hyps.join(", ")) };
    let _ = writeln!(out, "{} {turnstile}|- {}", if logic == Logic::Cl { "CL" } else { "IL" }, report.formula);
    let detail = match &outcome {
        ProveOutcome::Classical(ClassicalOutcome::Unknown { bound }) | ProveOutcome::Intuitionistic(IntuitionisticOutcome::Unknown { bound }) => {
            format!("Unknown (search exhausted at bound {bound})")
        }
        _ => format!("{verdict} (certificate {})", if certified { "checked" } else { "REJECTED" }),
    };
    let _ = writeln!(out, "{detail}");
    if emit_cert {
        match &outcome {
            ProveOutcome::Classical(ClassicalOutcome::Proved { certificate }) => render_tableau(&mut out, &certificate.tree, 0),
            ProveOutcome::Classical(ClassicalOutcome::Refuted { valuation }) => {
                for (atom, value) in valuation {
                    let _ = writeln!(out, "  {atom} = {value}");
                }
            }
            ProveOutcome::Intuitionistic(IntuitionisticOutcome::Proved { derivation }) => render_derivation(&mut out, derivation, 0),
            ProveOutcome::Intuitionistic(IntuitionisticOutcome::Refuted { model, world }) => out.push_str(&render_model(model, *world)),
            _ => {}
        }
    }
    Ok(Output::ok(out))
}

fn render_tableau(out: &mut String, node: &TableauNode, depth: usize) {
    let term = node.term.as_ref().map(|t| format!(" [{t}]")).unwrap_or_default();
    let rule = serde_json::to_value(node.rule).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    let _ = writeln!(out, "{:indent$}{rule}: {:?} {}{term}", "", node.principal.sign, node.principal.formula, indent = 2 * depth + 2);
    for child in &node.children {
        render_tableau(out, child, depth + 1);
    }
}

fn render_derivation(out: &mut String, d: &Derivation, depth: usize) {
    let rule = serde_json::to_value(d.rule).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    let term = d.term.as_ref().map(|t| format!(" [{t}]")).unwrap_or_default();
    let _ = writeln!(out, "{:indent$}{rule}{term}: {}", "", d.sequent, indent = 2 * depth + 2);
    for p in &d.premises {
        render_derivation(out, p, depth + 1);
    }
}

pub fn render_model(m: &KripkeModel, root: WorldId) -> String {
    let mut out = String::new();
    let edges: Vec<String> = m.hasse_edges().iter().map(|(a, b)| format!("{a}<{b}")).collect();
    let _ = writeln!(out, "Kripke model, {} worlds, refuting at world {root}", m.worlds.len());
    let _ = writeln!(out, "  order: {}", if edges.is_empty() { "-".to_string() } else { edges.join(" ") });
    for &w in &m.worlds {
        let atoms: Vec<String> = m.atoms_at(w).iter().map(|a| a.to_string()).collect();
        let domain: Vec<&str> = m.domain.get(&w).map(|d| d.iter().map(String::as_str).collect()).unwrap_or_default();
        let domain = if domain.is_empty() { String::new() } else { format!("  domain {{{}}}", domain.join(", ")) };
        let _ = writeln!(out, "  world {w}: {{{}}}{domain}", atoms.join(", "));
    }
    out
}

fn pad(s: &str, width: usize) -> String {
    format!("{s:<width$}")
}

fn equiv_label(e: &EquivItem) -> String {
    let mut label = match &e.outcome {
        EquivOutcome::Unknown { bound } => format!("Unknown({bound})"),
        other => other.label().to_string(),
    };
    if !e.certified {
        label.push_str(" REJECTED");
    }
    label
}

fn render_copy_check(r: &CopyCheckReport) -> String {
    let mut out = String::new();
    let t = &r.translation;
    let param = t.spec.param_f().map(|f| format!(" with F = {f}")).unwrap_or_default();
    let _ = writeln!(out, "translation {}{param}, bound {}", t.spec.kind(), t.bound);
    let width = t.faithfulness.iter().map(|i| i.name.len()).chain(t.respect.iter().map(|i| i.name.len())).max().unwrap_or(4).max(4);
    let _ = writeln!(out, "\nfaithfulness: CL |- A <-> A^T");
    for i in &t.faithfulness {
        let cert = if i.certified { "" } else { " REJECTED" };
        let _ = writeln!(out, "  {} {}{cert}", pad(&i.name, width), i.outcome.label());
    }
    let _ = writeln!(out, "\nrespect: CL + G |- A  =>  IL + G^T |- A^T");
    for i in &t.respect {
        let label = match &i.outcome {
            None => "vacuous".to_string(),
            Some(IntuitionisticOutcome::Unknown { bound }) => format!("Unknown({bound})"),
            Some(o) => format!("{}{}", o.label(), if i.certified { "" } else { " REJECTED" }),
        };
        let _ = writeln!(out, "  {} {label}", pad(&i.name, width));
    }
    for g in &r.pointwise {
        let _ = writeln!(out, "\npointwise IL equivalence with {}", g.against);
        for i in &g.items {
            let _ = writeln!(out, "  {} {}", pad(&i.name, width), equiv_label(i));
        }
    }
    let bad: Vec<&str> = r.expectations.iter().filter(|e| !e.consistent).map(|e| e.name.as_str()).collect();
    let _ = writeln!(out, "\nexpectations: {}/{} consistent{}", r.expectations.len() - bad.len(), r.expectations.len(),
        if bad.is_empty() { String::new() } else { format!(" (mismatch: {})", bad.join(", ")) });
    let shaped = r.shapes.iter().filter(|s| s.shape_ok).count();
    let _ = writeln!(out, "image shape: {shaped}/{} literal matches", r.shapes.len());
    let s = &t.summary;
    let _ = writeln!(out, "summary: {} pass, {} fail, {} unknown, {} vacuous", s.pass, s.fail, s.unknown, s.vacuous);
    let _ = writeln!(out, "result: {}", if r.passed { "PASS" } else { "FAIL" });
    out
}

fn render_theorem(r: &DistinctnessReport) -> String {
    let mut out = String::new();
    let not_f = Formula::not(r.f.clone());
    let _ = writeln!(out, "F = {}", r.f);
    let _ = writeln!(out, "witness atom {}, bound {}", r.witness_atom, r.bound);
    let cert = if r.cl_certified { "certificate checked" } else { "certificate REJECTED" };
    let _ = writeln!(out, "\nCL |- {not_f}: {} ({cert})", r.cl_side.label());
    let width = r.witnesses.iter().map(|w| w.name.len()).chain(r.equivalence_facts.iter().map(|e| e.name.len())).max().unwrap_or(0);
    let _ = writeln!(out, "\nIL search");
    for w in &r.witnesses {
        let label = match &w.outcome {
            IntuitionisticOutcome::Unknown { bound } => format!("Unknown({bound})"),
            o => format!("{}{}", o.label(), if w.certified { "" } else { " REJECTED" }),
        };
        let _ = writeln!(out, "  {} {} {}", pad(&w.name, width), pad(&label, 12), w.formula);
    }
    let _ = writeln!(out, "\nIL equivalences");
    for e in &r.equivalence_facts {
        let _ = writeln!(out, "  {} {}", pad(&e.name, width), equiv_label(e));
    }
    let _ = writeln!(out, "\nnote: {}", r.note);
    let _ = writeln!(out, "result: {}", if r.passes() { "PASS" } else { "FAIL" });
    out
}

fn render_glivenko(r: &GlivenkoReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed {}, {} formulas (<= {} connectives, <= {} atoms), {} classical theorems",
        r.seed, r.items.len(), r.max_connectives, r.atoms, r.classical_theorems);
    for i in r.items.iter().filter(|i| !i.agree || !i.certified) {
        let _ = writeln!(out, "  disagreement {}: CL {} / IL {}", i.name, i.classical.label(), i.intuitionistic.label());
    }
    let _ = writeln!(out, "agreement {}/{}", r.agreement, r.items.len());
    let _ = writeln!(out, "result: {}", if r.passed() { "PASS" } else { "FAIL" });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Output {
        run(std::iter::once("copylab").chain(args.iter().copied()))
    }

    #[test]
    fn translate_kolmogorov() {
        let out = cli(&["translate", "--kind", "kolmogorov", "P \\/ Q"]);
        assert_eq!(out, Output::ok("~~(~~P \\/ ~~Q)\n".into()));
    }

    #[test]
    fn excluded_middle_dot() {
        let out = cli(&["prove", "--logic", "il", "P \\/ ~P", "--format", "dot"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.starts_with("digraph"));
        assert!(out.stdout.contains("w0 -> w1"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(cli(&["translate", "P /\\"]).code, EXIT_USAGE);
        assert!(cli(&["translate", "P /\\"]).stderr.contains("1:5"));
        assert_eq!(cli(&["frobnicate"]).code, EXIT_USAGE);
        assert_eq!(cli(&["prove", "P", "--bound", "0"]).code, EXIT_USAGE);
        assert_eq!(cli(&["countermodel", "P", "--max-worlds", "0"]).code, EXIT_USAGE);
        assert_eq!(cli(&["theorem", "--format", "dot"]).code, EXIT_USAGE);
        assert_eq!(cli(&["translate", "--kind", "kuroda", "--f-formula", "_|_", "P"]).code, EXIT_USAGE);
        assert_eq!(cli(&["theorem", "--f-formula", "P(x)"]).code, EXIT_USAGE);
    }

    #[test]
    fn theorem_small_bound_passes() {
        let out = cli(&["theorem", "--bound", "2"]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
        assert!(out.stdout.contains("Unknown(2)"));
    }

    #[test]
    fn theorem_bad_f_fails() {
        assert_eq!(cli(&["theorem", "--bound", "2", "--f-formula", "_|_ /\\ ~_|_"]).code, EXIT_FAILURE);
    }

    #[test]
    fn countermodel_none() {
        let out = cli(&["countermodel", "P -> P", "--max-worlds", "3"]);
        assert_eq!(out.stdout, "none up to 3 worlds\n");
        assert_eq!(cli(&["countermodel", "forall x. P(x)"]).code, EXIT_USAGE);
    }
}
