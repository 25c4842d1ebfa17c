//! Negative translations.
//!
//! Kolmogorov puts `¬¬` in front of every subformula, `⊥` included.
//! Gödel–Gentzen double-negates atoms and rewrites `∨`/`∃` through `¬∧¬`/`¬∀¬`.
//! Kuroda double-negates the whole formula and the body of every `∀`.
//! Krivine is `¬A°` where `°` pushes a negation inward:
//!
//! ```text
//! P° = ¬P           ⊥° = ¬⊥
//! (A ∧ B)° = A° ∨ B°      (A ∨ B)° = A° ∧ B°
//! (A → B)° = ¬A° ∧ B°     (∀x A)° = ∃x A°      (∃x A)° = ∀x ¬¬A°
//! ```
//!
//! `VeeF` is `Aᴷ ∨ F` and `SubstF` is `Aᴷ[F/⊥]` for a closed sentence `F`.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::TranslationError;
use crate::formula::Formula;
use crate::formula::Formula::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TranslationKind {
    Kolmogorov,
    GoedelGentzen,
    Kuroda,
    Krivine,
    VeeF,
    SubstF,
}

impl TranslationKind {
    pub const ALL: [TranslationKind; 6] = [
        TranslationKind::Kolmogorov,
        TranslationKind::GoedelGentzen,
        TranslationKind::Kuroda,
        TranslationKind::Krivine,
        TranslationKind::VeeF,
        TranslationKind::SubstF,
    ];

    /// The four translations from the literature, all landing in the same copy.
    pub const CLASSICAL_FOUR: [TranslationKind; 4] = [
        TranslationKind::Kolmogorov,
        TranslationKind::GoedelGentzen,
        TranslationKind::Kuroda,
        TranslationKind::Krivine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TranslationKind::Kolmogorov => "kolmogorov",
            TranslationKind::GoedelGentzen => "goedel-gentzen",
            TranslationKind::Kuroda => "kuroda",
            TranslationKind::Krivine => "krivine",
            TranslationKind::VeeF => "vee-f",
            TranslationKind::SubstF => "subst-f",
        }
    }

    pub fn needs_parameter(self) -> bool {
        matches!(self, TranslationKind::VeeF | TranslationKind::SubstF)
    }
}

impl fmt::Display for TranslationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TranslationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TranslationKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown translation `{s}`"))
    }
}

/// A translation together with its parameter sentence, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationSpec {
    kind: TranslationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param_f: Option<Formula>,
}

impl TranslationSpec {
    pub fn new(kind: TranslationKind, param_f: Option<Formula>) -> Result<Self, TranslationError> {
        match (&param_f, kind.needs_parameter()) {
            (None, true) => Err(TranslationError::MissingParameter(kind.name())),
            (Some(_), false) => Err(TranslationError::UnexpectedParameter(kind.name())),
            (Some(f), true) => {
                let open = f.free_vars();
                if open.is_empty() {
                    Ok(TranslationSpec { kind, param_f })
                } else {
                    Err(crate::error::FormulaError::OpenParameter(open.into_iter().collect()).into())
                }
            }
            (None, false) => Ok(TranslationSpec { kind, param_f }),
        }
    }

    /// Parameterless translations only.
    pub fn plain(kind: TranslationKind) -> Self {
        assert!(!kind.needs_parameter(), "{kind} needs a parameter formula");
        TranslationSpec { kind, param_f: None }
    }

    /// `kind` with `f` attached when the kind takes one.
    pub fn with_f(kind: TranslationKind, f: &Formula) -> Result<Self, TranslationError> {
        TranslationSpec::new(kind, kind.needs_parameter().then(|| f.clone()))
    }

    pub fn kind(&self) -> TranslationKind {
        self.kind
    }

    pub fn param_f(&self) -> Option<&Formula> {
        self.param_f.as_ref()
    }

    pub fn apply(&self, a: &Formula) -> Formula {
        translate(self, a)
    }
}

pub fn translate(spec: &TranslationSpec, a: &Formula) -> Formula {
    match spec.kind {
        TranslationKind::Kolmogorov => kolmogorov(a),
        TranslationKind::GoedelGentzen => goedel_gentzen(a),
        TranslationKind::Kuroda => Formula::not_not(kuroda_inner(a)),
        TranslationKind::Krivine => Formula::not(krivine_dual(a)),
        TranslationKind::VeeF => {
            let f = spec.param_f.as_ref().expect("validated parameter");
            Formula::or(kolmogorov(a), f.clone())
        }
        TranslationKind::SubstF => {
            let f = spec.param_f.as_ref().expect("validated parameter");
            kolmogorov(a).substitute_bottom(f).expect("validated closed parameter")
        }
    }
}

pub fn kolmogorov(a: &Formula) -> Formula {
    let inner = match a {
        Bottom | Atom(..) => a.clone(),
        And(x, y) => Formula::and(kolmogorov(x), kolmogorov(y)),
        Or(x, y) => Formula::or(kolmogorov(x), kolmogorov(y)),
        Imp(x, y) => Formula::imp(kolmogorov(x), kolmogorov(y)),
        Forall(v, x) => Formula::forall(v.clone(), kolmogorov(x)),
        Exists(v, x) => Formula::exists(v.clone(), kolmogorov(x)),
    };
    Formula::not_not(inner)
}

pub fn goedel_gentzen(a: &Formula) -> Formula {
    match a {
        Bottom => Bottom,
        Atom(..) => Formula::not_not(a.clone()),
        And(x, y) => Formula::and(goedel_gentzen(x), goedel_gentzen(y)),
        Imp(x, y) => Formula::imp(goedel_gentzen(x), goedel_gentzen(y)),
        Forall(v, x) => Formula::forall(v.clone(), goedel_gentzen(x)),
        Or(x, y) => Formula::not(Formula::and(
            Formula::not(goedel_gentzen(x)),
            Formula::not(goedel_gentzen(y)),
        )),
        Exists(v, x) => Formula::not(Formula::forall(v.clone(), Formula::not(goedel_gentzen(x)))),
    }
}

fn kuroda_inner(a: &Formula) -> Formula {
    match a {
        Bottom | Atom(..) => a.clone(),
        And(x, y) => Formula::and(kuroda_inner(x), kuroda_inner(y)),
        Or(x, y) => Formula::or(kuroda_inner(x), kuroda_inner(y)),
        Imp(x, y) => Formula::imp(kuroda_inner(x), kuroda_inner(y)),
        Forall(v, x) => Formula::forall(v.clone(), Formula::not_not(kuroda_inner(x))),
        Exists(v, x) => Formula::exists(v.clone(), kuroda_inner(x)),
    }
}

fn krivine_dual(a: &Formula) -> Formula {
    match a {
        Bottom => Formula::top(),
        Atom(..) => Formula::not(a.clone()),
        And(x, y) => Formula::or(krivine_dual(x), krivine_dual(y)),
        Or(x, y) => Formula::and(krivine_dual(x), krivine_dual(y)),
        Imp(x, y) => Formula::and(Formula::not(krivine_dual(x)), krivine_dual(y)),
        Forall(v, x) => Formula::exists(v.clone(), krivine_dual(x)),
        Exists(v, x) => Formula::forall(v.clone(), Formula::not_not(krivine_dual(x))),
    }
}

/// Whether `b` has the syntactic shape of the translation's image.
///
/// Gödel–Gentzen: strict negative fragment. `VeeF`: `C ∨ F` with `C` in the strict
/// negative fragment. `SubstF`: replacing the outermost occurrences of `F` by
/// `⊥` yields a strict negative-fragment formula. The other three translations'
/// images are not syntactically negative, so they get the lenient check.
pub fn image_shape_check(spec: &TranslationSpec, b: &Formula) -> bool {
    match spec.kind {
        TranslationKind::GoedelGentzen => b.in_negative_fragment(true),
        TranslationKind::VeeF => {
            let f = spec.param_f.as_ref().expect("validated parameter");
            match b {
                Or(c, tail) => tail.alpha_eq(f) && c.in_negative_fragment(true),
                _ => false,
            }
        }
        TranslationKind::SubstF => {
            let f = spec.param_f.as_ref().expect("validated parameter");
            invert_bottom_substitution(b, f).in_negative_fragment(true)
        }
        TranslationKind::Kolmogorov | TranslationKind::Kuroda | TranslationKind::Krivine => {
            b.in_negative_fragment(false)
        }
    }
}

/// Outermost-first replacement of subformulas alpha-equal to `f` by `⊥`.
pub fn invert_bottom_substitution(b: &Formula, f: &Formula) -> Formula {
    let target = f.alpha_normal();
    invert_rec(b, &target)
}

fn invert_rec(b: &Formula, target: &Formula) -> Formula {
    if b.alpha_normal() == *target {
        return Bottom;
    }
    match b {
        Bottom | Atom(..) => b.clone(),
        And(x, y) => Formula::and(invert_rec(x, target), invert_rec(y, target)),
        Or(x, y) => Formula::or(invert_rec(x, target), invert_rec(y, target)),
        Imp(x, y) => Formula::imp(invert_rec(x, target), invert_rec(y, target)),
        Forall(v, x) => Formula::forall(v.clone(), invert_rec(x, target)),
        Exists(v, x) => Formula::exists(v.clone(), invert_rec(x, target)),
    }
}

/// `(name, formula)` for the three distinctness witnesses
/// `ᴹ⊥ → ᴷ⊥`, `ᴺ⊥ → ᴷ⊥` and `ᴺP → ᴹP`.
pub fn distinctness_witnesses(f: &Formula, p: &Formula) -> Vec<(&'static str, Formula)> {
    let m = TranslationSpec::with_f(TranslationKind::VeeF, f).expect("closed F");
    let n = TranslationSpec::with_f(TranslationKind::SubstF, f).expect("closed F");
    let k_bot = kolmogorov(&Bottom);
    vec![
        ("m_bot_implies_k_bot", Formula::imp(m.apply(&Bottom), k_bot.clone())),
        ("n_bot_implies_k_bot", Formula::imp(n.apply(&Bottom), k_bot)),
        ("n_p_implies_m_p", Formula::imp(n.apply(p), m.apply(p))),
    ]
}
