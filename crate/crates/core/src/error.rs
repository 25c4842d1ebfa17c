use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("parameter formula must be closed, found free variables {0:?}")]
    OpenParameter(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("corpus line {line}: {source}")]
    Formula {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("corpus line {line}: duplicate entry name `{name}`")]
    Duplicate { line: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslationError {
    #[error("translation `{0}` needs a parameter formula F")]
    MissingParameter(&'static str),
    #[error("translation `{0}` takes no parameter formula")]
    UnexpectedParameter(&'static str),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("countermodel search is propositional only; formula has quantifiers")]
    Quantified,
    #[error("exhaustive enumeration supports at most {max} worlds, asked for {asked}")]
    TooManyWorlds { asked: usize, max: usize },
    #[error("no world {0} in model")]
    UnknownWorld(usize),
    #[error("free variable `{0}` has no value in the environment")]
    MissingVariable(String),
    #[error("constant `{constant}` is not in the domain of world {world}")]
    OutsideDomain { constant: String, world: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("classical refutation of F could not be confirmed: {0}")]
    HypothesisUnconfirmed(String),
    #[error("witness atom `{0}` must be nullary and must not occur in F")]
    BadWitnessAtom(String),
    #[error(transparent)]
    Translation(#[from] TranslationError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}
