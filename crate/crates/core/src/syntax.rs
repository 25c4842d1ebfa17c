//! Concrete syntax.
//!
//! ```text
//! formula  := imp ( "<->" imp )?
//! imp      := or ( "->" imp )?            right-associative
//! or       := and ( "\/" and )*           left-associative
//! and      := unary ( "/\" unary )*       left-associative
//! unary    := "~" unary | ("forall" | "exists") var "." unary
//!           | "_|_" | Pred ( "(" term ("," term)* ")" )? | "(" formula ")"
//! term     := var | "'" name
//! ```
//!
//! Predicates start with an uppercase letter, variables with a lowercase one.
//! Quantifiers scope over a unary formula, like `~`, so
//! `forall x. A(x) -> B` reads `(forall x. A(x)) -> B`.
//! Unicode `¬ ∧ ∨ → ↔ ∀ ∃ ⊥` are accepted as aliases.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;
use crate::formula::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Upper(String),
    Lower(String),
    Const(String),
    Forall,
    Exists,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Bottom,
    LParen,
    RParen,
    Comma,
    Dot,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Upper(s) | Tok::Lower(s) => write!(f, "`{s}`"),
            Tok::Const(s) => write!(f, "`'{s}`"),
            Tok::Forall => f.write_str("`forall`"),
            Tok::Exists => f.write_str("`exists`"),
            Tok::Not => f.write_str("`~`"),
            Tok::And => f.write_str("`/\\`"),
            Tok::Or => f.write_str("`\\/`"),
            Tok::Imp => f.write_str("`->`"),
            Tok::Iff => f.write_str("`<->`"),
            Tok::Bottom => f.write_str("`_|_`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex_error(line: usize, column: usize, expected: &[&str], found: String) -> ParseError {
    ParseError {
        line,
        column,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found,
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let mut push = |tok: Tok, width: usize, i: &mut usize, column: &mut usize| {
            out.push(Spanned { tok, line: start_line, column: start_col });
            *i += width;
            *column += width;
        };
        let rest = |k: usize| chars.get(i + k).copied();
        match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                column += 1;
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut column),
            ')' => push(Tok::RParen, 1, &mut i, &mut column),
            ',' => push(Tok::Comma, 1, &mut i, &mut column),
            '.' => push(Tok::Dot, 1, &mut i, &mut column),
            '~' | '¬' => push(Tok::Not, 1, &mut i, &mut column),
            '∧' => push(Tok::And, 1, &mut i, &mut column),
            '∨' => push(Tok::Or, 1, &mut i, &mut column),
            '→' => push(Tok::Imp, 1, &mut i, &mut column),
            '↔' => push(Tok::Iff, 1, &mut i, &mut column),
            '∀' => push(Tok::Forall, 1, &mut i, &mut column),
            '∃' => push(Tok::Exists, 1, &mut i, &mut column),
            '⊥' => push(Tok::Bottom, 1, &mut i, &mut column),
            '/' if rest(1) == Some('\\') => push(Tok::And, 2, &mut i, &mut column),
            '\\' if rest(1) == Some('/') => push(Tok::Or, 2, &mut i, &mut column),
            '-' if rest(1) == Some('>') => push(Tok::Imp, 2, &mut i, &mut column),
            '<' if rest(1) == Some('-') && rest(2) == Some('>') => {
                push(Tok::Iff, 3, &mut i, &mut column)
            }
            '_' if rest(1) == Some('|') && rest(2) == Some('_') => {
                push(Tok::Bottom, 3, &mut i, &mut column)
            }
            '\'' => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(lex_error(line, column + 1, &["constant name"], describe(rest(1))));
                }
                let name: String = chars[i + 1..j].iter().collect();
                push(Tok::Const(name), j - i, &mut i, &mut column);
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ if c.is_ascii_uppercase() => Tok::Upper(word),
                    _ => Tok::Lower(word),
                };
                push(tok, j - i, &mut i, &mut column);
            }
            other => {
                return Err(lex_error(line, column, &["formula"], format!("`{other}`")));
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

fn describe(c: Option<char>) -> String {
    match c {
        Some(c) => format!("`{c}`"),
        None => "end of input".to_string(),
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let here = &self.toks[self.pos];
        lex_error(here.line, here.column, expected, here.tok.to_string())
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            q @ (Tok::Forall | Tok::Exists) => {
                self.bump();
                let var = match self.bump() {
                    Tok::Lower(v) => v,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error(&["variable"]));
                    }
                };
                self.expect(Tok::Dot, "`.`")?;
                let body = self.unary()?;
                Ok(if q == Tok::Forall {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                })
            }
            Tok::Bottom => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Upper(name) => {
                self.bump();
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    loop {
                        args.push(self.term()?);
                        match self.peek() {
                            Tok::Comma => {
                                self.bump();
                            }
                            Tok::RParen => {
                                self.bump();
                                break;
                            }
                            _ => return Err(self.error(&["`,`", "`)`"])),
                        }
                    }
                }
                Ok(Formula::atom(name, args))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error(&["`~`", "`forall`", "`exists`", "`_|_`", "predicate", "`(`"])),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Lower(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Const(c) => {
                self.bump();
                Ok(Term::Const(c))
            }
            _ => Err(self.error(&["variable", "constant"])),
        }
    }
}

/// Parses a formula. `~A` becomes `A -> _|_` and `A <-> B` becomes
/// `(A -> B) /\ (B -> A)`.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["binary connective", "end of input"]));
    }
    Ok(f)
}

/// Non-fatal diagnostics produced alongside a successful parse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    FreeVariable(String),
}

pub fn parse_with_warnings(text: &str) -> Result<(Formula, Vec<Warning>), ParseError> {
    let f = parse(text)?;
    let warnings = f.free_vars().into_iter().map(Warning::FreeVariable).collect();
    Ok((f, warnings))
}

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

/// Minimal-parentheses rendering that re-sugars `A -> _|_` as `~A`.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, 0, &mut out);
    out
}

fn write_formula(f: &Formula, ctx: u8, out: &mut String) {
    let prec = match f {
        Formula::Imp(_, b) if **b == Formula::Bottom => PREC_UNARY,
        Formula::Imp(..) => PREC_IMP,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        _ => PREC_UNARY,
    };
    let wrap = prec < ctx;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::Bottom => out.push_str("_|_"),
        Formula::Atom(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                out.push('(');
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&t.to_string());
                }
                out.push(')');
            }
        }
        Formula::Imp(a, b) if **b == Formula::Bottom => {
            out.push('~');
            write_formula(a, PREC_UNARY, out);
        }
        Formula::Imp(a, b) => {
            write_formula(a, PREC_IMP + 1, out);
            out.push_str(" -> ");
            write_formula(b, PREC_IMP, out);
        }
        Formula::Or(a, b) => {
            write_formula(a, PREC_OR, out);
            out.push_str(" \\/ ");
            write_formula(b, PREC_OR + 1, out);
        }
        Formula::And(a, b) => {
            write_formula(a, PREC_AND, out);
            out.push_str(" /\\ ");
            write_formula(b, PREC_AND + 1, out);
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            out.push_str(if matches!(f, Formula::Forall(..)) { "forall " } else { "exists " });
            out.push_str(x);
            out.push_str(". ");
            write_formula(a, PREC_UNARY, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&print(self))
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let valid = |s: &str| {
            s.chars().next().is_some_and(|c| c.is_ascii_alphanumeric())
                && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        };
        match text.strip_prefix('\'') {
            Some(c) if valid(c) => Ok(Term::Const(c.to_string())),
            None if valid(&text) && text.starts_with(|c: char| c.is_ascii_lowercase()) => {
                Ok(Term::Var(text))
            }
            _ => Err(serde::de::Error::custom(format!("invalid term `{text}`"))),
        }
    }
}
