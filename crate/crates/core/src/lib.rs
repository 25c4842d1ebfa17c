//! Negative translations from classical into intuitionistic first-order logic,
//! decision and search procedures for both logics, Kripke models, and tooling
//! for comparing translations with respect to a parameter formula `F`.

pub mod classical;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod formula;
pub mod intuitionistic;
pub mod kripke;
pub mod lab;
pub mod random;
pub mod syntax;
pub mod translate;

pub use error::*;
pub use formula::{default_f, Formula, Term, TheoremInstanceF};
pub use syntax::{parse, print};
