//! Signatures, variables, terms, equations and systems of equations.
//!
//! Terms are hash-consed in a process-wide table, so two structurally equal
//! terms are the same allocation and compare by id.

mod parse;
mod signature;
mod system;
mod term;

pub use parse::{parse_equation, parse_signature, parse_system, parse_term};
pub(crate) use parse::Parser;
pub use signature::{Signature, Symbol, SymbolId, VariableSet};
pub use system::{Equation, EquationSystem};
pub(crate) use system::check_term;
pub use term::{Term, TermKind};
