//! Universal algebraic geometry over finite algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`sigterm`]: functional signatures, hash-consed terms, equations and the
//!   text DSL used to write them down.
//! * [`congruence`]: ground congruence closure, deciding membership in the
//!   congruent closure `[S]` of a finite system.
//! * [`finalg`]: finite algebras given by operation tables, with products,
//!   subalgebras, quotients, homomorphism search and brute-force logic checks.
//! * [`geometry`]: algebraic sets, radicals, coordinate algebras realised as
//!   algebras of term functions, the Zariski closure operator, irreducible
//!   decomposition, subsystem reduction and the term-map/homomorphism duality.
//! * [`unification`]: decision procedures for coordinate-algebra membership,
//!   irreducibility, quasivariety membership and the empty-set/trivial-algebra
//!   dichotomy, each returning machine-checked evidence.
//! * [`dsl`]: whole-document parsing of signature, algebra and system blocks.

pub mod congruence;
pub mod dsl;
mod error;
pub mod finalg;
pub mod geometry;
mod limits;
pub mod sigterm;
pub mod unification;

pub use error::{Error, Result};
pub use limits::Limits;

pub use finalg::{Elem, FiniteAlgebra, Homomorphism};
pub use geometry::{AffineSpace, AlgebraicSet, TermFunctionAlgebra};
pub use sigterm::{Equation, EquationSystem, Signature, SymbolId, Term, VariableSet};
