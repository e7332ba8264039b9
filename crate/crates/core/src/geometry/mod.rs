//! Algebraic sets over a finite algebra: solving, closure, coordinate
//! algebras, irreducible decomposition and term maps.

mod ac;
mod irreducible;
mod reduce;
mod space;
mod termmap;
mod tfa;

pub use ac::{ac_closure, point_closure, ClosureSystem};
pub use irreducible::{decompose, decompose_with_seed_order, is_irreducible, Irreducibility};
pub use reduce::{minimal_subsystem, systems_equivalent};
pub use space::{AffineSpace, AlgebraicSet};
pub use termmap::{
    dual_homomorphisms, enumerate_term_maps, hom_to_point, homomorphisms_to_base, points_as_homs,
    restriction, sets_isomorphic, TermMap,
};
pub use tfa::{RadicalOracle, TermFunctionAlgebra};
