#![allow(dead_code)]

use std::sync::Arc;

use uag_core::dsl::Document;
use uag_core::sigterm::{parse_system, parse_term};
use uag_core::geometry::{AffineSpace, AlgebraicSet};
use uag_core::{EquationSystem, Limits, FiniteAlgebra, Signature, Term, VariableSet};

pub const FIXTURES: &str = "
signature G { op +/2; op -/1; const e; }
signature M { op +/2; const e; }
signature B { op */2; }
signature C { op +/2; const c0; const c1; }
signature P { op +/2; const c1; }

algebra Z2 over G { carrier 2; + = [[0,1],[1,0]]; - = [0,1]; e = 0; }
algebra Z3 over G { carrier 3; + = [[0,1,2],[1,2,0],[2,0,1]]; - = [0,2,1]; e = 0; }
algebra Z4 over G {
  carrier 4;
  + = [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]];
  - = [0,3,2,1];
  e = 0;
}
algebra Z2m over M { carrier 2; + = [[0,1],[1,0]]; e = 0; }
algebra Z4m over M { carrier 4; + = [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]; e = 0; }
algebra Z2c over C { carrier 2; + = [[0,1],[1,0]]; c0 = 0; c1 = 1; }
algebra Z2p over P { carrier 2; + = [[0,1],[1,0]]; c1 = 1; }
diophantine Z2d from Z2m;
diophantine Z3d from Z3;
signature E {}
algebra Two over E { carrier 2; }
";

pub fn doc() -> Document {
    Document::parse(FIXTURES).unwrap()
}

pub fn algebra(name: &str) -> Arc<FiniteAlgebra> {
    doc().algebra(name).unwrap().algebra.clone()
}

pub fn vars(names: &[&str]) -> VariableSet {
    VariableSet::new(names.iter().copied()).unwrap()
}

pub fn term(a: &FiniteAlgebra, text: &str, names: &[&str]) -> Term {
    parse_term(text, a.signature(), &vars(names)).unwrap()
}

pub fn system(a: &FiniteAlgebra, text: &str, names: &[&str]) -> EquationSystem {
    parse_system(text, a.signature(), &vars(names)).unwrap()
}

pub fn signature(a: &FiniteAlgebra) -> Arc<Signature> {
    a.signature().clone()
}

pub fn space(name: &str, n: usize) -> Arc<AffineSpace> {
    AffineSpace::standard(algebra(name), n, Limits::default()).unwrap()
}

pub fn solve(space: &Arc<AffineSpace>, text: &str) -> AlgebraicSet {
    space.solve(&parse_system(text, space.signature(), space.vars()).unwrap()).unwrap()
}

pub fn space_term(space: &AffineSpace, text: &str) -> Term {
    parse_term(text, space.signature(), space.vars()).unwrap()
}

pub fn points(space: &Arc<AffineSpace>, pts: &[&[u32]]) -> AlgebraicSet {
    let v: Vec<Vec<u32>> = pts.iter().map(|p| p.to_vec()).collect();
    AlgebraicSet::from_points(space.clone(), &v).unwrap()
}
