use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::finalg::{
    close, AlgebraView, Closed, Elem, FiniteAlgebra, Generation, Provenance, TermProgram,
    TupleClosure,
};
use crate::limits::checked_pow;
use crate::sigterm::{Signature, SymbolId, Term, VariableSet};

use super::space::AlgebraicSet;

/// The algebra `T(Y)` of term functions on a point set `Y`: the subalgebra
/// of `A^Y` generated by the coordinate functions and the constants.
///
/// Element `i` is stored as its tuple of values at the points of `Y` (in
/// `Y`'s order). Elements are numbered in breadth-first discovery order, so
/// each carries a witness term of least depth. For `Y = ∅` the algebra is
/// the one-element algebra.
#[derive(Debug)]
pub struct TermFunctionAlgebra {
    base: Arc<FiniteAlgebra>,
    vars: VariableSet,
    closure: TupleClosure,
    witnesses: Vec<Term>,
    materialized: OnceLock<std::result::Result<Arc<FiniteAlgebra>, Error>>,
    max_points: u64,
}

impl TermFunctionAlgebra {
    pub(crate) fn build(y: &AlgebraicSet) -> Result<Self> {
        let space = y.space();
        let n = space.dim();
        let width = y.len();
        let points = y.points_decoded();
        let generators: Vec<Vec<Elem>> = (0..n)
            .map(|i| points.iter().map(|p| p[i]).collect())
            .collect();
        let Closed::Done(closure) = close(space.algebra(), width, &generators, width, space.limits())?
        else {
            unreachable!("full-width keys cannot conflict")
        };
        let mut witnesses: Vec<Term> = Vec::with_capacity(closure.len());
        for i in 0..closure.len() {
            let t = match closure.provenance(i) {
                Provenance::Generator(g) => Term::var(*g),
                Provenance::Op(s, args) => Term::app(
                    *s,
                    args.iter().map(|&a| witnesses[a as usize].clone()).collect::<Vec<_>>(),
                ),
            };
            witnesses.push(t);
        }
        Ok(TermFunctionAlgebra {
            base: space.algebra().clone(),
            vars: space.vars().clone(),
            closure,
            witnesses,
            materialized: OnceLock::new(),
            max_points: space.limits().max_points,
        })
    }

    pub fn base(&self) -> &Arc<FiniteAlgebra> {
        &self.base
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.closure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closure.is_empty()
    }

    /// Number of points of the underlying set.
    pub fn width(&self) -> usize {
        self.closure.width()
    }

    /// Values of element `e` at the points of `Y`.
    pub fn values(&self, e: Elem) -> &[Elem] {
        self.closure.tuple(e as usize)
    }

    pub fn witness(&self, e: Elem) -> &Term {
        &self.witnesses[e as usize]
    }

    pub fn witnesses(&self) -> &[Term] {
        &self.witnesses
    }

    pub fn depth(&self, e: Elem) -> u32 {
        self.closure.depth(e as usize)
    }

    pub fn provenance(&self, e: Elem) -> &Provenance {
        self.closure.provenance(e as usize)
    }

    /// The coordinate function `x_i^Y` for each variable.
    pub fn generators(&self) -> &[u32] {
        self.closure.generators()
    }

    pub fn element_of_values(&self, values: &[Elem]) -> Option<Elem> {
        self.closure.index_of(values)
    }

    /// `t^Y` as an element; `points` must be the decoded points of `Y`.
    pub fn element_of_term(&self, t: &Term, points: &[Vec<Elem>]) -> Elem {
        let prog = TermProgram::compile(&self.base, std::slice::from_ref(t));
        let mut scratch = prog.scratch();
        let values: Vec<Elem> = points
            .iter()
            .map(|p| {
                prog.run(p, &mut scratch);
                prog.root(&scratch, 0)
            })
            .collect();
        self.element_of_values(&values)
            .expect("term functions lie in the algebra of term functions")
    }

    /// Generation data for homomorphism search, with the coordinate
    /// functions as generators.
    pub fn generation(&self) -> Generation {
        let steps = (0..self.len())
            .map(|i| (i as Elem, self.closure.provenance(i).clone()))
            .collect();
        Generation {
            generators: self.closure.generators().to_vec(),
            steps,
        }
    }

    /// The operation tables, built on first use.
    pub fn algebra(&self) -> Result<Arc<FiniteAlgebra>> {
        self.materialized
            .get_or_init(|| {
                let n = self.len();
                let sig = self.base.signature();
                for (_, s) in sig.symbols() {
                    let entries = checked_pow(n as u128, s.arity);
                    if entries > self.max_points as u128 {
                        return Err(Error::capacity("operation table", entries, self.max_points));
                    }
                }
                let limits = crate::Limits {
                    max_points: self.max_points,
                    ..crate::Limits::default()
                };
                FiniteAlgebra::from_fn(sig.clone(), n, &limits, |sym, args| self.apply(sym, args))
                    .map(Arc::new)
            })
            .clone()
    }

    /// Witness of each element, printed.
    pub fn witness_strings(&self) -> Vec<String> {
        let sig = self.base.signature();
        self.witnesses
            .iter()
            .map(|t| t.display(sig, &self.vars).to_string())
            .collect()
    }
}

impl AlgebraView for TermFunctionAlgebra {
    fn signature(&self) -> &Arc<Signature> {
        self.base.signature()
    }

    fn size(&self) -> usize {
        self.len()
    }

    fn apply(&self, sym: SymbolId, args: &[Elem]) -> Elem {
        let w = self.width();
        let k = self.base.size();
        let table = self.base.table(sym);
        let mut out = vec![0 as Elem; w];
        for (c, o) in out.iter_mut().enumerate() {
            let mut idx = 0usize;
            for &a in args {
                idx = idx * k + self.closure.tuple(a as usize)[c] as usize;
            }
            *o = table[idx];
        }
        self.closure.index_of(&out).expect("closed under operations")
    }

    fn power_base(&self) -> Option<&FiniteAlgebra> {
        Some(&self.base)
    }

    fn coordinate(&self, e: Elem, j: usize) -> Elem {
        self.closure.tuple(e as usize)[j]
    }

    fn power_width(&self) -> usize {
        self.width()
    }
}

/// Decides membership in `Rad(Y)` by comparing term functions: `t = s` is
/// in the radical iff `t^Y` and `s^Y` are the same element of `T(Y)`.
#[derive(Debug, Clone)]
pub struct RadicalOracle {
    gamma: Arc<TermFunctionAlgebra>,
    points: Vec<Vec<Elem>>,
}

impl RadicalOracle {
    pub fn new(y: &AlgebraicSet) -> Result<Self> {
        Ok(RadicalOracle {
            gamma: y.coordinate_algebra()?,
            points: y.points_decoded(),
        })
    }

    pub fn element(&self, t: &Term) -> Elem {
        self.gamma.element_of_term(t, &self.points)
    }

    pub fn contains(&self, t: &Term, s: &Term) -> bool {
        self.element(t) == self.element(s)
    }

    pub fn gamma(&self) -> &Arc<TermFunctionAlgebra> {
        &self.gamma
    }
}

impl TermFunctionAlgebra {
    pub(crate) fn closure_clone(&self) -> TupleClosure {
        self.closure.clone()
    }
}
