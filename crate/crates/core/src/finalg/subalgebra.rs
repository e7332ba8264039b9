use crate::error::Result;
use crate::limits::Limits;
use crate::sigterm::{Term, VariableSet};

use super::algebra::{Elem, FiniteAlgebra};
use super::closure::{close, Closed, Provenance, TupleClosure};

/// A subalgebra re-indexed by discovery order, with the inclusion map back
/// into the parent and the provenance of every element.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    pub algebra: FiniteAlgebra,
    /// `inclusion[i]` is the parent element behind sub-element `i`.
    pub inclusion: Vec<Elem>,
    closure: TupleClosure,
}

impl Subalgebra {
    pub fn provenance(&self, i: usize) -> &Provenance {
        self.closure.provenance(i)
    }

    pub fn depth(&self, i: usize) -> u32 {
        self.closure.depth(i)
    }

    /// Sub-element index of a parent element, if it lies in the subalgebra.
    pub fn index_of(&self, parent: Elem) -> Option<Elem> {
        self.closure.index_of(&[parent])
    }

    /// The parent elements, sorted.
    pub fn elements_sorted(&self) -> Vec<Elem> {
        let mut v = self.inclusion.clone();
        v.sort_unstable();
        v
    }
}

impl FiniteAlgebra {
    /// The least subset containing `seed` and closed under every operation.
    pub fn subalgebra_generated(&self, seed: &[Elem], limits: &Limits) -> Result<Subalgebra> {
        let gens: Vec<Vec<Elem>> = seed.iter().map(|&a| vec![a]).collect();
        let Closed::Done(closure) = close(self, 1, &gens, 1, limits)? else {
            unreachable!("full-width keys cannot conflict")
        };
        let inclusion: Vec<Elem> = (0..closure.len()).map(|i| closure.tuple(i)[0]).collect();
        let n = inclusion.len();
        let mut tables = Vec::with_capacity(self.signature().len());
        for (id, sym) in self.signature().symbols() {
            let entries = crate::limits::checked_pow(n as u128, sym.arity);
            limits.check_points(entries)?;
            let mut table = Vec::with_capacity(entries as usize);
            let mut args = vec![0 as Elem; sym.arity];
            let mut parent = vec![0 as Elem; sym.arity];
            for _ in 0..entries {
                for (p, &a) in parent.iter_mut().zip(&args) {
                    *p = inclusion[a as usize];
                }
                let v = self.apply(id, &parent);
                table.push(closure.index_of(&[v]).expect("closed"));
                super::algebra::increment(&mut args, n as Elem);
            }
            tables.push(table);
        }
        let algebra = FiniteAlgebra::new(self.signature().clone(), n, tables)?;
        Ok(Subalgebra {
            algebra,
            inclusion,
            closure,
        })
    }

    /// Greedy generating set: repeatedly adds the least element not yet
    /// generated.
    pub fn generating_set(&self, limits: &Limits) -> Result<Vec<Elem>> {
        let mut gens = Vec::new();
        let mut covered = vec![false; self.size()];
        loop {
            let seeds: Vec<Vec<Elem>> = gens.iter().map(|&a| vec![a]).collect();
            let Closed::Done(closure) = close(self, 1, &seeds, 1, limits)? else {
                unreachable!("full-width keys cannot conflict")
            };
            for i in 0..closure.len() {
                covered[closure.tuple(i)[0] as usize] = true;
            }
            match covered.iter().position(|c| !c) {
                Some(e) => gens.push(e as Elem),
                None => return Ok(gens),
            }
        }
    }

    /// Generation data for homomorphism search: the given generators, or a
    /// greedy generating set when `None`.
    pub fn generation(&self, generators: Option<&[Elem]>, limits: &Limits) -> Result<Generation> {
        let gens = match generators {
            Some(g) => g.to_vec(),
            None => self.generating_set(limits)?,
        };
        let sub = self.subalgebra_generated(&gens, limits)?;
        if sub.inclusion.len() != self.size() {
            return Err(crate::Error::precondition(
                "generators do not generate the algebra",
            ));
        }
        let steps = (0..sub.inclusion.len())
            .map(|i| {
                let prov = match sub.provenance(i) {
                    Provenance::Generator(g) => Provenance::Generator(*g),
                    Provenance::Op(s, args) => Provenance::Op(
                        *s,
                        args.iter().map(|&a| sub.inclusion[a as usize]).collect(),
                    ),
                };
                (sub.inclusion[i], prov)
            })
            .collect();
        Ok(Generation {
            generators: gens,
            steps,
        })
    }

    /// Shortest term (over variables named after the generators) for every
    /// element of the generated subalgebra, indexed by parent element.
    pub fn witness_terms(&self, generation: &Generation) -> Vec<Term> {
        let mut out: Vec<Option<Term>> = vec![None; self.size()];
        for (e, prov) in &generation.steps {
            let t = match prov {
                Provenance::Generator(g) => Term::var(*g),
                Provenance::Op(s, args) => Term::app(
                    *s,
                    args.iter()
                        .map(|&a| out[a as usize].clone().expect("earlier"))
                        .collect::<Vec<_>>(),
                ),
            };
            out[*e as usize] = Some(t);
        }
        out.into_iter().map(|t| t.expect("generated")).collect()
    }

    /// Variables `g0, g1, …` naming the generators in witness terms.
    pub fn generator_variables(&self, generation: &Generation) -> Result<VariableSet> {
        let mut names = Vec::new();
        for i in 0..generation.generators.len().max(1) {
            let mut name = format!("g{i}");
            while self.signature().lookup(&name).is_some() {
                name.push('\'');
            }
            names.push(name);
        }
        VariableSet::new(names)
    }
}

/// Every element of an algebra listed once, in an order where each element
/// is a generator or an operation applied to elements listed before it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    pub generators: Vec<Elem>,
    /// `(element, provenance)`; operation arguments are elements, not indices.
    pub steps: Vec<(Elem, Provenance)>,
}
