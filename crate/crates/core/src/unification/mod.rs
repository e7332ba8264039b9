//! Decision procedures for membership questions about finite algebras,
//! each answer packaged with evidence that is checked again before it is
//! returned.
//!
//! For a finite `C` and a finite `A` the following are equivalent and are
//! all decided by the separation test: `C` is separated by `A`, `C` embeds
//! into a direct power of `A`, `C` is the algebra of term functions of an
//! algebraic set over `A`, and `C` lies in the quasivariety generated by
//! `A`. Likewise `C` embeds into `A` iff it is the algebra of term
//! functions of an irreducible algebraic set.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finalg::{
    direct_product, Elem, FiniteAlgebra, Generation, Homomorphism, PowerEmbedding, QuasiIdentity,
};
use crate::geometry::{decompose, is_irreducible, minimal_subsystem, restriction, AffineSpace, AlgebraicSet};
use crate::limits::Limits;
use crate::sigterm::{Equation, EquationSystem, Term, VariableSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    IsCoordinateAlgebra,
    IsIrreducibleCoordinateAlgebra,
    InQvar,
    EmptySetAlgebraic,
    TrivialInUcl,
}

impl Claim {
    pub fn as_str(self) -> &'static str {
        match self {
            Claim::IsCoordinateAlgebra => "is-coordinate-algebra",
            Claim::IsIrreducibleCoordinateAlgebra => "is-irreducible-coordinate-algebra",
            Claim::InQvar => "in-qvar",
            Claim::EmptySetAlgebraic => "empty-set-algebraic",
            Claim::TrivialInUcl => "trivial-in-ucl",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub enum Evidence {
    /// `C ↪ A^d` built from a separating family.
    PowerEmbedding(PowerEmbedding),
    /// `C ↪ A`.
    Embedding(Homomorphism),
    Realization(Box<Realization>),
    QuasiIdentity(Box<WitnessQuasiIdentity>),
    /// A one-variable system without solutions.
    InconsistentSystem(EquationSystem),
    /// `∀x ⋁ t_i(x) ≠ s_i(x)` over the listed equations.
    DisequationClauses(EquationSystem),
    /// An element fixed by every operation.
    TrivialElement(Elem),
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub claim: Claim,
    pub answer: bool,
    pub evidence: Vec<Evidence>,
    pub notes: Vec<String>,
}

/// `C` as a quotient of the term algebra on its generators: every element
/// has a witness term, and `relations` lists `f(w_a, …) = w_{f(a, …)}` for
/// every table entry whose two sides differ as terms.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub generation: Generation,
    pub vars: VariableSet,
    /// Indexed by element of `C`.
    pub witnesses: Vec<Term>,
    pub relations: EquationSystem,
}

impl Presentation {
    pub fn new(c: &FiniteAlgebra, generators: Option<&[Elem]>, limits: &Limits) -> Result<Self> {
        let mut generation = c.generation(generators, limits)?;
        if generation.generators.is_empty() {
            // at least one variable, pinned to an element
            generation = c.generation(Some(&[0]), limits)?;
        }
        let vars = c.generator_variables(&generation)?;
        let witnesses = c.witness_terms(&generation);
        let mut eqs = Vec::new();
        let mut seen = rustc_hash::FxHashSet::default();
        for (id, sym) in c.signature().symbols() {
            let mut args = vec![0 as Elem; sym.arity];
            loop {
                let lhs = Term::app(id, args.iter().map(|&a| witnesses[a as usize].clone()).collect::<Vec<_>>());
                let rhs = witnesses[c.apply(id, &args) as usize].clone();
                if lhs != rhs && seen.insert((lhs.clone(), rhs.clone())) {
                    eqs.push(Equation::new(lhs, rhs));
                }
                if !crate::finalg::increment(&mut args, c.size() as Elem) {
                    break;
                }
            }
        }
        let relations = EquationSystem::new(c.signature().clone(), vars.clone(), eqs)?;
        Ok(Presentation {
            generation,
            vars,
            witnesses,
            relations,
        })
    }

    /// The generators as a point of `C^r`.
    pub fn generator_point(&self) -> Vec<Elem> {
        self.generation.generators.clone()
    }
}

/// An algebraic set `Y = V_A(S)` for the relations `S` of a presentation of
/// `C`, together with the isomorphism `C → T(Y)`, `c ↦ w_c^Y`.
#[derive(Debug, Clone)]
pub struct Realization {
    pub presentation: Presentation,
    pub set: Arc<AlgebraicSet>,
    pub isomorphism: Homomorphism,
    /// Set when `Y` is irreducible.
    pub generic_point: Option<Vec<Elem>>,
}

/// Solves the relations of `C` over `A` and checks that the term functions
/// of the solution set form a copy of `C`; `None` when they do not, which
/// happens exactly when `A` does not separate `C`.
pub fn realize(
    c: &FiniteAlgebra,
    generators: Option<&[Elem]>,
    a: &Arc<FiniteAlgebra>,
    limits: &Limits,
) -> Result<Option<Realization>> {
    check_same_signature(c, a)?;
    let presentation = Presentation::new(c, generators, limits)?;
    let space = AffineSpace::new(a.clone(), presentation.vars.clone(), *limits)?;
    let set = Arc::new(space.solve(&presentation.relations)?);
    let gamma = set.coordinate_algebra()?;
    if gamma.len() != c.size() {
        return Ok(None);
    }
    let points = set.points_decoded();
    let map: Vec<Elem> = presentation
        .witnesses
        .iter()
        .map(|w| gamma.element_of_term(w, &points))
        .collect();
    let isomorphism = Homomorphism::new(c, &*gamma.algebra()?, map)?;
    if !isomorphism.is_injective(gamma.len()) {
        return Ok(None);
    }
    let generic_point = if set.is_empty() {
        None
    } else {
        is_irreducible(&set)?.generic_point
    };
    Ok(Some(Realization {
        presentation,
        set,
        isomorphism,
        generic_point,
    }))
}

/// `∀ḡ (⋀ S0 → t = s)` where `S0` is an irredundant subsystem of the
/// relations of `C` over `A` and `t, s` are witnesses of an unseparated
/// pair. It holds in `A` and fails in `C` at the generators.
#[derive(Debug, Clone)]
pub struct WitnessQuasiIdentity {
    pub formula: QuasiIdentity,
    pub pair: (Elem, Elem),
    pub generators: Vec<Elem>,
}

pub fn witness_quasi_identity(
    c: &FiniteAlgebra,
    generators: Option<&[Elem]>,
    a: &Arc<FiniteAlgebra>,
    limits: &Limits,
) -> Result<Option<WitnessQuasiIdentity>> {
    check_same_signature(c, a)?;
    let sep = c.separation_by(a, limits)?;
    let Some((c1, c2)) = sep.witness else {
        return Ok(None);
    };
    let presentation = Presentation::new(c, generators, limits)?;
    let space = AffineSpace::new(a.clone(), presentation.vars.clone(), *limits)?;
    let premises = minimal_subsystem(&space, &presentation.relations)?;
    let conclusion = Equation::new(
        presentation.witnesses[c1 as usize].clone(),
        presentation.witnesses[c2 as usize].clone(),
    );
    let formula = QuasiIdentity::new(premises, conclusion)?;
    let point = presentation.generator_point();
    if !formula.holds_in(a, limits)? || !formula.fails_at(c, &point) {
        return Err(Error::precondition("witness quasi-identity failed verification"));
    }
    Ok(Some(WitnessQuasiIdentity {
        formula,
        pair: (c1, c2),
        generators: point,
    }))
}

fn check_same_signature(c: &FiniteAlgebra, a: &FiniteAlgebra) -> Result<()> {
    if **c.signature() != **a.signature() {
        return Err(Error::precondition("algebras over different signatures"));
    }
    Ok(())
}

fn separation_verdict(
    claim: Claim,
    c: &FiniteAlgebra,
    generators: Option<&[Elem]>,
    a: &Arc<FiniteAlgebra>,
    limits: &Limits,
) -> Result<Verdict> {
    check_same_signature(c, a)?;
    let sep = c.separation_by(a, limits)?;
    let mut evidence = Vec::new();
    let mut notes = Vec::new();
    if sep.separated {
        let emb = PowerEmbedding::from_family(c, a, sep.family, limits)?;
        let real = realize(c, generators, a, limits)?
            .ok_or_else(|| Error::precondition("separated algebra without a realization"))?;
        evidence.push(Evidence::PowerEmbedding(emb));
        evidence.push(Evidence::Realization(Box::new(real)));
        notes.push("implied: C embeds into an ultrapower of A".into());
        notes.push("implied: C is a subdirect product of coordinate algebras of irreducible sets".into());
    } else {
        let w = witness_quasi_identity(c, generators, a, limits)?
            .ok_or_else(|| Error::precondition("unseparated algebra without a witness"))?;
        evidence.push(Evidence::QuasiIdentity(Box::new(w)));
    }
    Ok(Verdict {
        claim,
        answer: sep.separated,
        evidence,
        notes,
    })
}

/// Whether `C` is, up to isomorphism, the algebra of term functions of an
/// algebraic set over `A`.
pub fn coordinate_algebra_criterion(
    c: &FiniteAlgebra,
    generators: Option<&[Elem]>,
    a: &Arc<FiniteAlgebra>,
    limits: &Limits,
) -> Result<Verdict> {
    separation_verdict(Claim::IsCoordinateAlgebra, c, generators, a, limits)
}

/// Whether `C` satisfies every quasi-identity true in `A`.
pub fn qvar_membership(
    c: &FiniteAlgebra,
    generators: Option<&[Elem]>,
    a: &Arc<FiniteAlgebra>,
    limits: &Limits,
) -> Result<Verdict> {
    separation_verdict(Claim::InQvar, c, generators, a, limits)
}

/// Whether `C` is the algebra of term functions of an irreducible
/// algebraic set over `A`, decided by searching for an embedding `C ↪ A`.
pub fn irreducible_criterion(
    c: &FiniteAlgebra,
    generators: Option<&[Elem]>,
    a: &Arc<FiniteAlgebra>,
    limits: &Limits,
) -> Result<Verdict> {
    check_same_signature(c, a)?;
    let embedding = c.embedding_into(a, limits)?;
    let mut evidence = Vec::new();
    let mut notes = Vec::new();
    let real = realize(c, generators, a, limits)?;
    match (&embedding, real) {
        (Some(h), Some(r)) => {
            if r.generic_point.is_none() {
                return Err(Error::precondition("embeddable algebra realized by a reducible set"));
            }
            evidence.push(Evidence::Embedding(h.clone()));
            evidence.push(Evidence::Realization(Box::new(r)));
            notes.push("implied: C embeds into an ultrapower of A and is universally equivalent to a subalgebra of it".into());
        }
        (Some(_), None) => {
            return Err(Error::precondition("embeddable algebra without a realization"));
        }
        (None, Some(r)) => {
            if r.generic_point.is_some() {
                return Err(Error::precondition("irreducible realization without an embedding"));
            }
            notes.push("C is a coordinate algebra, but only of reducible sets".into());
            evidence.push(Evidence::Realization(Box::new(r)));
        }
        (None, None) => notes.push("C is not separated by A".into()),
    }
    Ok(Verdict {
        claim: Claim::IsIrreducibleCoordinateAlgebra,
        answer: embedding.is_some(),
        evidence,
        notes,
    })
}

/// The irreducible components of `Y` and the embedding of `T(Y)` into the
/// product of their algebras of term functions, assembled from restrictions.
#[derive(Debug, Clone)]
pub struct SubdirectDecomposition {
    pub components: Vec<AlgebraicSet>,
    /// `T(Y) → T(Y_i)`, each onto.
    pub restrictions: Vec<Homomorphism>,
    pub product: FiniteAlgebra,
    /// Injective.
    pub embedding: Homomorphism,
}

pub fn subdirect_decomposition(y: &AlgebraicSet, limits: &Limits) -> Result<SubdirectDecomposition> {
    let components = decompose(y)?;
    let gamma = y.coordinate_algebra()?;
    let mut restrictions = Vec::with_capacity(components.len());
    let mut factors = Vec::with_capacity(components.len());
    for comp in &components {
        restrictions.push(restriction(comp, y)?);
        factors.push(comp.coordinate_algebra()?.algebra()?);
    }
    let refs: Vec<&FiniteAlgebra> = factors.iter().map(|f| &**f).collect();
    let product = direct_product(y.space().signature().clone(), &refs, limits)?;
    let map: Vec<Elem> = (0..gamma.len() as Elem)
        .map(|e| {
            restrictions
                .iter()
                .zip(&factors)
                .fold(0usize, |acc, (h, f)| acc * f.size() + h.apply(e) as usize) as Elem
        })
        .collect();
    let embedding = Homomorphism::new(&*gamma, &product, map)?;
    if !embedding.is_injective(product.size()) {
        return Err(Error::precondition("restrictions do not separate the term functions"));
    }
    Ok(SubdirectDecomposition {
        components,
        restrictions,
        product,
        embedding,
    })
}

/// A system in one variable with no solution in `A`, built from terms of
/// depth at most `depth`: a single equation `t = s` whose sides differ at
/// every point when there is one, otherwise an irredundant subsystem of
/// `x = t` over all such `t`. `None` when the bounded search finds none.
pub fn inconsistent_system(a: &Arc<FiniteAlgebra>, depth: u32, limits: &Limits) -> Result<Option<EquationSystem>> {
    let space = AffineSpace::standard(a.clone(), 1, *limits)?;
    let line = space.full();
    let gamma = line.coordinate_algebra()?;
    let shallow: Vec<Elem> = (0..gamma.len() as Elem).filter(|&e| gamma.depth(e) <= depth).collect();
    let apart = |i: Elem, j: Elem| gamma.values(i).iter().zip(gamma.values(j)).all(|(u, v)| u != v);
    // ground equations first, so two clashing constants give `c = d`
    let ground: Vec<Elem> = shallow.iter().copied().filter(|&e| gamma.witness(e).var_bound() == 0).collect();
    let first_apart = |pool: &[Elem]| {
        pool.iter()
            .enumerate()
            .find_map(|(n, &i)| pool[n + 1..].iter().find(|&&j| apart(i, j)).map(|&j| (i, j)))
    };
    let single = first_apart(&ground).or_else(|| first_apart(&shallow));
    let eqs: Vec<Equation> = match single {
        Some((i, j)) => vec![Equation::new(gamma.witness(i).clone(), gamma.witness(j).clone())],
        None => {
            let x = Term::var(0);
            shallow
                .iter()
                .filter(|&&e| *gamma.witness(e) != x)
                .map(|&e| Equation::new(x.clone(), gamma.witness(e).clone()))
                .collect()
        }
    };
    let s = EquationSystem::new(space.signature().clone(), space.vars().clone(), eqs)?;
    if !space.solve(&s)?.is_empty() {
        return Ok(None);
    }
    Ok(Some(minimal_subsystem(&space, &s)?))
}

fn verified_trivial_element(a: &FiniteAlgebra) -> Option<Elem> {
    let e = a.has_trivial_subalgebra()?;
    let fixed = a.signature().symbols().all(|(id, sym)| a.apply(id, &vec![e; sym.arity]) == e);
    fixed.then_some(e)
}

/// Whether `∅` is an algebraic set over `A`: exactly when `A` has no
/// one-element subalgebra.
pub fn empty_set_algebraic(a: &Arc<FiniteAlgebra>, depth: u32, limits: &Limits) -> Result<Verdict> {
    let mut evidence = Vec::new();
    let mut notes = Vec::new();
    let trivial = verified_trivial_element(a);
    match trivial {
        Some(e) => {
            evidence.push(Evidence::TrivialElement(e));
            notes.push(format!("every system has the root ({e}, …, {e})"));
        }
        None => match inconsistent_system(a, depth, limits)? {
            Some(s) => evidence.push(Evidence::InconsistentSystem(s)),
            None => notes.push(format!("no inconsistent system found up to depth {depth}")),
        },
    }
    Ok(Verdict {
        claim: Claim::EmptySetAlgebraic,
        answer: trivial.is_none(),
        evidence,
        notes,
    })
}

/// Whether the one-element algebra satisfies every universal sentence true
/// in `A`: exactly when `A` has a one-element subalgebra. Otherwise the
/// equations of an inconsistent system give a universal disjunction of
/// disequations true in `A` and false in the one-element algebra.
pub fn trivial_in_ucl(a: &Arc<FiniteAlgebra>, depth: u32, limits: &Limits) -> Result<Verdict> {
    let mut evidence = Vec::new();
    let mut notes = Vec::new();
    let trivial = verified_trivial_element(a);
    match trivial {
        Some(e) => evidence.push(Evidence::TrivialElement(e)),
        None => match inconsistent_system(a, depth, limits)? {
            Some(s) => {
                let e = FiniteAlgebra::trivial(a.signature().clone());
                if !a.check_universal_disequation(&s, limits)? || e.check_universal_disequation(&s, limits)? {
                    return Err(Error::precondition("disequation clauses failed verification"));
                }
                evidence.push(Evidence::DisequationClauses(s));
            }
            None => notes.push(format!("no inconsistent system found up to depth {depth}")),
        },
    }
    Ok(Verdict {
        claim: Claim::TrivialInUcl,
        answer: trivial.is_some(),
        evidence,
        notes,
    })
}
