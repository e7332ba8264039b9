use std::fmt;
use std::ops::ControlFlow;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::finalg::{filter_points, sweep_points, Elem, FiniteAlgebra, PointCodec, TermProgram};
use crate::limits::Limits;
use crate::sigterm::{Equation, EquationSystem, Signature, Term, VariableSet};

use super::tfa::TermFunctionAlgebra;

/// The affine space `A^n` with named coordinates.
#[derive(Debug, Clone)]
pub struct AffineSpace {
    algebra: Arc<FiniteAlgebra>,
    vars: VariableSet,
    codec: PointCodec,
    limits: Limits,
}

impl PartialEq for AffineSpace {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra)
            && self.vars.len() == other.vars.len()
    }
}

impl AffineSpace {
    pub fn new(algebra: Arc<FiniteAlgebra>, vars: VariableSet, limits: Limits) -> Result<Arc<Self>> {
        vars.check_disjoint(algebra.signature())?;
        let codec = PointCodec::new(algebra.size(), vars.len(), &limits)?;
        Ok(Arc::new(AffineSpace {
            algebra,
            vars,
            codec,
            limits,
        }))
    }

    /// `A^n` with variables `x` or `x1, …, xn`.
    pub fn standard(algebra: Arc<FiniteAlgebra>, n: usize, limits: Limits) -> Result<Arc<Self>> {
        let mut vars = VariableSet::standard(n)?;
        if vars.check_disjoint(algebra.signature()).is_err() {
            vars = VariableSet::new((1..=n).map(|i| format!("v{i}")))?;
        }
        Self::new(algebra, vars, limits)
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.algebra.signature()
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn codec(&self) -> &PointCodec {
        &self.codec
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn point_count(&self) -> u64 {
        self.codec.count()
    }

    pub fn encode(&self, p: &[Elem]) -> u64 {
        self.codec.encode(p)
    }

    pub fn decode(&self, code: u64) -> Vec<Elem> {
        self.codec.decode(code)
    }

    fn check_system(&self, system: &EquationSystem) -> Result<()> {
        if **system.signature() != **self.signature() {
            return Err(Error::precondition("system and algebra use different signatures"));
        }
        if system.vars().len() != self.dim() {
            return Err(Error::precondition(format!(
                "system has {} variables, space has dimension {}",
                system.vars().len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Solution set of each equation, as a bitmask over point codes.
    pub(crate) fn equation_masks(&self, equations: &[Equation]) -> Result<Vec<Vec<u64>>> {
        let words = (self.point_count() as usize).div_ceil(64);
        let mut masks = vec![vec![0u64; words]; equations.len()];
        if equations.is_empty() {
            return Ok(masks);
        }
        let terms: Vec<Term> = equations
            .iter()
            .flat_map(|e| [e.lhs.clone(), e.rhs.clone()])
            .collect();
        let prog = TermProgram::compile(&self.algebra, &terms);
        let mut scratch = prog.scratch();
        let mut code = 0usize;
        sweep_points(self.algebra.size(), self.dim(), &self.limits, |p| {
            prog.run(p, &mut scratch);
            for (i, m) in masks.iter_mut().enumerate() {
                if prog.root(&scratch, 2 * i) == prog.root(&scratch, 2 * i + 1) {
                    m[code / 64] |= 1 << (code % 64);
                }
            }
            code += 1;
            ControlFlow::Continue(())
        })?;
        Ok(masks)
    }

    /// `V(S)`: every point satisfying every equation, by a full sweep.
    pub fn solve(self: &Arc<Self>, system: &EquationSystem) -> Result<AlgebraicSet> {
        self.check_system(system)?;
        let terms: Vec<Term> = system
            .equations()
            .iter()
            .flat_map(|e| [e.lhs.clone(), e.rhs.clone()])
            .collect();
        let prog = TermProgram::compile(&self.algebra, &terms);
        let r = system.len();
        let points = filter_points(self.algebra.size(), self.dim(), &self.limits, || prog.scratch(), |scratch, p| {
            prog.run(p, scratch);
            (0..r).all(|i| prog.root(scratch, 2 * i) == prog.root(scratch, 2 * i + 1))
        })?;
        let mut set = AlgebraicSet::from_sorted_codes(self.clone(), points);
        set.system = Some(system.clone());
        set.algebraic = Some(true);
        Ok(set)
    }

    pub fn full(self: &Arc<Self>) -> AlgebraicSet {
        let mut set = AlgebraicSet::from_sorted_codes(self.clone(), (0..self.point_count()).collect());
        set.system = EquationSystem::empty(self.signature().clone(), self.vars.clone()).ok();
        set.algebraic = Some(true);
        set
    }

    pub fn empty_set(self: &Arc<Self>) -> AlgebraicSet {
        AlgebraicSet::from_sorted_codes(self.clone(), Vec::new())
    }
}

/// A finite set of points of `A^n`, sorted lexicographically, with its
/// defining system when known. Despite the name the set need not be
/// algebraic; [`AlgebraicSet::is_algebraic`] decides it.
#[derive(Clone)]
pub struct AlgebraicSet {
    space: Arc<AffineSpace>,
    points: Vec<u64>,
    pub(crate) system: Option<EquationSystem>,
    pub(crate) algebraic: Option<bool>,
    gamma: OnceLock<Arc<TermFunctionAlgebra>>,
}

impl fmt::Debug for AlgebraicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraicSet")
            .field("dim", &self.space.dim())
            .field("points", &self.points_decoded())
            .finish()
    }
}

impl PartialEq for AlgebraicSet {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.points == other.points
    }
}

impl Eq for AlgebraicSet {}

impl AlgebraicSet {
    pub fn from_points(space: Arc<AffineSpace>, points: &[Vec<Elem>]) -> Result<Self> {
        let k = space.algebra.size();
        let mut codes = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != space.dim() || p.iter().any(|&a| a as usize >= k) {
                return Err(Error::precondition(format!("{p:?} is not a point of the space")));
            }
            codes.push(space.encode(p));
        }
        Ok(Self::from_codes(space, codes))
    }

    pub fn from_codes(space: Arc<AffineSpace>, mut codes: Vec<u64>) -> Self {
        codes.sort_unstable();
        codes.dedup();
        Self::from_sorted_codes(space, codes)
    }

    pub(crate) fn from_sorted_codes(space: Arc<AffineSpace>, points: Vec<u64>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        AlgebraicSet {
            space,
            points,
            system: None,
            algebraic: None,
            gamma: OnceLock::new(),
        }
    }

    pub fn space(&self) -> &Arc<AffineSpace> {
        &self.space
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.space.algebra
    }

    pub fn codes(&self) -> &[u64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> Vec<Elem> {
        self.space.decode(self.points[i])
    }

    pub fn points_decoded(&self) -> Vec<Vec<Elem>> {
        self.points.iter().map(|&c| self.space.decode(c)).collect()
    }

    pub fn contains(&self, p: &[Elem]) -> bool {
        self.contains_code(self.space.encode(p))
    }

    pub fn contains_code(&self, code: u64) -> bool {
        self.points.binary_search(&code).is_ok()
    }

    pub fn position(&self, code: u64) -> Option<usize> {
        self.points.binary_search(&code).ok()
    }

    pub fn system(&self) -> Option<&EquationSystem> {
        self.system.as_ref()
    }

    /// Attaches a defining system after checking it defines exactly this set.
    pub fn with_system(mut self, system: EquationSystem) -> Result<Self> {
        let solved = self.space.solve(&system)?;
        if solved.points != self.points {
            return Err(Error::precondition("system does not define this point set"));
        }
        self.system = Some(system);
        self.algebraic = Some(true);
        Ok(self)
    }

    pub fn is_subset(&self, other: &AlgebraicSet) -> bool {
        self.points.iter().all(|&c| other.contains_code(c))
    }

    pub fn union(&self, other: &AlgebraicSet) -> AlgebraicSet {
        let mut codes = self.points.clone();
        codes.extend_from_slice(&other.points);
        Self::from_codes(self.space.clone(), codes)
    }

    pub fn intersection(&self, other: &AlgebraicSet) -> AlgebraicSet {
        let codes = self
            .points
            .iter()
            .copied()
            .filter(|&c| other.contains_code(c))
            .collect();
        Self::from_sorted_codes(self.space.clone(), codes)
    }

    /// Whether `Y = V(Rad(Y))`. Cached after the first call when known
    /// from construction.
    pub fn is_algebraic(&self) -> Result<bool> {
        if let Some(a) = self.algebraic {
            return Ok(a);
        }
        Ok(super::ac::ac_closure(self)?.points == self.points)
    }

    pub(crate) fn mark_algebraic(mut self, yes: bool) -> Self {
        self.algebraic = Some(yes);
        self
    }

    /// The algebra of term functions on this set, computed once.
    pub fn coordinate_algebra(&self) -> Result<Arc<TermFunctionAlgebra>> {
        if let Some(g) = self.gamma.get() {
            return Ok(g.clone());
        }
        let g = Arc::new(TermFunctionAlgebra::build(self)?);
        Ok(self.gamma.get_or_init(|| g).clone())
    }

    /// `(t = s) ∈ Rad(Y)`: both sides agree at every point. Vacuous on `∅`.
    pub fn in_radical(&self, t: &Term, s: &Term) -> bool {
        if t == s {
            return true;
        }
        let prog = TermProgram::compile(&self.space.algebra, &[t.clone(), s.clone()]);
        let mut scratch = prog.scratch();
        let mut p = vec![0; self.space.dim()];
        self.points.iter().all(|&c| {
            self.space.codec.decode_into(c, &mut p);
            prog.run(&p, &mut scratch);
            prog.root(&scratch, 0) == prog.root(&scratch, 1)
        })
    }

    /// `Y × Z` in `A^(n+m)`; defined by the union of both systems with the
    /// second one's variables shifted.
    pub fn product(&self, other: &AlgebraicSet) -> Result<AlgebraicSet> {
        if !(Arc::ptr_eq(self.algebra(), other.algebra()) || self.algebra() == other.algebra()) {
            return Err(Error::precondition("factors live over different algebras"));
        }
        let vars = self.space.vars.concat(&other.space.vars, self.space.signature());
        let space = AffineSpace::new(self.algebra().clone(), vars, self.space.limits)?;
        let shift = other.space.point_count();
        self.space
            .limits
            .check_points(self.points.len() as u128 * other.points.len() as u128)?;
        let mut codes = Vec::with_capacity(self.points.len() * other.points.len());
        for &y in &self.points {
            for &z in &other.points {
                codes.push(y * shift + z);
            }
        }
        let mut set = AlgebraicSet::from_sorted_codes(space.clone(), codes);
        if let (Some(s1), Some(s2)) = (&self.system, &other.system) {
            let n = self.space.dim();
            let map: Vec<Term> = (0..other.space.dim()).map(|j| Term::var(n + j)).collect();
            let mut eqs = s1.equations().to_vec();
            eqs.extend(s2.equations().iter().map(|e| e.substitute(&map)));
            set.system = Some(EquationSystem::new(
                space.signature().clone(),
                space.vars.clone(),
                eqs,
            )?);
            set.algebraic = Some(true);
        }
        Ok(set)
    }

    /// Same points, fresh caches and no attached system.
    pub fn forget(&self) -> AlgebraicSet {
        AlgebraicSet::from_sorted_codes(self.space.clone(), self.points.clone())
    }
}
