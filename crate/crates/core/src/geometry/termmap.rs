//! Term maps between point sets and the dual homomorphisms between their
//! algebras of term functions.

use std::ops::ControlFlow;
use std::sync::Arc;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::finalg::{Elem, FiniteAlgebra, HomSearch, Homomorphism};
use crate::limits::checked_pow;
use crate::sigterm::{check_term, EquationSystem, Term};

use super::space::AlgebraicSet;
use super::tfa::TermFunctionAlgebra;

/// `φ: Y → Z`, `p ↦ (t_1(p), …, t_m(p))`, stored as the elements
/// `t_1^Y, …, t_m^Y` of `T(Y)`. Two term maps are equal iff their
/// components are.
#[derive(Debug, Clone)]
pub struct TermMap {
    source: Arc<AlgebraicSet>,
    target: Arc<AlgebraicSet>,
    components: Vec<Elem>,
}

impl PartialEq for TermMap {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
            && *self.source == *other.source
            && *self.target == *other.target
    }
}

impl TermMap {
    /// Validates `φ(Y) ⊆ Z`.
    pub fn new(terms: &[Term], source: Arc<AlgebraicSet>, target: Arc<AlgebraicSet>) -> Result<Self> {
        let m = target.space().dim();
        if terms.len() != m {
            return Err(Error::precondition(format!(
                "{} components for a target of dimension {m}",
                terms.len()
            )));
        }
        let n = source.space().dim();
        for t in terms {
            if t.var_bound() > n {
                return Err(Error::precondition("component uses variables outside the source"));
            }
            check_term(t, source.space().signature(), source.space().vars())?;
        }
        let gamma = source.coordinate_algebra()?;
        let points = source.points_decoded();
        let components = terms.iter().map(|t| gamma.element_of_term(t, &points)).collect();
        Self::from_components(source, target, components)
    }

    pub fn from_components(
        source: Arc<AlgebraicSet>,
        target: Arc<AlgebraicSet>,
        components: Vec<Elem>,
    ) -> Result<Self> {
        if source.algebra() != target.algebra() {
            return Err(Error::precondition("source and target over different algebras"));
        }
        let gamma = source.coordinate_algebra()?;
        for i in 0..source.len() {
            let image: Vec<Elem> = components.iter().map(|&c| gamma.values(c)[i]).collect();
            if !target.contains(&image) {
                return Err(Error::ImageEscapes {
                    point: source.point(i),
                });
            }
        }
        Ok(TermMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(y: Arc<AlgebraicSet>) -> Result<Self> {
        let gamma = y.coordinate_algebra()?;
        let components = gamma.generators().to_vec();
        Self::from_components(y.clone(), y, components)
    }

    pub fn source(&self) -> &Arc<AlgebraicSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraicSet> {
        &self.target
    }

    pub fn components(&self) -> &[Elem] {
        &self.components
    }

    /// Witness terms of the components.
    pub fn terms(&self) -> Result<Vec<Term>> {
        let gamma = self.source.coordinate_algebra()?;
        Ok(self.components.iter().map(|&c| gamma.witness(c).clone()).collect())
    }

    /// Image of the `i`-th point of the source, as a target code.
    pub fn image_code(&self, i: usize) -> Result<u64> {
        let gamma = self.source.coordinate_algebra()?;
        let p: Vec<Elem> = self.components.iter().map(|&c| gamma.values(c)[i]).collect();
        Ok(self.target.space().encode(&p))
    }

    pub fn apply(&self, p: &[Elem]) -> Result<Vec<Elem>> {
        let i = self
            .source
            .position(self.source.space().encode(p))
            .ok_or_else(|| Error::precondition("point outside the source"))?;
        let gamma = self.source.coordinate_algebra()?;
        Ok(self.components.iter().map(|&c| gamma.values(c)[i]).collect())
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &TermMap) -> Result<TermMap> {
        if *self.target != *next.source {
            return Err(Error::precondition("maps are not composable"));
        }
        let gy = self.source.coordinate_algebra()?;
        let gz = next.source.coordinate_algebra()?;
        let images: Vec<usize> = (0..self.source.len())
            .map(|i| {
                let code = self.image_code(i)?;
                Ok(next.source.position(code).expect("image lies in the target"))
            })
            .collect::<Result<_>>()?;
        let components = next
            .components
            .iter()
            .map(|&c| {
                let values: Vec<Elem> = images.iter().map(|&j| gz.values(c)[j]).collect();
                gy.element_of_values(&values)
                    .ok_or_else(|| Error::precondition("composite leaves the term functions"))
            })
            .collect::<Result<_>>()?;
        TermMap::from_components(self.source.clone(), next.target.clone(), components)
    }

    /// The composite computed by substituting witness terms, for checking
    /// [`then`](Self::then).
    pub fn then_by_substitution(&self, next: &TermMap) -> Result<TermMap> {
        let inner = self.terms()?;
        let outer = next.terms()?;
        let terms: Vec<Term> = outer.iter().map(|t| t.substitute(&inner)).collect();
        TermMap::new(&terms, self.source.clone(), next.target.clone())
    }

    /// Whether the map is injective on points.
    pub fn is_injective(&self) -> Result<bool> {
        let mut seen = FxHashSet::default();
        for i in 0..self.source.len() {
            if !seen.insert(self.image_code(i)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `φ(Y)` as a point set of the target space.
    pub fn image(&self) -> Result<AlgebraicSet> {
        let codes = (0..self.source.len())
            .map(|i| self.image_code(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgebraicSet::from_codes(self.target.space().clone(), codes))
    }

    /// `φ^{-1}(W) = {p ∈ Y : φ(p) ∈ W}`: the system of `W` with the
    /// components substituted for its variables, together with the system
    /// of `Y`, solved in the source space.
    pub fn preimage(&self, w: &AlgebraicSet) -> Result<AlgebraicSet> {
        let (Some(system), Some(own)) = (w.system(), self.source.system()) else {
            return Err(Error::precondition("preimage needs defining systems"));
        };
        if w.space() != self.target.space() {
            return Err(Error::precondition("preimage of a set outside the target space"));
        }
        let terms = self.terms()?;
        let mut eqs = own.equations().to_vec();
        eqs.extend(system.equations().iter().map(|e| e.substitute(&terms)));
        let s = EquationSystem::new(
            self.source.space().signature().clone(),
            self.source.space().vars().clone(),
            eqs,
        )?;
        let set = self.source.space().solve(&s)?;
        debug_assert!(set.codes().iter().all(|&c| self.source.contains_code(c)));
        Ok(set)
    }

    /// The homomorphism `T(Z) → T(Y)`, `e ↦ (p ↦ e(φ(p)))`, which sends each
    /// coordinate function of `Z` to the matching component of `φ`.
    pub fn dual(&self) -> Result<Homomorphism> {
        let gy = self.source.coordinate_algebra()?;
        let gz = self.target.coordinate_algebra()?;
        let images: Vec<usize> = (0..self.source.len())
            .map(|i| {
                let code = self.image_code(i)?;
                Ok(self.target.position(code).expect("image lies in the target"))
            })
            .collect::<Result<_>>()?;
        let map: Vec<Elem> = (0..gz.len() as Elem)
            .map(|e| {
                let values: Vec<Elem> = images.iter().map(|&j| gz.values(e)[j]).collect();
                gy.element_of_values(&values)
                    .ok_or_else(|| Error::precondition("pullback leaves the term functions"))
            })
            .collect::<Result<_>>()?;
        Homomorphism::new(&*gz, &*gy.algebra()?, map)
    }
}

/// `Mor(Y, Z)`: every tuple of elements of `T(Y)` whose pointwise image
/// lies in `Z`, in lexicographic order of component ids.
pub fn enumerate_term_maps(y: &Arc<AlgebraicSet>, z: &Arc<AlgebraicSet>) -> Result<Vec<TermMap>> {
    if y.algebra() != z.algebra() {
        return Err(Error::precondition("sets over different algebras"));
    }
    let gamma = y.coordinate_algebra()?;
    let m = z.space().dim();
    let limits = y.space().limits();
    limits.check_points(checked_pow(gamma.len() as u128, m))?;
    let codec = z.space().codec();
    let k = codec.base() as u64;
    // prefixes[j] holds the codes of length-j prefixes of points of Z
    let mut prefixes: Vec<FxHashSet<u64>> = vec![FxHashSet::default(); m + 1];
    for &c in z.codes() {
        for (j, set) in prefixes.iter_mut().enumerate() {
            set.insert(c / k.pow((m - j) as u32));
        }
    }
    let mut out = Vec::new();
    let mut comps = Vec::with_capacity(m);
    let mut partial = vec![0u64; y.len()];
    extend(&gamma, &prefixes, k, m, &mut comps, &mut partial, &mut |comps| {
        out.push(TermMap {
            source: y.clone(),
            target: z.clone(),
            components: comps.to_vec(),
        });
    });
    Ok(out)
}

fn extend(
    gamma: &TermFunctionAlgebra,
    prefixes: &[FxHashSet<u64>],
    k: u64,
    m: usize,
    comps: &mut Vec<Elem>,
    partial: &mut Vec<u64>,
    emit: &mut impl FnMut(&[Elem]),
) {
    let j = comps.len();
    if j == m {
        emit(comps);
        return;
    }
    let saved = partial.clone();
    for e in 0..gamma.len() as Elem {
        let values = gamma.values(e);
        let ok = partial
            .iter_mut()
            .zip(values)
            .zip(&saved)
            .all(|((p, &v), &s)| {
                *p = s * k + v as u64;
                prefixes[j + 1].contains(p)
            });
        if ok || partial.is_empty() {
            comps.push(e);
            extend(gamma, prefixes, k, m, comps, partial, emit);
            comps.pop();
        }
        partial.copy_from_slice(&saved);
    }
}

/// `Hom(T(Z), T(Y))` by search over images of the coordinate functions of `Z`.
pub fn dual_homomorphisms(y: &AlgebraicSet, z: &AlgebraicSet) -> Result<Vec<Homomorphism>> {
    let gy = y.coordinate_algebra()?.algebra()?;
    let gz = z.coordinate_algebra()?;
    let gz_alg = gz.algebra()?;
    let generation = gz.generation();
    let mut out = Vec::new();
    HomSearch::new(&*gz_alg, &generation, &gy).run(|m| {
        out.push(Homomorphism::new_unchecked(m.to_vec()));
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Mutually inverse term maps `φ: Y → Z`, `ψ: Z → Y`, if any.
pub fn sets_isomorphic(y: &Arc<AlgebraicSet>, z: &Arc<AlgebraicSet>) -> Result<Option<(TermMap, TermMap)>> {
    if y.len() != z.len() || y.algebra() != z.algebra() {
        return Ok(None);
    }
    let gz = z.coordinate_algebra()?;
    let n = y.space().dim();
    for phi in enumerate_term_maps(y, z)? {
        if !phi.is_injective()? {
            continue;
        }
        // the inverse on points, coordinate by coordinate
        let mut inverse_of = vec![0usize; z.len()];
        for i in 0..y.len() {
            inverse_of[z.position(phi.image_code(i)?).expect("in target")] = i;
        }
        let ys = y.points_decoded();
        let comps: Option<Vec<Elem>> = (0..n)
            .map(|j| {
                let values: Vec<Elem> = inverse_of.iter().map(|&i| ys[i][j]).collect();
                gz.element_of_values(&values)
            })
            .collect();
        if let Some(comps) = comps {
            let psi = TermMap::from_components(z.clone(), y.clone(), comps)?;
            return Ok(Some((phi, psi)));
        }
    }
    Ok(None)
}

/// Each point `p ∈ Y` with its evaluation homomorphism `T(Y) → A`.
pub fn points_as_homs(y: &AlgebraicSet) -> Result<Vec<(Vec<Elem>, Homomorphism)>> {
    if y.is_empty() || !y.is_algebraic()? {
        return Err(Error::precondition("points correspond to homomorphisms only on non-empty algebraic sets"));
    }
    let gamma = y.coordinate_algebra()?;
    Ok((0..y.len())
        .map(|j| {
            let map = (0..gamma.len() as Elem).map(|e| gamma.values(e)[j]).collect();
            (y.point(j), Homomorphism::new_unchecked(map))
        })
        .collect())
}

/// The point a homomorphism `T(Y) → A` corresponds to: the images of the
/// coordinate functions.
pub fn hom_to_point(gamma: &TermFunctionAlgebra, h: &Homomorphism) -> Vec<Elem> {
    gamma.generators().iter().map(|&g| h.apply(g)).collect()
}

/// Every homomorphism `T(Y) → A`, without materialising the tables of
/// `T(Y)`.
pub fn homomorphisms_to_base(y: &AlgebraicSet) -> Result<Vec<Homomorphism>> {
    let gamma = y.coordinate_algebra()?;
    let generation = gamma.generation();
    let base: &FiniteAlgebra = gamma.base();
    let mut out = Vec::new();
    HomSearch::new(&*gamma, &generation, base).run(|m| {
        out.push(Homomorphism::new_unchecked(m.to_vec()));
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// For `Y ⊆ Z` in one space: the restriction `T(Z) → T(Y)`, verified to be
/// a surjective homomorphism.
pub fn restriction(y: &AlgebraicSet, z: &AlgebraicSet) -> Result<Homomorphism> {
    if y.space() != z.space() || !y.is_subset(z) {
        return Err(Error::precondition("restriction needs Y ⊆ Z in one space"));
    }
    let gy = y.coordinate_algebra()?;
    let gz = z.coordinate_algebra()?;
    let positions: Vec<usize> = y
        .codes()
        .iter()
        .map(|&c| z.position(c).expect("subset"))
        .collect();
    let map: Vec<Elem> = (0..gz.len() as Elem)
        .map(|e| {
            let values: Vec<Elem> = positions.iter().map(|&j| gz.values(e)[j]).collect();
            gy.element_of_values(&values).expect("restrictions of term functions")
        })
        .collect();
    let h = Homomorphism::new(&*gz, &*gy.algebra()?, map)?;
    if !h.is_surjective(gy.len()) {
        return Err(Error::precondition("restriction is not onto"));
    }
    Ok(h)
}
