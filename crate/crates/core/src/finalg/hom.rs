use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::sigterm::{Signature, SymbolId};

use super::algebra::{increment, Elem, FiniteAlgebra};
use super::closure::Provenance;
use super::subalgebra::Generation;

/// Read access to an algebra whose operations may be computed on demand
/// rather than stored as tables.
pub trait AlgebraView {
    fn signature(&self) -> &Arc<Signature>;
    fn size(&self) -> usize;
    fn apply(&self, sym: SymbolId, args: &[Elem]) -> Elem;

    /// For a subalgebra of a direct power `B^w`: the base `B`.
    fn power_base(&self) -> Option<&FiniteAlgebra> {
        None
    }

    /// Coordinate `j` of element `e` when [`power_base`](Self::power_base) is set.
    fn coordinate(&self, _e: Elem, _j: usize) -> Elem {
        unreachable!("not a subalgebra of a direct power")
    }

    fn power_width(&self) -> usize {
        0
    }
}

impl AlgebraView for FiniteAlgebra {
    fn signature(&self) -> &Arc<Signature> {
        FiniteAlgebra::signature(self)
    }

    fn size(&self) -> usize {
        FiniteAlgebra::size(self)
    }

    fn apply(&self, sym: SymbolId, args: &[Elem]) -> Elem {
        FiniteAlgebra::apply(self, sym, args)
    }
}

/// A map between carriers, checked to commute with every operation when
/// constructed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    map: Vec<Elem>,
}

impl Homomorphism {
    pub fn new<S: AlgebraView + ?Sized>(
        source: &S,
        target: &FiniteAlgebra,
        map: Vec<Elem>,
    ) -> Result<Self> {
        if map.len() != source.size() {
            return Err(Error::NotHomomorphism(format!(
                "map has {} entries for a carrier of size {}",
                map.len(),
                source.size()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v as usize >= target.size()) {
            return Err(Error::NotHomomorphism(format!(
                "image {bad} outside the target"
            )));
        }
        if let Some((sym, args)) = first_violation(source, target, &map) {
            return Err(Error::NotHomomorphism(format!(
                "`{}` at {:?}",
                source.signature().name(sym),
                args
            )));
        }
        Ok(Homomorphism { map })
    }

    pub(crate) fn new_unchecked(map: Vec<Elem>) -> Self {
        Homomorphism { map }
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn apply(&self, e: Elem) -> Elem {
        self.map[e as usize]
    }

    pub fn is_injective(&self, target_size: usize) -> bool {
        let mut seen = vec![false; target_size];
        self.map
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }

    pub fn is_surjective(&self, target_size: usize) -> bool {
        let mut seen = vec![false; target_size];
        for &v in &self.map {
            seen[v as usize] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Homomorphism) -> Homomorphism {
        Homomorphism {
            map: self.map.iter().map(|&v| next.apply(v)).collect(),
        }
    }

    pub fn identity(size: usize) -> Homomorphism {
        Homomorphism {
            map: (0..size as Elem).collect(),
        }
    }
}

fn first_violation<S: AlgebraView + ?Sized>(
    source: &S,
    target: &FiniteAlgebra,
    map: &[Elem],
) -> Option<(SymbolId, Vec<Elem>)> {
    let n = source.size() as Elem;
    for (id, sym) in source.signature().symbols() {
        let mut args = vec![0 as Elem; sym.arity];
        let mut images = vec![0 as Elem; sym.arity];
        loop {
            for (im, &a) in images.iter_mut().zip(&args) {
                *im = map[a as usize];
            }
            if map[source.apply(id, &args) as usize] != target.apply(id, &images) {
                return Some((id, args));
            }
            if !increment(&mut args, n) {
                break;
            }
        }
    }
    None
}

/// Backtracking search over generator images in ascending order. After each
/// generator is fixed, every element it determines is computed from its
/// provenance and every operation-table entry among determined elements is
/// checked, so inconsistent branches die early.
pub struct HomSearch<'a, S: AlgebraView + ?Sized> {
    source: &'a S,
    target: &'a FiniteAlgebra,
    generation: &'a Generation,
    fixed: Vec<Option<Elem>>,
    injective: bool,
    level: Vec<u32>,
    by_level: Vec<Vec<usize>>,
    upto: Vec<Vec<Elem>>,
    free: Vec<usize>,
    projection_ok: bool,
}

impl<'a, S: AlgebraView + ?Sized> HomSearch<'a, S> {
    pub fn new(source: &'a S, generation: &'a Generation, target: &'a FiniteAlgebra) -> Self {
        let n = source.size();
        let mut level = vec![0u32; n];
        let mut free = Vec::new();
        let mut step_level = Vec::with_capacity(generation.steps.len());
        for (e, prov) in &generation.steps {
            let l = match prov {
                Provenance::Generator(g) => {
                    free.push(*g);
                    free.len() as u32
                }
                Provenance::Op(_, args) => {
                    args.iter().map(|&a| level[a as usize]).max().unwrap_or(0)
                }
            };
            level[*e as usize] = l;
            step_level.push(l);
        }
        let levels = free.len() + 1;
        let mut by_level = vec![Vec::new(); levels];
        for (i, &l) in step_level.iter().enumerate() {
            by_level[l as usize].push(i);
        }
        let mut upto = Vec::with_capacity(levels);
        let mut acc: Vec<Elem> = Vec::new();
        for steps in &by_level {
            acc.extend(steps.iter().map(|&s| generation.steps[s].0));
            upto.push(acc.clone());
        }
        let projection_ok = source
            .power_base()
            .is_some_and(|b| std::ptr::eq(b, target) || b == target);
        HomSearch {
            source,
            target,
            generation,
            fixed: vec![None; generation.generators.len()],
            injective: false,
            level,
            by_level,
            upto,
            free,
            projection_ok,
        }
    }

    /// Pins the image of generator `g`.
    pub fn fix(mut self, g: usize, image: Elem) -> Self {
        self.fixed[g] = Some(image);
        self
    }

    pub fn injective(mut self, yes: bool) -> Self {
        self.injective = yes;
        self
    }

    /// Calls `visit` with the image vector of each homomorphism, in
    /// lexicographic order of generator images.
    pub fn run(&self, mut visit: impl FnMut(&[Elem]) -> ControlFlow<()>) {
        let n = self.source.size();
        if self.injective && n > self.target.size() {
            return;
        }
        let mut image = vec![0 as Elem; n];
        let mut used = vec![
            false;
            if self.injective {
                self.target.size()
            } else {
                0
            }
        ];
        if !self.settle(0, &mut image, &mut used) {
            return;
        }
        let _ = self.descend(1, &mut image, &mut used, &mut visit);
    }

    fn descend(
        &self,
        level: usize,
        image: &mut [Elem],
        used: &mut [bool],
        visit: &mut impl FnMut(&[Elem]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if level > self.free.len() {
            return visit(image);
        }
        let g = self.free[level - 1];
        let e = self.generation.generators[g] as usize;
        let choices: Vec<Elem> = match self.fixed[g] {
            Some(v) => vec![v],
            None => (0..self.target.size() as Elem).collect(),
        };
        for v in choices {
            image[e] = v;
            if self.settle(level, image, used) {
                self.descend(level + 1, image, used, visit)?;
                if self.injective {
                    for &s in &self.by_level[level] {
                        used[image[self.generation.steps[s].0 as usize] as usize] = false;
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    /// Computes the images of the elements at `level` and checks the table
    /// entries that become decidable there. On failure nothing stays marked.
    fn settle(&self, level: usize, image: &mut [Elem], used: &mut [bool]) -> bool {
        let mut args = Vec::new();
        for &s in &self.by_level[level] {
            let (e, prov) = &self.generation.steps[s];
            if let Provenance::Op(sym, a) = prov {
                args.clear();
                args.extend(a.iter().map(|&x| image[x as usize]));
                image[*e as usize] = self.target.apply(*sym, &args);
            }
        }
        for (g, fixed) in self.fixed.iter().enumerate() {
            let e = self.generation.generators[g] as usize;
            if let Some(v) = fixed {
                if self.level[e] as usize == level && image[e] != *v {
                    return false;
                }
            }
        }
        if self.injective {
            let mut marked = Vec::new();
            for &s in &self.by_level[level] {
                let v = image[self.generation.steps[s].0 as usize] as usize;
                if used[v] {
                    for m in marked {
                        used[m] = false;
                    }
                    return false;
                }
                used[v] = true;
                marked.push(v);
            }
            if !self.consistent(level, image) {
                for m in marked {
                    used[m] = false;
                }
                return false;
            }
            return true;
        }
        self.consistent(level, image)
    }

    fn consistent(&self, level: usize, image: &[Elem]) -> bool {
        let elems = &self.upto[level];
        if self.projection_ok && self.is_projection(elems, image) {
            return true;
        }
        let sig = self.source.signature();
        let l = level as u32;
        let mut args = Vec::new();
        let mut images = Vec::new();
        for (id, sym) in sig.symbols() {
            let m = sym.arity;
            if m == 0 {
                let r = self.source.apply(id, &[]);
                if self.level[r as usize] == l && image[r as usize] != self.target.constant(id) {
                    return false;
                }
                continue;
            }
            if elems.is_empty() {
                continue;
            }
            let mut pos = vec![0usize; m];
            args.resize(m, 0);
            images.resize(m, 0);
            loop {
                let mut top = 0;
                for (i, &p) in pos.iter().enumerate() {
                    args[i] = elems[p];
                    images[i] = image[elems[p] as usize];
                    top = top.max(self.level[elems[p] as usize]);
                }
                let r = self.source.apply(id, &args);
                if top.max(self.level[r as usize]) == l
                    && image[r as usize] != self.target.apply(id, &images)
                {
                    return false;
                }
                if !next_tuple(&mut pos, elems.len()) {
                    break;
                }
            }
        }
        true
    }

    /// Whether the partial image agrees with some coordinate projection of
    /// the direct power containing the source; such maps are homomorphisms.
    fn is_projection(&self, elems: &[Elem], image: &[Elem]) -> bool {
        (0..self.source.power_width()).any(|j| {
            elems
                .iter()
                .all(|&e| self.source.coordinate(e, j) == image[e as usize])
        })
    }
}

/// Odometer over `[0, len)^m`, last position fastest.
fn next_tuple(pos: &mut [usize], len: usize) -> bool {
    for p in pos.iter_mut().rev() {
        *p += 1;
        if *p < len {
            return true;
        }
        *p = 0;
    }
    false
}

impl FiniteAlgebra {
    /// All homomorphisms into `target`, in lexicographic order of the images
    /// of a greedy generating set.
    pub fn homomorphisms_to(
        &self,
        target: &FiniteAlgebra,
        limits: &Limits,
    ) -> Result<Vec<Homomorphism>> {
        check_compatible(self, target)?;
        let generation = self.generation(None, limits)?;
        let mut out = Vec::new();
        HomSearch::new(self, &generation, target).run(|m| {
            out.push(Homomorphism::new_unchecked(m.to_vec()));
            ControlFlow::Continue(())
        });
        Ok(out)
    }

    /// An injective homomorphism into `target`, if any.
    pub fn embedding_into(
        &self,
        target: &FiniteAlgebra,
        limits: &Limits,
    ) -> Result<Option<Homomorphism>> {
        check_compatible(self, target)?;
        if self.size() > target.size() {
            return Ok(None);
        }
        let generation = self.generation(None, limits)?;
        let mut found = None;
        HomSearch::new(self, &generation, target)
            .injective(true)
            .run(|m| {
                found = Some(Homomorphism::new_unchecked(m.to_vec()));
                ControlFlow::Break(())
            });
        Ok(found)
    }

    pub fn is_isomorphic(&self, other: &FiniteAlgebra, limits: &Limits) -> Result<bool> {
        if self.size() != other.size() {
            return Ok(false);
        }
        Ok(self.embedding_into(other, limits)?.is_some()
            && other.embedding_into(self, limits)?.is_some())
    }

    /// Whether distinct elements are split by homomorphisms into `target`.
    pub fn separation_by(&self, target: &FiniteAlgebra, limits: &Limits) -> Result<Separation> {
        check_compatible(self, target)?;
        let generation = self.generation(None, limits)?;
        let n = self.size();
        let mut labels = vec![0usize; n];
        let mut classes = 1.min(n);
        let mut family = Vec::new();
        HomSearch::new(self, &generation, target).run(|m| {
            let mut renumber = rustc_hash::FxHashMap::default();
            let refined: Vec<usize> = labels
                .iter()
                .zip(m)
                .map(|(&l, &v)| {
                    let next = renumber.len();
                    *renumber.entry((l, v)).or_insert(next)
                })
                .collect();
            if renumber.len() > classes {
                classes = renumber.len();
                labels = refined;
                family.push(Homomorphism::new_unchecked(m.to_vec()));
            }
            if classes == n {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        let witness = if classes == n {
            None
        } else {
            (0..n).find_map(|a| {
                ((a + 1)..n)
                    .find(|&b| labels[a] == labels[b])
                    .map(|b| (a as Elem, b as Elem))
            })
        };
        Ok(Separation {
            separated: witness.is_none(),
            witness,
            family,
        })
    }

    /// Embedding into `target^d` assembled from a separating family, or
    /// `None` when the algebra is not separated by `target`.
    pub fn separating_embedding(
        &self,
        target: &FiniteAlgebra,
        limits: &Limits,
    ) -> Result<Option<PowerEmbedding>> {
        let sep = self.separation_by(target, limits)?;
        if !sep.separated {
            return Ok(None);
        }
        Ok(Some(PowerEmbedding::from_family(
            self, target, sep.family, limits,
        )?))
    }
}

fn check_compatible(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<()> {
    if **a.signature() != **b.signature() {
        return Err(Error::precondition("algebras over different signatures"));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Separation {
    pub separated: bool,
    /// Least unseparated pair `(a, b)`, `a < b`, in lexicographic order.
    pub witness: Option<(Elem, Elem)>,
    /// Homomorphisms that jointly split every pair they can.
    pub family: Vec<Homomorphism>,
}

/// `c ↦ (h_1(c), …, h_d(c))` into a direct power, verified injective.
#[derive(Debug, Clone)]
pub struct PowerEmbedding {
    pub power: FiniteAlgebra,
    pub exponent: usize,
    pub family: Vec<Homomorphism>,
    pub embedding: Homomorphism,
}

impl PowerEmbedding {
    pub fn from_family(
        source: &FiniteAlgebra,
        base: &FiniteAlgebra,
        family: Vec<Homomorphism>,
        limits: &Limits,
    ) -> Result<Self> {
        let d = family.len();
        let power = base.direct_power(d, limits)?;
        let k = base.size();
        let map: Vec<Elem> = (0..source.size())
            .map(|c| {
                family
                    .iter()
                    .fold(0usize, |acc, h| acc * k + h.apply(c as Elem) as usize)
                    as Elem
            })
            .collect();
        let embedding = Homomorphism::new(source, &power, map)?;
        if !embedding.is_injective(power.size()) {
            return Err(Error::precondition("family does not separate the algebra"));
        }
        Ok(PowerEmbedding {
            power,
            exponent: d,
            family,
            embedding,
        })
    }
}
