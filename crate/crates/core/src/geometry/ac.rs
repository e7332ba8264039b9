//! The Zariski closure `Y^ac = V(Rad(Y))`.
//!
//! A point `p` lies in `Y^ac` iff every pair of terms agreeing on `Y` also
//! agrees at `p`, i.e. iff in the subalgebra of `A^(Y ∪ {p})` generated by
//! the coordinate tuples no two elements agree on `Y` but differ at `p`.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::finalg::{close, Closed, Elem, TupleClosure};

use super::space::{AffineSpace, AlgebraicSet};

/// Whether `candidate` lies in the closure of `points` (all in `space`).
fn in_closure_of(space: &AffineSpace, points: &[Vec<Elem>], candidate: &[Elem]) -> Result<bool> {
    let width = points.len() + 1;
    let generators: Vec<Vec<Elem>> = (0..space.dim())
        .map(|i| {
            let mut g: Vec<Elem> = points.iter().map(|p| p[i]).collect();
            g.push(candidate[i]);
            g
        })
        .collect();
    Ok(matches!(
        close(space.algebra(), width, &generators, points.len(), space.limits())?,
        Closed::Done(_)
    ))
}

/// `V(Rad(Y))`, testing each point of the ambient space not in `Y`.
pub fn ac_closure(y: &AlgebraicSet) -> Result<AlgebraicSet> {
    closure_within(y, None)
}

/// `Y^ac ∩ within`, testing only candidates from `within`.
pub(crate) fn closure_within(y: &AlgebraicSet, within: Option<&AlgebraicSet>) -> Result<AlgebraicSet> {
    use rayon::prelude::*;
    let space = y.space();
    let points = y.points_decoded();
    let test = |code: u64| -> Result<Option<u64>> {
        let inside = y.contains_code(code) || in_closure_of(space, &points, &space.decode(code))?;
        Ok(inside.then_some(code))
    };
    let found: Vec<Option<u64>> = match within {
        Some(w) => w.codes().par_iter().map(|&c| test(c)).collect::<Result<_>>()?,
        None => (0..space.point_count()).into_par_iter().map(test).collect::<Result<_>>()?,
    };
    let codes = found.into_iter().flatten().collect();
    Ok(AlgebraicSet::from_sorted_codes(space.clone(), codes).mark_algebraic(within.is_none()))
}

/// `{p}^ac`.
pub fn point_closure(space: &std::sync::Arc<AffineSpace>, p: &[Elem]) -> Result<AlgebraicSet> {
    let y = AlgebraicSet::from_points(space.clone(), &[p.to_vec()])?;
    ac_closure(&y)
}

/// Closures of arbitrary subsets of a small ambient space at once.
///
/// Computes `T(A^n)` a single time. For a subset `Y`, two term functions
/// agree on `Y` iff their restrictions coincide, so `q ∈ Y^ac` iff every
/// term function takes at `q` the value of the first term function with the
/// same restriction to `Y`. Subsets are bitmasks over point codes, so the
/// ambient space may have at most 64 points.
#[derive(Debug)]
pub struct ClosureSystem {
    points: usize,
    functions: TupleClosure,
}

impl ClosureSystem {
    pub fn new(space: &std::sync::Arc<AffineSpace>) -> Result<Self> {
        let n = space.point_count();
        if n > 64 {
            return Err(Error::capacity("closure system points", n as u128, 64));
        }
        let full = space.full();
        let gamma = full.coordinate_algebra()?;
        // Reuse the closure behind T(A^n): its tuples are indexed by code.
        let functions = gamma_closure(&gamma);
        Ok(ClosureSystem {
            points: n as usize,
            functions,
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Number of term functions on the whole space.
    pub fn functions(&self) -> usize {
        self.functions.len()
    }

    /// `Y^ac` for `Y` given as a mask over point codes.
    pub fn closure(&self, mask: u64) -> u64 {
        let members: Vec<usize> = (0..self.points).filter(|&i| mask >> i & 1 == 1).collect();
        let mut first: FxHashMap<Vec<Elem>, u32> = FxHashMap::default();
        let all = if self.points == 64 {
            u64::MAX
        } else {
            (1u64 << self.points) - 1
        };
        let mut out = all;
        let mut key = Vec::with_capacity(members.len());
        for f in 0..self.functions.len() {
            let tuple = self.functions.tuple(f);
            key.clear();
            key.extend(members.iter().map(|&i| tuple[i]));
            let rep = *first.entry(key.clone()).or_insert(f as u32);
            if rep as usize == f {
                continue;
            }
            let r = self.functions.tuple(rep as usize);
            for q in 0..self.points {
                if tuple[q] != r[q] {
                    out &= !(1u64 << q);
                }
            }
            if out == mask {
                break;
            }
        }
        out
    }

    pub fn is_closed(&self, mask: u64) -> bool {
        self.closure(mask) == mask
    }

    /// Every algebraic subset as a mask, in increasing mask order. The
    /// empty set is included iff it is algebraic.
    pub fn algebraic_sets(&self) -> Vec<u64> {
        let total = 1u64 << self.points;
        (0..total).filter(|&m| self.is_closed(m)).collect()
    }
}

fn gamma_closure(gamma: &super::tfa::TermFunctionAlgebra) -> TupleClosure {
    gamma.closure_clone()
}
