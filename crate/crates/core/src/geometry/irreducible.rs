//! Irreducibility and irreducible components.
//!
//! Over a finite algebra `A`, a non-empty algebraic set `Y` is irreducible
//! iff `T(Y)` is discriminated by `A`. Since `T(Y)` is finite, taking the
//! finite subset to be all of `T(Y)` turns discrimination into the existence
//! of an embedding `T(Y) → A`, and every homomorphism `T(Y) → A` is
//! evaluation at some point `p ∈ Y`. So `Y` is irreducible iff it has a
//! generic point: one at which distinct term functions take distinct values.
//!
//! Every irreducible algebraic `Z` is the closure of any of its generic
//! points, so the irreducible components of `Y` are the maximal sets among
//! the point closures `{p}^ac`, `p ∈ Y`.

use crate::error::{Error, Result};
use crate::finalg::Elem;

use super::ac::closure_within;
use super::space::AlgebraicSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Irreducibility {
    pub irreducible: bool,
    /// First generic point in lexicographic order.
    pub generic_point: Option<Vec<Elem>>,
}

fn require_nonempty_algebraic(y: &AlgebraicSet) -> Result<()> {
    if y.is_empty() {
        return Err(Error::precondition("the empty set is not irreducible"));
    }
    if !y.is_algebraic()? {
        return Err(Error::precondition("the set is not algebraic"));
    }
    Ok(())
}

pub fn is_irreducible(y: &AlgebraicSet) -> Result<Irreducibility> {
    require_nonempty_algebraic(y)?;
    let gamma = y.coordinate_algebra()?;
    let k = y.algebra().size();
    let mut generic = None;
    if gamma.len() <= k {
        let mut seen = vec![false; k];
        for j in 0..y.len() {
            seen.fill(false);
            let injective = (0..gamma.len() as Elem)
                .all(|e| !std::mem::replace(&mut seen[gamma.values(e)[j] as usize], true));
            if injective {
                generic = Some(y.point(j));
                break;
            }
        }
    }
    Ok(Irreducibility {
        irreducible: generic.is_some(),
        generic_point: generic,
    })
}

/// Irreducible components, ordered lexicographically by their point lists.
pub fn decompose(y: &AlgebraicSet) -> Result<Vec<AlgebraicSet>> {
    let order: Vec<usize> = (0..y.len()).collect();
    decompose_with_seed_order(y, &order)
}

/// [`decompose`] visiting the points of `Y` in the given order; the result
/// does not depend on it.
pub fn decompose_with_seed_order(y: &AlgebraicSet, order: &[usize]) -> Result<Vec<AlgebraicSet>> {
    require_nonempty_algebraic(y)?;
    let mut closures: Vec<AlgebraicSet> = Vec::new();
    for &i in order {
        let code = y.codes()[i];
        if closures.iter().any(|c| c.contains_code(code)) {
            continue;
        }
        let single = AlgebraicSet::from_sorted_codes(y.space().clone(), vec![code]);
        // {p}^ac ⊆ Y^ac = Y, so only points of Y need testing.
        let c = closure_within(&single, Some(y))?.mark_algebraic(true);
        closures.retain(|d| !d.is_subset(&c));
        closures.push(c);
    }
    closures.sort_by(|c, d| c.codes().cmp(d.codes()));
    Ok(closures)
}
