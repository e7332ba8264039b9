use crate::error::{Error, Result};
use crate::sigterm::EquationSystem;

use super::space::AffineSpace;

fn check(space: &AffineSpace, s: &EquationSystem) -> Result<()> {
    if s.vars().len() != space.dim() || **s.signature() != **space.signature() {
        return Err(Error::precondition("system does not match the space"));
    }
    Ok(())
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// An irredundant `S0 ⊆ S` with `V(S0) = V(S)`.
///
/// A greedy pass keeps an equation iff it shrinks the running solution set;
/// a pruning pass then drops kept equations whose removal leaves the
/// solution set unchanged. Dropping any equation of the result enlarges
/// `V`. The result is not necessarily of minimum size.
pub fn minimal_subsystem(space: &AffineSpace, s: &EquationSystem) -> Result<EquationSystem> {
    check(space, s)?;
    let masks = space.equation_masks(s.equations())?;
    let words = (space.point_count() as usize).div_ceil(64);
    let mut all = vec![u64::MAX; words];
    let rem = space.point_count() % 64;
    if rem != 0 {
        all[words - 1] = (1u64 << rem) - 1;
    }
    let mut running = all.clone();
    let mut kept = Vec::new();
    for (i, m) in masks.iter().enumerate() {
        let next: Vec<u64> = running.iter().zip(m).map(|(a, b)| a & b).collect();
        if next != running {
            running = next;
            kept.push(i);
        }
    }
    let target = running;
    let mut i = 0;
    while i < kept.len() {
        let mut without = all.clone();
        for (j, &e) in kept.iter().enumerate() {
            if j != i {
                for (w, m) in without.iter_mut().zip(&masks[e]) {
                    *w &= m;
                }
            }
        }
        if is_subset(&without, &target) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    s.with_equations(kept.iter().map(|&i| s.equations()[i].clone()).collect())
}

/// `V(S1) = V(S2)` by exact solving.
pub fn systems_equivalent(space: &std::sync::Arc<AffineSpace>, s1: &EquationSystem, s2: &EquationSystem) -> Result<bool> {
    check(space, s1)?;
    check(space, s2)?;
    Ok(space.solve(s1)?.codes() == space.solve(s2)?.codes())
}
