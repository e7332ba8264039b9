use std::fmt;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::limits::{checked_pow, Limits};
use crate::sigterm::{Equation, EquationSystem, Term};

use super::algebra::{increment, Elem, FiniteAlgebra, TermProgram};

/// Points of `A^n` encoded in base `|A|`, first coordinate most significant,
/// so numeric order is lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointCodec {
    base: u64,
    dim: usize,
}

impl PointCodec {
    pub fn new(base: usize, dim: usize, limits: &Limits) -> Result<Self> {
        limits.check_points(checked_pow(base as u128, dim))?;
        Ok(PointCodec {
            base: base as u64,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> usize {
        self.base as usize
    }

    pub fn count(&self) -> u64 {
        self.base.pow(self.dim as u32)
    }

    pub fn encode(&self, point: &[Elem]) -> u64 {
        point.iter().fold(0, |acc, &a| acc * self.base + a as u64)
    }

    pub fn decode_into(&self, mut code: u64, out: &mut [Elem]) {
        for slot in out.iter_mut().rev() {
            *slot = (code % self.base) as Elem;
            code /= self.base;
        }
    }

    pub fn decode(&self, code: u64) -> Vec<Elem> {
        let mut out = vec![0; self.dim];
        self.decode_into(code, &mut out);
        out
    }
}

/// Visits every point of `A^n` in lexicographic order.
pub fn sweep_points(
    k: usize,
    n: usize,
    limits: &Limits,
    mut visit: impl FnMut(&[Elem]) -> ControlFlow<()>,
) -> Result<()> {
    limits.check_points(checked_pow(k as u128, n))?;
    let mut p = vec![0 as Elem; n];
    loop {
        if visit(&p).is_break() {
            return Ok(());
        }
        if !increment(&mut p, k as Elem) {
            return Ok(());
        }
    }
}

/// Codes of the points of `A^n` satisfying `keep`, in increasing order.
/// Blocks of consecutive codes are scanned in parallel, each with its own
/// state from `init`, and concatenated in order.
pub fn filter_points<S>(
    k: usize,
    n: usize,
    limits: &Limits,
    init: impl Fn() -> S + Sync,
    keep: impl Fn(&mut S, &[Elem]) -> bool + Sync,
) -> Result<Vec<u64>> {
    use rayon::prelude::*;
    const BLOCK: u64 = 1 << 12;
    let total = checked_pow(k as u128, n);
    limits.check_points(total)?;
    let total = total as u64;
    let codec = PointCodec { base: k as u64, dim: n };
    let blocks: Vec<Vec<u64>> = (0..total.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let (lo, hi) = (b * BLOCK, ((b + 1) * BLOCK).min(total));
            let mut state = init();
            let mut p = codec.decode(lo);
            let mut out = Vec::new();
            for code in lo..hi {
                if keep(&mut state, &p) {
                    out.push(code);
                }
                increment(&mut p, k as Elem);
            }
            out
        })
        .collect();
    Ok(blocks.concat())
}

/// `∀x̄ (p_1 ∧ … ∧ p_r → t = s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiIdentity {
    pub premises: EquationSystem,
    pub conclusion: Equation,
}

impl QuasiIdentity {
    pub fn new(premises: EquationSystem, conclusion: Equation) -> Result<Self> {
        premises.with_equations(vec![conclusion.clone()])?;
        Ok(QuasiIdentity {
            premises,
            conclusion,
        })
    }

    /// A point satisfying every premise but not the conclusion, if any.
    pub fn counterexample(
        &self,
        algebra: &FiniteAlgebra,
        limits: &Limits,
    ) -> Result<Option<Vec<Elem>>> {
        check_signature(algebra, &self.premises)?;
        let mut terms: Vec<Term> = Vec::new();
        for e in self.premises.equations() {
            terms.push(e.lhs.clone());
            terms.push(e.rhs.clone());
        }
        terms.push(self.conclusion.lhs.clone());
        terms.push(self.conclusion.rhs.clone());
        let prog = TermProgram::compile(algebra, &terms);
        let mut scratch = prog.scratch();
        let r = self.premises.len();
        let mut found = None;
        sweep_points(algebra.size(), self.premises.vars().len(), limits, |p| {
            prog.run(p, &mut scratch);
            let premises =
                (0..r).all(|i| prog.root(&scratch, 2 * i) == prog.root(&scratch, 2 * i + 1));
            if premises && prog.root(&scratch, 2 * r) != prog.root(&scratch, 2 * r + 1) {
                found = Some(p.to_vec());
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })?;
        Ok(found)
    }

    pub fn holds_in(&self, algebra: &FiniteAlgebra, limits: &Limits) -> Result<bool> {
        Ok(self.counterexample(algebra, limits)?.is_none())
    }

    /// Whether the formula fails when the variables take the values `point`.
    pub fn fails_at(&self, algebra: &FiniteAlgebra, point: &[Elem]) -> bool {
        self.premises
            .equations()
            .iter()
            .all(|e| algebra.holds(e, point))
            && !algebra.holds(&self.conclusion, point)
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "forall {}: ", self.premises.vars())?;
        for (i, e) in self.premises.equations().iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            f.write_str(&self.premises.display_equation(e))?;
        }
        if !self.premises.is_empty() {
            f.write_str(" -> ")?;
        }
        f.write_str(&self.premises.display_equation(&self.conclusion))
    }
}

fn check_signature(algebra: &FiniteAlgebra, system: &EquationSystem) -> Result<()> {
    if **algebra.signature() != **system.signature() {
        return Err(Error::precondition(
            "system and algebra use different signatures",
        ));
    }
    Ok(())
}

impl FiniteAlgebra {
    /// Whether `∀x̄ (⋀ premises → conclusion)` holds; on failure, a
    /// counterexample point.
    pub fn check_quasi_identity(
        &self,
        premises: &EquationSystem,
        conclusion: &Equation,
        limits: &Limits,
    ) -> Result<(bool, Option<Vec<Elem>>)> {
        let qi = QuasiIdentity::new(premises.clone(), conclusion.clone())?;
        let cex = qi.counterexample(self, limits)?;
        Ok((cex.is_none(), cex))
    }

    /// Whether `∀x̄ ⋁ (t_i ≠ s_i)` holds: every point falsifies at least one
    /// of the listed equations. The clauses live in `clauses`.
    pub fn check_universal_disequation(
        &self,
        clauses: &EquationSystem,
        limits: &Limits,
    ) -> Result<bool> {
        check_signature(self, clauses)?;
        let mut terms = Vec::new();
        for e in clauses.equations() {
            terms.push(e.lhs.clone());
            terms.push(e.rhs.clone());
        }
        let prog = TermProgram::compile(self, &terms);
        let mut scratch = prog.scratch();
        let r = clauses.len();
        let mut holds = true;
        sweep_points(self.size(), clauses.vars().len(), limits, |p| {
            prog.run(p, &mut scratch);
            if (0..r).all(|i| prog.root(&scratch, 2 * i) == prog.root(&scratch, 2 * i + 1)) {
                holds = false;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })?;
        Ok(holds)
    }
}
