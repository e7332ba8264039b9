use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::signature::{Signature, VariableSet};
use super::term::{Term, TermKind};

/// An atomic formula `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn var_bound(&self) -> usize {
        self.lhs.var_bound().max(self.rhs.var_bound())
    }

    pub fn substitute(&self, map: &[Term]) -> Equation {
        Equation::new(self.lhs.substitute(map), self.rhs.substitute(map))
    }

    pub fn display<'a>(
        &'a self,
        sig: &'a Signature,
        vars: &'a VariableSet,
    ) -> impl fmt::Display + 'a {
        EquationDisplay {
            eq: self,
            sig,
            vars,
        }
    }
}

struct EquationDisplay<'a> {
    eq: &'a Equation,
    sig: &'a Signature,
    vars: &'a VariableSet,
}

impl fmt::Display for EquationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {}",
            self.eq.lhs.display(self.sig, self.vars),
            self.eq.rhs.display(self.sig, self.vars)
        )
    }
}

/// A finite system of equations over a signature and a variable set.
#[derive(Debug, Clone)]
pub struct EquationSystem {
    signature: Arc<Signature>,
    vars: VariableSet,
    equations: Vec<Equation>,
}

impl PartialEq for EquationSystem {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
            && self.vars == other.vars
            && self.equations == other.equations
    }
}

impl EquationSystem {
    /// Validates arities and variable indices of every equation.
    pub fn new(
        signature: Arc<Signature>,
        vars: VariableSet,
        equations: Vec<Equation>,
    ) -> Result<Self> {
        vars.check_disjoint(&signature)?;
        for eq in &equations {
            check_term(&eq.lhs, &signature, &vars)?;
            check_term(&eq.rhs, &signature, &vars)?;
        }
        Ok(EquationSystem {
            signature,
            vars,
            equations,
        })
    }

    pub fn empty(signature: Arc<Signature>, vars: VariableSet) -> Result<Self> {
        Self::new(signature, vars, Vec::new())
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Same signature and variables, different equations (revalidated).
    pub fn with_equations(&self, equations: Vec<Equation>) -> Result<Self> {
        Self::new(self.signature.clone(), self.vars.clone(), equations)
    }

    /// Pairs `(i, j)`, `i < j`, of positions holding the same equation.
    pub fn duplicates(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.equations.len() {
            for i in 0..j {
                if self.equations[i] == self.equations[j] {
                    out.push((i, j));
                    break;
                }
            }
        }
        out
    }

    pub fn display_equation(&self, eq: &Equation) -> String {
        eq.display(&self.signature, &self.vars).to_string()
    }

    pub fn display_term(&self, t: &Term) -> String {
        t.display(&self.signature, &self.vars).to_string()
    }

    /// Equations in DSL syntax, `t = s;` separated by single spaces.
    pub fn to_dsl_body(&self) -> String {
        self.equations
            .iter()
            .map(|e| format!("{};", self.display_equation(e)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_dsl_block(&self, name: &str, signature_name: &str) -> String {
        let mut out = format!(
            "system {name} over {signature_name} vars {} {{\n",
            self.vars
        );
        for e in &self.equations {
            out.push_str(&format!("  {};\n", self.display_equation(e)));
        }
        out.push('}');
        out
    }
}

pub(crate) fn check_term(t: &Term, sig: &Signature, vars: &VariableSet) -> Result<()> {
    match t.kind() {
        TermKind::Var(i) => {
            if *i as usize >= vars.len() {
                return Err(Error::UnknownIdentifier(format!("variable #{}", i + 1)));
            }
        }
        TermKind::App(s, args) => {
            if s.index() >= sig.len() {
                return Err(Error::UnknownIdentifier(format!("symbol #{}", s.0)));
            }
            if sig.arity(*s) != args.len() {
                return Err(Error::ArityMismatch {
                    name: sig.name(*s).to_string(),
                    expected: sig.arity(*s),
                    found: args.len(),
                });
            }
            for a in args.iter() {
                check_term(a, sig, vars)?;
            }
        }
    }
    Ok(())
}
